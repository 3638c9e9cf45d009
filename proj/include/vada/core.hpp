#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vada/errors.hpp"

namespace vada {

using Index = Eigen::Index;

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Design matrix with optional binary labels.
///
/// Rows are observations, columns are variables. `y` is empty for
/// prediction-only data. `columns` holds variable names (may be empty for
/// programmatically built data, in which case names default to x1..xp).
struct Dataset
{
    Eigen::MatrixXd X;
    Eigen::VectorXi y;
    std::vector<std::string> columns;

    Index n() const noexcept { return X.rows(); }
    Index p() const noexcept { return X.cols(); }
    bool labeled() const noexcept { return y.size() > 0; }
    Index n1() const { return y.sum(); }
    Index n0() const { return y.size() - y.sum(); }

    std::string column_name(Index j) const;
};

// Throws DataError on non-finite entries or an empty matrix.
void validate_features(const Dataset& d);
// Feature checks plus: labels in {0,1}, n >= 4, both groups with >= 2 rows.
void validate_training(const Dataset& d);

struct Hyperparameters
{
    double a_y = 1.0;
    double b_y = 1.0;
    double a_gamma = 1.0;
    double r = 0.98;
    double kappa = 1e-3;
    double c_w = 0.5;
    double c_y = 0.5;
    double eps = 1e-6;
    int max_cycles = 100;
    double variance_floor = 1e-12;
    double w_init = 0.5;

    // Throws DomainError when a field is out of range. a_y and b_y may be
    // zero (the frequentist limit of the classification rule).
    void validate() const;
};

/// Per-variable sufficient statistics and maximum likelihood estimates.
///
/// Variances use the MLE denominators of the observations summarised:
/// var_total and var_pooled divide by n, var1 by n1, var0 by n0. All
/// variances are floored; `floored(j)` records whether any of variable j's
/// variances hit the floor.
template <typename Scalar>
struct VariableStats
{
    ArrayX<Scalar> mu;
    ArrayX<Scalar> mu1;
    ArrayX<Scalar> mu0;
    ArrayX<Scalar> var_total;
    ArrayX<Scalar> var_pooled;
    ArrayX<Scalar> var1;
    ArrayX<Scalar> var0;
    BoolArray floored;
    Index n = 0;
    Index n1 = 0;
    Index n0 = 0;

    Index size() const noexcept { return mu.size(); }
};

using Stats = VariableStats<double>;

namespace detail {

inline void check_labels(const Eigen::Ref<const Eigen::VectorXi>& y, Index rows)
{
    if (y.size() != rows)
        throw DataError("label vector length " + std::to_string(y.size()) + " does not match "
                        + std::to_string(rows) + " rows");
    for (Index i = 0; i < y.size(); ++i)
        if (y(i) != 0 && y(i) != 1)
            throw DataError("label at row " + std::to_string(i) + " is not 0 or 1");
    const Index n1 = y.sum();
    const Index n0 = y.size() - n1;
    if (n1 < 2 || n0 < 2)
        throw DataError("each group needs at least 2 observations (n1=" + std::to_string(n1)
                        + ", n0=" + std::to_string(n0) + ")");
}

} // namespace detail

/// Taylor-form MLEs from the training data alone.
template <typename Derived>
VariableStats<typename Derived::Scalar> compute_stats(const Eigen::MatrixBase<Derived>& X,
                                                      const Eigen::Ref<const Eigen::VectorXi>& y,
                                                      typename Derived::Scalar floor)
{
    using Scalar = typename Derived::Scalar;
    detail::check_labels(y, X.rows());
    if (X.cols() < 1)
        throw DataError("dataset has no variables");
    if (!X.allFinite())
        throw DataError("design matrix contains non-finite entries");

    const Index n = X.rows();
    const Index p = X.cols();
    const Index n1 = y.sum();
    const Index n0 = n - n1;
    const ArrayX<Scalar> g1 = y.cast<Scalar>().array();
    const ArrayX<Scalar> g0 = Scalar(1) - g1;

    VariableStats<Scalar> s;
    s.n = n;
    s.n1 = n1;
    s.n0 = n0;
    s.mu.resize(p);
    s.mu1.resize(p);
    s.mu0.resize(p);
    s.var_total.resize(p);
    s.var_pooled.resize(p);
    s.var1.resize(p);
    s.var0.resize(p);
    s.floored.resize(p);

    for (Index j = 0; j < p; ++j) {
        const auto col = X.col(j).array();
        const Scalar sum1 = (col * g1).sum();
        const Scalar sum0 = (col * g0).sum();
        const Scalar mu1 = sum1 / Scalar(n1);
        const Scalar mu0 = sum0 / Scalar(n0);
        const Scalar mu = (sum1 + sum0) / Scalar(n);
        const Scalar ss1 = ((col - mu1).square() * g1).sum();
        const Scalar ss0 = ((col - mu0).square() * g0).sum();
        const Scalar ss = (col - mu).square().sum();

        Scalar vt = ss / Scalar(n);
        Scalar vp = (ss1 + ss0) / Scalar(n);
        Scalar v1 = ss1 / Scalar(n1);
        Scalar v0 = ss0 / Scalar(n0);
        const bool hit = vt < floor || vp < floor || v1 < floor || v0 < floor;
        s.mu(j) = mu;
        s.mu1(j) = mu1;
        s.mu0(j) = mu0;
        s.var_total(j) = std::max(vt, floor);
        s.var_pooled(j) = std::max(vp, floor);
        s.var1(j) = std::max(v1, floor);
        s.var0(j) = std::max(v0, floor);
        s.floored(j) = hit;
    }
    return s;
}

/// Exact MLEs after appending one labelled observation (x_new, y_new).
///
/// Equivalent to compute_stats on the augmented data: denominators become
/// n+1, n1+y_new and n0+1-y_new, and the returned counts reflect that.
template <typename Derived, typename OtherDerived>
VariableStats<typename Derived::Scalar> compute_stats_with_new(const Eigen::MatrixBase<Derived>& X,
                                                               const Eigen::Ref<const Eigen::VectorXi>& y,
                                                               const Eigen::MatrixBase<OtherDerived>& x_new,
                                                               int y_new,
                                                               typename Derived::Scalar floor)
{
    using Scalar = typename Derived::Scalar;
    if (x_new.size() != X.cols())
        throw DataError("new observation has " + std::to_string(x_new.size()) + " entries, expected "
                        + std::to_string(X.cols()));
    if (y_new != 0 && y_new != 1)
        throw DataError("new label must be 0 or 1");
    if (!x_new.allFinite())
        throw DataError("new observation contains non-finite entries");
    detail::check_labels(y, X.rows());

    MatrixX<Scalar> aug(X.rows() + 1, X.cols());
    aug.topRows(X.rows()) = X;
    aug.row(X.rows()) = x_new.transpose().template cast<Scalar>();
    Eigen::VectorXi y_aug(y.size() + 1);
    y_aug.head(y.size()) = y;
    y_aug(y.size()) = y_new;
    return compute_stats(aug, y_aug, floor);
}

// Special functions ---------------------------------------------------------

template <typename Scalar>
Scalar expit(Scalar x)
{
    using std::exp;
    if (x >= Scalar(0))
        return Scalar(1) / (Scalar(1) + exp(-x));
    const Scalar e = exp(x);
    return e / (Scalar(1) + e);
}

template <typename Scalar>
Scalar log_add_exp(Scalar a, Scalar b)
{
    using std::log1p;
    using std::exp;
    if (a == -std::numeric_limits<Scalar>::infinity())
        return b;
    if (b == -std::numeric_limits<Scalar>::infinity())
        return a;
    return a > b ? a + log1p(exp(b - a)) : b + log1p(exp(a - b));
}

/// log b_gamma = 2 log p - 1/2 log(n+1) + kappa (n+1) / log(n+1)^r.
template <typename Scalar = double>
Scalar log_b_gamma(long long n, long long p, Scalar r, Scalar kappa)
{
    using std::log;
    using std::pow;
    if (n < 1)
        throw DomainError("log_b_gamma requires n >= 1");
    if (p < 1)
        throw DomainError("log_b_gamma requires p >= 1");
    if (!(r < Scalar(1)))
        throw DomainError("log_b_gamma requires r < 1");
    if (!(kappa > Scalar(0)))
        throw DomainError("log_b_gamma requires kappa > 0");
    const Scalar n1 = Scalar(n) + Scalar(1);
    const Scalar log_n1 = log(n1);
    return Scalar(2) * log(Scalar(p)) - Scalar(0.5) * log_n1 + kappa * n1 / pow(log_n1, r);
}

/// xi(x) = log Gamma(x) + x - x log x - 1/2 log(2 pi).
template <typename Scalar>
Scalar xi(Scalar x)
{
    using std::lgamma;
    using std::log;
    if (!(x > Scalar(0)))
        throw DomainError("xi requires x > 0");
    if (x < Scalar(10)) {
        const Scalar half_log_2pi = Scalar(0.5) * log(Scalar(2) * std::numbers::pi_v<Scalar>);
        return lgamma(x) + x - x * log(x) - half_log_2pi;
    }
    // Stirling series for log Gamma with the leading terms cancelled.
    const Scalar inv = Scalar(1) / x;
    const Scalar inv2 = inv * inv;
    const Scalar series =
        inv * (Scalar(1) / 12 - inv2 * (Scalar(1) / 360 - inv2 * (Scalar(1) / 1260 - inv2 * (Scalar(1) / 1680))));
    return -Scalar(0.5) * log(x) + series;
}

/// log Gamma(b + a) - log Gamma(b), accurate when b is much larger than a.
template <typename Scalar>
Scalar log_gamma_ratio(Scalar b, Scalar a)
{
    using std::lgamma;
    using std::log;
    using std::log1p;
    if (b < Scalar(1e7) || b < Scalar(1e4) * a)
        return lgamma(b + a) - lgamma(b);
    const Scalar ba = b + a;
    return a * log(b) + (ba - Scalar(0.5)) * log1p(a / b) - a + (Scalar(1) / ba - Scalar(1) / b) / Scalar(12);
}

template <typename Scalar>
Scalar log_beta(Scalar a, Scalar b)
{
    using std::lgamma;
    if (!(a > Scalar(0)) || !(b > Scalar(0)))
        throw DomainError("log_beta requires positive arguments");
    if (a > b)
        std::swap(a, b);
    return lgamma(a) - log_gamma_ratio(b, a);
}

/// Beta function in log-space where b is supplied as log b (b may overflow).
template <typename Scalar>
Scalar log_beta_log_b(Scalar a, Scalar log_b, Scalar b_offset)
{
    using std::exp;
    using std::lgamma;
    using std::log;
    using std::log1p;
    if (log_b < Scalar(600))
        return log_beta(a, exp(log_b) + b_offset);
    // b is astronomically large: log B(a, b) = lgamma(a) - a log b + O(1/b).
    const Scalar log_b_eff = log_b + log1p(b_offset * exp(-log_b));
    return lgamma(a) - a * log_b_eff;
}

template <typename Scalar>
Scalar log_gaussian_density(Scalar x, Scalar mu, Scalar var)
{
    using std::log;
    if (!(var > Scalar(0)))
        throw DomainError("log_gaussian_density requires a positive variance");
    const Scalar d = x - mu;
    return -Scalar(0.5) * log(Scalar(2) * std::numbers::pi_v<Scalar> * var) - d * d / (Scalar(2) * var);
}

// Likelihood ratio statistics ----------------------------------------------

/// (n+1) [log var_total - log var_pooled].
template <typename Scalar>
Scalar lambda_lrt_lda(Scalar var_total, Scalar var_pooled, long long n)
{
    using std::log;
    return Scalar(n + 1) * (log(var_total) - log(var_pooled));
}

/// (n+1) log var_total - n1 log var1 - n0 log var0.
///
/// With training-only stats pass the training counts; with stats that
/// include a new observation pass n1 + y_new and n0 + 1 - y_new.
template <typename Scalar>
Scalar lambda_lrt_qda(Scalar var_total, Scalar var1, Scalar var0, long long n, long long n1, long long n0)
{
    using std::log;
    return Scalar(n + 1) * log(var_total) - Scalar(n1) * log(var1) - Scalar(n0) * log(var0);
}

/// Per-variable LDA statistics from training-only stats.
template <typename Scalar>
ArrayX<Scalar> lambda_lrt_lda(const VariableStats<Scalar>& s)
{
    return Scalar(s.n + 1) * (s.var_total.log() - s.var_pooled.log());
}

/// Per-variable QDA statistics from training-only stats.
template <typename Scalar>
ArrayX<Scalar> lambda_lrt_qda(const VariableStats<Scalar>& s)
{
    return Scalar(s.n + 1) * s.var_total.log() - Scalar(s.n1) * s.var1.log() - Scalar(s.n0) * s.var0.log();
}

} // namespace vada
