#include "vada/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace vada {

namespace {

void check_column(const Dataset& d, Index j)
{
    if (j < 0 || j >= d.p())
        throw DomainError("variable index " + std::to_string(j) + " out of range");
}

double qda_correction(double n, double n1, double n0)
{
    return std::log(n1) + std::log(n0) - std::log(2.0) - 3.0 * std::log(n + 1.0) - 2.0 * xi((n + 1.0) / 2.0)
           + 2.0 * xi(n1 / 2.0) + 2.0 * xi(n0 / 2.0);
}

double lambda_bayes_from_stats(const Stats& s, Index j, Index n_train, Model model)
{
    if (model == Model::vlda)
        return lambda_lrt_lda(s.var_total(j), s.var_pooled(j), n_train) - std::log(double(n_train) + 1.0);
    // s summarises n_train + 1 observations; its group counts already
    // include the new observation.
    const double lrt = lambda_lrt_qda(s.var_total(j), s.var1(j), s.var0(j), n_train, s.n1, s.n0);
    return lrt + qda_correction(double(n_train), double(s.n1), double(s.n0));
}

} // namespace

double lambda_bayes_lda(const Dataset& d, const Eigen::Ref<const Eigen::VectorXd>& x_new, int y_new, Index j,
                        double variance_floor)
{
    validate_training(d);
    check_column(d, j);
    const Stats s = compute_stats_with_new(d.X, d.y, x_new, y_new, variance_floor);
    return lambda_bayes_from_stats(s, j, d.n(), Model::vlda);
}

double lambda_bayes_qda(const Dataset& d, const Eigen::Ref<const Eigen::VectorXd>& x_new, int y_new, Index j,
                        double variance_floor)
{
    validate_training(d);
    check_column(d, j);
    const Stats s = compute_stats_with_new(d.X, d.y, x_new, y_new, variance_floor);
    return lambda_bayes_from_stats(s, j, d.n(), Model::vqda);
}

Eigen::MatrixX2d lambda_bayes_table(const Dataset& d, const Eigen::Ref<const Eigen::VectorXd>& x_new, Model model,
                                    double variance_floor)
{
    validate_training(d);
    Eigen::MatrixX2d out(d.p(), 2);
    for (int y_new = 0; y_new <= 1; ++y_new) {
        const Stats s = compute_stats_with_new(d.X, d.y, x_new, y_new, variance_floor);
        for (Index j = 0; j < d.p(); ++j)
            out(j, y_new) = lambda_bayes_from_stats(s, j, d.n(), model);
    }
    return out;
}

ExactPosterior exact_posterior(const Dataset& d,
                               const Eigen::Ref<const Eigen::VectorXd>& x_new,
                               const Hyperparameters& h,
                               Model model)
{
    h.validate();
    validate_training(d);
    const Index p = d.p();
    if (p > kMaxExactVariables)
        throw SizeError("exact enumeration supports at most " + std::to_string(kMaxExactVariables)
                        + " variables, got " + std::to_string(p));

    const Eigen::MatrixX2d lambda = lambda_bayes_table(d, x_new, model, h.variance_floor);
    const double n1 = double(d.n1());
    const double n0 = double(d.n0());
    const double log_b = log_b_gamma(d.n(), p, h.r, h.kappa);
    const Index n_gamma = Index(1) << p;

    // log B(a_gamma + k, b_gamma + p - k) depends only on k = |gamma|.
    Eigen::ArrayXd gamma_prior(p + 1);
    for (Index k = 0; k <= p; ++k)
        gamma_prior(k) = log_beta_log_b(h.a_gamma + double(k), log_b, double(p - k));

    ExactPosterior out;
    out.log_weights.resize(2 * n_gamma);
    double log_z = -std::numeric_limits<double>::infinity();
    for (int y_new = 0; y_new <= 1; ++y_new) {
        const double label_term = log_beta(h.a_y + n1 + y_new, h.b_y + n0 + 1.0 - y_new);
        for (Index g = 0; g < n_gamma; ++g) {
            double half_lambda = 0.0;
            Index k = 0;
            for (Index j = 0; j < p; ++j) {
                if ((g >> j) & 1) {
                    half_lambda += 0.5 * lambda(j, y_new);
                    ++k;
                }
            }
            const double lw = label_term + gamma_prior(k) + half_lambda;
            out.log_weights(y_new * n_gamma + g) = lw;
            log_z = log_add_exp(log_z, lw);
        }
    }

    out.log_weights.array() -= log_z;
    out.gamma_marginals = Eigen::VectorXd::Zero(p);
    out.p_y1 = 0.0;
    for (int y_new = 0; y_new <= 1; ++y_new) {
        for (Index g = 0; g < n_gamma; ++g) {
            const double prob = std::exp(out.log_weights(y_new * n_gamma + g));
            if (y_new == 1)
                out.p_y1 += prob;
            for (Index j = 0; j < p; ++j)
                if ((g >> j) & 1)
                    out.gamma_marginals(j) += prob;
        }
    }
    const double log_prior_norm =
        (h.a_y > 0.0 && h.b_y > 0.0 ? log_beta(h.a_y, h.b_y) : 0.0) + log_beta_log_b(h.a_gamma, log_b, 0.0);
    out.log_marginal = log_z - log_prior_norm;
    return out;
}

// Numeric maximum likelihood ---------------------------------------------

namespace {

// Maximises f on [lo, hi] by golden-section search.
double golden_max(const std::function<double(double)>& f, double lo, double hi)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double e = a + inv_phi * (b - a);
    double fc = f(c);
    double fe = f(e);
    for (int it = 0; it < 400 && (b - a) > 1e-15 * (std::abs(a) + std::abs(b)) + 1e-300; ++it) {
        if (fc >= fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = f(e);
        }
    }
    return fc >= fe ? c : e;
}

double gaussian_loglik(const std::vector<double>& xs, double mu, double var)
{
    double acc = 0.0;
    for (double x : xs)
        acc += -0.5 * std::log(2.0 * std::numbers::pi * var) - (x - mu) * (x - mu) / (2.0 * var);
    return acc;
}

struct Group
{
    std::vector<double> xs;
    double lo = 0.0;
    double hi = 0.0;
};

Group make_group(const std::vector<double>& xs)
{
    Group g;
    g.xs = xs;
    g.lo = *std::min_element(xs.begin(), xs.end());
    g.hi = *std::max_element(xs.begin(), xs.end());
    return g;
}

} // namespace

NumericMle numeric_mle(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXi>& y,
                       Model model,
                       double variance_floor)
{
    detail::check_labels(y, x.size());
    std::vector<double> all(x.data(), x.data() + x.size());
    std::vector<double> g1_xs;
    std::vector<double> g0_xs;
    for (Index i = 0; i < x.size(); ++i)
        (y(i) == 1 ? g1_xs : g0_xs).push_back(x(i));
    const Group all_g = make_group(all);
    const Group g1 = make_group(g1_xs);
    const Group g0 = make_group(g0_xs);

    const double range = all_g.hi - all_g.lo;
    const double log_lo = std::log(variance_floor);
    const double log_hi = std::max(std::log(std::max(range * range, variance_floor)) + 1.0, log_lo + 1.0);
    constexpr int sweeps = 4;

    NumericMle out;

    // Null model.
    {
        double mu = 0.5 * (all_g.lo + all_g.hi);
        double lv = 0.5 * (log_lo + log_hi);
        for (int s = 0; s < sweeps; ++s) {
            mu = golden_max([&](double m) { return gaussian_loglik(all, m, std::exp(lv)); }, all_g.lo, all_g.hi);
            lv = golden_max([&](double l) { return gaussian_loglik(all, mu, std::exp(l)); }, log_lo, log_hi);
        }
        out.null_var = std::exp(lv);
        out.null_loglik = gaussian_loglik(all, mu, out.null_var);
    }

    double mu1 = 0.5 * (g1.lo + g1.hi);
    double mu0 = 0.5 * (g0.lo + g0.hi);
    if (model == Model::vlda) {
        double lv = 0.5 * (log_lo + log_hi);
        auto total = [&](double m1, double m0, double v) {
            return gaussian_loglik(g1.xs, m1, v) + gaussian_loglik(g0.xs, m0, v);
        };
        for (int s = 0; s < sweeps; ++s) {
            mu1 = golden_max([&](double m) { return total(m, mu0, std::exp(lv)); }, g1.lo, g1.hi);
            mu0 = golden_max([&](double m) { return total(mu1, m, std::exp(lv)); }, g0.lo, g0.hi);
            lv = golden_max([&](double l) { return total(mu1, mu0, std::exp(l)); }, log_lo, log_hi);
        }
        out.alt_loglik = total(mu1, mu0, std::exp(lv));
    } else {
        double lv1 = 0.5 * (log_lo + log_hi);
        double lv0 = lv1;
        auto total = [&](double m1, double v1, double m0, double v0) {
            return gaussian_loglik(g1.xs, m1, v1) + gaussian_loglik(g0.xs, m0, v0);
        };
        for (int s = 0; s < sweeps; ++s) {
            mu1 = golden_max([&](double m) { return total(m, std::exp(lv1), mu0, std::exp(lv0)); }, g1.lo, g1.hi);
            lv1 = golden_max([&](double l) { return total(mu1, std::exp(l), mu0, std::exp(lv0)); }, log_lo, log_hi);
            mu0 = golden_max([&](double m) { return total(mu1, std::exp(lv1), m, std::exp(lv0)); }, g0.lo, g0.hi);
            lv0 = golden_max([&](double l) { return total(mu1, std::exp(lv1), mu0, std::exp(l)); }, log_lo, log_hi);
        }
        out.alt_loglik = total(mu1, std::exp(lv1), mu0, std::exp(lv0));
    }
    return out;
}

double numeric_mle_check(const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXi>& y,
                         Model model,
                         double variance_floor)
{
    return numeric_mle(x, y, model, variance_floor).difference();
}

} // namespace vada
