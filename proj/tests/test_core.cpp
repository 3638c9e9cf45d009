#include <doctest.h>

#include <cmath>
#include <random>

#include "vada/core.hpp"
#include "vada/oracle.hpp"

using namespace vada;

namespace {

struct BruteStats
{
    long double mu, mu1, mu0, vt, vp, v1, v0;
};

// Direct summation in long double, one observation at a time.
BruteStats brute(const Eigen::VectorXd& x, const Eigen::VectorXi& y)
{
    long double s = 0, s1 = 0, s0 = 0;
    long n1 = 0, n0 = 0;
    for (Index i = 0; i < x.size(); ++i) {
        s += x(i);
        if (y(i) == 1) {
            s1 += x(i);
            ++n1;
        } else {
            s0 += x(i);
            ++n0;
        }
    }
    BruteStats b{};
    const long n = n1 + n0;
    b.mu = s / n;
    b.mu1 = s1 / n1;
    b.mu0 = s0 / n0;
    long double ss = 0, ss1 = 0, ss0 = 0;
    for (Index i = 0; i < x.size(); ++i) {
        ss += (x(i) - b.mu) * (x(i) - b.mu);
        if (y(i) == 1)
            ss1 += (x(i) - b.mu1) * (x(i) - b.mu1);
        else
            ss0 += (x(i) - b.mu0) * (x(i) - b.mu0);
    }
    b.vt = ss / n;
    b.vp = (ss1 + ss0) / n;
    b.v1 = ss1 / n1;
    b.v0 = ss0 / n0;
    return b;
}

Eigen::VectorXi balanced_labels(Index n)
{
    Eigen::VectorXi y(n);
    for (Index i = 0; i < n; ++i)
        y(i) = i < n / 2 ? 1 : 0;
    return y;
}

Eigen::MatrixXd gaussian(Index n, Index p, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    Eigen::MatrixXd X(n, p);
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < n; ++i)
            X(i, j) = z(rng);
    return X;
}

} // namespace

TEST_CASE("compute_stats: symmetric four-point column")
{
    Eigen::MatrixXd X(4, 1);
    X << 1, -1, 1, -1;
    Eigen::VectorXi y(4);
    y << 1, 1, 0, 0;
    const Stats s = compute_stats(X, y, 1e-12);
    CHECK(s.mu(0) == 0.0);
    CHECK(s.mu1(0) == 0.0);
    CHECK(s.mu0(0) == 0.0);
    CHECK(s.var_total(0) == doctest::Approx(1.0));
    CHECK(s.var_pooled(0) == doctest::Approx(1.0));
    CHECK(s.var1(0) == doctest::Approx(1.0));
    CHECK(s.var0(0) == doctest::Approx(1.0));
    CHECK_FALSE(s.floored(0));
    CHECK(lambda_lrt_lda(s)(0) == doctest::Approx(0.0));
    CHECK(lambda_lrt_qda(s)(0) == doctest::Approx(0.0));
}

TEST_CASE("compute_stats: constant column is floored and flagged")
{
    for (double c : {0.0, 3.5, -1e6}) {
        Eigen::MatrixXd X = Eigen::MatrixXd::Constant(4, 1, c);
        Eigen::VectorXi y(4);
        y << 1, 0, 1, 0;
        const Stats s = compute_stats(X, y, 1e-12);
        CHECK(s.floored(0));
        CHECK(s.var_total(0) == 1e-12);
        CHECK(s.var_pooled(0) == 1e-12);
        CHECK(s.var1(0) == 1e-12);
        CHECK(s.var0(0) == 1e-12);
    }
}

TEST_CASE("compute_stats matches direct summation")
{
    const Index n = 50;
    std::mt19937_64 rng(11);
    const Eigen::MatrixXd X = gaussian(n, 8, 3) * 2.5 + Eigen::MatrixXd::Constant(n, 8, 1.7);
    Eigen::VectorXi y(n);
    for (Index i = 0; i < n; ++i)
        y(i) = (i % 3 == 0) ? 1 : 0;
    const Stats s = compute_stats(X, y, 1e-12);
    CHECK(s.n == n);
    CHECK(s.n1 == y.sum());
    for (Index j = 0; j < X.cols(); ++j) {
        const BruteStats b = brute(X.col(j), y);
        CHECK(std::abs(s.mu(j) - double(b.mu)) < 1e-12);
        CHECK(std::abs(s.mu1(j) - double(b.mu1)) < 1e-12);
        CHECK(std::abs(s.mu0(j) - double(b.mu0)) < 1e-12);
        CHECK(std::abs(s.var_total(j) - double(b.vt)) < 1e-12);
        CHECK(std::abs(s.var_pooled(j) - double(b.vp)) < 1e-12);
        CHECK(std::abs(s.var1(j) - double(b.v1)) < 1e-12);
        CHECK(std::abs(s.var0(j) - double(b.v0)) < 1e-12);
        // Pooled decomposition and adding a mean never increases variance.
        CHECK(std::abs(n * s.var_pooled(j) - (s.n1 * s.var1(j) + s.n0 * s.var0(j))) < 1e-10);
        CHECK(s.var_total(j) >= s.var_pooled(j) - 1e-14);
    }
}

TEST_CASE("compute_stats works in long double")
{
    const Eigen::MatrixXd X = gaussian(20, 3, 9);
    const Eigen::VectorXi y = balanced_labels(20);
    const auto sl = compute_stats(X.cast<long double>(), y, 1e-12L);
    const Stats sd = compute_stats(X, y, 1e-12);
    for (Index j = 0; j < 3; ++j)
        CHECK(std::abs(double(sl.var_total(j)) - sd.var_total(j)) < 1e-13);
}

TEST_CASE("compute_stats rejects degenerate groups")
{
    Eigen::MatrixXd X = gaussian(5, 2, 1);
    Eigen::VectorXi y(5);
    y << 1, 0, 0, 0, 0;
    CHECK_THROWS_AS(compute_stats(X, y, 1e-12), DataError);
    y << 1, 1, 0, 0, 2;
    CHECK_THROWS_AS(compute_stats(X, y, 1e-12), DataError);
    Eigen::VectorXi short_y(3);
    short_y << 1, 1, 0;
    CHECK_THROWS_AS(compute_stats(X, short_y, 1e-12), DataError);
}

TEST_CASE("validate_training")
{
    Dataset d;
    d.X = gaussian(6, 2, 2);
    d.y = balanced_labels(6);
    CHECK_NOTHROW(validate_training(d));
    d.X(2, 1) = std::nan("");
    CHECK_THROWS_AS(validate_training(d), DataError);
    d.X(2, 1) = 0.0;
    d.y.resize(0);
    CHECK_THROWS_AS(validate_training(d), DataError);
    Dataset small;
    small.X = gaussian(3, 1, 1);
    small.y = Eigen::VectorXi::Ones(3);
    CHECK_THROWS_AS(validate_training(small), DataError);
}

TEST_CASE("compute_stats_with_new")
{
    Eigen::MatrixXd X(4, 2);
    X << 1.0, 0.5, 3.0, -2.0, -1.0, 4.0, 0.5, 1.5;
    Eigen::VectorXi y(4);
    y << 1, 1, 0, 0;

    SUBCASE("adding the group-1 mean keeps it")
    {
        const Stats base = compute_stats(X, y, 1e-12);
        Eigen::VectorXd x_new(2);
        x_new << base.mu1(0), base.mu1(1);
        const Stats s = compute_stats_with_new(X, y, x_new, 1, 1e-12);
        CHECK(s.mu1(0) == doctest::Approx(base.mu1(0)).epsilon(1e-14));
        CHECK(s.mu1(1) == doctest::Approx(base.mu1(1)).epsilon(1e-14));
        CHECK(s.n == 5);
        CHECK(s.n1 == 3);
    }

    SUBCASE("toy set with y_new = 0 matches direct summation")
    {
        Eigen::VectorXd x_new(2);
        x_new << 2.25, -0.75;
        const Stats s = compute_stats_with_new(X, y, x_new, 0, 1e-12);
        CHECK(s.n0 == 3);
        for (Index j = 0; j < 2; ++j) {
            Eigen::VectorXd col(5);
            col << X.col(j), x_new(j);
            Eigen::VectorXi ya(5);
            ya << y, 0;
            const BruteStats b = brute(col, ya);
            CHECK(std::abs(s.mu(j) - double(b.mu)) < 1e-12);
            CHECK(std::abs(s.var_total(j) - double(b.vt)) < 1e-12);
            CHECK(std::abs(s.var_pooled(j) - double(b.vp)) < 1e-12);
            CHECK(std::abs(s.var0(j) - double(b.v0)) < 1e-12);
            CHECK(std::abs(s.var1(j) - double(b.v1)) < 1e-12);
        }
    }

    SUBCASE("converges to the training-only stats as n grows")
    {
        double last = 1e9;
        for (Index n : {40, 400, 4000}) {
            const Eigen::MatrixXd Z = gaussian(n, 1, 5);
            const Eigen::VectorXi yy = balanced_labels(n);
            Eigen::VectorXd x_new(1);
            x_new << 3.0;
            const Stats a = compute_stats(Z, yy, 1e-12);
            const Stats b = compute_stats_with_new(Z, yy, x_new, 1, 1e-12);
            const double gap = std::abs(a.var_total(0) - b.var_total(0)) + std::abs(a.mu1(0) - b.mu1(0));
            CHECK(gap < last);
            last = gap;
        }
        CHECK(last < 1e-2);
    }

    Eigen::VectorXd bad(3);
    bad.setZero();
    CHECK_THROWS_AS(compute_stats_with_new(X, y, bad, 0, 1e-12), DataError);
    Eigen::VectorXd ok = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(compute_stats_with_new(X, y, ok, 2, 1e-12), DataError);
}

TEST_CASE("log_b_gamma")
{
    CHECK(log_b_gamma(100, 500, 0.98, 1e-3) == doctest::Approx(10.144).epsilon(1e-4));
    CHECK(log_b_gamma(3, 1, 0.98, 1e-300) == doctest::Approx(-0.5 * std::log(4.0)).epsilon(1e-15));

    // Direct evaluation of p^2 / sqrt(n+1) * exp(kappa (n+1) / log(n+1)^r)
    // in long double, where it does not overflow.
    auto direct = [](long long n, long long p, long double r, long double kappa) {
        const long double n1 = static_cast<long double>(n) + 1.0L;
        const long double b = static_cast<long double>(p) * static_cast<long double>(p) / std::sqrt(n1)
                              * std::exp(kappa * n1 / std::pow(std::log(n1), r));
        return std::log(b);
    };
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<long long> nd(1, 200000), pd(1, 100000);
    std::uniform_real_distribution<double> rd(-1.0, 0.999), kd(1e-6, 1e-2);
    for (int t = 0; t < 20; ++t) {
        const long long n = nd(rng), p = pd(rng);
        const double r = rd(rng), kappa = kd(rng);
        const double got = log_b_gamma(n, p, r, kappa);
        const long double want = direct(n, p, r, kappa);
        CHECK(std::isfinite(got));
        CHECK(std::abs(got - double(want)) <= 1e-9 * std::abs(double(want)) + 1e-12);
    }

    const double big = log_b_gamma(1000000, 10000, 0.98, 1e-3);
    CHECK(std::isfinite(big));
    CHECK(big == doctest::Approx(double(direct(1000000, 10000, 0.98L, 1e-3L))).epsilon(1e-12));
    // At n = 1e9 the raw b_gamma overflows even long double.
    const double huge = log_b_gamma(1000000000, 1000000, 0.98, 1e-3);
    CHECK(std::isfinite(huge));
    CHECK(huge > std::log(std::numeric_limits<long double>::max()));
    const long double n1 = 1000000001.0L;
    const long double sym = 2.0L * std::log(1000000.0L) - 0.5L * std::log(n1) + 1e-3L * n1 / std::pow(std::log(n1), 0.98L);
    CHECK(std::abs(huge - double(sym)) <= 1e-9 * double(sym));

    CHECK_THROWS_AS(log_b_gamma(0, 10, 0.98, 1e-3), DomainError);
    CHECK_THROWS_AS(log_b_gamma(10, 0, 0.98, 1e-3), DomainError);
    CHECK_THROWS_AS(log_b_gamma(10, 10, 1.0, 1e-3), DomainError);
    CHECK_THROWS_AS(log_b_gamma(10, 10, 0.5, 0.0), DomainError);
}

TEST_CASE("xi")
{
    CHECK(xi(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(xi(50.0) == doctest::Approx(-0.5 * std::log(50.0) + 1.0 / 600.0).epsilon(1e-6));
    CHECK(xi(50.0) == doctest::Approx(-1.9543).epsilon(1e-4));
    CHECK(std::abs(xi(1e4) + 0.5 * std::log(1e4)) < 1e-4);
    for (double x : {1.0, 10.0, 100.0, 1000.0, 10000.0})
        CHECK(std::abs(xi(x) + 0.5 * std::log(x)) <= 1.0 / (6.0 * x));

    // Both branches agree with long double lgamma around the switch point.
    for (double x : {0.01, 1.3, 9.99, 10.0, 10.01, 37.5, 1e3, 1e6}) {
        const long double lx = x;
        const long double want = std::lgamma(lx) + lx - lx * std::log(lx) - 0.5L * std::log(2.0L * 3.14159265358979323846264338327950288L);
        CHECK(std::abs(xi(x) - double(want)) < 1e-12 * std::max(1.0, std::abs(double(want))) + 2e-13);
    }
    CHECK_THROWS_AS(xi(0.0), DomainError);
    CHECK_THROWS_AS(xi(-2.0), DomainError);
}

TEST_CASE("expit and log_add_exp")
{
    CHECK(expit(0.0) == 0.5);
    CHECK(expit(800.0) == 1.0);
    CHECK(expit(-800.0) == 0.0);
    CHECK(expit(1.0) == doctest::Approx(0.7310585786300049).epsilon(1e-15));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(expit(inf) == 1.0);
    CHECK(expit(-inf) == 0.0);
    for (double x : {-30.0, -2.5, -1e-8, 0.3, 7.0, 35.0})
        CHECK(std::abs(expit(x) + expit(-x) - 1.0) < 1e-15);

    CHECK(log_add_exp(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)).epsilon(1e-15));
    CHECK(log_add_exp(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));
    CHECK(log_add_exp(-inf, 2.0) == 2.0);
}

TEST_CASE("log_beta and log_gamma_ratio")
{
    for (double a : {0.5, 1.0, 3.0, 17.0})
        for (double b : {0.5, 2.0, 40.0, 1e5, 1e9}) {
            const long double want = std::lgamma((long double)a) + std::lgamma((long double)b) - std::lgamma((long double)a + b);
            CHECK(std::abs(log_beta(a, b) - double(want)) < 1e-9 * std::max(1.0, std::abs(double(want))));
            // B(a+1, b) = B(a, b) a / (a + b)
            CHECK(log_beta(a + 1, b) == doctest::Approx(log_beta(a, b) + std::log(a / (a + b))).epsilon(1e-10));
        }
    // Huge b given in log-space.
    const double lb = 800.0;
    CHECK(log_beta_log_b(2.0, lb, 10.0) == doctest::Approx(std::lgamma(2.0) - 2.0 * lb).epsilon(1e-14));
    CHECK(log_beta_log_b(2.0, std::log(50.0), 3.0) == doctest::Approx(log_beta(2.0, 53.0)).epsilon(1e-13));
    CHECK_THROWS_AS(log_beta(0.0, 1.0), DomainError);
}

TEST_CASE("log_gaussian_density")
{
    const double half_log_2pi = 0.5 * std::log(2.0 * M_PI);
    CHECK(log_gaussian_density(1.5, 1.5, 1.0) == doctest::Approx(-half_log_2pi));
    CHECK(log_gaussian_density(2.5, 1.5, 1.0) == doctest::Approx(-half_log_2pi - 0.5));
    // Trapezoid quadrature of the density over +/- 12 sd sums to one.
    const double mu = -0.7, var = 2.3;
    const double sd = std::sqrt(var);
    const int steps = 200000;
    const double lo = mu - 12 * sd, hi = mu + 12 * sd, h = (hi - lo) / steps;
    double total = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
        total += w * std::exp(log_gaussian_density(lo + k * h, mu, var));
    }
    CHECK(total * h == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(log_gaussian_density(0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("lambda_lrt_lda examples")
{
    Eigen::MatrixXd X(4, 1);
    X << 2, 2, 0, 0;
    Eigen::VectorXi y(4);
    y << 1, 1, 0, 0;
    const Stats s = compute_stats(X, y, 1e-12);
    CHECK(s.var_pooled(0) == 1e-12);
    CHECK(s.var_total(0) == doctest::Approx(1.0));
    CHECK(lambda_lrt_lda(s)(0) > 100.0);
    CHECK(lambda_lrt_lda(s)(0) == doctest::Approx(5.0 * (0.0 - std::log(1e-12))));
}

TEST_CASE("lambda_lrt_lda against numeric likelihood maximisation")
{
    // Profile likelihoods of the two Gaussian models, maximised numerically:
    // lambda_LDA = 2 (n+1)/n (max l1 - max l0).
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Index n = 30;
        Eigen::MatrixXd x = gaussian(n, 1, seed);
        Eigen::VectorXi y = balanced_labels(n);
        for (Index i = 0; i < n / 2; ++i)
            x(i, 0) += 0.8;
        const Stats s = compute_stats(x, y, 1e-12);
        const double dl = numeric_mle_check(x.col(0), y, Model::vlda);
        CHECK(lambda_lrt_lda(s)(0) == doctest::Approx(2.0 * (n + 1.0) / n * dl).epsilon(1e-6));
    }
}

TEST_CASE("lambda_lrt_qda examples")
{
    // Equal means, group variances 1 and 4, n1 = n0.
    Eigen::MatrixXd X(8, 1);
    X << 1, -1, 1, -1, 2, -2, 2, -2;
    Eigen::VectorXi y(8);
    y << 1, 1, 1, 1, 0, 0, 0, 0;
    const Stats s = compute_stats(X, y, 1e-12);
    CHECK(s.var1(0) == doctest::Approx(1.0));
    CHECK(s.var0(0) == doctest::Approx(4.0));
    CHECK(s.var_total(0) == doctest::Approx(2.5));
    const double want = 9.0 * std::log(2.5) - 4.0 * (std::log(1.0) + std::log(4.0));
    CHECK(lambda_lrt_qda(s)(0) == doctest::Approx(want).epsilon(1e-13));
    CHECK(lambda_lrt_qda(2.5, 1.0, 4.0, 8, 4, 4) == doctest::Approx(want).epsilon(1e-13));

    // Separation increases the statistic.
    double last = -1e9;
    for (double shift : {0.0, 1.0, 3.0, 10.0}) {
        Eigen::MatrixXd Z = X;
        Z.topRows(4).array() += shift;
        const double lam = lambda_lrt_qda(compute_stats(Z, y, 1e-12))(0);
        CHECK(lam > last);
        last = lam;
    }
}

TEST_CASE("lambda statistics: scale equivariance and label swap")
{
    const Index n = 40;
    Eigen::MatrixXd X = gaussian(n, 6, 17);
    Eigen::VectorXi y(n);
    for (Index i = 0; i < n; ++i)
        y(i) = (i * 7) % 3 == 0 ? 1 : 0;
    X.col(0).array() += 1.2 * y.cast<double>().array();
    const Stats s = compute_stats(X, y, 1e-12);
    const Eigen::ArrayXd lda = lambda_lrt_lda(s);
    const Eigen::ArrayXd qda = lambda_lrt_qda(s);

    for (double c : {-3.0, 0.01, 250.0}) {
        const Stats sc = compute_stats(X * c, y, 1e-12);
        const Eigen::ArrayXd lda_c = lambda_lrt_lda(sc);
        const Eigen::ArrayXd qda_c = lambda_lrt_qda(sc);
        for (Index j = 0; j < X.cols(); ++j) {
            CHECK(std::abs(lda_c(j) - lda(j)) < 1e-9 * std::max(1.0, std::abs(lda(j))));
            // The Taylor-form QDA statistic weights log var_total by n+1
            // but the group terms by n1 + n0 = n, so scaling by c shifts it
            // by exactly log c^2.
            CHECK(std::abs(qda_c(j) - qda(j) - std::log(c * c)) < 1e-9 * std::max(1.0, std::abs(qda(j))));
        }
    }

    // With the exact (augmented) counts the multipliers balance and the
    // QDA statistic is scale invariant.
    Eigen::VectorXd x_new = X.row(3).transpose() * 0.5;
    for (int y_new : {0, 1}) {
        const Stats e = compute_stats_with_new(X, y, x_new, y_new, 1e-12);
        for (double c : {-3.0, 0.01, 250.0}) {
            const Stats ec = compute_stats_with_new(X * c, y, x_new * c, y_new, 1e-12);
            for (Index j = 0; j < X.cols(); ++j) {
                const double a = lambda_lrt_qda(e.var_total(j), e.var1(j), e.var0(j), n, e.n1, e.n0);
                const double b = lambda_lrt_qda(ec.var_total(j), ec.var1(j), ec.var0(j), n, ec.n1, ec.n0);
                CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a)));
            }
        }
    }

    const Eigen::VectorXi swapped = Eigen::VectorXi::Ones(n) - y;
    const Stats sw = compute_stats(X, swapped, 1e-12);
    for (Index j = 0; j < X.cols(); ++j) {
        CHECK(sw.var_total(j) == doctest::Approx(s.var_total(j)).epsilon(1e-14));
        CHECK(sw.var_pooled(j) == doctest::Approx(s.var_pooled(j)).epsilon(1e-14));
        CHECK(lambda_lrt_lda(sw)(j) == doctest::Approx(lda(j)).epsilon(1e-12));
    }
}

TEST_CASE("lambda_lrt_lda is monotone in the mean gap")
{
    // Fixed within-group spread, growing separation.
    const Index n = 20;
    const Eigen::MatrixXd base = gaussian(n, 1, 23);
    const Eigen::VectorXi y = balanced_labels(n);
    double last = -1.0;
    for (double gap : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
        Eigen::MatrixXd X = base;
        const Stats s0 = compute_stats(base, y, 1e-12);
        // Centre each group, then separate by `gap`.
        for (Index i = 0; i < n; ++i)
            X(i, 0) = base(i, 0) - (y(i) ? s0.mu1(0) : s0.mu0(0)) + (y(i) ? gap : 0.0);
        const double lam = lambda_lrt_lda(compute_stats(X, y, 1e-12))(0);
        CHECK(lam >= last - 1e-12);
        last = lam;
    }
}

TEST_CASE("Hyperparameters::validate")
{
    Hyperparameters h;
    CHECK_NOTHROW(h.validate());
    h.a_y = 0.0;
    h.b_y = 0.0;
    CHECK_NOTHROW(h.validate());
    auto bad = [](auto mutate) {
        Hyperparameters x;
        mutate(x);
        CHECK_THROWS_AS(x.validate(), DomainError);
    };
    bad([](Hyperparameters& x) { x.r = 1.0; });
    bad([](Hyperparameters& x) { x.kappa = 0.0; });
    bad([](Hyperparameters& x) { x.c_w = 1.0; });
    bad([](Hyperparameters& x) { x.c_y = 0.0; });
    bad([](Hyperparameters& x) { x.eps = 0.0; });
    bad([](Hyperparameters& x) { x.max_cycles = 0; });
    bad([](Hyperparameters& x) { x.a_gamma = 0.0; });
    bad([](Hyperparameters& x) { x.w_init = 1.5; });
    bad([](Hyperparameters& x) { x.a_y = -1.0; });
}
