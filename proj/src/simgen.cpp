#include "vada/simgen.hpp"

#include <cmath>

namespace vada {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
{
    // splitmix64 finaliser over the pair.
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SimSetting SimSetting::numbered(int k)
{
    if (k < 1 || k > 16)
        throw DomainError("simulation setting must be in 1..16");
    SimSetting s;
    s.mean = static_cast<MeanSpec>((k - 1) % 4);
    s.cov = static_cast<CovSpec>((k - 1) / 4);
    return s;
}

Index SimSetting::n_signals() const
{
    switch (mean) {
    case MeanSpec::s1: return 50;
    case MeanSpec::s2: return 100;
    case MeanSpec::s3: return 200;
    case MeanSpec::s4: return 10;
    case MeanSpec::custom: return custom_signals;
    }
    return 0;
}

void SimSetting::validate() const
{
    if (p < 1)
        throw DomainError("p must be positive");
    if (n_signals() > p)
        throw DomainError("signal count " + std::to_string(n_signals()) + " exceeds p = " + std::to_string(p));
    if (n_train < 4)
        throw DomainError("n_train must be at least 4");
    if (n_valid < 0 || n_test < 0)
        throw DomainError("validation and test sizes must be nonnegative");
    if (delta_sigma < 0.0)
        throw DomainError("delta_sigma must be nonnegative");
    if (cov == CovSpec::block_ar1 && (block_size < 1 || p % block_size != 0))
        throw DomainError("block size must divide p for block AR(1) covariance");
    auto check_rho = [](double rho) {
        if (!(rho > -1.0 && rho < 1.0))
            throw DomainError("correlation must lie in (-1,1)");
    };
    check_rho(block_rho);
    check_rho(global_rho);
    if (!(uniform_rho >= 0.0 && uniform_rho < 1.0))
        throw DomainError("uniform correlation must lie in [0,1)");
}

void fill_ar1(Eigen::Ref<Eigen::MatrixXd> out, double rho, Rng& rng)
{
    if (!(std::abs(rho) < 1.0))
        throw DomainError("AR(1) correlation must satisfy |rho| < 1");
    std::normal_distribution<double> normal;
    const double innov = std::sqrt(1.0 - rho * rho);
    for (Index i = 0; i < out.rows(); ++i) {
        double z = normal(rng);
        out(i, 0) = z;
        for (Index j = 1; j < out.cols(); ++j) {
            z = rho * z + innov * normal(rng);
            out(i, j) = z;
        }
    }
}

void fill_uniform_corr(Eigen::Ref<Eigen::MatrixXd> out, double rho, Rng& rng)
{
    if (!(rho >= 0.0 && rho < 1.0))
        throw DomainError("uniform correlation must satisfy 0 <= rho < 1");
    std::normal_distribution<double> normal;
    const double shared = std::sqrt(rho);
    const double own = std::sqrt(1.0 - rho);
    for (Index i = 0; i < out.rows(); ++i) {
        const double g = normal(rng);
        for (Index j = 0; j < out.cols(); ++j)
            out(i, j) = shared * g + own * normal(rng);
    }
}

Eigen::MatrixXd ar1_sample(Index p, double rho, Index n, std::uint64_t seed)
{
    Rng rng(seed);
    Eigen::MatrixXd z(n, p);
    fill_ar1(z, rho, rng);
    return z;
}

Eigen::MatrixXd uniform_corr_sample(Index p, double rho, Index n, std::uint64_t seed)
{
    Rng rng(seed);
    Eigen::MatrixXd z(n, p);
    fill_uniform_corr(z, rho, rng);
    return z;
}

namespace {

void fill_correlated(const SimSetting& s, Eigen::Ref<Eigen::MatrixXd> z, Rng& rng)
{
    switch (s.cov) {
    case CovSpec::independence: {
        std::normal_distribution<double> normal;
        for (Index i = 0; i < z.rows(); ++i)
            for (Index j = 0; j < z.cols(); ++j)
                z(i, j) = normal(rng);
        break;
    }
    case CovSpec::block_ar1:
        for (Index b = 0; b < s.p / s.block_size; ++b)
            fill_ar1(z.middleCols(b * s.block_size, s.block_size), s.block_rho, rng);
        break;
    case CovSpec::global_ar1: fill_ar1(z, s.global_rho, rng); break;
    case CovSpec::uniform: fill_uniform_corr(z, s.uniform_rho, rng); break;
    }
}

Eigen::VectorXi draw_labels(Index n, Rng& rng, bool need_both)
{
    std::bernoulli_distribution coin(0.5);
    constexpr int max_attempts = 100;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Eigen::VectorXi y(n);
        for (Index i = 0; i < n; ++i)
            y(i) = coin(rng) ? 1 : 0;
        const Index n1 = y.sum();
        if (!need_both || (n1 >= 2 && n - n1 >= 2))
            return y;
    }
    throw DataError("could not draw training labels with two observations per group");
}

Dataset draw_block(const SimSetting& s, const SimReplicate& rep, const Eigen::VectorXi& y, Rng& rng)
{
    Dataset d;
    d.y = y;
    d.X.resize(y.size(), s.p);
    fill_correlated(s, d.X, rng);
    for (Index i = 0; i < d.X.rows(); ++i) {
        if (y(i) == 1)
            d.X.row(i) = (rep.mu1 + rep.sd1 * d.X.row(i).transpose().array()).transpose();
        else
            d.X.row(i) = (rep.mu0 + rep.sd0 * d.X.row(i).transpose().array()).transpose();
    }
    d.columns.reserve(static_cast<std::size_t>(s.p));
    for (Index j = 0; j < s.p; ++j)
        d.columns.push_back("x" + std::to_string(j + 1));
    return d;
}

} // namespace

SimReplicate generate(const SimSetting& s)
{
    s.validate();
    Rng rng(s.seed);
    SimReplicate rep;
    const Index signals = s.n_signals();

    rep.mu0 = Eigen::ArrayXd::Zero(s.p);
    rep.mu1 = Eigen::ArrayXd::Zero(s.p);
    rep.sd1 = Eigen::ArrayXd::Ones(s.p);
    rep.sd0 = Eigen::ArrayXd::Ones(s.p);
    switch (s.mean) {
    case MeanSpec::s1: rep.mu1.head(signals) = 0.7; break;
    case MeanSpec::s2: rep.mu1.head(signals) = 0.3; break;
    case MeanSpec::s3: rep.mu1.head(signals) = 0.7; break;
    case MeanSpec::s4: {
        std::normal_distribution<double> means(0.5, 0.3);
        for (Index j = 0; j < signals; ++j)
            rep.mu1(j) = means(rng);
        break;
    }
    case MeanSpec::custom: rep.mu1.head(signals) = s.custom_shift; break;
    }
    rep.sd0.head(signals) += s.delta_sigma;
    rep.gamma_true = BoolArray::Constant(s.p, false);
    rep.gamma_true.head(signals) = true;

    const Eigen::VectorXi y_train = draw_labels(s.n_train, rng, true);
    const Eigen::VectorXi y_valid = draw_labels(s.n_valid, rng, false);
    const Eigen::VectorXi y_test = draw_labels(s.n_test, rng, false);
    rep.train = draw_block(s, rep, y_train, rng);
    rep.valid = draw_block(s, rep, y_valid, rng);
    rep.test = draw_block(s, rep, y_test, rng);
    return rep;
}

std::string to_string(MeanSpec m)
{
    switch (m) {
    case MeanSpec::s1: return "S1";
    case MeanSpec::s2: return "S2";
    case MeanSpec::s3: return "S3";
    case MeanSpec::s4: return "S4";
    case MeanSpec::custom: return "custom";
    }
    return "?";
}

std::string to_string(CovSpec c)
{
    switch (c) {
    case CovSpec::independence: return "independence";
    case CovSpec::block_ar1: return "block_ar1";
    case CovSpec::global_ar1: return "global_ar1";
    case CovSpec::uniform: return "uniform";
    }
    return "?";
}

} // namespace vada
