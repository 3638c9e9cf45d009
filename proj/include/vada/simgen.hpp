#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "vada/core.hpp"

namespace vada {

// Mean structures. Group 0 has mean zero everywhere; group 1 is shifted on
// the signal variables.
enum class MeanSpec {
    s1, // 0.7 on the first 50 variables
    s2, // 0.3 on the first 100
    s3, // 0.7 on the first 200
    s4, // Normal(0.5, 0.3^2) on the first 10, drawn once per replicate
    custom // custom_shift on the first custom_signals
};

enum class CovSpec {
    independence,
    block_ar1, // AR(1) with rho = 0.6 inside blocks of block_size
    global_ar1, // AR(1) with rho = 0.9 across all variables
    uniform // equicorrelation rho = 0.8
};

struct SimSetting
{
    MeanSpec mean = MeanSpec::s1;
    CovSpec cov = CovSpec::independence;
    Index p = 500;
    Index n_train = 100;
    Index n_valid = 100;
    Index n_test = 1000;
    // Added to the group-0 standard deviation of every signal variable.
    double delta_sigma = 0.0;
    std::uint64_t seed = 0;

    double custom_shift = 0.7;
    Index custom_signals = 25;
    Index block_size = 100;
    double block_rho = 0.6;
    double global_rho = 0.9;
    double uniform_rho = 0.8;

    /// Numbered settings 1..16: mean spec (k-1) % 4, covariance (k-1) / 4.
    static SimSetting numbered(int k);

    Index n_signals() const;
    void validate() const;
};

struct SimReplicate
{
    Dataset train;
    Dataset valid;
    Dataset test;
    BoolArray gamma_true;
    // Population group means and standard deviations used for the draw.
    Eigen::ArrayXd mu1;
    Eigen::ArrayXd mu0;
    Eigen::ArrayXd sd1;
    Eigen::ArrayXd sd0;
};

using Rng = std::mt19937_64;

/// Independent stream seed for replicate `index` under `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

SimReplicate generate(const SimSetting& s);

/// n x p standard normals with corr(z_j, z_k) = rho^|j-k|.
Eigen::MatrixXd ar1_sample(Index p, double rho, Index n, std::uint64_t seed);
/// n x p standard normals with all pairwise correlations rho.
Eigen::MatrixXd uniform_corr_sample(Index p, double rho, Index n, std::uint64_t seed);

void fill_ar1(Eigen::Ref<Eigen::MatrixXd> out, double rho, Rng& rng);
void fill_uniform_corr(Eigen::Ref<Eigen::MatrixXd> out, double rho, Rng& rng);

std::string to_string(MeanSpec m);
std::string to_string(CovSpec c);

} // namespace vada
