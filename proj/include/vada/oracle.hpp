#pragma once

#include "vada/core.hpp"
#include "vada/rcvb.hpp"

namespace vada {

// Exact (enumeration-based) posterior quantities for small problems. These
// are ground truth for the variational approximations in rcvb.

/// lambda_LRT with exact MLEs including (x_new, y_new), minus log(n+1).
double lambda_bayes_lda(const Dataset& d, const Eigen::Ref<const Eigen::VectorXd>& x_new, int y_new, Index j,
                        double variance_floor = 1e-12);

/// QDA counterpart: exact lambda_LRT plus the count and xi corrections.
double lambda_bayes_qda(const Dataset& d, const Eigen::Ref<const Eigen::VectorXd>& x_new, int y_new, Index j,
                        double variance_floor = 1e-12);

/// Both entries of lambda_Bayes for every variable: column 0 for y_new = 0,
/// column 1 for y_new = 1.
Eigen::MatrixX2d lambda_bayes_table(const Dataset& d, const Eigen::Ref<const Eigen::VectorXd>& x_new, Model model,
                                    double variance_floor = 1e-12);

inline constexpr Index kMaxExactVariables = 15;

struct ExactPosterior
{
    // Index = y_new * 2^p + gamma bitmask (bit j set when gamma_j = 1).
    Eigen::VectorXd log_weights;
    Eigen::VectorXd gamma_marginals;
    double p_y1 = 0.0;
    // Log marginal likelihood up to the additive constant
    // sum_j log p(x_j, x_new_j | gamma_j = 0), common to every configuration.
    double log_marginal = 0.0;

    Index p() const noexcept { return gamma_marginals.size(); }
};

/// Enumerates all 2^(p+1) (gamma, y_new) configurations. Throws SizeError
/// for p > kMaxExactVariables.
ExactPosterior exact_posterior(const Dataset& d,
                               const Eigen::Ref<const Eigen::VectorXd>& x_new,
                               const Hyperparameters& h,
                               Model model = Model::vlda);

/// Maximised Gaussian log-likelihoods found by direct numeric search
/// (golden-section coordinate ascent), without closed-form MLEs.
struct NumericMle
{
    double null_loglik = 0.0;
    double alt_loglik = 0.0;
    double null_var = 0.0;

    double difference() const noexcept { return alt_loglik - null_loglik; }
};

/// Null model: one mean and variance. Alternative: two group means with a
/// shared variance (vlda) or group-specific variances (vqda). Variances are
/// searched from variance_floor upward.
NumericMle numeric_mle(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXi>& y,
                       Model model,
                       double variance_floor = 1e-12);

/// Max log-likelihood difference (alternative minus null).
double numeric_mle_check(const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXi>& y,
                         Model model = Model::vlda,
                         double variance_floor = 1e-12);

} // namespace vada
