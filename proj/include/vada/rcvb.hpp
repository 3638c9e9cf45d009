#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vada/core.hpp"

namespace vada {

enum class Model { vlda, vqda };

std::string to_string(Model m);
Model parse_model(std::string_view name);

/// Converged variational selection probabilities and everything needed to
/// classify new observations.
struct FitState
{
    Model model = Model::vlda;
    Eigen::VectorXd w;
    int cycles_run = 0;
    bool converged = false;
    double final_delta = 0.0;
    Stats stats;
    Hyperparameters hyper;
    std::vector<std::string> columns;

    Index p() const noexcept { return w.size(); }
};

struct Prediction
{
    Eigen::VectorXd y_tilde;
    Eigen::VectorXi labels;
    // Argument of expit for each observation.
    Eigen::VectorXd score;
    int cycles_run = 0;
    bool converged = true;

    Index size() const noexcept { return y_tilde.size(); }
};

/// Cycle-constant part of the selection logit: the model's penalty
/// constants plus half the likelihood ratio statistic. Only the term in
/// 1'w_{-j} changes between cycles.
Eigen::ArrayXd selection_evidence(const Stats& s, Model model);

struct CycleResult
{
    Eigen::VectorXd w;
    int cycles_run = 0;
    bool converged = false;
    double final_delta = 0.0;
};

/// One batch update: every entry of w_next reads only w_prev.
void selection_step(const Eigen::ArrayXd& evidence,
                    double log_b_gamma,
                    double a_gamma,
                    const Eigen::VectorXd& w_prev,
                    Eigen::VectorXd& w_next);

/// Batch coordinate ascent until ||w(t) - w(t-1)||^2 <= eps or max_cycles.
CycleResult run_selection_cycles(const Eigen::ArrayXd& evidence,
                                 double log_b_gamma,
                                 double a_gamma,
                                 const Eigen::VectorXd& w0,
                                 double eps,
                                 int max_cycles);

FitState fit_vlda(const Dataset& d, const Hyperparameters& h);
FitState fit_vqda(const Dataset& d, const Hyperparameters& h);
FitState fit(const Dataset& d, Model model, const Hyperparameters& h);

/// Weighted naive Bayes LDA classification, oriented so that points near
/// the group-1 centroid get y_tilde > 1/2.
Prediction predict_vlda(const FitState& f, const Eigen::Ref<const Eigen::MatrixXd>& X, const Hyperparameters& h);
Prediction predict_vqda(const FitState& f, const Eigen::Ref<const Eigen::MatrixXd>& X, const Hyperparameters& h);
Prediction predict(const FitState& f, const Eigen::Ref<const Eigen::MatrixXd>& X, const Hyperparameters& h);

/// Jointly classifies all rows: each y_tilde's prior-odds term counts the
/// other rows' current y_tilde as pseudo-observations. Iterated in batch to
/// the fixed point (tolerance h.eps, at most h.max_cycles sweeps).
Prediction predict_coupled_vlda(const FitState& f,
                                const Eigen::Ref<const Eigen::MatrixXd>& X,
                                const Hyperparameters& h);

/// The VLDA discriminant without prior odds or the (1 + 1/n) factor.
Eigen::VectorXd lda_discriminant(const FitState& f, const Eigen::Ref<const Eigen::MatrixXd>& X);

/// Indices j with w_j > c_w (strict).
std::vector<Index> select_variables(const FitState& f, double c_w);

} // namespace vada
