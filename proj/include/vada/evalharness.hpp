#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "vada/rcvb.hpp"
#include "vada/simgen.hpp"

namespace vada {

/// Fraction of positions where pred and truth differ.
double classification_error(const Eigen::Ref<const Eigen::VectorXi>& pred,
                            const Eigen::Ref<const Eigen::VectorXi>& truth);

struct SelectionCounts
{
    Index tp = 0;
    Index tn = 0;
    Index fp = 0;
    Index fn = 0;
};

SelectionCounts selection_counts(const std::vector<Index>& selected, const BoolArray& truth);

/// Matthews correlation coefficient; 0 when any marginal count is zero.
double mcc(const SelectionCounts& c);
double mcc(const std::vector<Index>& selected, const BoolArray& truth);

/// Runs fn(0..count-1) on up to `threads` workers. Each index is handled
/// by exactly one worker; callers write results into per-index slots.
void parallel_for(Index count, int threads, const std::function<void(Index)>& fn);

struct ReplicateRecord
{
    Index index = 0;
    std::uint64_t seed = 0;
    double classification_error = 0.0;
    double mcc = 0.0;
    SelectionCounts counts;
    Index n_selected = 0;
    int cycles_run = 0;
    bool converged = false;
    double fit_seconds = 0.0;
    double predict_seconds = 0.0;
};

struct EvalReport
{
    Model model = Model::vlda;
    std::vector<ReplicateRecord> records;

    double median_error() const;
    double median_mcc() const;
};

ReplicateRecord evaluate_replicate(const SimReplicate& rep, Model model, const Hyperparameters& h);

/// `reps` replicates of `base`, replicate r seeded with derive_seed(base.seed, r).
EvalReport run_simulation(const SimSetting& base, Index reps, Model model, const Hyperparameters& h,
                          int threads = 1);

/// Fold id per row: stratified by group after a seeded shuffle.
std::vector<Index> stratified_folds(const Eigen::Ref<const Eigen::VectorXi>& y, Index k, std::uint64_t seed);

struct CvRecord
{
    Index rep = 0;
    Index misclassified = 0;
    Index total = 0;
    double fit_seconds = 0.0;
    double predict_seconds = 0.0;

    double error() const { return total > 0 ? double(misclassified) / double(total) : 0.0; }
};

struct CvReport
{
    Model model = Model::vlda;
    Index k = 0;
    std::vector<CvRecord> records;
};

/// Repeated stratified k-fold CV; misclassifications summed over folds per repetition.
CvReport kfold_cv(const Dataset& d, Index k, Index reps, Model model, const Hyperparameters& h,
                  std::uint64_t seed, int threads = 1);

struct ConsistencyRecord
{
    Index n = 0;
    Index rep = 0;
    bool at_convergence = false;
    int cycles = 0;
    double e0 = 0.0;
    double e1 = 0.0;
    double E = 0.0;
    Index false_positives = 0;
    Index false_negatives = 0;
};

struct ConsistencyPoint
{
    Index n = 0;
    bool at_convergence = false;
    double median_E = 0.0;
    double median_e0 = 0.0;
    double median_e1 = 0.0;
    double median_fp = 0.0;
    double median_fn = 0.0;
};

struct ConsistencyCurve
{
    std::vector<ConsistencyRecord> records;
    // One point per (n, stage), ordered by n with the one-cycle stage first.
    std::vector<ConsistencyPoint> points;

    const ConsistencyPoint& at(Index n, bool at_convergence) const;
};

/// Error sums after one cycle and at convergence for a VLDA fit.
ConsistencyRecord consistency_record(const FitState& f, const BoolArray& truth, double c_w);

/// For each n, fits `reps` training sets drawn from the template (n_train = n).
ConsistencyCurve consistency_experiment(const SimSetting& tmpl, const std::vector<Index>& ns, Index reps,
                                        const Hyperparameters& h, std::uint64_t seed, int threads = 1);

double median(std::vector<double> values);

} // namespace vada
