#include "vada/evalharness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace vada {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Dataset subset_rows(const Dataset& d, const std::vector<Index>& rows)
{
    Dataset out;
    out.columns = d.columns;
    out.X.resize(static_cast<Index>(rows.size()), d.p());
    if (d.labeled())
        out.y.resize(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.X.row(static_cast<Index>(i)) = d.X.row(rows[i]);
        if (d.labeled())
            out.y(static_cast<Index>(i)) = d.y(rows[i]);
    }
    return out;
}

} // namespace

double classification_error(const Eigen::Ref<const Eigen::VectorXi>& pred,
                            const Eigen::Ref<const Eigen::VectorXi>& truth)
{
    if (pred.size() != truth.size())
        throw DataError("prediction and truth lengths differ");
    if (pred.size() == 0)
        throw DataError("classification error of an empty set is undefined");
    return double((pred.array() != truth.array()).count()) / double(pred.size());
}

SelectionCounts selection_counts(const std::vector<Index>& selected, const BoolArray& truth)
{
    BoolArray chosen = BoolArray::Constant(truth.size(), false);
    for (Index j : selected) {
        if (j < 0 || j >= truth.size())
            throw DomainError("selected index out of range");
        chosen(j) = true;
    }
    SelectionCounts c;
    for (Index j = 0; j < truth.size(); ++j) {
        if (chosen(j))
            (truth(j) ? c.tp : c.fp) += 1;
        else
            (truth(j) ? c.fn : c.tn) += 1;
    }
    return c;
}

double mcc(const SelectionCounts& c)
{
    const double tp = double(c.tp), tn = double(c.tn), fp = double(c.fp), fn = double(c.fn);
    const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom == 0.0)
        return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(denom);
}

double mcc(const std::vector<Index>& selected, const BoolArray& truth)
{
    return mcc(selection_counts(selected, truth));
}

void parallel_for(Index count, int threads, const std::function<void(Index)>& fn)
{
    const Index workers = std::clamp<Index>(threads, 1, std::max<Index>(count, 1));
    if (workers <= 1) {
        for (Index i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<Index> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (Index w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (Index i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

double median(std::vector<double> values)
{
    if (values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double EvalReport::median_error() const
{
    std::vector<double> v;
    for (const auto& r : records)
        v.push_back(r.classification_error);
    return median(std::move(v));
}

double EvalReport::median_mcc() const
{
    std::vector<double> v;
    for (const auto& r : records)
        v.push_back(r.mcc);
    return median(std::move(v));
}

ReplicateRecord evaluate_replicate(const SimReplicate& rep, Model model, const Hyperparameters& h)
{
    ReplicateRecord rec;
    auto start = Clock::now();
    const FitState f = fit(rep.train, model, h);
    rec.fit_seconds = seconds_since(start);
    start = Clock::now();
    const Prediction pred = predict(f, rep.test.X, h);
    rec.predict_seconds = seconds_since(start);

    const auto selected = select_variables(f, h.c_w);
    rec.counts = selection_counts(selected, rep.gamma_true);
    rec.mcc = mcc(rec.counts);
    rec.n_selected = static_cast<Index>(selected.size());
    rec.classification_error = rep.test.n() > 0 ? classification_error(pred.labels, rep.test.y) : 0.0;
    rec.cycles_run = f.cycles_run;
    rec.converged = f.converged;
    return rec;
}

EvalReport run_simulation(const SimSetting& base, Index reps, Model model, const Hyperparameters& h, int threads)
{
    EvalReport report;
    report.model = model;
    report.records.resize(static_cast<std::size_t>(reps));
    parallel_for(reps, threads, [&](Index r) {
        SimSetting s = base;
        s.seed = derive_seed(base.seed, static_cast<std::uint64_t>(r));
        ReplicateRecord rec = evaluate_replicate(generate(s), model, h);
        rec.index = r;
        rec.seed = s.seed;
        report.records[static_cast<std::size_t>(r)] = rec;
    });
    return report;
}

std::vector<Index> stratified_folds(const Eigen::Ref<const Eigen::VectorXi>& y, Index k, std::uint64_t seed)
{
    const Index n = y.size();
    if (k < 2)
        throw DomainError("k-fold CV requires k >= 2");
    if (k > n)
        throw DomainError("k exceeds the number of observations");
    std::vector<Index> ones;
    std::vector<Index> zeros;
    for (Index i = 0; i < n; ++i)
        (y(i) == 1 ? ones : zeros).push_back(i);
    Rng rng(seed);
    std::shuffle(ones.begin(), ones.end(), rng);
    std::shuffle(zeros.begin(), zeros.end(), rng);

    // Round-robin over group 1 then group 0 spreads each group evenly
    // across folds, and leaves no fold empty when k = n.
    std::vector<Index> fold(static_cast<std::size_t>(n));
    Index pos = 0;
    for (Index i : ones)
        fold[static_cast<std::size_t>(i)] = pos++ % k;
    for (Index i : zeros)
        fold[static_cast<std::size_t>(i)] = pos++ % k;

    const Index n1 = static_cast<Index>(ones.size());
    const Index n0 = static_cast<Index>(zeros.size());
    for (Index f = 0; f < k; ++f) {
        Index held1 = 0;
        Index held0 = 0;
        for (Index i = 0; i < n; ++i)
            if (fold[static_cast<std::size_t>(i)] == f)
                (y(i) == 1 ? held1 : held0) += 1;
        if (n1 - held1 < 2 || n0 - held0 < 2)
            throw DataError("fold " + std::to_string(f) + " leaves fewer than two training rows in a group");
    }
    return fold;
}

CvReport kfold_cv(const Dataset& d, Index k, Index reps, Model model, const Hyperparameters& h,
                  std::uint64_t seed, int threads)
{
    validate_training(d);
    h.validate();
    if (reps < 1)
        throw DomainError("CV requires at least one repetition");
    CvReport report;
    report.model = model;
    report.k = k;
    report.records.resize(static_cast<std::size_t>(reps));
    // Fold assignment validates the design once before any worker runs.
    stratified_folds(d.y, k, derive_seed(seed, 0));

    parallel_for(reps, threads, [&](Index r) {
        const auto fold = stratified_folds(d.y, k, derive_seed(seed, static_cast<std::uint64_t>(r)));
        CvRecord rec;
        rec.rep = r;
        for (Index f = 0; f < k; ++f) {
            std::vector<Index> train_rows;
            std::vector<Index> test_rows;
            for (Index i = 0; i < d.n(); ++i)
                (fold[static_cast<std::size_t>(i)] == f ? test_rows : train_rows).push_back(i);
            if (test_rows.empty())
                continue;
            const Dataset train = subset_rows(d, train_rows);
            const Dataset test = subset_rows(d, test_rows);
            auto start = Clock::now();
            const FitState state = fit(train, model, h);
            rec.fit_seconds += seconds_since(start);
            start = Clock::now();
            const Prediction pred = predict(state, test.X, h);
            rec.predict_seconds += seconds_since(start);
            rec.misclassified += (pred.labels.array() != test.y.array()).count();
            rec.total += test.n();
        }
        report.records[static_cast<std::size_t>(r)] = rec;
    });
    return report;
}

ConsistencyRecord consistency_record(const FitState& f, const BoolArray& truth, double c_w)
{
    if (truth.size() != f.p())
        throw DomainError("truth mask length does not match the fit");
    ConsistencyRecord rec;
    rec.n = f.stats.n;
    rec.cycles = f.cycles_run;
    for (Index j = 0; j < f.p(); ++j) {
        if (truth(j)) {
            rec.e1 += 1.0 - f.w(j);
            if (!(f.w(j) > c_w))
                ++rec.false_negatives;
        } else {
            rec.e0 += f.w(j);
            if (f.w(j) > c_w)
                ++rec.false_positives;
        }
    }
    rec.E = rec.e0 + rec.e1;
    return rec;
}

const ConsistencyPoint& ConsistencyCurve::at(Index n, bool at_convergence) const
{
    for (const auto& pt : points)
        if (pt.n == n && pt.at_convergence == at_convergence)
            return pt;
    throw DomainError("no consistency point for n = " + std::to_string(n));
}

ConsistencyCurve consistency_experiment(const SimSetting& tmpl, const std::vector<Index>& ns, Index reps,
                                        const Hyperparameters& h, std::uint64_t seed, int threads)
{
    h.validate();
    if (ns.empty())
        throw DomainError("consistency experiment needs at least one sample size");
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1])
            throw DomainError("sample sizes must be strictly increasing");

    ConsistencyCurve curve;
    const Index cells = static_cast<Index>(ns.size()) * reps;
    std::vector<ConsistencyRecord> first(static_cast<std::size_t>(cells));
    std::vector<ConsistencyRecord> last(static_cast<std::size_t>(cells));
    parallel_for(cells, threads, [&](Index cell) {
        const Index ni = cell / reps;
        const Index r = cell % reps;
        SimSetting s = tmpl;
        s.n_train = ns[static_cast<std::size_t>(ni)];
        s.n_valid = 0;
        s.n_test = 0;
        s.seed = derive_seed(derive_seed(seed, static_cast<std::uint64_t>(s.n_train)), static_cast<std::uint64_t>(r));
        const SimReplicate rep = generate(s);

        Hyperparameters one = h;
        one.max_cycles = 1;
        ConsistencyRecord a = consistency_record(fit_vlda(rep.train, one), rep.gamma_true, h.c_w);
        ConsistencyRecord b = consistency_record(fit_vlda(rep.train, h), rep.gamma_true, h.c_w);
        a.rep = b.rep = r;
        a.at_convergence = false;
        b.at_convergence = true;
        first[static_cast<std::size_t>(cell)] = a;
        last[static_cast<std::size_t>(cell)] = b;
    });

    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        for (bool conv : {false, true}) {
            const auto& src = conv ? last : first;
            std::vector<double> E, e0, e1, fp, fn;
            for (Index r = 0; r < reps; ++r) {
                const auto& rec = src[ni * static_cast<std::size_t>(reps) + static_cast<std::size_t>(r)];
                curve.records.push_back(rec);
                E.push_back(rec.E);
                e0.push_back(rec.e0);
                e1.push_back(rec.e1);
                fp.push_back(double(rec.false_positives));
                fn.push_back(double(rec.false_negatives));
            }
            ConsistencyPoint pt;
            pt.n = ns[ni];
            pt.at_convergence = conv;
            pt.median_E = median(E);
            pt.median_e0 = median(e0);
            pt.median_e1 = median(e1);
            pt.median_fp = median(fp);
            pt.median_fn = median(fn);
            curve.points.push_back(pt);
        }
    }
    return curve;
}

} // namespace vada
