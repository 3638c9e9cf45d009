#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>

#include "vada/evalharness.hpp"

using namespace vada;

namespace {

BoolArray mask(Index p, Index signals)
{
    BoolArray m = BoolArray::Constant(p, false);
    m.head(signals) = true;
    return m;
}

Dataset separated(Index n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    Dataset d;
    d.X.resize(n, 3);
    d.y.resize(n);
    for (Index i = 0; i < n; ++i) {
        d.y(i) = int(i % 2);
        for (Index j = 0; j < 3; ++j)
            d.X(i, j) = 0.1 * z(rng) + (j == 0 && d.y(i) ? 5.0 : 0.0);
    }
    return d;
}

} // namespace

TEST_CASE("classification_error")
{
    Eigen::VectorXi truth = Eigen::VectorXi::Zero(1000);
    truth.tail(500).setOnes();
    CHECK(classification_error(truth, truth) == 0.0);
    const Eigen::VectorXi flipped = 1 - truth.array();
    CHECK(classification_error(flipped, truth) == 1.0);
    Eigen::VectorXi some = truth;
    for (Index i = 0; i < 37; ++i)
        some(i * 20) = 1 - some(i * 20);
    CHECK(classification_error(some, truth) == doctest::Approx(0.037));
    CHECK_THROWS_AS(classification_error(Eigen::VectorXi(), Eigen::VectorXi()), DataError);
    CHECK_THROWS_AS(classification_error(truth.head(3), truth.head(4)), DataError);
}

TEST_CASE("selection counts and mcc")
{
    const BoolArray truth = mask(500, 50);
    std::vector<Index> all_signals(50);
    std::iota(all_signals.begin(), all_signals.end(), 0);
    CHECK(mcc(all_signals, truth) == doctest::Approx(1.0));

    std::vector<Index> complement;
    for (Index j = 50; j < 500; ++j)
        complement.push_back(j);
    CHECK(mcc(complement, truth) == doctest::Approx(-1.0));

    // 40 true positives, 10 false positives.
    std::vector<Index> sel(all_signals.begin(), all_signals.begin() + 40);
    for (Index j = 100; j < 110; ++j)
        sel.push_back(j);
    const SelectionCounts c = selection_counts(sel, truth);
    CHECK(c.tp == 40);
    CHECK(c.fp == 10);
    CHECK(c.fn == 10);
    CHECK(c.tn == 440);
    CHECK(c.tp + c.fn == 50);
    CHECK(c.tn + c.fp == 450);
    const double want = (40.0 * 440.0 - 10.0 * 10.0) / std::sqrt(50.0 * 50.0 * 450.0 * 450.0);
    CHECK(mcc(c) == doctest::Approx(want).epsilon(1e-14));
    CHECK(mcc(c) == doctest::Approx(0.78).epsilon(0.01));

    SelectionCounts swapped{c.tn, c.tp, c.fn, c.fp};
    CHECK(mcc(swapped) == doctest::Approx(mcc(c)).epsilon(1e-14));

    CHECK(mcc({}, truth) == 0.0);
    CHECK(mcc(all_signals, BoolArray::Constant(50, true)) == 0.0);
    CHECK_THROWS_AS(selection_counts({500}, truth), DomainError);
}

TEST_CASE("median")
{
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("parallel_for visits every index once")
{
    for (int threads : {1, 3, 8}) {
        std::vector<std::atomic<int>> hits(57);
        parallel_for(57, threads, [&](Index i) { hits[std::size_t(i)]++; });
        bool once = true;
        for (auto& h : hits)
            once = once && h.load() == 1;
        CHECK(once);
    }
    CHECK_THROWS(parallel_for(10, 4, [](Index i) {
        if (i == 7)
            throw DataError("boom");
    }));
}

TEST_CASE("stratified_folds")
{
    Eigen::VectorXi y(43);
    for (Index i = 0; i < 43; ++i)
        y(i) = i < 17 ? 1 : 0;
    const auto fold = stratified_folds(y, 5, 123);
    REQUIRE(fold.size() == 43);
    std::vector<int> size1(5, 0), size0(5, 0);
    for (Index i = 0; i < 43; ++i) {
        REQUIRE(fold[std::size_t(i)] >= 0);
        REQUIRE(fold[std::size_t(i)] < 5);
        (y(i) ? size1 : size0)[std::size_t(fold[std::size_t(i)])]++;
    }
    // Each index lands in exactly one fold; group counts differ by at most one.
    CHECK(std::accumulate(size1.begin(), size1.end(), 0) == 17);
    CHECK(std::accumulate(size0.begin(), size0.end(), 0) == 26);
    CHECK(*std::max_element(size1.begin(), size1.end()) - *std::min_element(size1.begin(), size1.end()) <= 1);
    CHECK(*std::max_element(size0.begin(), size0.end()) - *std::min_element(size0.begin(), size0.end()) <= 1);

    CHECK(stratified_folds(y, 5, 123) == fold);
    CHECK(stratified_folds(y, 5, 124) != fold);

    const auto loo = stratified_folds(y, 43, 1);
    CHECK(std::set<Index>(loo.begin(), loo.end()).size() == 43);

    CHECK_THROWS_AS(stratified_folds(y, 1, 0), DomainError);
    CHECK_THROWS_AS(stratified_folds(y, 44, 0), DomainError);
    Eigen::VectorXi thin(10);
    thin << 1, 1, 0, 0, 0, 0, 0, 0, 0, 0;
    CHECK_THROWS_AS(stratified_folds(thin, 2, 0), DataError);
}

TEST_CASE("kfold_cv")
{
    SUBCASE("separated data")
    {
        const Dataset d = separated(40, 2);
        const CvReport r = kfold_cv(d, 5, 3, Model::vlda, Hyperparameters{}, 9);
        REQUIRE(r.records.size() == 3);
        for (const auto& rec : r.records) {
            CHECK(rec.misclassified == 0);
            CHECK(rec.total == 40);
        }
        const CvReport q = kfold_cv(d, 5, 2, Model::vqda, Hyperparameters{}, 9);
        CHECK(q.records[0].misclassified == 0);
    }
    SUBCASE("leave-one-out on n = 20")
    {
        const Dataset d = separated(20, 3);
        const CvReport r = kfold_cv(d, 20, 1, Model::vlda, Hyperparameters{}, 1);
        CHECK(r.records[0].total == 20);
    }
    SUBCASE("deterministic and thread independent")
    {
        SimSetting s;
        s.p = 60;
        s.mean = MeanSpec::custom;
        s.custom_signals = 5;
        s.n_train = 60;
        s.seed = 4;
        const Dataset d = generate(s).train;
        const CvReport a = kfold_cv(d, 5, 4, Model::vlda, Hyperparameters{}, 77, 1);
        const CvReport b = kfold_cv(d, 5, 4, Model::vlda, Hyperparameters{}, 77, 4);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(a.records[i].misclassified == b.records[i].misclassified);
    }
    CHECK_THROWS_AS(kfold_cv(separated(20, 1), 5, 0, Model::vlda, Hyperparameters{}, 1), DomainError);
}

TEST_CASE("evaluate_replicate and run_simulation")
{
    SimSetting s;
    s.mean = MeanSpec::custom;
    s.p = 80;
    s.custom_signals = 8;
    s.custom_shift = 1.5;
    s.n_test = 400;
    s.seed = 5;
    const EvalReport a = run_simulation(s, 4, Model::vlda, Hyperparameters{}, 1);
    const EvalReport b = run_simulation(s, 4, Model::vlda, Hyperparameters{}, 3);
    REQUIRE(a.records.size() == 4);
    for (std::size_t r = 0; r < 4; ++r) {
        const auto& rec = a.records[r];
        CHECK(rec.index == Index(r));
        CHECK(rec.seed == derive_seed(5, r));
        CHECK(rec.classification_error == b.records[r].classification_error);
        CHECK(rec.counts.tp + rec.counts.fn == 8);
        CHECK(rec.counts.tn + rec.counts.fp == 72);
        CHECK(rec.classification_error >= 0.0);
        CHECK(rec.classification_error <= 1.0);
        CHECK(rec.mcc >= -1.0);
        CHECK(rec.mcc <= 1.0);
    }
    CHECK(a.median_error() < 0.2);
    CHECK(a.median_mcc() > 0.5);
}

TEST_CASE("consistency")
{
    SUBCASE("record sums")
    {
        FitState f;
        f.w = Eigen::VectorXd(5);
        f.w << 0.9, 0.4, 0.1, 0.6, 0.0;
        f.stats.n = 30;
        const ConsistencyRecord r = consistency_record(f, mask(5, 2), 0.5);
        CHECK(r.e1 == doctest::Approx(0.1 + 0.6));
        CHECK(r.e0 == doctest::Approx(0.1 + 0.6));
        CHECK(r.E == r.e0 + r.e1);
        CHECK(r.false_negatives == 1);
        CHECK(r.false_positives == 1);
        CHECK_THROWS_AS(consistency_record(f, mask(4, 2), 0.5), DomainError);
    }
    SUBCASE("error falls with n")
    {
        SimSetting s;
        s.mean = MeanSpec::custom;
        s.p = 100;
        s.custom_signals = 10;
        s.custom_shift = 1.0;
        const ConsistencyCurve c = consistency_experiment(s, {50, 200, 800}, 6, Hyperparameters{}, 3, 4);
        CHECK(c.records.size() == 2 * 3 * 6);
        for (const auto& r : c.records) {
            CHECK(r.E == r.e0 + r.e1);
            CHECK(r.e0 >= 0.0);
            CHECK(r.e0 <= 90.0);
            CHECK(r.e1 >= 0.0);
            CHECK(r.e1 <= 10.0);
            if (!r.at_convergence)
                CHECK(r.cycles == 1);
        }
        CHECK(c.at(50, true).median_E > c.at(200, true).median_E);
        CHECK(c.at(200, true).median_E > c.at(800, true).median_E);
        CHECK(c.at(800, true).median_fp == 0.0);
        CHECK(c.at(800, true).median_fn == 0.0);
        CHECK_THROWS_AS(c.at(51, true), DomainError);
    }
    SUBCASE("all noise")
    {
        SimSetting s;
        s.mean = MeanSpec::custom;
        s.p = 50;
        s.custom_signals = 0;
        const ConsistencyCurve c = consistency_experiment(s, {40, 160}, 4, Hyperparameters{}, 8);
        for (const auto& r : c.records) {
            CHECK(r.false_negatives == 0);
            CHECK(r.e1 == 0.0);
        }
    }
    CHECK_THROWS_AS(consistency_experiment(SimSetting{}, {200, 100}, 2, Hyperparameters{}, 1), DomainError);
    CHECK_THROWS_AS(consistency_experiment(SimSetting{}, {}, 2, Hyperparameters{}, 1), DomainError);
}
