// Command-line front end: vada <fit|predict|simulate|cv|consistency|oracle|preprocess> [options]
//
// Data goes to files under --out-dir; stdout carries short progress lines and
// stderr carries warnings and errors. Each run also writes <command>.meta.json
// holding the full option set, seed, version, timings and fit diagnostics.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vada/dataio.hpp"
#include "vada/evalharness.hpp"
#include "vada/oracle.hpp"
#include "vada/rcvb.hpp"
#include "vada/simgen.hpp"
#include "vada/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitSize = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct HyperFlags
{
    double a_y = 1.0, b_y = 1.0, a_gamma = 1.0, r = 0.98, kappa = 1e-3, c_w = 0.5, c_y = 0.5, eps = 1e-6;
    int max_cycles = 100;
    CLI::Option *o_ay{}, *o_by{}, *o_agamma{}, *o_r{}, *o_kappa{}, *o_cw{}, *o_cy{}, *o_eps{}, *o_max{};

    void add(CLI::App* app)
    {
        o_r = app->add_option("--r", r, "Exponent r in the selection penalty (r < 1)")->capture_default_str();
        o_kappa = app->add_option("--kappa", kappa, "Penalty scale kappa > 0")->capture_default_str();
        o_ay = app->add_option("--ay", a_y, "Beta prior a_y on the class probability")->capture_default_str();
        o_by = app->add_option("--by", b_y, "Beta prior b_y on the class probability")->capture_default_str();
        o_agamma = app->add_option("--agamma", a_gamma, "Beta prior a_gamma on the selection rate")
                       ->capture_default_str();
        o_cw = app->add_option("--cw", c_w, "Selection threshold on w")->capture_default_str();
        o_cy = app->add_option("--cy", c_y, "Classification threshold on y_tilde")->capture_default_str();
        o_eps = app->add_option("--eps", eps, "Convergence tolerance on ||dw||^2")->capture_default_str();
        o_max = app->add_option("--max-cycles", max_cycles, "Maximum update cycles")->capture_default_str();
    }

    // Flags given on the command line override `base`.
    vada::Hyperparameters resolve(vada::Hyperparameters base) const
    {
        if (o_ay->count()) base.a_y = a_y;
        if (o_by->count()) base.b_y = b_y;
        if (o_agamma->count()) base.a_gamma = a_gamma;
        if (o_r->count()) base.r = r;
        if (o_kappa->count()) base.kappa = kappa;
        if (o_cw->count()) base.c_w = c_w;
        if (o_cy->count()) base.c_y = c_y;
        if (o_eps->count()) base.eps = eps;
        if (o_max->count()) base.max_cycles = max_cycles;
        base.validate();
        return base;
    }
};

json options_json(const CLI::App* app)
{
    json out = json::object();
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help")
            continue;
        const std::string& name = opt->get_lnames()[0];
        if (opt->count()) {
            const auto& res = opt->results();
            if (opt->get_type_size() == 0)
                out[name] = true;
            else if (res.size() == 1)
                out[name] = res[0];
            else
                out[name] = res;
        } else if (!opt->get_default_str().empty()) {
            out[name] = opt->get_default_str();
        }
    }
    return out;
}

struct RunMeta
{
    std::string command;
    json doc;
    Clock::time_point start = Clock::now();

    RunMeta(std::string cmd, const CLI::App* app) : command(std::move(cmd))
    {
        doc["command"] = command;
        doc["version"] = vada::kVersion;
        doc["options"] = options_json(app);
        doc["timings"] = json::object();
    }

    void write(const fs::path& dir)
    {
        doc["timings"]["total_seconds"] = seconds_since(start);
        vada::write_text_file(dir / (command + ".meta.json"), doc.dump(2) + "\n");
    }
};

json floored_list(const vada::FitState& f)
{
    json out = json::array();
    for (vada::Index j = 0; j < f.p(); ++j)
        if (f.stats.floored(j))
            out.push_back(f.columns[static_cast<std::size_t>(j)]);
    return out;
}

json fit_diagnostics(const vada::FitState& f)
{
    return json{{"cycles_run", f.cycles_run},
                {"converged", f.converged},
                {"final_delta", f.final_delta},
                {"n_selected", vada::select_variables(f, f.hyper.c_w).size()},
                {"floored_variables", floored_list(f)}};
}

void warn_if_unconverged(const vada::FitState& f)
{
    if (!f.converged)
        std::cerr << "warning: selection did not converge after " << f.cycles_run
                  << " cycles (final delta " << f.final_delta << ")\n";
}

template <typename Writer>
std::string to_text(Writer&& w)
{
    std::ostringstream os;
    w(os);
    return os.str();
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw vada::DataError("cannot create output directory " + dir.string() + ": " + ec.message());
}

// Copy of d without the named column (unchanged when absent).
vada::Dataset without_column(const vada::Dataset& d, const std::string& name)
{
    vada::Dataset out;
    std::vector<vada::Index> keep;
    for (vada::Index j = 0; j < d.p(); ++j)
        if (d.column_name(j) != name) {
            keep.push_back(j);
            out.columns.push_back(d.column_name(j));
        }
    out.X.resize(d.n(), static_cast<vada::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        out.X.col(static_cast<vada::Index>(c)) = d.X.col(keep[c]);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Variational discriminant analysis with variable selection"};
    app.set_version_flag("--version", vada::kVersion);
    app.require_subcommand(1);

    std::string model_name = "vlda";
    std::string train_path, input_path, state_path, label = "y", out_dir = ".", steps;
    std::uint64_t seed = 0;
    int threads = 1;
    int setting = 1;
    long n = 100, p = 500, reps = 0, k = 5, n_valid = 100, n_test = 1000;
    double delta_sigma = 0.0;
    bool coupled = false;
    std::vector<long> ns{100, 400, 1600};
    long row = 0;

    auto add_model = [&](CLI::App* s) {
        s->add_option("--model", model_name, "vlda or vqda")
            ->check(CLI::IsMember({"vlda", "vqda"}))
            ->capture_default_str();
    };
    auto add_out = [&](CLI::App* s) {
        s->add_option("--out-dir", out_dir, "Directory for output files")->capture_default_str();
    };
    auto add_seed = [&](CLI::App* s) { s->add_option("--seed", seed, "Random seed")->capture_default_str(); };
    auto add_threads = [&](CLI::App* s) {
        s->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();
    };
    auto add_label = [&](CLI::App* s, const char* help) {
        s->add_option("--label", label, help)->capture_default_str();
    };
    auto add_sim = [&](CLI::App* s) {
        s->add_option("--setting", setting, "Simulation setting 1..16")->check(CLI::Range(1, 16))
            ->capture_default_str();
        s->add_option("--p", p, "Number of variables")->check(CLI::PositiveNumber)->capture_default_str();
        s->add_option("--delta-sigma", delta_sigma, "Added group-0 SD on signal variables")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
    };

    HyperFlags hf_fit, hf_pred, hf_sim, hf_cv, hf_cons, hf_oracle;

    CLI::App* fit = app.add_subcommand("fit", "Fit selection probabilities on a labelled CSV");
    fit->add_option("--train", train_path, "Training CSV")->required();
    add_label(fit, "Label column name");
    add_model(fit);
    hf_fit.add(fit);
    add_out(fit);

    CLI::App* pred = app.add_subcommand("predict", "Classify rows of a CSV with a saved fit");
    pred->add_option("--state", state_path, "Fit state JSON")->required();
    pred->add_option("--input", input_path, "CSV of observations to classify")->required();
    pred->add_option("--label", label, "Column to ignore if present (e.g. known labels)");
    pred->add_flag("--coupled", coupled, "Classify all rows jointly (vlda only)");
    hf_pred.add(pred);
    add_out(pred);

    CLI::App* sim = app.add_subcommand("simulate", "Generate a simulated replicate, optionally evaluate over reps");
    add_sim(sim);
    sim->add_option("--n", n, "Training size")->check(CLI::Range(4L, 100000000L))->capture_default_str();
    sim->add_option("--n-valid", n_valid, "Validation size")->check(CLI::NonNegativeNumber)->capture_default_str();
    sim->add_option("--n-test", n_test, "Test size")->check(CLI::NonNegativeNumber)->capture_default_str();
    sim->add_option("--reps", reps, "Replicates to fit and evaluate (0 = export only)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_model(sim);
    add_seed(sim);
    add_threads(sim);
    hf_sim.add(sim);
    add_out(sim);

    CLI::App* cv = app.add_subcommand("cv", "Repeated stratified k-fold cross-validation");
    cv->add_option("--input", input_path, "Labelled CSV")->required();
    add_label(cv, "Label column name");
    cv->add_option("--k", k, "Folds")->check(CLI::Range(2L, 1000L))->capture_default_str();
    reps = 0;
    cv->add_option("--reps", reps, "Repetitions (default 50)")->check(CLI::PositiveNumber);
    cv->add_option("--preprocess", steps, "Transforms applied before CV, e.g. log2p1,iqr:0.3,standardize");
    add_model(cv);
    add_seed(cv);
    add_threads(cv);
    hf_cv.add(cv);
    add_out(cv);

    CLI::App* cons = app.add_subcommand("consistency", "Selection error sums across training sizes");
    add_sim(cons);
    cons->add_option("--ns", ns, "Training sizes")->delimiter(',')->capture_default_str();
    cons->add_option("--reps", reps, "Replicates per size (default 25)")->check(CLI::PositiveNumber);
    add_seed(cons);
    add_threads(cons);
    hf_cons.add(cons);
    add_out(cons);

    CLI::App* orc = app.add_subcommand("oracle", "Exact posterior by enumeration (p <= 15)");
    orc->add_option("--train", train_path, "Training CSV")->required();
    add_label(orc, "Label column name");
    orc->add_option("--input", input_path, "CSV whose row --row is the new observation")->required();
    orc->add_option("--row", row, "Row of --input to use")->check(CLI::NonNegativeNumber)->capture_default_str();
    add_model(orc);
    hf_oracle.add(orc);
    add_out(orc);

    CLI::App* pre = app.add_subcommand("preprocess", "Apply filters and transforms to a CSV");
    pre->add_option("--input", input_path, "CSV")->required();
    pre->add_option("--label", label, "Label column carried through unchanged");
    pre->add_option("--steps", steps, "Comma-separated transforms")->required();
    add_out(pre);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const fs::path dir(out_dir);
        ensure_dir(dir);
        const vada::Model model = vada::parse_model(model_name);

        if (*fit) {
            RunMeta meta("fit", fit);
            const vada::Hyperparameters h = hf_fit.resolve({});
            auto t0 = Clock::now();
            const vada::Dataset d = vada::load_csv(train_path, label);
            meta.doc["timings"]["load_seconds"] = seconds_since(t0);
            t0 = Clock::now();
            const vada::FitState f = vada::fit(d, model, h);
            meta.doc["timings"]["fit_seconds"] = seconds_since(t0);
            vada::save_state(f, dir / "state.json");
            vada::write_text_file(dir / "selection.tsv",
                                  to_text([&](std::ostream& os) { vada::write_selection_tsv(os, f, h.c_w); }));
            vada::write_text_file(dir / "selection.json", vada::selection_json(f, h.c_w).dump(1) + "\n");
            meta.doc["hyperparameters"] = vada::hyper_to_json(h);
            meta.doc["diagnostics"] = fit_diagnostics(f);
            meta.write(dir);
            warn_if_unconverged(f);
            std::cout << "fit " << vada::to_string(model) << ": n=" << d.n() << " p=" << d.p() << ", "
                      << vada::select_variables(f, h.c_w).size() << " selected after " << f.cycles_run
                      << " cycles\n";
        } else if (*pred) {
            RunMeta meta("predict", pred);
            const vada::FitState f = vada::load_state(state_path);
            const vada::Hyperparameters h = hf_pred.resolve(f.hyper);
            const vada::Dataset d = without_column(vada::load_csv(input_path, std::nullopt), label);
            const Eigen::MatrixXd X = vada::align_columns(d, f.columns);
            auto t0 = Clock::now();
            vada::Prediction pr;
            if (coupled) {
                if (f.model != vada::Model::vlda)
                    throw vada::DomainError("--coupled is only defined for vlda fits");
                pr = vada::predict_coupled_vlda(f, X, h);
                meta.doc["diagnostics"] = {{"cycles_run", pr.cycles_run}, {"converged", pr.converged}};
                if (!pr.converged)
                    std::cerr << "warning: coupled prediction did not converge after " << pr.cycles_run
                              << " sweeps\n";
            } else {
                pr = vada::predict(f, X, h);
            }
            meta.doc["timings"]["predict_seconds"] = seconds_since(t0);
            vada::write_text_file(dir / "predictions.tsv",
                                  to_text([&](std::ostream& os) { vada::write_prediction_tsv(os, pr); }));
            vada::write_text_file(dir / "predictions.json", vada::prediction_json(pr).dump(1) + "\n");
            meta.doc["hyperparameters"] = vada::hyper_to_json(h);
            meta.write(dir);
            std::cout << "predicted " << pr.size() << " rows\n";
        } else if (*sim) {
            RunMeta meta("simulate", sim);
            vada::SimSetting s = vada::SimSetting::numbered(setting);
            s.p = p;
            s.n_train = n;
            s.n_valid = n_valid;
            s.n_test = n_test;
            s.delta_sigma = delta_sigma;
            s.seed = seed;
            s.validate();
            const vada::Hyperparameters h = hf_sim.resolve({});
            meta.doc["setting"] = vada::setting_to_json(s);
            auto t0 = Clock::now();
            const vada::SimReplicate rep = vada::generate(s);
            meta.doc["timings"]["generate_seconds"] = seconds_since(t0);
            vada::save_csv(dir / "train.csv", rep.train);
            vada::save_csv(dir / "valid.csv", rep.valid);
            vada::save_csv(dir / "test.csv", rep.test);
            vada::write_text_file(dir / "truth.tsv",
                                  to_text([&](std::ostream& os) { vada::write_truth_tsv(os, rep); }));
            if (reps > 0) {
                t0 = Clock::now();
                const vada::EvalReport r = vada::run_simulation(s, reps, model, h, threads);
                meta.doc["timings"]["evaluate_seconds"] = seconds_since(t0);
                std::ostringstream tsv;
                tsv << "rep\tseed\terror\tmcc\ttp\tfp\tfn\ttn\tn_selected\tcycles\tconverged\n";
                json rows = json::array();
                for (const vada::ReplicateRecord& rr : r.records) {
                    tsv << rr.index << '\t' << rr.seed << '\t' << vada::format_double(rr.classification_error)
                        << '\t' << vada::format_double(rr.mcc) << '\t' << rr.counts.tp << '\t' << rr.counts.fp
                        << '\t' << rr.counts.fn << '\t' << rr.counts.tn << '\t' << rr.n_selected << '\t'
                        << rr.cycles_run << '\t' << (rr.converged ? 1 : 0) << '\n';
                    rows.push_back({{"rep", rr.index},
                                    {"seed", rr.seed},
                                    {"error", rr.classification_error},
                                    {"mcc", rr.mcc},
                                    {"tp", rr.counts.tp},
                                    {"fp", rr.counts.fp},
                                    {"fn", rr.counts.fn},
                                    {"tn", rr.counts.tn},
                                    {"n_selected", rr.n_selected},
                                    {"cycles", rr.cycles_run},
                                    {"converged", rr.converged}});
                }
                vada::write_text_file(dir / "simulation.tsv", tsv.str());
                const json summary{{"model", vada::to_string(model)},
                                   {"median_error", r.median_error()},
                                   {"median_mcc", r.median_mcc()},
                                   {"records", std::move(rows)}};
                vada::write_text_file(dir / "simulation.json", summary.dump(1) + "\n");
                meta.doc["hyperparameters"] = vada::hyper_to_json(h);
                std::cout << "simulate: " << reps << " replicates, median error " << r.median_error()
                          << ", median MCC " << r.median_mcc() << "\n";
            } else {
                std::cout << "simulate: wrote replicate for setting " << setting << "\n";
            }
            meta.write(dir);
        } else if (*cv) {
            RunMeta meta("cv", cv);
            const vada::Hyperparameters h = hf_cv.resolve({});
            vada::Dataset d = vada::load_csv(input_path, label);
            if (!steps.empty()) {
                const vada::PipelineResult pr = vada::apply_pipeline(vada::PreprocessPipeline::parse(steps), d);
                d = pr.data;
                meta.doc["retained_columns"] = d.columns;
            }
            const long cv_reps = reps > 0 ? reps : 50;
            auto t0 = Clock::now();
            const vada::CvReport r = vada::kfold_cv(d, k, cv_reps, model, h, seed, threads);
            meta.doc["timings"]["cv_seconds"] = seconds_since(t0);
            double fit_s = 0.0, pred_s = 0.0;
            std::vector<double> errs;
            for (const vada::CvRecord& c : r.records) {
                fit_s += c.fit_seconds;
                pred_s += c.predict_seconds;
                errs.push_back(c.error());
            }
            meta.doc["timings"]["fit_seconds"] = fit_s;
            meta.doc["timings"]["predict_seconds"] = pred_s;
            vada::write_text_file(dir / "cv.tsv", to_text([&](std::ostream& os) { vada::write_cv_tsv(os, r); }));
            vada::write_text_file(dir / "cv.json", vada::cv_json(r).dump(1) + "\n");
            meta.doc["hyperparameters"] = vada::hyper_to_json(h);
            meta.write(dir);
            std::cout << "cv: " << r.records.size() << " repetitions of " << k << "-fold, median error "
                      << vada::median(errs) << "\n";
        } else if (*cons) {
            RunMeta meta("consistency", cons);
            vada::SimSetting s = vada::SimSetting::numbered(setting);
            s.p = p;
            s.delta_sigma = delta_sigma;
            s.n_valid = 0;
            s.n_test = 0;
            const vada::Hyperparameters h = hf_cons.resolve({});
            std::vector<vada::Index> sizes(ns.begin(), ns.end());
            const long c_reps = reps > 0 ? reps : 25;
            meta.doc["setting"] = vada::setting_to_json(s);
            auto t0 = Clock::now();
            const vada::ConsistencyCurve c = vada::consistency_experiment(s, sizes, c_reps, h, seed, threads);
            meta.doc["timings"]["experiment_seconds"] = seconds_since(t0);
            vada::write_text_file(dir / "consistency.tsv",
                                  to_text([&](std::ostream& os) { vada::write_consistency_tsv(os, c); }));
            vada::write_text_file(dir / "consistency.json", vada::consistency_json(c).dump(1) + "\n");
            meta.doc["hyperparameters"] = vada::hyper_to_json(h);
            meta.write(dir);
            for (const vada::ConsistencyPoint& pt : c.points)
                std::cout << "n=" << pt.n << (pt.at_convergence ? " converged" : " one cycle")
                          << ": median E " << pt.median_E << "\n";
        } else if (*orc) {
            RunMeta meta("oracle", orc);
            const vada::Hyperparameters h = hf_oracle.resolve({});
            const vada::Dataset d = vada::load_csv(train_path, label);
            if (d.p() > vada::kMaxExactVariables)
                throw vada::SizeError("exact enumeration supports at most "
                                      + std::to_string(vada::kMaxExactVariables) + " variables, got "
                                      + std::to_string(d.p()));
            const vada::Dataset q = without_column(vada::load_csv(input_path, std::nullopt), label);
            const Eigen::MatrixXd Q = vada::align_columns(q, d.columns);
            if (row >= Q.rows())
                throw vada::DataError("--row " + std::to_string(row) + " is out of range");
            const Eigen::VectorXd x_new = Q.row(row).transpose();
            auto t0 = Clock::now();
            const vada::ExactPosterior ex = vada::exact_posterior(d, x_new, h, model);
            meta.doc["timings"]["enumeration_seconds"] = seconds_since(t0);
            const vada::FitState f = vada::fit(d, model, h);
            const vada::Prediction pr = vada::predict(f, x_new.transpose(), h);
            std::ostringstream tsv;
            tsv << "variable_id\texact_marginal\tw\n";
            json rows = json::array();
            for (vada::Index j = 0; j < d.p(); ++j) {
                tsv << d.column_name(j) << '\t' << vada::format_double(ex.gamma_marginals(j)) << '\t'
                    << vada::format_double(f.w(j)) << '\n';
                rows.push_back(
                    {{"variable_id", d.column_name(j)}, {"exact_marginal", ex.gamma_marginals(j)}, {"w", f.w(j)}});
            }
            vada::write_text_file(dir / "oracle.tsv", tsv.str());
            const json report{{"model", vada::to_string(model)},
                              {"exact_p_y1", ex.p_y1},
                              {"y_tilde", pr.y_tilde(0)},
                              {"log_marginal", ex.log_marginal},
                              {"variables", std::move(rows)}};
            vada::write_text_file(dir / "oracle.json", report.dump(1) + "\n");
            meta.doc["hyperparameters"] = vada::hyper_to_json(h);
            meta.doc["diagnostics"] = fit_diagnostics(f);
            meta.write(dir);
            std::cout << "oracle: exact P(y=1) " << ex.p_y1 << ", variational " << pr.y_tilde(0) << "\n";
        } else if (*pre) {
            RunMeta meta("preprocess", pre);
            vada::Dataset d = vada::load_csv(input_path, std::nullopt);
            const bool has_label = std::find(d.columns.begin(), d.columns.end(), label) != d.columns.end();
            if (has_label)
                d = vada::load_csv(input_path, label);
            const vada::PreprocessPipeline pl = vada::PreprocessPipeline::parse(steps);
            const vada::PipelineResult r = vada::apply_pipeline(pl, d);
            vada::save_csv(dir / "processed.csv", r.data, label);
            std::ostringstream map;
            map << "output_column\toriginal_index\toriginal_column\n";
            for (std::size_t j = 0; j < r.column_map.size(); ++j)
                map << r.data.columns[j] << '\t' << r.column_map[j] << '\t'
                    << d.column_name(r.column_map[j]) << '\n';
            vada::write_text_file(dir / "column_map.tsv", map.str());
            meta.doc["pipeline"] = pl.describe();
            meta.write(dir);
            std::cout << "preprocess: kept " << r.data.p() << " of " << d.p() << " columns\n";
        }
    } catch (const vada::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case vada::ErrorKind::data: return kExitData;
        case vada::ErrorKind::size: return kExitSize;
        case vada::ErrorKind::usage:
        case vada::ErrorKind::domain: return kExitUsage;
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
