#include "vada/rcvb.hpp"

#include <cmath>

namespace vada {

std::string to_string(Model m)
{
    return m == Model::vlda ? "vlda" : "vqda";
}

Model parse_model(std::string_view name)
{
    if (name == "vlda" || name == "VLDA")
        return Model::vlda;
    if (name == "vqda" || name == "VQDA")
        return Model::vqda;
    throw DomainError("unknown model '" + std::string(name) + "' (expected vlda or vqda)");
}

Eigen::ArrayXd selection_evidence(const Stats& s, Model model)
{
    const double n = static_cast<double>(s.n);
    if (model == Model::vlda)
        return -0.5 * std::log(n + 1.0) + 0.5 * lambda_lrt_lda(s);

    const double n1 = static_cast<double>(s.n1);
    const double n0 = static_cast<double>(s.n0);
    const double constant = 0.5 * std::log(n1 * n0 / 2.0) + xi(n1 / 2.0) + xi(n0 / 2.0) - xi(n / 2.0)
                            - 1.5 * std::log(n + 1.0);
    return constant + 0.5 * lambda_lrt_qda(s);
}

void selection_step(const Eigen::ArrayXd& evidence,
                    double log_b_gamma,
                    double a_gamma,
                    const Eigen::VectorXd& w_prev,
                    Eigen::VectorXd& w_next)
{
    const Index p = evidence.size();
    const double total = w_prev.sum();
    w_next.resize(p);
    for (Index j = 0; j < p; ++j) {
        const double others = total - w_prev(j);
        const double rest = std::max(static_cast<double>(p) - others - 1.0, 0.0);
        const double log_den = rest > 0.0 ? log_add_exp(log_b_gamma, std::log(rest)) : log_b_gamma;
        const double eta = std::log(a_gamma + others) - log_den + evidence(j);
        w_next(j) = expit(eta);
    }
}

CycleResult run_selection_cycles(const Eigen::ArrayXd& evidence,
                                 double log_b_gamma,
                                 double a_gamma,
                                 const Eigen::VectorXd& w0,
                                 double eps,
                                 int max_cycles)
{
    CycleResult out;
    Eigen::VectorXd prev = w0;
    Eigen::VectorXd next(w0.size());
    for (int t = 1; t <= max_cycles; ++t) {
        selection_step(evidence, log_b_gamma, a_gamma, prev, next);
        out.final_delta = (next - prev).squaredNorm();
        out.cycles_run = t;
        prev.swap(next);
        if (out.final_delta <= eps) {
            out.converged = true;
            break;
        }
    }
    out.w = std::move(prev);
    return out;
}

FitState fit(const Dataset& d, Model model, const Hyperparameters& h)
{
    h.validate();
    validate_training(d);

    FitState f;
    f.model = model;
    f.hyper = h;
    f.columns.reserve(static_cast<std::size_t>(d.p()));
    for (Index j = 0; j < d.p(); ++j)
        f.columns.push_back(d.column_name(j));
    f.stats = compute_stats(d.X, d.y, h.variance_floor);

    const Eigen::ArrayXd evidence = selection_evidence(f.stats, model);
    const double log_b = log_b_gamma(d.n(), d.p(), h.r, h.kappa);
    const Eigen::VectorXd w0 = Eigen::VectorXd::Constant(d.p(), h.w_init);
    CycleResult res = run_selection_cycles(evidence, log_b, h.a_gamma, w0, h.eps, h.max_cycles);

    f.w = std::move(res.w);
    f.cycles_run = res.cycles_run;
    f.converged = res.converged;
    f.final_delta = res.final_delta;
    return f;
}

FitState fit_vlda(const Dataset& d, const Hyperparameters& h)
{
    return fit(d, Model::vlda, h);
}

FitState fit_vqda(const Dataset& d, const Hyperparameters& h)
{
    return fit(d, Model::vqda, h);
}

namespace {

void check_columns(const FitState& f, const Eigen::Ref<const Eigen::MatrixXd>& X)
{
    if (X.cols() != f.p())
        throw DataError("prediction data has " + std::to_string(X.cols()) + " columns, model expects "
                        + std::to_string(f.p()));
    if (!X.allFinite())
        throw DataError("prediction data contains non-finite entries");
}

Prediction finish(Eigen::VectorXd score, double c_y)
{
    Prediction out;
    out.y_tilde = score.unaryExpr([](double s) { return expit(s); });
    out.labels = (out.y_tilde.array() > c_y).cast<int>();
    out.score = std::move(score);
    return out;
}

} // namespace

Eigen::VectorXd lda_discriminant(const FitState& f, const Eigen::Ref<const Eigen::MatrixXd>& X)
{
    check_columns(f, X);
    const Stats& s = f.stats;
    const Eigen::VectorXd coef = (f.w.array() * (s.mu1 - s.mu0) / s.var_pooled).matrix();
    const Eigen::RowVectorXd center = (0.5 * (s.mu1 + s.mu0)).matrix().transpose();
    return (X.rowwise() - center) * coef;
}

Prediction predict_vlda(const FitState& f, const Eigen::Ref<const Eigen::MatrixXd>& X, const Hyperparameters& h)
{
    const Stats& s = f.stats;
    const double n = static_cast<double>(s.n);
    const double prior = std::log((static_cast<double>(s.n1) + h.a_y) / (static_cast<double>(s.n0) + h.b_y));
    Eigen::VectorXd score = (1.0 + 1.0 / n) * lda_discriminant(f, X);
    score.array() += prior;
    return finish(std::move(score), h.c_y);
}

Prediction predict_vqda(const FitState& f, const Eigen::Ref<const Eigen::MatrixXd>& X, const Hyperparameters& h)
{
    check_columns(f, X);
    const Stats& s = f.stats;
    const double n1 = static_cast<double>(s.n1);
    const double n0 = static_cast<double>(s.n0);
    // Per selected variable, the Student-t predictive normaliser of group k
    // relative to the plug-in Gaussian: log Gamma((n_k+1)/2) - log Gamma(n_k/2)
    // - 1/2 log(n_k/2), which vanishes as n_k grows.
    auto t_correction = [](double nk) {
        return std::lgamma((nk + 1.0) / 2.0) - std::lgamma(nk / 2.0) - 0.5 * std::log(nk / 2.0);
    };
    const double offset = std::log(n1 / n0) + f.w.sum() * (t_correction(n1) - t_correction(n0));

    // log phi(x; mu1, var1) - log phi(x; mu0, var0), expanded per entry.
    const Eigen::ArrayXd half_log_ratio = 0.5 * (s.var0.log() - s.var1.log());
    Eigen::VectorXd score(X.rows());
    for (Index i = 0; i < X.rows(); ++i) {
        const Eigen::ArrayXd x = X.row(i).transpose().array();
        const Eigen::ArrayXd diff =
            half_log_ratio - (x - s.mu1).square() / (2.0 * s.var1) + (x - s.mu0).square() / (2.0 * s.var0);
        score(i) = offset + (f.w.array() * diff).sum();
    }
    return finish(std::move(score), h.c_y);
}

Prediction predict(const FitState& f, const Eigen::Ref<const Eigen::MatrixXd>& X, const Hyperparameters& h)
{
    return f.model == Model::vlda ? predict_vlda(f, X, h) : predict_vqda(f, X, h);
}

Prediction predict_coupled_vlda(const FitState& f,
                                const Eigen::Ref<const Eigen::MatrixXd>& X,
                                const Hyperparameters& h)
{
    const Stats& s = f.stats;
    const double n = static_cast<double>(s.n);
    const double n1 = static_cast<double>(s.n1);
    const double n0 = static_cast<double>(s.n0);
    const double m = static_cast<double>(X.rows());
    const Eigen::VectorXd disc = (1.0 + 1.0 / n) * lda_discriminant(f, X);

    auto sweep = [&](const Eigen::VectorXd& prev, Eigen::VectorXd& score) {
        const double total = prev.sum();
        score.resize(prev.size());
        for (Index i = 0; i < prev.size(); ++i) {
            const double others = total - prev(i);
            score(i) = std::log((n1 + others + h.a_y) / (n0 + (m - 1.0) - others + h.b_y)) + disc(i);
        }
    };

    Eigen::VectorXd score = disc.array() + std::log((n1 + h.a_y) / (n0 + h.b_y));
    Eigen::VectorXd y_tilde = score.unaryExpr([](double v) { return expit(v); });
    Prediction out;
    out.converged = false;
    for (int t = 1; t <= h.max_cycles; ++t) {
        sweep(y_tilde, score);
        Eigen::VectorXd next = score.unaryExpr([](double v) { return expit(v); });
        const double delta = (next - y_tilde).squaredNorm();
        y_tilde.swap(next);
        out.cycles_run = t;
        if (delta <= h.eps) {
            out.converged = true;
            break;
        }
    }
    Prediction res = finish(std::move(score), h.c_y);
    res.cycles_run = out.cycles_run;
    res.converged = out.converged;
    return res;
}

std::vector<Index> select_variables(const FitState& f, double c_w)
{
    std::vector<Index> out;
    for (Index j = 0; j < f.w.size(); ++j)
        if (f.w(j) > c_w)
            out.push_back(j);
    return out;
}

} // namespace vada
