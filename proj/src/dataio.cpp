#include "vada/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace vada {

using nlohmann::json;

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

// Splits one CSV record. Double quotes may wrap a field; "" inside a quoted
// field is a literal quote. Embedded newlines are not supported.
std::vector<std::string> split_record(const std::string& line, std::string_view source, std::size_t line_no)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && trim(cur).empty()) {
            quoted = true;
            was_quoted = true;
            cur.clear();
        } else if (c == ',') {
            fields.push_back(was_quoted ? cur : trim(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(c);
        }
    }
    if (quoted)
        throw DataError(std::string(source) + ": line " + std::to_string(line_no) + ": unterminated quoted field");
    fields.push_back(was_quoted ? cur : trim(cur));
    return fields;
}

bool parse_double(const std::string& s, double& out)
{
    if (s.empty())
        return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot open " + path.string() + " for writing");
    return out;
}

} // namespace

// CSV ----------------------------------------------------------------------

Dataset read_csv(std::istream& in, const std::optional<std::string>& label_column, std::string_view source)
{
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0)
                line.erase(0, 3);
            if (!trim(line).empty())
                return true;
        }
        return false;
    };

    if (!next_line())
        throw DataError(std::string(source) + ": missing header row");
    const std::vector<std::string> header = split_record(line, source, line_no);
    {
        std::unordered_set<std::string> seen;
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (header[j].empty())
                throw DataError(std::string(source) + ": header column " + std::to_string(j + 1) + " is empty");
            if (!seen.insert(header[j]).second)
                throw DataError(std::string(source) + ": duplicate header '" + header[j] + "'");
        }
    }

    std::ptrdiff_t label_idx = -1;
    if (label_column) {
        const auto it = std::find(header.begin(), header.end(), *label_column);
        if (it == header.end())
            throw DataError(std::string(source) + ": label column '" + *label_column + "' not found in header");
        label_idx = it - header.begin();
    }

    Dataset d;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (static_cast<std::ptrdiff_t>(j) != label_idx)
            d.columns.push_back(header[j]);
    const Index p = static_cast<Index>(d.columns.size());

    std::vector<double> values;
    std::vector<int> labels;
    Index rows = 0;
    while (next_line()) {
        const std::vector<std::string> fields = split_record(line, source, line_no);
        const std::string where = std::string(source) + ": line " + std::to_string(line_no);
        if (fields.size() != header.size())
            throw DataError(where + ": expected " + std::to_string(header.size()) + " cells, found "
                            + std::to_string(fields.size()));
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const std::string& cell = fields[j];
            if (cell.empty())
                throw DataError(where + ", column '" + header[j] + "': missing cell");
            double v = 0.0;
            if (!parse_double(cell, v))
                throw DataError(where + ", column '" + header[j] + "': non-numeric cell '" + cell + "'");
            if (static_cast<std::ptrdiff_t>(j) == label_idx) {
                if (v != 0.0 && v != 1.0)
                    throw DataError(where + ", column '" + header[j] + "': label '" + cell + "' is not 0 or 1");
                labels.push_back(v == 1.0 ? 1 : 0);
            } else {
                values.push_back(v);
            }
        }
        ++rows;
    }
    if (rows == 0)
        throw DataError(std::string(source) + ": dataset is empty (header only)");
    if (p == 0)
        throw DataError(std::string(source) + ": no feature columns");

    d.X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(values.data(),
                                                                                                rows, p);
    if (label_column)
        d.y = Eigen::Map<const Eigen::VectorXi>(labels.data(), rows);
    return d;
}

Dataset load_csv(const std::filesystem::path& path, const std::optional<std::string>& label_column)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());
    return read_csv(in, label_column, path.string());
}

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc())
        throw DomainError("cannot format number");
    return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Dataset& d, std::string_view label_name)
{
    for (Index j = 0; j < d.p(); ++j)
        out << (j ? "," : "") << d.column_name(j);
    if (d.labeled())
        out << (d.p() ? "," : "") << label_name;
    out << '\n';
    for (Index i = 0; i < d.n(); ++i) {
        for (Index j = 0; j < d.p(); ++j)
            out << (j ? "," : "") << format_double(d.X(i, j));
        if (d.labeled())
            out << (d.p() ? "," : "") << d.y(i);
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const Dataset& d, std::string_view label_name)
{
    std::ofstream out = open_output(path);
    write_csv(out, d, label_name);
    if (!out)
        throw DataError("failed writing " + path.string());
}

Eigen::MatrixXd align_columns(const Dataset& d, const std::vector<std::string>& expected)
{
    std::unordered_map<std::string, Index> pos;
    for (Index j = 0; j < d.p(); ++j)
        pos.emplace(d.column_name(j), j);
    Eigen::MatrixXd out(d.n(), static_cast<Index>(expected.size()));
    for (std::size_t k = 0; k < expected.size(); ++k) {
        const auto it = pos.find(expected[k]);
        if (it == pos.end())
            throw DataError("column mismatch: training column '" + expected[k] + "' is missing");
        out.col(static_cast<Index>(k)) = d.X.col(it->second);
    }
    if (d.p() != static_cast<Index>(expected.size())) {
        const std::unordered_set<std::string> known(expected.begin(), expected.end());
        for (Index j = 0; j < d.p(); ++j)
            if (!known.count(d.column_name(j)))
                throw DataError("column mismatch: unknown column '" + d.column_name(j) + "'");
    }
    return out;
}

// Preprocessing ------------------------------------------------------------

double quantile(std::vector<double> values, double q)
{
    if (values.empty())
        throw DataError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw DomainError("quantile level must lie in [0,1]");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

double column_iqr(const Eigen::Ref<const Eigen::VectorXd>& col)
{
    std::vector<double> v(col.data(), col.data() + col.size());
    return quantile(v, 0.75) - quantile(std::move(v), 0.25);
}

double sample_variance(const Eigen::Ref<const Eigen::VectorXd>& col)
{
    if (col.size() < 2)
        throw DataError("sample variance needs at least 2 observations");
    const double m = col.mean();
    return (col.array() - m).square().sum() / static_cast<double>(col.size() - 1);
}

double parse_param(std::string_view name, std::string_view text)
{
    double v = 0.0;
    const std::string s = trim(text);
    if (!parse_double(s, v))
        throw DomainError("preprocess step '" + std::string(name) + "': bad parameter '" + s + "'");
    if (v < 0.0)
        throw DomainError("preprocess step '" + std::string(name) + "': parameter must be nonnegative");
    return v;
}

void keep_columns(PipelineResult& r, const std::vector<Index>& keep, std::string_view step)
{
    if (keep.empty())
        throw DataError(std::string(step) + " removed every column");
    Dataset out;
    out.y = r.data.y;
    out.X.resize(r.data.n(), static_cast<Index>(keep.size()));
    std::vector<Index> map;
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.X.col(static_cast<Index>(k)) = r.data.X.col(keep[k]);
        out.columns.push_back(r.data.column_name(keep[k]));
        map.push_back(r.column_map[static_cast<std::size_t>(keep[k])]);
    }
    r.data = std::move(out);
    r.column_map = std::move(map);
}

struct StepRunner
{
    PipelineResult& r;

    void operator()(const Log2p1&) const
    {
        if ((r.data.X.array() <= -1.0).any())
            throw DataError("log2p1 requires every value to exceed -1");
        r.data.X = (r.data.X.array().log1p() / std::log(2.0)).matrix();
    }

    void operator()(const IqrFilter& f) const
    {
        std::vector<Index> keep;
        for (Index j = 0; j < r.data.p(); ++j)
            if (column_iqr(r.data.X.col(j)) > f.threshold)
                keep.push_back(j);
        keep_columns(r, keep, "iqr filter");
    }

    void operator()(const LowVarianceFilter& f) const
    {
        std::vector<Index> keep;
        for (Index j = 0; j < r.data.p(); ++j)
            if (sample_variance(r.data.X.col(j)) > f.threshold)
                keep.push_back(j);
        keep_columns(r, keep, "low variance filter");
    }

    void operator()(const IqrOutlierFilter& f) const
    {
        if (!r.data.labeled())
            throw DataError("outlier filter needs labels");
        std::vector<Index> keep;
        for (Index j = 0; j < r.data.p(); ++j) {
            bool outlier = false;
            for (int g = 0; g <= 1 && !outlier; ++g) {
                std::vector<double> v;
                for (Index i = 0; i < r.data.n(); ++i)
                    if (r.data.y(i) == g)
                        v.push_back(r.data.X(i, j));
                if (v.empty())
                    continue;
                const double med = quantile(v, 0.5);
                const double spread = quantile(v, 0.75) - quantile(v, 0.25);
                for (double x : v)
                    if (std::abs(x - med) > f.k * spread) {
                        outlier = true;
                        break;
                    }
            }
            if (!outlier)
                keep.push_back(j);
        }
        keep_columns(r, keep, "outlier filter");
    }

    void operator()(const Standardize&) const
    {
        for (Index j = 0; j < r.data.p(); ++j) {
            auto col = r.data.X.col(j);
            const double m = col.mean();
            const double sd = std::sqrt(sample_variance(col));
            if (sd > 0.0)
                col = (col.array() - m) / sd;
            else
                col.setZero();
        }
    }
};

} // namespace

PreprocessPipeline PreprocessPipeline::parse(std::string_view spec)
{
    PreprocessPipeline pl;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t end = std::min(spec.find(',', start), spec.size());
        const std::string item = trim(spec.substr(start, end - start));
        start = end + 1;
        if (item.empty()) {
            if (end == spec.size())
                break;
            continue;
        }
        const auto colon = item.find(':');
        const std::string name = item.substr(0, colon);
        const std::string arg = colon == std::string::npos ? std::string() : item.substr(colon + 1);
        auto need_arg = [&] {
            if (colon == std::string::npos)
                throw DomainError("preprocess step '" + name + "' needs a parameter");
            return parse_param(name, arg);
        };
        if (name == "log2p1")
            pl.steps.emplace_back(Log2p1{});
        else if (name == "standardize")
            pl.steps.emplace_back(Standardize{});
        else if (name == "iqr")
            pl.steps.emplace_back(IqrFilter{need_arg()});
        else if (name == "lowvar")
            pl.steps.emplace_back(LowVarianceFilter{need_arg()});
        else if (name == "outlier")
            pl.steps.emplace_back(IqrOutlierFilter{need_arg()});
        else
            throw DomainError("unknown preprocess step '" + name + "'");
    }
    return pl;
}

std::string PreprocessPipeline::describe() const
{
    std::string out;
    for (const Transform& t : steps) {
        if (!out.empty())
            out += ',';
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Log2p1>)
                    out += "log2p1";
                else if constexpr (std::is_same_v<T, Standardize>)
                    out += "standardize";
                else if constexpr (std::is_same_v<T, IqrFilter>)
                    out += "iqr:" + format_double(s.threshold);
                else if constexpr (std::is_same_v<T, LowVarianceFilter>)
                    out += "lowvar:" + format_double(s.threshold);
                else
                    out += "outlier:" + format_double(s.k);
            },
            t);
    }
    return out;
}

PipelineResult apply_pipeline(const PreprocessPipeline& pl, const Dataset& d)
{
    validate_features(d);
    PipelineResult r;
    r.data = d;
    r.data.columns.clear();
    for (Index j = 0; j < d.p(); ++j)
        r.data.columns.push_back(d.column_name(j));
    r.column_map.resize(static_cast<std::size_t>(d.p()));
    for (Index j = 0; j < d.p(); ++j)
        r.column_map[static_cast<std::size_t>(j)] = j;
    for (const Transform& t : pl.steps)
        std::visit(StepRunner{r}, t);
    return r;
}

// Fit state persistence ----------------------------------------------------

namespace {

template <typename Derived>
json array_json(const Eigen::DenseBase<Derived>& a)
{
    json out = json::array();
    for (Index i = 0; i < a.size(); ++i)
        out.push_back(a(i));
    return out;
}

Eigen::ArrayXd array_from(const json& j, std::string_view name, Index expected)
{
    if (!j.is_array())
        throw DataError("state field '" + std::string(name) + "' is not an array");
    if (expected >= 0 && static_cast<Index>(j.size()) != expected)
        throw DataError("state field '" + std::string(name) + "' has the wrong length");
    Eigen::ArrayXd out(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        out(static_cast<Index>(i)) = j[i].get<double>();
    return out;
}

} // namespace

json hyper_to_json(const Hyperparameters& h)
{
    return json{{"a_y", h.a_y},
                {"b_y", h.b_y},
                {"a_gamma", h.a_gamma},
                {"r", h.r},
                {"kappa", h.kappa},
                {"c_w", h.c_w},
                {"c_y", h.c_y},
                {"eps", h.eps},
                {"max_cycles", h.max_cycles},
                {"variance_floor", h.variance_floor},
                {"w_init", h.w_init}};
}

Hyperparameters hyper_from_json(const json& j)
{
    Hyperparameters h;
    h.a_y = j.at("a_y").get<double>();
    h.b_y = j.at("b_y").get<double>();
    h.a_gamma = j.at("a_gamma").get<double>();
    h.r = j.at("r").get<double>();
    h.kappa = j.at("kappa").get<double>();
    h.c_w = j.at("c_w").get<double>();
    h.c_y = j.at("c_y").get<double>();
    h.eps = j.at("eps").get<double>();
    h.max_cycles = j.at("max_cycles").get<int>();
    h.variance_floor = j.at("variance_floor").get<double>();
    h.w_init = j.at("w_init").get<double>();
    return h;
}

json state_to_json(const FitState& f)
{
    const Stats& s = f.stats;
    json stats{{"n", s.n},
               {"n1", s.n1},
               {"n0", s.n0},
               {"mu", array_json(s.mu)},
               {"mu1", array_json(s.mu1)},
               {"mu0", array_json(s.mu0)},
               {"var_total", array_json(s.var_total)},
               {"var_pooled", array_json(s.var_pooled)},
               {"var1", array_json(s.var1)},
               {"var0", array_json(s.var0)},
               {"floored", array_json(s.floored)}};
    return json{{"schema", "vada.fitstate"},
                {"version", kStateSchemaVersion},
                {"model", to_string(f.model)},
                {"columns", f.columns},
                {"w", array_json(f.w)},
                {"diagnostics",
                 {{"cycles_run", f.cycles_run}, {"converged", f.converged}, {"final_delta", f.final_delta}}},
                {"hyperparameters", hyper_to_json(f.hyper)},
                {"stats", std::move(stats)}};
}

FitState state_from_json(const json& j)
{
    try {
        if (!j.is_object() || j.value("schema", std::string()) != "vada.fitstate")
            throw DataError("not a fit state document");
        const int version = j.at("version").get<int>();
        if (version != kStateSchemaVersion)
            throw DataError("incompatible fit state schema version " + std::to_string(version) + " (expected "
                            + std::to_string(kStateSchemaVersion) + ")");
        FitState f;
        f.model = parse_model(j.at("model").get<std::string>());
        f.columns = j.at("columns").get<std::vector<std::string>>();
        f.w = array_from(j.at("w"), "w", -1).matrix();
        const Index p = f.w.size();
        if (static_cast<Index>(f.columns.size()) != p)
            throw DataError("state column names do not match w");
        const json& diag = j.at("diagnostics");
        f.cycles_run = diag.at("cycles_run").get<int>();
        f.converged = diag.at("converged").get<bool>();
        f.final_delta = diag.at("final_delta").get<double>();
        f.hyper = hyper_from_json(j.at("hyperparameters"));

        const json& s = j.at("stats");
        Stats& st = f.stats;
        st.n = s.at("n").get<Index>();
        st.n1 = s.at("n1").get<Index>();
        st.n0 = s.at("n0").get<Index>();
        st.mu = array_from(s.at("mu"), "mu", p);
        st.mu1 = array_from(s.at("mu1"), "mu1", p);
        st.mu0 = array_from(s.at("mu0"), "mu0", p);
        st.var_total = array_from(s.at("var_total"), "var_total", p);
        st.var_pooled = array_from(s.at("var_pooled"), "var_pooled", p);
        st.var1 = array_from(s.at("var1"), "var1", p);
        st.var0 = array_from(s.at("var0"), "var0", p);
        const json& fl = s.at("floored");
        if (!fl.is_array() || static_cast<Index>(fl.size()) != p)
            throw DataError("state field 'floored' has the wrong length");
        st.floored.resize(p);
        for (Index k = 0; k < p; ++k)
            st.floored(k) = fl[static_cast<std::size_t>(k)].get<bool>();
        return f;
    } catch (const json::exception& e) {
        throw DataError(std::string("corrupt fit state: ") + e.what());
    }
}

std::string dump_state(const FitState& f)
{
    return state_to_json(f).dump(1) + "\n";
}

void save_state(const FitState& f, const std::filesystem::path& path)
{
    write_text_file(path, dump_state(f));
}

FitState load_state(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw DataError("corrupt fit state " + path.string() + ": " + e.what());
    }
    return state_from_json(j);
}

// Reports ------------------------------------------------------------------

void write_selection_tsv(std::ostream& out, const FitState& f, double c_w)
{
    out << "variable_id\tw\tselected\n";
    for (Index j = 0; j < f.p(); ++j) {
        const std::string name = j < static_cast<Index>(f.columns.size()) ? f.columns[static_cast<std::size_t>(j)]
                                                                          : "x" + std::to_string(j + 1);
        out << name << '\t' << format_double(f.w(j)) << '\t' << (f.w(j) > c_w ? 1 : 0) << '\n';
    }
}

json selection_json(const FitState& f, double c_w)
{
    json rows = json::array();
    for (Index j = 0; j < f.p(); ++j) {
        const std::string name = j < static_cast<Index>(f.columns.size()) ? f.columns[static_cast<std::size_t>(j)]
                                                                          : "x" + std::to_string(j + 1);
        rows.push_back({{"variable_id", name}, {"w", f.w(j)}, {"selected", f.w(j) > c_w}});
    }
    return json{{"model", to_string(f.model)}, {"c_w", c_w}, {"variables", std::move(rows)}};
}

void write_prediction_tsv(std::ostream& out, const Prediction& p)
{
    out << "row_id\ty_tilde\tlabel\n";
    for (Index i = 0; i < p.size(); ++i)
        out << i << '\t' << format_double(p.y_tilde(i)) << '\t' << p.labels(i) << '\n';
}

json prediction_json(const Prediction& p)
{
    json rows = json::array();
    for (Index i = 0; i < p.size(); ++i)
        rows.push_back({{"row_id", i}, {"y_tilde", p.y_tilde(i)}, {"label", p.labels(i)}});
    return json{{"rows", std::move(rows)}};
}

void write_cv_tsv(std::ostream& out, const CvReport& r)
{
    out << "rep\tmisclassified\ttotal\terror\n";
    for (const CvRecord& c : r.records)
        out << c.rep << '\t' << c.misclassified << '\t' << c.total << '\t' << format_double(c.error()) << '\n';
}

json cv_json(const CvReport& r)
{
    json rows = json::array();
    for (const CvRecord& c : r.records)
        rows.push_back({{"rep", c.rep}, {"misclassified", c.misclassified}, {"total", c.total}, {"error", c.error()}});
    return json{{"model", to_string(r.model)}, {"k", r.k}, {"records", std::move(rows)}};
}

void write_consistency_tsv(std::ostream& out, const ConsistencyCurve& c)
{
    out << "n\tstage\tmedian_E\tmedian_e0\tmedian_e1\tmedian_fp\tmedian_fn\n";
    for (const ConsistencyPoint& pt : c.points)
        out << pt.n << '\t' << (pt.at_convergence ? "converged" : "one_cycle") << '\t' << format_double(pt.median_E)
            << '\t' << format_double(pt.median_e0) << '\t' << format_double(pt.median_e1) << '\t'
            << format_double(pt.median_fp) << '\t' << format_double(pt.median_fn) << '\n';
}

json consistency_json(const ConsistencyCurve& c)
{
    json points = json::array();
    for (const ConsistencyPoint& pt : c.points)
        points.push_back({{"n", pt.n},
                          {"stage", pt.at_convergence ? "converged" : "one_cycle"},
                          {"median_E", pt.median_E},
                          {"median_e0", pt.median_e0},
                          {"median_e1", pt.median_e1},
                          {"median_fp", pt.median_fp},
                          {"median_fn", pt.median_fn}});
    json records = json::array();
    for (const ConsistencyRecord& r : c.records)
        records.push_back({{"n", r.n},
                           {"rep", r.rep},
                           {"stage", r.at_convergence ? "converged" : "one_cycle"},
                           {"cycles", r.cycles},
                           {"e0", r.e0},
                           {"e1", r.e1},
                           {"E", r.E},
                           {"false_positives", r.false_positives},
                           {"false_negatives", r.false_negatives}});
    return json{{"points", std::move(points)}, {"records", std::move(records)}};
}

void write_truth_tsv(std::ostream& out, const SimReplicate& rep)
{
    out << "variable_id\tgamma\tmu1\tmu0\tsd1\tsd0\n";
    for (Index j = 0; j < rep.gamma_true.size(); ++j)
        out << rep.train.column_name(j) << '\t' << (rep.gamma_true(j) ? 1 : 0) << '\t' << format_double(rep.mu1(j))
            << '\t' << format_double(rep.mu0(j)) << '\t' << format_double(rep.sd1(j)) << '\t'
            << format_double(rep.sd0(j)) << '\n';
}

json setting_to_json(const SimSetting& s)
{
    return json{{"mean", to_string(s.mean)},
                {"cov", to_string(s.cov)},
                {"p", s.p},
                {"n_train", s.n_train},
                {"n_valid", s.n_valid},
                {"n_test", s.n_test},
                {"delta_sigma", s.delta_sigma},
                {"seed", s.seed},
                {"custom_shift", s.custom_shift},
                {"custom_signals", s.custom_signals},
                {"block_size", s.block_size},
                {"block_rho", s.block_rho},
                {"global_rho", s.global_rho},
                {"uniform_rho", s.uniform_rho}};
}

void write_text_file(const std::filesystem::path& path, const std::string& contents)
{
    std::ofstream out = open_output(path);
    out << contents;
    if (!out)
        throw DataError("failed writing " + path.string());
}

} // namespace vada
