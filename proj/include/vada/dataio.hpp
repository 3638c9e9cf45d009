#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vada/evalharness.hpp"
#include "vada/rcvb.hpp"
#include "vada/simgen.hpp"

namespace vada {

// CSV ----------------------------------------------------------------------

/// Reads a comma-separated table with a mandatory header row. When
/// `label_column` is given, that column must exist and hold only 0/1; it
/// becomes `y` and is removed from the feature columns.
Dataset read_csv(std::istream& in, const std::optional<std::string>& label_column, std::string_view source = "<csv>");
Dataset load_csv(const std::filesystem::path& path, const std::optional<std::string>& label_column);

/// Writes features (and labels, if present, as a trailing `label_name` column).
void write_csv(std::ostream& out, const Dataset& d, std::string_view label_name = "y");
void save_csv(const std::filesystem::path& path, const Dataset& d, std::string_view label_name = "y");

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

/// Feature matrix of `d` reordered to `expected` column names. Throws
/// DataError naming the first missing or unexpected column.
Eigen::MatrixXd align_columns(const Dataset& d, const std::vector<std::string>& expected);

// Preprocessing ------------------------------------------------------------

struct Log2p1
{};
struct IqrFilter
{
    double threshold = 0.0;
};
struct LowVarianceFilter
{
    double threshold = 0.0;
};
struct IqrOutlierFilter
{
    double k = 3.0;
};
struct Standardize
{};

using Transform = std::variant<Log2p1, IqrFilter, LowVarianceFilter, IqrOutlierFilter, Standardize>;

struct PreprocessPipeline
{
    std::vector<Transform> steps;

    /// Comma-separated steps: log2p1, iqr:<t>, lowvar:<t>, outlier:<k>, standardize.
    static PreprocessPipeline parse(std::string_view spec);
    std::string describe() const;
};

struct PipelineResult
{
    Dataset data;
    // Output column index -> input column index.
    std::vector<Index> column_map;
};

PipelineResult apply_pipeline(const PreprocessPipeline& pl, const Dataset& d);

/// Linear-interpolation sample quantile (the common "type 7" definition).
double quantile(std::vector<double> values, double q);

// Fit state persistence ----------------------------------------------------

inline constexpr int kStateSchemaVersion = 1;

nlohmann::json hyper_to_json(const Hyperparameters& h);
Hyperparameters hyper_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const FitState& f);
FitState state_from_json(const nlohmann::json& j);
std::string dump_state(const FitState& f);
void save_state(const FitState& f, const std::filesystem::path& path);
FitState load_state(const std::filesystem::path& path);

// Reports ------------------------------------------------------------------

void write_selection_tsv(std::ostream& out, const FitState& f, double c_w);
nlohmann::json selection_json(const FitState& f, double c_w);

void write_prediction_tsv(std::ostream& out, const Prediction& p);
nlohmann::json prediction_json(const Prediction& p);

void write_cv_tsv(std::ostream& out, const CvReport& r);
nlohmann::json cv_json(const CvReport& r);

void write_consistency_tsv(std::ostream& out, const ConsistencyCurve& c);
nlohmann::json consistency_json(const ConsistencyCurve& c);

void write_truth_tsv(std::ostream& out, const SimReplicate& rep);

nlohmann::json setting_to_json(const SimSetting& s);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

} // namespace vada
