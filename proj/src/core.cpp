#include "vada/core.hpp"

namespace vada {

std::string Dataset::column_name(Index j) const
{
    if (j < static_cast<Index>(columns.size()))
        return columns[static_cast<std::size_t>(j)];
    return "x" + std::to_string(j + 1);
}

void validate_features(const Dataset& d)
{
    if (d.n() < 1)
        throw DataError("dataset has no observations");
    if (d.p() < 1)
        throw DataError("dataset has no variables");
    if (!d.columns.empty() && static_cast<Index>(d.columns.size()) != d.p())
        throw DataError("column name count does not match the number of variables");
    for (Index j = 0; j < d.p(); ++j)
        for (Index i = 0; i < d.n(); ++i)
            if (!std::isfinite(d.X(i, j)))
                throw DataError("non-finite value at row " + std::to_string(i) + ", column "
                                + d.column_name(j));
}

void validate_training(const Dataset& d)
{
    validate_features(d);
    if (!d.labeled())
        throw DataError("training data requires labels");
    if (d.n() < 4)
        throw DataError("training data requires at least 4 observations");
    detail::check_labels(d.y, d.n());
}

void Hyperparameters::validate() const
{
    auto require = [](bool ok, const char* msg) {
        if (!ok)
            throw DomainError(msg);
    };
    require(a_y >= 0.0 && std::isfinite(a_y), "a_y must be nonnegative");
    require(b_y >= 0.0 && std::isfinite(b_y), "b_y must be nonnegative");
    require(a_gamma > 0.0 && std::isfinite(a_gamma), "a_gamma must be positive");
    require(r < 1.0, "r must be less than 1");
    require(kappa > 0.0 && std::isfinite(kappa), "kappa must be positive");
    require(c_w > 0.0 && c_w < 1.0, "c_w must lie in (0,1)");
    require(c_y > 0.0 && c_y < 1.0, "c_y must lie in (0,1)");
    require(eps > 0.0, "eps must be positive");
    require(max_cycles >= 1, "max_cycles must be at least 1");
    require(variance_floor > 0.0, "variance_floor must be positive");
    require(w_init >= 0.0 && w_init <= 1.0, "w_init must lie in [0,1]");
}

} // namespace vada
