#include "efm/field.hpp"

#include "efm/errors.hpp"

#include <cmath>
#include <string>

namespace efm {

Field::Field(SpatialGrid grid, std::size_t ntime, std::vector<double> values,
             std::string name, std::string units, double days_per_unit)
    : grid_(std::move(grid)),
      ntime_(ntime),
      values_(std::move(values)),
      name_(std::move(name)),
      units_(std::move(units)),
      days_per_unit_(days_per_unit) {
    if (ntime_ < 4)
        throw ValidationError("Field: ntime must be >= 4");
    if (values_.size() != ntime_ * grid_.size())
        throw DimMismatch("Field: payload size " + std::to_string(values_.size()) +
                          " does not match dims " + std::to_string(ntime_) + "x" +
                          std::to_string(grid_.nlat()) + "x" +
                          std::to_string(grid_.nlon()));
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw NonFiniteValue("Field: non-finite value at flat index " +
                                 std::to_string(i));
    }
}

std::vector<double> Field::cell_series(std::size_t ilat, std::size_t ilon) const {
    std::vector<double> y(ntime_);
    const std::size_t stride = grid_.size();
    const std::size_t off = ilat * grid_.nlon() + ilon;
    for (std::size_t k = 0; k < ntime_; ++k) y[k] = values_[k * stride + off];
    return y;
}

Field Field::with_values(std::vector<double> values) const {
    return Field(grid_, ntime_, std::move(values), name_, units_, days_per_unit_);
}

namespace {

void check_comparable(const Field& f, const Field& g) {
    if (!(f.grid() == g.grid()))
        throw GridMismatch("rmse/mae: fields are on different grids");
    if (f.ntime() != g.ntime())
        throw GridMismatch("rmse/mae: fields have different time axes");
}

} // namespace

double rmse(const Field& f, const Field& g) {
    check_comparable(f, g);
    const auto w = cell_area_weights(f.grid());
    const std::size_t ncell = f.grid().size();
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < f.ntime(); ++k) {
        for (std::size_t c = 0; c < ncell; ++c) {
            const double d = f.values()[k * ncell + c] - g.values()[k * ncell + c];
            num += w[c] * d * d;
            den += w[c];
        }
    }
    return std::sqrt(num / den);
}

double mae(const Field& f, const Field& g) {
    check_comparable(f, g);
    const auto w = cell_area_weights(f.grid());
    const std::size_t ncell = f.grid().size();
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < f.ntime(); ++k) {
        for (std::size_t c = 0; c < ncell; ++c) {
            const double d = f.values()[k * ncell + c] - g.values()[k * ncell + c];
            num += w[c] * std::abs(d);
            den += w[c];
        }
    }
    return num / den;
}

} // namespace efm
