#pragma once

#include "efm/geometry.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace efm {

// Gridded space-time field. Time axis is a uniform normalized grid on
// [0, 1]; values are row-major [time][lat][lon]. Values are validated to be
// finite at construction and immutable afterwards.
class Field {
public:
    Field(SpatialGrid grid, std::size_t ntime, std::vector<double> values,
          std::string name = "", std::string units = "mm/day",
          double days_per_unit = 365.0);

    const SpatialGrid& grid() const { return grid_; }
    std::size_t ntime() const { return ntime_; }
    const std::vector<double>& values() const { return values_; }
    const std::string& name() const { return name_; }
    const std::string& units() const { return units_; }
    double days_per_unit() const { return days_per_unit_; }

    double time_at(std::size_t k) const {
        return static_cast<double>(k) / static_cast<double>(ntime_ - 1);
    }
    double at(std::size_t k, std::size_t ilat, std::size_t ilon) const {
        return values_[(k * grid_.nlat() + ilat) * grid_.nlon() + ilon];
    }

    /// Time series at one grid cell, length ntime.
    std::vector<double> cell_series(std::size_t ilat, std::size_t ilon) const;

    /// New field with the same grid/time axes and different values.
    Field with_values(std::vector<double> values) const;

    void set_name(std::string name) { name_ = std::move(name); }

private:
    SpatialGrid grid_;
    std::size_t ntime_;
    std::vector<double> values_;
    std::string name_;
    std::string units_;
    double days_per_unit_;
};

/// Area-weighted RMSE over all space-time points; grids and time axes must
/// match exactly.
double rmse(const Field& f, const Field& g);
/// Area-weighted MAE; same preconditions as rmse.
double mae(const Field& f, const Field& g);

} // namespace efm
