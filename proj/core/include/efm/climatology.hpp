#pragma once

#include "efm/field.hpp"

#include <cstddef>
#include <vector>

namespace efm {

// One year (or partial year) of daily values with day-of-year labels on a
// 365-day no-leap calendar. Feb 29 must be dropped before construction.
struct DailyStack {
    SpatialGrid grid;
    std::vector<int> day_of_year;      // 1..365, one per time step
    std::vector<double> values;        // [time][lat][lon]
};

/// Mean over all observations of each calendar day at each location.
/// Every day 1..365 must be observed at least once; output has ntime=365 on
/// the normalized [0,1] time axis.
Field daily_climatology(const std::vector<DailyStack>& years);

} // namespace efm
