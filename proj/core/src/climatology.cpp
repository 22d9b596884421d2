#include "efm/climatology.hpp"

#include "efm/errors.hpp"

#include <string>

namespace efm {

Field daily_climatology(const std::vector<DailyStack>& years) {
    if (years.empty()) throw ValidationError("daily_climatology: no input years");
    const SpatialGrid& grid = years.front().grid;
    const std::size_t ncell = grid.size();

    std::vector<double> sum(365 * ncell, 0.0);
    std::vector<std::size_t> count(365, 0);

    for (const DailyStack& year : years) {
        if (!(year.grid == grid))
            throw GridMismatch("daily_climatology: inconsistent grids across years");
        if (year.values.size() != year.day_of_year.size() * ncell)
            throw DimMismatch("daily_climatology: values do not match day labels");
        for (std::size_t k = 0; k < year.day_of_year.size(); ++k) {
            const int doy = year.day_of_year[k];
            if (doy < 1 || doy > 365)
                throw ValidationError("daily_climatology: day-of-year " +
                                      std::to_string(doy) +
                                      " outside 1..365 (drop leap days first)");
            const std::size_t d = static_cast<std::size_t>(doy - 1);
            for (std::size_t c = 0; c < ncell; ++c)
                sum[d * ncell + c] += year.values[k * ncell + c];
            ++count[d];
        }
    }

    for (std::size_t d = 0; d < 365; ++d) {
        if (count[d] == 0)
            throw MissingDay("daily_climatology: no data for day-of-year " +
                             std::to_string(d + 1));
        const double inv = 1.0 / static_cast<double>(count[d]);
        for (std::size_t c = 0; c < ncell; ++c) sum[d * ncell + c] *= inv;
    }

    return Field(grid, 365, std::move(sum), "climatology");
}

} // namespace efm
