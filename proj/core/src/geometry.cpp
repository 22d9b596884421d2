#include "efm/geometry.hpp"

#include "efm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace efm {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct Vec3 {
    double x, y, z;
};

Vec3 to_unit_vec(const LatLon& p) {
    const double phi = p.lat * kDegToRad;
    const double lam = p.lon * kDegToRad;
    return {std::cos(phi) * std::cos(lam), std::cos(phi) * std::sin(lam),
            std::sin(phi)};
}

} // namespace

double normalize_lon(double lon) {
    double x = std::fmod(lon + 180.0, 360.0);
    if (x < 0.0) x += 360.0;
    return x - 180.0;
}

double chordal_distance(const LatLon& a, const LatLon& b, double radius_km) {
    const Vec3 u = to_unit_vec(a);
    const Vec3 v = to_unit_vec(b);
    const double dx = u.x - v.x;
    const double dy = u.y - v.y;
    const double dz = u.z - v.z;
    return radius_km * std::sqrt(dx * dx + dy * dy + dz * dz);
}

SpatialGrid::SpatialGrid(std::vector<double> lats, std::vector<double> lons)
    : lats_(std::move(lats)), lons_(std::move(lons)) {
    if (lats_.size() < 2 || lons_.size() < 2)
        throw ValidationError("SpatialGrid: need at least 2 points per axis");
    for (std::size_t i = 0; i < lats_.size(); ++i) {
        if (lats_[i] < -90.0 || lats_[i] > 90.0)
            throw ValidationError("SpatialGrid: latitude out of [-90, 90]");
        if (i > 0 && lats_[i] <= lats_[i - 1])
            throw ValidationError("SpatialGrid: latitudes must be strictly increasing");
    }
    for (std::size_t i = 1; i < lons_.size(); ++i) {
        if (lons_[i] <= lons_[i - 1])
            throw ValidationError("SpatialGrid: longitudes must be strictly increasing");
    }
    if (lons_.back() - lons_.front() >= 360.0)
        throw ValidationError("SpatialGrid: longitude span must be < 360");
    // Longitudes may live in any increasing window (e.g. [0, 360) or
    // [-180, 180)); all angular arithmetic treats them mod 360.
}

SpatialGrid SpatialGrid::uniform(std::size_t nlat, std::size_t nlon) {
    std::vector<double> lats(nlat), lons(nlon);
    const double dlat = 180.0 / static_cast<double>(nlat);
    const double dlon = 360.0 / static_cast<double>(nlon);
    for (std::size_t i = 0; i < nlat; ++i)
        lats[i] = -90.0 + dlat * (static_cast<double>(i) + 0.5);
    for (std::size_t j = 0; j < nlon; ++j)
        lons[j] = -180.0 + dlon * (static_cast<double>(j) + 0.5);
    return SpatialGrid(std::move(lats), std::move(lons));
}

std::vector<GridNeighbor> neighbors_within(const SpatialGrid& grid,
                                           const LatLon& center, double r_km) {
    if (r_km > GeoConstants::earth_diameter_km)
        throw RangeTooLarge("neighbors_within: radius exceeds Earth diameter");
    if (r_km <= 0.0)
        throw ValidationError("neighbors_within: radius must be positive");
    std::vector<GridNeighbor> out;
    for (std::size_t i = 0; i < grid.nlat(); ++i) {
        for (std::size_t j = 0; j < grid.nlon(); ++j) {
            const double d = chordal_distance(center, grid.point(i, j));
            if (d <= r_km) out.push_back({i, j, d});
        }
    }
    return out;
}

std::vector<double> cell_area_weights(const SpatialGrid& grid) {
    const auto& lats = grid.lats();
    const auto& lons = grid.lons();
    const std::size_t nlat = lats.size();
    const std::size_t nlon = lons.size();

    // Cell bounds are midpoints between successive coordinates; outer bounds
    // extend half a step (clamped to the poles for latitude).
    std::vector<double> lat_bounds(nlat + 1), lon_bounds(nlon + 1);
    lat_bounds[0] = std::max(-90.0, lats[0] - 0.5 * (lats[1] - lats[0]));
    lat_bounds[nlat] =
        std::min(90.0, lats[nlat - 1] + 0.5 * (lats[nlat - 1] - lats[nlat - 2]));
    for (std::size_t i = 1; i < nlat; ++i)
        lat_bounds[i] = 0.5 * (lats[i - 1] + lats[i]);
    lon_bounds[0] = lons[0] - 0.5 * (lons[1] - lons[0]);
    lon_bounds[nlon] = lons[nlon - 1] + 0.5 * (lons[nlon - 1] - lons[nlon - 2]);
    for (std::size_t j = 1; j < nlon; ++j)
        lon_bounds[j] = 0.5 * (lons[j - 1] + lons[j]);

    std::vector<double> w(nlat * nlon);
    for (std::size_t i = 0; i < nlat; ++i) {
        // Exact band area: integral of cos(lat) over the cell is
        // sin(upper) - sin(lower).
        const double band =
            std::sin(lat_bounds[i + 1] * kDegToRad) - std::sin(lat_bounds[i] * kDegToRad);
        for (std::size_t j = 0; j < nlon; ++j) {
            const double dlon = (lon_bounds[j + 1] - lon_bounds[j]) * kDegToRad;
            w[i * nlon + j] = std::max(0.0, band * dlon);
        }
    }
    return w;
}

SliceLocationSet SliceLocationSet::from_grid(const SpatialGrid& grid) {
    SliceLocationSet set;
    set.locations.reserve(grid.size());
    set.weights.reserve(grid.size());
    double total = 0.0;
    for (std::size_t i = 0; i < grid.nlat(); ++i) {
        const double w = std::max(0.0, std::cos(grid.lats()[i] * kDegToRad));
        for (std::size_t j = 0; j < grid.nlon(); ++j) {
            set.locations.push_back(grid.point(i, j));
            set.weights.push_back(w);
            total += w;
        }
    }
    if (total <= 0.0)
        throw ValidationError("SliceLocationSet: total weight must be positive");
    return set;
}

} // namespace efm
