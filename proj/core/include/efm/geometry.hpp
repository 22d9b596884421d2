#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace efm {

struct GeoConstants {
    static constexpr double earth_radius_km = 6371.0088;
    static constexpr double earth_diameter_km = 2.0 * earth_radius_km;
};

struct LatLon {
    double lat; // degrees, [-90, 90]
    double lon; // degrees, normalized to [-180, 180)
};

/// Normalize a longitude in degrees to [-180, 180).
double normalize_lon(double lon);

/// Straight-line (through-Earth) distance in km between two points on a
/// sphere of radius R.
double chordal_distance(const LatLon& a, const LatLon& b,
                        double radius_km = GeoConstants::earth_radius_km);

// Regular latitude-longitude grid. Latitudes strictly increasing in
// [-90, 90], longitudes strictly increasing with span < 360.
class SpatialGrid {
public:
    SpatialGrid(std::vector<double> lats, std::vector<double> lons);

    const std::vector<double>& lats() const { return lats_; }
    const std::vector<double>& lons() const { return lons_; }
    std::size_t nlat() const { return lats_.size(); }
    std::size_t nlon() const { return lons_.size(); }
    std::size_t size() const { return lats_.size() * lons_.size(); }

    LatLon point(std::size_t ilat, std::size_t ilon) const {
        return {lats_[ilat], lons_[ilon]};
    }
    std::size_t flat_index(std::size_t ilat, std::size_t ilon) const {
        return ilat * lons_.size() + ilon;
    }

    /// Uniform n-point grid: cell centers of an (nlat x nlon) partition of
    /// the sphere (e.g. 180x360 gives the 1-degree grid).
    static SpatialGrid uniform(std::size_t nlat, std::size_t nlon);

    bool operator==(const SpatialGrid& other) const = default;

private:
    std::vector<double> lats_;
    std::vector<double> lons_;
};

struct GridNeighbor {
    std::size_t ilat;
    std::size_t ilon;
    double distance_km;
};

/// All grid points with chordal distance <= r from center, handling
/// longitude wraparound. Ordered by (lat index, lon index).
std::vector<GridNeighbor> neighbors_within(const SpatialGrid& grid,
                                           const LatLon& center, double r_km);

/// Quadrature weights for the spatial integral: cos(lat) * dlat * dlon in
/// steradians, one per cell, indexed [ilat * nlon + ilon].
std::vector<double> cell_area_weights(const SpatialGrid& grid);

// Slice centers with their cosine-latitude aggregation weights.
struct SliceLocationSet {
    std::vector<LatLon> locations;
    std::vector<double> weights; // cos(lat), clamped at 0

    static SliceLocationSet from_grid(const SpatialGrid& grid);
    std::size_t size() const { return locations.size(); }
};

} // namespace efm
