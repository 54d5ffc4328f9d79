#pragma once

#include <cmath>

namespace pdg {

/// A 2-D map coordinate. Synthetic data lives on the unit square [0,1]^2.
struct GeoPoint {
    double lon = 0.0;
    double lat = 0.0;
};

inline double squared_distance(const GeoPoint& a, const GeoPoint& b) {
    const double dlon = a.lon - b.lon;
    const double dlat = a.lat - b.lat;
    return dlon * dlon + dlat * dlat;
}

inline double distance(const GeoPoint& a, const GeoPoint& b) {
    return std::sqrt(squared_distance(a, b));
}

} // namespace pdg
