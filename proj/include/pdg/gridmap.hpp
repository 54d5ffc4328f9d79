#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pdg/errors.hpp"
#include "pdg/geometry.hpp"

namespace pdg {

struct BBox {
    double lon_min = 0.0;
    double lon_max = 1.0;
    double lat_min = 0.0;
    double lat_max = 1.0;
};

// Row-major raster, north-up: row 0 is lat_max, the last row is lat_min.
// Columns run west to east (lon_min at column 0).
struct GridMap {
    BBox bbox;
    int nx = 0;
    int ny = 0;
    std::vector<double> values; // ny rows of nx values

    double& at(int row, int col) { return values[static_cast<std::size_t>(row) * nx + col]; }
    double at(int row, int col) const { return values[static_cast<std::size_t>(row) * nx + col]; }
    GeoPoint node(int row, int col) const;
};

// Any interpolation method: conditions in, predictions at the targets out.
using Interpolator = std::function<std::vector<double>(const std::vector<GeoPoint>& m_co,
                                                       const std::vector<double>& x_co,
                                                       const std::vector<GeoPoint>& m_ta)>;

// Evaluates the interpolator at every grid node, endpoints included. All
// nodes are passed as one target batch. Interpolator failures are rethrown
// with the grid geometry attached.
GridMap render_grid(const Interpolator& interp, const std::vector<GeoPoint>& m_co,
                    const std::vector<double>& x_co, const BBox& bbox, int nx, int ny);

// CSV rows `lon,lat,value` in raster order (north-up, west to east).
void save_grid_csv(const GridMap& grid, const std::string& path);

// 16-bit ASCII PGM (P2), min-max scaled, with header comments recording the
// scale and orientation.
void save_grid_pgm(const GridMap& grid, const std::string& path);

} // namespace pdg
