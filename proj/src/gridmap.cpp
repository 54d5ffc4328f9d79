#include "pdg/gridmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace pdg {

GeoPoint GridMap::node(int row, int col) const {
    const double fx = nx > 1 ? static_cast<double>(col) / (nx - 1) : 0.0;
    const double fy = ny > 1 ? static_cast<double>(row) / (ny - 1) : 0.0;
    return {bbox.lon_min + fx * (bbox.lon_max - bbox.lon_min),
            bbox.lat_max - fy * (bbox.lat_max - bbox.lat_min)};
}

GridMap render_grid(const Interpolator& interp, const std::vector<GeoPoint>& m_co,
                    const std::vector<double>& x_co, const BBox& bbox, int nx, int ny) {
    if (nx < 2 || ny < 2) throw ConfigError("render_grid: resolution must be at least 2x2");
    if (!(bbox.lon_min < bbox.lon_max) || !(bbox.lat_min < bbox.lat_max))
        throw ConfigError("render_grid: degenerate bbox");

    GridMap grid;
    grid.bbox = bbox;
    grid.nx = nx;
    grid.ny = ny;
    grid.values.resize(static_cast<std::size_t>(nx) * ny);

    std::vector<GeoPoint> nodes;
    nodes.reserve(grid.values.size());
    for (int r = 0; r < ny; ++r)
        for (int c = 0; c < nx; ++c) nodes.push_back(grid.node(r, c));

    std::vector<double> pred;
    try {
        pred = interp(m_co, x_co, nodes);
    } catch (const Error& e) {
        char where[160];
        std::snprintf(where, sizeof(where), " (rendering %dx%d grid over [%g,%g]x[%g,%g])", nx,
                      ny, bbox.lon_min, bbox.lon_max, bbox.lat_min, bbox.lat_max);
        throw NumericError(std::string(e.what()) + where);
    }
    if (pred.size() != grid.values.size())
        throw DimensionError("render_grid: interpolator returned wrong count");
    for (double v : pred)
        if (!std::isfinite(v)) throw NumericError("render_grid: non-finite grid value");
    grid.values = std::move(pred);
    return grid;
}

void save_grid_csv(const GridMap& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("save_grid_csv: cannot open " + path);
    out << "lon,lat,value\n";
    char buf[128];
    for (int r = 0; r < grid.ny; ++r) {
        for (int c = 0; c < grid.nx; ++c) {
            const GeoPoint p = grid.node(r, c);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.lon, p.lat, grid.at(r, c));
            out << buf;
        }
    }
    if (!out) throw DataError("save_grid_csv: write failed for " + path);
}

void save_grid_pgm(const GridMap& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("save_grid_pgm: cannot open " + path);

    const auto [mn_it, mx_it] = std::minmax_element(grid.values.begin(), grid.values.end());
    const double mn = *mn_it, mx = *mx_it;
    const double span = mx - mn;

    char buf[192];
    out << "P2\n";
    std::snprintf(buf, sizeof(buf), "# scale: min=%.17g max=%.17g\n", mn, mx);
    out << buf;
    out << "# orientation: row 0 is the northern edge (lat_max), columns west to east\n";
    std::snprintf(buf, sizeof(buf), "# bbox: lon [%.17g, %.17g] lat [%.17g, %.17g]\n",
                  grid.bbox.lon_min, grid.bbox.lon_max, grid.bbox.lat_min, grid.bbox.lat_max);
    out << buf;
    out << grid.nx << " " << grid.ny << "\n65535\n";

    for (int r = 0; r < grid.ny; ++r) {
        for (int c = 0; c < grid.nx; ++c) {
            const double v = grid.at(r, c);
            const long pix =
                span > 0.0 ? std::lround((v - mn) / span * 65535.0) : 0L;
            out << pix << (c + 1 == grid.nx ? "\n" : " ");
        }
    }
    if (!out) throw DataError("save_grid_pgm: write failed for " + path);
}

} // namespace pdg
