#pragma once

#include <vector>

#include "pdg/errors.hpp"
#include "pdg/geodata.hpp"
#include "pdg/geometry.hpp"

namespace pdg {

/// Inverse-distance weighting with weights 1/dist^power. A target within
/// 1e-12 of a condition point returns that condition's value exactly.
std::vector<double> idw(const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                        const std::vector<GeoPoint>& m_ta, double power);

/// Exponential variogram gamma(r) = nugget + sill * (1 - exp(-r / range_len)).
struct VariogramModel {
    double nugget = 0.0;
    double sill = 1.0;
    double range_len = 0.1;

    double operator()(double r) const;
};

/// Bins empirical semivariances by pair distance up to max_range and
/// least-squares fits the exponential model (range by scan, nugget/sill by
/// linear solve with non-negativity clamps).
VariogramModel fit_variogram(const std::vector<FieldSample>& samples, int n_bins,
                             double max_range);

struct KrigingResult {
    std::vector<double> predictions;
    std::vector<double> variances;
};

/// Ordinary kriging weights for one target: the semivariance system bordered
/// by the unbiasedness constraint. Weights sum to 1. Optionally returns the
/// Lagrange multiplier.
std::vector<double> ordinary_kriging_weights(const std::vector<GeoPoint>& m_co,
                                             const VariogramModel& model, GeoPoint target,
                                             double* lagrange = nullptr);

/// Ordinary kriging predictions and kriging variances per target. Duplicate
/// condition points (within 1e-12) are deduplicated first.
KrigingResult ordinary_kriging(const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                               const std::vector<GeoPoint>& m_ta, const VariogramModel& model);

/// Gaussian-kernel RBF interpolation with a constant offset term and a small
/// ridge (1e-8) on the kernel matrix diagonal.
std::vector<double> rbf_interpolate(const std::vector<GeoPoint>& m_co,
                                    const std::vector<double>& x_co,
                                    const std::vector<GeoPoint>& m_ta, double kernel_width);

namespace detail {

/// Dense linear solve by Gaussian elimination with partial pivoting.
/// A is n x n row-major and is consumed. Throws NumericError when singular;
/// diag_names, when given, labels the row reported in the error.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, std::size_t n,
                                const std::vector<std::string>* row_labels = nullptr);

} // namespace detail

} // namespace pdg
