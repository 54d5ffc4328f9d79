#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdg/errors.hpp"
#include "pdg/geometry.hpp"

namespace pdg {

/// One scalar field measurement in nanoteslas at a map location.
struct FieldSample {
    GeoPoint location;
    double value = 0.0; // nT
};

/// Observed/target split of one interpolation instance. Both lists non-empty,
/// no shared locations.
struct ScatterSet {
    std::vector<FieldSample> observed;
    std::vector<FieldSample> targets;
};

struct GaussianAnomaly {
    GeoPoint center;
    double amplitude = 0.0; // nT
    double width = 0.1;     // same units as coordinates, > 0
};

/// Ground-truth field: planar trend plus Gaussian radial anomalies, with
/// optional i.i.d. measurement noise applied at sampling time.
struct SynthFieldSpec {
    double trend_a = 48000.0; // offset, nT
    double trend_b = 0.0;     // nT per unit lon
    double trend_c = 0.0;     // nT per unit lat
    std::vector<GaussianAnomaly> anomalies;
    double noise_sigma = 0.0; // nT
    std::uint64_t seed = 1;
};

/// Noise-free field value at p:
/// a + b lon + c lat + sum_i amp_i exp(-|p - center_i|^2 / (2 width_i^2))
double synth_field(const SynthFieldSpec& spec, GeoPoint p);

/// Chain-like survey path: a correlated random walk with fixed step length,
/// heading perturbed by N(0, turn_sigma^2) each step, reflected at the unit
/// square borders. Intensity = ground truth + N(0, noise_sigma^2).
std::vector<FieldSample> sample_trajectory(const SynthFieldSpec& spec, int n_points,
                                           double step_len, double turn_sigma,
                                           std::uint64_t seed);

struct SplitRatios {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

struct DataSplit {
    std::vector<FieldSample> train;
    std::vector<FieldSample> val;
    std::vector<FieldSample> test;
};

/// Seeded shuffle, then val/test sized by round(ratio * n) with the
/// remainder going to train. Partitions are disjoint and exhaustive.
DataSplit split_dataset(const std::vector<FieldSample>& samples, SplitRatios ratios,
                        std::uint64_t seed);

/// Random observed/target partition of one sample set. Observed gets
/// round(cond_fraction * n) clamped so both sides are non-empty.
ScatterSet make_instance(const std::vector<FieldSample>& samples, double cond_fraction,
                         std::uint64_t seed);

struct NormStats {
    double mean = 0.0;
    double std = 1.0;
};

/// Two-pass mean/std (population). Fit on the training split only.
NormStats normalize_fit(const std::vector<double>& values);
std::vector<double> normalize_apply(const std::vector<double>& values, NormStats stats);
std::vector<double> denormalize(const std::vector<double>& values, NormStats stats);

/// CSV, UTF-8, header exactly "lon,lat,value", LF line endings, up to 17
/// significant digits. Round trips preserve values exactly.
std::vector<FieldSample> load_csv(const std::string& path);
void save_csv(const std::string& path, const std::vector<FieldSample>& samples);

std::vector<double> values_of(const std::vector<FieldSample>& samples);
std::vector<GeoPoint> locations_of(const std::vector<FieldSample>& samples);

} // namespace pdg
