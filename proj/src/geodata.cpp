#include "pdg/geodata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pdg/rng.hpp"

namespace pdg {

double synth_field(const SynthFieldSpec& spec, GeoPoint p) {
    if (!std::isfinite(p.lon) || !std::isfinite(p.lat))
        throw DataError("synth_field: non-finite coordinate");
    double v = spec.trend_a + spec.trend_b * p.lon + spec.trend_c * p.lat;
    for (const GaussianAnomaly& an : spec.anomalies) {
        if (!(an.width > 0.0)) throw ConfigError("synth_field: anomaly width must be positive");
        const double d2 = squared_distance(p, an.center);
        v += an.amplitude * std::exp(-d2 / (2.0 * an.width * an.width));
    }
    return v;
}

namespace {

// Reflect a coordinate into [0,1], flipping the matching velocity component.
void reflect(double& x, double& v) {
    while (x < 0.0 || x > 1.0) {
        if (x < 0.0) {
            x = -x;
            v = -v;
        } else {
            x = 2.0 - x;
            v = -v;
        }
    }
}

} // namespace

std::vector<FieldSample> sample_trajectory(const SynthFieldSpec& spec, int n_points,
                                           double step_len, double turn_sigma,
                                           std::uint64_t seed) {
    if (n_points < 2) throw ConfigError("sample_trajectory: need at least 2 points");
    if (!(step_len > 0.0)) throw ConfigError("sample_trajectory: step_len must be positive");
    if (spec.noise_sigma < 0.0) throw ConfigError("sample_trajectory: negative noise_sigma");

    Rng rng(seed);
    std::vector<FieldSample> out;
    out.reserve(static_cast<std::size_t>(n_points));

    GeoPoint pos{rng.uniform(), rng.uniform()};
    double heading = rng.uniform(0.0, 2.0 * 3.14159265358979323846);

    for (int i = 0; i < n_points; ++i) {
        const double noise = spec.noise_sigma > 0.0 ? rng.normal(0.0, spec.noise_sigma) : 0.0;
        out.push_back(FieldSample{pos, synth_field(spec, pos) + noise});
        if (i + 1 == n_points) break;
        heading += turn_sigma > 0.0 ? rng.normal(0.0, turn_sigma) : 0.0;
        double vx = std::cos(heading), vy = std::sin(heading);
        pos.lon += step_len * vx;
        pos.lat += step_len * vy;
        reflect(pos.lon, vx);
        reflect(pos.lat, vy);
        heading = std::atan2(vy, vx);
    }
    return out;
}

DataSplit split_dataset(const std::vector<FieldSample>& samples, SplitRatios ratios,
                        std::uint64_t seed) {
    if (!(ratios.train > 0.0 || ratios.val > 0.0 || ratios.test > 0.0) || ratios.train < 0.0 ||
        ratios.val < 0.0 || ratios.test < 0.0)
        throw ConfigError("split_dataset: ratios must be non-negative with a positive sum");
    if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
        throw ConfigError("split_dataset: ratios must sum to 1");
    const std::size_t n = samples.size();
    std::size_t partitions = 0;
    for (double r : {ratios.train, ratios.val, ratios.test})
        if (r > 0.0) ++partitions;
    if (n < partitions) throw DataError("split_dataset: fewer samples than partitions");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    const std::size_t n_val = static_cast<std::size_t>(std::llround(ratios.val * n));
    const std::size_t n_test = static_cast<std::size_t>(std::llround(ratios.test * n));
    if (n_val + n_test > n) throw DataError("split_dataset: rounding exceeded sample count");
    const std::size_t n_train = n - n_val - n_test; // remainder to train

    DataSplit split;
    split.train.reserve(n_train);
    split.val.reserve(n_val);
    split.test.reserve(n_test);
    std::size_t k = 0;
    for (; k < n_train; ++k) split.train.push_back(samples[order[k]]);
    for (; k < n_train + n_val; ++k) split.val.push_back(samples[order[k]]);
    for (; k < n; ++k) split.test.push_back(samples[order[k]]);
    return split;
}

ScatterSet make_instance(const std::vector<FieldSample>& samples, double cond_fraction,
                         std::uint64_t seed) {
    if (!(cond_fraction > 0.0 && cond_fraction < 1.0))
        throw ConfigError("make_instance: cond_fraction must lie in (0,1)");
    const std::size_t n = samples.size();
    if (n < 2) throw DataError("make_instance: need at least 2 samples");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    std::size_t n_obs = static_cast<std::size_t>(std::llround(cond_fraction * n));
    n_obs = std::max<std::size_t>(1, std::min(n_obs, n - 1));

    ScatterSet set;
    set.observed.reserve(n_obs);
    set.targets.reserve(n - n_obs);
    for (std::size_t i = 0; i < n; ++i)
        (i < n_obs ? set.observed : set.targets).push_back(samples[order[i]]);
    return set;
}

NormStats normalize_fit(const std::vector<double>& values) {
    if (values.empty()) throw DataError("normalize_fit: empty value list");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    const double sd = std::sqrt(var);
    if (!(sd > 0.0)) throw ConfigError("normalize_fit: zero variance");
    return NormStats{mean, sd};
}

std::vector<double> normalize_apply(const std::vector<double>& values, NormStats stats) {
    if (!(stats.std > 0.0)) throw ConfigError("normalize_apply: std must be positive");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - stats.mean) / stats.std;
    return out;
}

std::vector<double> denormalize(const std::vector<double>& values, NormStats stats) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] * stats.std + stats.mean;
    return out;
}

namespace {

double parse_field(const std::string& token, const std::string& path, std::size_t line_no) {
    if (token.empty())
        throw DataError(path + ":" + std::to_string(line_no) + ": empty field");
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(line_no) + ": bad number '" + token + "'");
    }
    if (pos != token.size())
        throw DataError(path + ":" + std::to_string(line_no) + ": trailing junk in '" + token +
                        "'");
    return v;
}

} // namespace

std::vector<FieldSample> load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("load_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ":1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "lon,lat,value")
        throw DataError(path + ":1: expected header 'lon,lat,value', got '" + line + "'");

    std::vector<FieldSample> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            line.find(',', c2 + 1) != std::string::npos)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 3 fields");
        FieldSample s;
        s.location.lon = parse_field(line.substr(0, c1), path, line_no);
        s.location.lat = parse_field(line.substr(c1 + 1, c2 - c1 - 1), path, line_no);
        s.value = parse_field(line.substr(c2 + 1), path, line_no);
        samples.push_back(s);
    }
    return samples;
}

void save_csv(const std::string& path, const std::vector<FieldSample>& samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("save_csv: cannot open " + path + " for writing");
    out << "lon,lat,value\n";
    char buf[96];
    for (const FieldSample& s : samples) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", s.location.lon, s.location.lat,
                      s.value);
        out << buf;
    }
    if (!out) throw DataError("save_csv: write failure on " + path);
}

std::vector<double> values_of(const std::vector<FieldSample>& samples) {
    std::vector<double> v(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) v[i] = samples[i].value;
    return v;
}

std::vector<GeoPoint> locations_of(const std::vector<FieldSample>& samples) {
    std::vector<GeoPoint> p(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) p[i] = samples[i].location;
    return p;
}

} // namespace pdg
