#include "pdg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pdg {

namespace detail {

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, std::size_t n,
                                const std::vector<std::string>* row_labels) {
    if (a.size() != n * n || b.size() != n) throw DimensionError("solve_dense: bad system size");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a[r * n + col]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best < 1e-12) {
            std::string label = row_labels && col < row_labels->size()
                                    ? (*row_labels)[col]
                                    : ("row " + std::to_string(col));
            throw NumericError("solve_dense: singular system at " + label);
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] * inv;
            if (f == 0.0) continue;
            a[r * n + col] = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
        x[r] = s / a[r * n + r];
    }
    return x;
}

} // namespace detail

std::vector<double> idw(const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                        const std::vector<GeoPoint>& m_ta, double power) {
    if (m_co.empty()) throw DataError("idw: empty condition set");
    if (m_co.size() != x_co.size()) throw DimensionError("idw: condition length mismatch");
    if (!(power > 0.0)) throw ConfigError("idw: power must be positive");

    std::vector<double> out(m_ta.size());
    for (std::size_t i = 0; i < m_ta.size(); ++i) {
        double wsum = 0.0, acc = 0.0;
        bool exact = false;
        for (std::size_t j = 0; j < m_co.size(); ++j) {
            const double d = distance(m_ta[i], m_co[j]);
            if (d < 1e-12) {
                out[i] = x_co[j];
                exact = true;
                break;
            }
            const double w = 1.0 / std::pow(d, power);
            wsum += w;
            acc += w * x_co[j];
        }
        if (!exact) out[i] = acc / wsum;
    }
    return out;
}

double VariogramModel::operator()(double r) const {
    return nugget + sill * (1.0 - std::exp(-r / range_len));
}

VariogramModel fit_variogram(const std::vector<FieldSample>& samples, int n_bins,
                             double max_range) {
    if (samples.size() < 10) throw DataError("fit_variogram: need at least 10 samples");
    if (n_bins < 2) throw ConfigError("fit_variogram: need at least 2 bins");
    if (!(max_range > 0.0)) throw ConfigError("fit_variogram: max_range must be positive");

    // Empirical semivariance per distance bin.
    std::vector<double> bin_sum(static_cast<std::size_t>(n_bins), 0.0);
    std::vector<std::size_t> bin_count(static_cast<std::size_t>(n_bins), 0);
    const double bin_w = max_range / n_bins;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            const double r = distance(samples[i].location, samples[j].location);
            if (r >= max_range) continue;
            auto b = static_cast<std::size_t>(r / bin_w);
            if (b >= static_cast<std::size_t>(n_bins)) b = static_cast<std::size_t>(n_bins) - 1;
            const double dv = samples[i].value - samples[j].value;
            bin_sum[b] += 0.5 * dv * dv;
            bin_count[b] += 1;
            ++pairs;
        }
    }
    if (pairs == 0) throw DataError("fit_variogram: no pairs within max_range");

    std::vector<double> bin_r, bin_gamma, bin_weight;
    for (std::size_t b = 0; b < static_cast<std::size_t>(n_bins); ++b) {
        if (bin_count[b] == 0) continue;
        bin_r.push_back((static_cast<double>(b) + 0.5) * bin_w);
        bin_gamma.push_back(bin_sum[b] / static_cast<double>(bin_count[b]));
        bin_weight.push_back(static_cast<double>(bin_count[b]));
    }
    if (bin_r.size() < 2) throw DataError("fit_variogram: degenerate geometry, too few distance bins");

    // For a fixed range the model is linear in (nugget, sill); scan candidate
    // ranges and keep the weighted-least-squares winner. Negative solutions
    // are clamped and the reduced problem re-solved.
    auto fit_linear = [&](double range_len, double& nugget, double& sill) -> double {
        double s_ww = 0.0, s_wf = 0.0, s_wff = 0.0, s_wy = 0.0, s_wfy = 0.0;
        for (std::size_t b = 0; b < bin_r.size(); ++b) {
            const double f = 1.0 - std::exp(-bin_r[b] / range_len);
            const double w = bin_weight[b];
            s_ww += w;
            s_wf += w * f;
            s_wff += w * f * f;
            s_wy += w * bin_gamma[b];
            s_wfy += w * f * bin_gamma[b];
        }
        const double det = s_ww * s_wff - s_wf * s_wf;
        if (std::abs(det) > 1e-12 * s_ww * std::max(s_wff, 1e-300)) {
            nugget = (s_wff * s_wy - s_wf * s_wfy) / det;
            sill = (s_ww * s_wfy - s_wf * s_wy) / det;
        } else {
            nugget = s_wy / s_ww; // columns indistinguishable: pure nugget
            sill = 0.0;
        }
        if (nugget < 0.0) {
            nugget = 0.0;
            sill = s_wff > 0.0 ? s_wfy / s_wff : 0.0;
        }
        if (sill < 0.0) {
            sill = 0.0;
            nugget = s_wy / s_ww;
        }
        double sse = 0.0;
        for (std::size_t b = 0; b < bin_r.size(); ++b) {
            const double f = 1.0 - std::exp(-bin_r[b] / range_len);
            const double e = nugget + sill * f - bin_gamma[b];
            sse += bin_weight[b] * e * e;
        }
        return sse;
    };

    VariogramModel best;
    double best_sse = -1.0;
    const int range_steps = 64;
    for (int k = 0; k < range_steps; ++k) {
        // log-spaced candidates from max_range/100 to 2*max_range
        const double lo = std::log(max_range / 100.0);
        const double hi = std::log(2.0 * max_range);
        const double range_len = std::exp(lo + (hi - lo) * k / (range_steps - 1));
        double nugget = 0.0, sill = 0.0;
        const double sse = fit_linear(range_len, nugget, sill);
        if (best_sse < 0.0 || sse < best_sse) {
            best_sse = sse;
            best = VariogramModel{nugget, sill, range_len};
        }
    }
    return best;
}

namespace {

std::vector<std::size_t> dedup_conditions(const std::vector<GeoPoint>& m_co) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m_co.size(); ++i) {
        bool dup = false;
        for (std::size_t k : keep) {
            if (distance(m_co[i], m_co[k]) < 1e-12) {
                dup = true;
                break;
            }
        }
        if (!dup) keep.push_back(i);
    }
    return keep;
}

} // namespace

std::vector<double> ordinary_kriging_weights(const std::vector<GeoPoint>& m_co,
                                             const VariogramModel& model, GeoPoint target,
                                             double* lagrange) {
    const std::size_t n = m_co.size();
    if (n == 0) throw DataError("ordinary_kriging_weights: empty condition set");

    // [ Gamma  1 ] [w ]   [ gamma(target) ]
    // [ 1^T    0 ] [mu] = [ 1             ]
    const std::size_t m = n + 1;
    std::vector<double> a(m * m, 0.0), b(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i * m + j] = model(distance(m_co[i], m_co[j]));
        a[i * m + n] = 1.0;
        a[n * m + i] = 1.0;
        b[i] = model(distance(m_co[i], target));
    }
    b[n] = 1.0;

    std::vector<std::string> labels;
    labels.reserve(m);
    for (std::size_t i = 0; i < n; ++i)
        labels.push_back("condition #" + std::to_string(i) + " (" + std::to_string(m_co[i].lon) +
                         ", " + std::to_string(m_co[i].lat) + ")");
    labels.push_back("unbiasedness constraint row");

    std::vector<double> sol;
    try {
        sol = detail::solve_dense(std::move(a), std::move(b), m, &labels);
    } catch (const NumericError& e) {
        throw NumericError(std::string("ordinary_kriging: ") + e.what() +
                           " (duplicate or collinear conditions?)");
    }
    if (lagrange) *lagrange = sol[n];
    sol.resize(n);
    return sol;
}

KrigingResult ordinary_kriging(const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                               const std::vector<GeoPoint>& m_ta, const VariogramModel& model) {
    if (m_co.empty()) throw DataError("ordinary_kriging: empty condition set");
    if (m_co.size() != x_co.size()) throw DimensionError("ordinary_kriging: length mismatch");

    const std::vector<std::size_t> keep = dedup_conditions(m_co);
    std::vector<GeoPoint> pts;
    std::vector<double> vals;
    pts.reserve(keep.size());
    vals.reserve(keep.size());
    for (std::size_t k : keep) {
        pts.push_back(m_co[k]);
        vals.push_back(x_co[k]);
    }

    KrigingResult res;
    res.predictions.resize(m_ta.size());
    res.variances.resize(m_ta.size());
    for (std::size_t i = 0; i < m_ta.size(); ++i) {
        double mu = 0.0;
        const std::vector<double> w = ordinary_kriging_weights(pts, model, m_ta[i], &mu);
        double pred = 0.0, var = mu;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            pred += w[j] * vals[j];
            var += w[j] * model(distance(pts[j], m_ta[i]));
        }
        res.predictions[i] = pred;
        res.variances[i] = var;
    }
    return res;
}

std::vector<double> rbf_interpolate(const std::vector<GeoPoint>& m_co,
                                    const std::vector<double>& x_co,
                                    const std::vector<GeoPoint>& m_ta, double kernel_width) {
    const std::size_t n = m_co.size();
    if (n == 0) throw DataError("rbf_interpolate: empty condition set");
    if (x_co.size() != n) throw DimensionError("rbf_interpolate: length mismatch");
    if (!(kernel_width > 0.0)) throw ConfigError("rbf_interpolate: kernel_width must be positive");

    const double ridge = 1e-8;
    const double inv2w2 = 1.0 / (2.0 * kernel_width * kernel_width);
    auto kernel = [inv2w2](double r2) { return std::exp(-r2 * inv2w2); };

    // Gram matrix bordered with a constant term so value offsets pass
    // through exactly.
    const std::size_t m = n + 1;
    std::vector<double> a(m * m, 0.0), b(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            a[i * m + j] = kernel(squared_distance(m_co[i], m_co[j])) + (i == j ? ridge : 0.0);
        a[i * m + n] = 1.0;
        a[n * m + i] = 1.0;
        b[i] = x_co[i];
    }

    std::vector<double> sol;
    try {
        sol = detail::solve_dense(std::move(a), std::move(b), m);
    } catch (const NumericError& e) {
        throw NumericError(std::string("rbf_interpolate: ") + e.what());
    }

    std::vector<double> out(m_ta.size());
    for (std::size_t i = 0; i < m_ta.size(); ++i) {
        double v = sol[n];
        for (std::size_t j = 0; j < n; ++j)
            v += sol[j] * kernel(squared_distance(m_ta[i], m_co[j]));
        out[i] = v;
    }
    return out;
}

} // namespace pdg
