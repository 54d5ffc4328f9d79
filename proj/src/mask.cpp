#include "pdg/mask.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace pdg {

int k_for_step(int t, const MaskScheduleConfig& cfg) {
    if (cfg.k_min < 1 || cfg.k_min > cfg.k_max)
        throw ConfigError("mask schedule requires 1 <= k_min <= k_max");
    if (cfg.T < 1) throw ConfigError("mask schedule requires T >= 1");
    if (t < 0 || t > cfg.T)
        throw NumericError("k_for_step: step " + std::to_string(t) + " outside [0," +
                           std::to_string(cfg.T) + "]");
    const double ramp = static_cast<double>(cfg.k_min) +
                        (static_cast<double>(t) / cfg.T) * (cfg.k_max - cfg.k_min);
    int k = static_cast<int>(std::floor(ramp));
    k = std::max(1, std::min(k, cfg.k_max));
    return k;
}

ReceptiveMask knn_mask(const std::vector<GeoPoint>& targets,
                       const std::vector<GeoPoint>& conditions, int k) {
    if (conditions.empty()) throw DataError("knn_mask: empty condition set");
    if (k < 1) throw ConfigError("knn_mask: k must be >= 1");

    const std::size_t n_ta = targets.size();
    const std::size_t n_co = conditions.size();
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(k), n_co);

    ReceptiveMask mask(n_ta, n_co);
    std::vector<std::size_t> order(n_co);
    std::vector<double> dist(n_co);

    for (std::size_t i = 0; i < n_ta; ++i) {
        for (std::size_t j = 0; j < n_co; ++j)
            dist[j] = squared_distance(targets[i], conditions[j]);
        std::iota(order.begin(), order.end(), std::size_t{0});
        // (distance, index) ordering gives the tie-break on lower index
        std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                          [&dist](std::size_t a, std::size_t b) {
                              return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
                          });
        for (std::size_t r = 0; r < keep; ++r) mask.set(i, order[r], true);
    }
    return mask;
}

} // namespace pdg
