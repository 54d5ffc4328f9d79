#pragma once

#include <cstdint>
#include <vector>

#include "pdg/errors.hpp"
#include "pdg/geometry.hpp"

namespace pdg {

/// Step-dependent receptive-field schedule: large neighborhoods early in the
/// reverse chain for coarse estimates, small ones late for local refinement.
struct MaskScheduleConfig {
    int k_min = 32;
    int k_max = 1000;
    int T = 1000;
};

/// Binary attention mask between target rows and condition columns.
struct ReceptiveMask {
    std::size_t n_ta = 0;
    std::size_t n_co = 0;
    std::vector<std::uint8_t> allow; // row-major, n_ta * n_co

    ReceptiveMask() = default;
    ReceptiveMask(std::size_t targets, std::size_t conditions)
        : n_ta(targets), n_co(conditions), allow(targets * conditions, 0) {}

    bool allowed(std::size_t i, std::size_t j) const { return allow[i * n_co + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v) { allow[i * n_co + j] = v ? 1 : 0; }

    static ReceptiveMask full(std::size_t targets, std::size_t conditions) {
        ReceptiveMask m(targets, conditions);
        for (auto& b : m.allow) b = 1;
        return m;
    }

    /// Number of allowed entries in row i.
    std::size_t row_count(std::size_t i) const {
        std::size_t c = 0;
        for (std::size_t j = 0; j < n_co; ++j) c += allow[i * n_co + j];
        return c;
    }
};

/// Receptive-field size at diffusion step t: floor of the linear ramp from
/// k_min at t=0 to k_max at t=T, clamped to [1, k_max].
int k_for_step(int t, const MaskScheduleConfig& cfg);

/// For each target, allow exactly the min(k, n_co) nearest condition points
/// by Euclidean distance; ties broken by lower condition index.
ReceptiveMask knn_mask(const std::vector<GeoPoint>& targets,
                       const std::vector<GeoPoint>& conditions, int k);

} // namespace pdg
