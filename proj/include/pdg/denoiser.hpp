#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pdg/autodiff.hpp"
#include "pdg/geodata.hpp"
#include "pdg/geometry.hpp"
#include "pdg/mask.hpp"
#include "pdg/rng.hpp"

namespace pdg {

/// All learnable weights of the noise-prediction network: linear pair
/// encoders for (lon, lat, value) triples, a two-layer FFN that turns the
/// sinusoidal step embedding into a bias vector, single-head cross-attention
/// projections, and a two-layer output head. Width d (embedding) equals the
/// attention dimension.
struct DenoiserParams {
    int d = 64;

    Tensor enc_co_w, enc_co_b; // 3 x d, 1 x d
    Tensor enc_ta_w, enc_ta_b; // 3 x d, 1 x d
    Tensor step_w1, step_b1;   // d x d, 1 x d
    Tensor step_w2, step_b2;   // d x d, 1 x d
    Tensor attn_wq, attn_wk, attn_wv; // d x d each
    Tensor head_w1, head_b1;   // d x d, 1 x d
    Tensor head_w2, head_b2;   // d x 1, 1 x 1

    /// Random init scaled by fan-in; the head output layer starts at zero so
    /// an untrained model predicts zero noise.
    static DenoiserParams init(int d, Rng& rng);

    /// Stable-ordered (name, tensor) view used by the optimizer, checkpoint
    /// writer, and gradient checks.
    std::vector<std::pair<std::string, Tensor*>> entries();
    std::vector<std::pair<std::string, const Tensor*>> entries() const;
};

enum class PointRole { condition, target };

/// Sinusoidal step encoding: w = d/2 sines then w cosines at frequencies
/// 10^(4i/(w-1)), i = 0..w-1. Requires even d >= 4.
Tensor step_embedding(double t, int d);

/// Tape handles for one forward pass; leaves created from the current
/// parameter values so gradients can be read back per tensor after backward.
struct ParamVars {
    std::vector<std::pair<std::string, Var>> vars;

    static ParamVars lift(Tape& tape, const DenoiserParams& params);
    Var at(const std::string& name) const;
};

/// p_t = FFN(Emb(t)), a 1 x d row broadcast onto every encoded point.
Var step_vector(Tape& tape, const ParamVars& pv, double t, int d);

/// h = Linear(lon, lat, value) + p_t for each point.
Var encode(Tape& tape, const ParamVars& pv, PointRole role, const std::vector<GeoPoint>& points,
           const std::vector<double>& values, Var p_t);

/// Masked single-head cross-attention from targets onto conditions followed
/// by the residual MLP head: eps_hat = head(h_ta + softmax(Q K^T / sqrt(D),
/// mask) V). Output is n_ta x 1.
Var predict_noise(Tape& tape, const ParamVars& pv, Var h_ta, Var h_co, const ReceptiveMask& mask,
                  int d);

/// Full forward pass: encode conditions and noised targets at step t, then
/// predict the per-target noise.
Var denoiser_forward(Tape& tape, const ParamVars& pv, const DenoiserParams& shape,
                     const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                     const std::vector<GeoPoint>& m_ta, const std::vector<double>& x_ta_noised,
                     int t, const ReceptiveMask& mask);

/// Everything needed to run interpolation later: weights plus the data
/// normalization, noise schedule, and mask schedule they were trained with.
struct Checkpoint {
    DenoiserParams params;
    NormStats norm;
    int T = 1000;
    double beta_start = 1e-4;
    double beta_end = 0.02;
    int k_min = 32;
    int k_max = 1000;
    bool full_attention = false; // trained without the receptive-field mask
};

/// Binary format: magic "PDG1", little-endian u32 manifest length, JSON
/// manifest, then raw little-endian f64 arrays in manifest tensor order.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

} // namespace pdg
