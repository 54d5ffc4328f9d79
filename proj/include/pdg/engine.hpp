#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdg/denoiser.hpp"
#include "pdg/geodata.hpp"
#include "pdg/losses.hpp"
#include "pdg/mask.hpp"
#include "pdg/metrics.hpp"
#include "pdg/schedule.hpp"

namespace pdg {

struct TrainConfig {
    int epochs = 60;
    int instances_per_epoch = 100;
    int instance_size = 256;    // points drawn per training instance
    double cond_fraction = 0.5; // observed share within an instance
    double lr = 1e-3;
    double lambda = 0.1; // weight of the variogram-matching term
    int k_v = 8;         // neighborhood size inside that term
    int k_min = 32;      // receptive-field ramp endpoints
    int k_max = 1000;
    int T = 1000;
    double beta_start = 1e-4;
    double beta_end = 0.02;
    int d = 64;
    std::uint64_t seed = 1;
    bool disable_mask = false;    // ablation: full attention at every step
    bool disable_kriging = false; // ablation: variogram term weight forced to 0
};

struct SampleConfig {
    int steps = 10; // reverse chain length, 1 <= steps <= T
    std::uint64_t seed = 1;
};

struct StepLoss {
    double loss_eps = 0.0;
    double loss_kriging = 0.0; // unweighted term value
    double loss_total = 0.0;   // loss_eps + effective lambda * loss_kriging
    int t = 0;                 // diffusion step drawn for this update
};

/// Owns the parameters, optimizer state, and random stream of one training
/// run. Instances handed to train_step must hold normalized values.
class Trainer {
  public:
    explicit Trainer(const TrainConfig& cfg);

    /// One optimizer update from one scatter instance: draw t and noise,
    /// noise the targets, predict, step on the combined loss. Returns the
    /// losses measured before the update.
    StepLoss train_step(const ScatterSet& instance);

    const TrainConfig& config() const { return cfg_; }
    const NoiseSchedule& schedule() const { return schedule_; }
    const DenoiserParams& params() const { return params_; }
    DenoiserParams& params() { return params_; }
    Rng& rng() { return rng_; }

  private:
    TrainConfig cfg_;
    NoiseSchedule schedule_;
    DenoiserParams params_;
    Adam opt_;
    Rng rng_;
};

struct TrainResult {
    Checkpoint checkpoint;
    std::vector<StepLoss> log; // one entry per optimizer step
};

using EpochCallback = std::function<void(int epoch, double mean_loss)>;

/// Full run: fit normalization on the samples, then per epoch draw
/// instances_per_epoch random subsets of instance_size points and take one
/// optimizer step on each. Deterministic given cfg.seed.
TrainResult train(const std::vector<FieldSample>& samples, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

/// CSV `step,loss_eps,loss_kriging,loss_total`, steps numbered from 1.
void save_loss_log(const std::string& path, const std::vector<StepLoss>& log);

/// Evenly spaced ascending subsequence of {1..T} with the given length,
/// always containing T, and containing 1 whenever length >= 2. A length of
/// 1 yields {T}.
std::vector<int> strided_steps(int T, int steps);

/// Reverse-diffusion interpolation: start the targets at pure noise and
/// denoise along the strided step subsequence, conditioning on the observed
/// points at every step. Inputs are raw values; normalization and
/// denormalization use the checkpoint's stored stats. Deterministic given
/// scfg.seed.
std::vector<double> interpolate(const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                                const std::vector<GeoPoint>& m_ta, const Checkpoint& ckpt,
                                const SampleConfig& scfg);

struct VariantMetrics {
    std::string name; // "full", "no-mask", or "no-kriging"
    MetricsRecord metrics;
};

struct AblationConfig {
    TrainConfig base;
    SampleConfig sample;
    double eval_cond_fraction = 0.5;
};

/// Trains one model per variant on the train samples and evaluates all of
/// them on the same held-out observed/target split of the test samples.
std::vector<VariantMetrics> ablate(const std::vector<FieldSample>& train_samples,
                                   const std::vector<FieldSample>& test_samples,
                                   const std::vector<std::string>& variants,
                                   const AblationConfig& cfg, const EpochCallback& on_epoch = {});

struct SweepRow {
    int steps = 0;
    MetricsRecord metrics;
    double seconds = 0.0; // wall time of the interpolate call
};

/// Evaluates one trained checkpoint across sampling-step counts on a fixed
/// observed/target split of the test samples.
std::vector<SweepRow> sweep_steps(const Checkpoint& ckpt,
                                  const std::vector<FieldSample>& test_samples,
                                  double cond_fraction, const std::vector<int>& step_counts,
                                  std::uint64_t seed);

struct KSweepRow {
    int k_max = 0;
    int k_min = 0;
    MetricsRecord metrics;
};

/// Trains and evaluates one model per (k_max, k_min) receptive-field ramp
/// endpoint pair; rows ordered k_max outer, k_min inner.
std::vector<KSweepRow> sweep_k(const std::vector<FieldSample>& train_samples,
                               const std::vector<FieldSample>& test_samples,
                               const std::vector<int>& k_max_values,
                               const std::vector<int>& k_min_values, const TrainConfig& base,
                               const SampleConfig& sample, double eval_cond_fraction,
                               const EpochCallback& on_epoch = {});

} // namespace pdg
