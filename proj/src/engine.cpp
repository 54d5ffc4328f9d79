#include "pdg/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace pdg {

namespace {

void validate(const TrainConfig& cfg) {
    if (cfg.epochs < 1) throw ConfigError("train: epochs must be at least 1");
    if (cfg.instances_per_epoch < 1) throw ConfigError("train: instances_per_epoch must be at least 1");
    if (cfg.instance_size < 2) throw ConfigError("train: instance_size must be at least 2");
    if (!(cfg.cond_fraction > 0.0 && cfg.cond_fraction < 1.0))
        throw ConfigError("train: cond_fraction must lie in (0, 1)");
    if (!(cfg.lr > 0.0)) throw ConfigError("train: lr must be positive");
    if (cfg.lambda < 0.0) throw ConfigError("train: lambda must be non-negative");
    if (cfg.k_v < 1) throw ConfigError("train: k_v must be at least 1");
}

/// First k entries of a seeded partial shuffle of 0..n-1.
std::vector<std::size_t> draw_subset(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.uniform_index(n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

} // namespace

Trainer::Trainer(const TrainConfig& cfg)
    : cfg_(cfg),
      schedule_(make_schedule(cfg.T, cfg.beta_start, cfg.beta_end)),
      params_(),
      opt_(cfg.lr),
      rng_(cfg.seed) {
    validate(cfg_);
    // schedule and mask endpoints are validated by their own constructors
    (void)k_for_step(0, MaskScheduleConfig{cfg_.k_min, cfg_.k_max, cfg_.T});
    params_ = DenoiserParams::init(cfg_.d, rng_);
}

StepLoss Trainer::train_step(const ScatterSet& instance) {
    if (instance.observed.empty() || instance.targets.empty())
        throw DataError("train_step: instance needs observed and target points");

    const std::vector<GeoPoint> m_co = locations_of(instance.observed);
    const std::vector<double> x_co = values_of(instance.observed);
    const std::vector<GeoPoint> m_ta = locations_of(instance.targets);
    const std::vector<double> x_ta = values_of(instance.targets);
    const std::size_t n_ta = m_ta.size();

    const int t = rng_.uniform_int(1, cfg_.T);
    Tensor eps(n_ta, 1);
    for (double& v : eps.data()) v = rng_.normal();
    const Tensor x0 = Tensor::column(x_ta);
    const Tensor xt = forward_noise(x0, t, eps, schedule_);

    const ReceptiveMask mask =
        cfg_.disable_mask
            ? ReceptiveMask::full(n_ta, m_co.size())
            : knn_mask(m_ta, m_co,
                       k_for_step(t, MaskScheduleConfig{cfg_.k_min, cfg_.k_max, cfg_.T}));

    Tape tape;
    const ParamVars pv = ParamVars::lift(tape, params_);
    const Var eps_hat =
        denoiser_forward(tape, pv, params_, m_co, x_co, m_ta, xt.to_vector(), t, mask);
    const Var l_eps = epsilon_loss(tape, eps, eps_hat);

    StepLoss out;
    out.t = t;
    out.loss_eps = tape.value(l_eps).scalar_value();

    const double lambda_eff = cfg_.disable_kriging ? 0.0 : cfg_.lambda;
    Var loss = l_eps;
    const int k_eff = std::min<int>(cfg_.k_v, static_cast<int>(n_ta) - 1);
    if (k_eff >= 1) {
        const Var x0_hat = recover_x0(tape, xt, eps_hat, t, schedule_);
        KrigingLossConfig kcfg;
        kcfg.n_neighbors = k_eff;
        kcfg.lambda = lambda_eff;
        const Var l_k = kriging_loss(tape, x_ta, x0_hat, m_ta, kcfg);
        out.loss_kriging = tape.value(l_k).scalar_value();
        loss = total_loss(tape, l_eps, l_k, lambda_eff);
    }
    out.loss_total = tape.value(loss).scalar_value();

    tape.backward(loss);

    std::vector<Tensor*> ps;
    std::vector<const Tensor*> gs;
    for (auto& [name, tensor] : params_.entries()) {
        ps.push_back(tensor);
        gs.push_back(&tape.grad(pv.at(name)));
    }
    opt_.step(ps, gs);
    return out;
}

TrainResult train(const std::vector<FieldSample>& samples, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
    validate(cfg);
    if (samples.size() < 2) throw DataError("train: need at least 2 samples");

    const NormStats stats = normalize_fit(values_of(samples));
    std::vector<FieldSample> normalized = samples;
    for (FieldSample& s : normalized) s.value = (s.value - stats.mean) / stats.std;

    Trainer trainer(cfg);
    TrainResult result;
    result.log.reserve(static_cast<std::size_t>(cfg.epochs) * cfg.instances_per_epoch);

    const std::size_t n = normalized.size();
    const std::size_t isz = std::min<std::size_t>(static_cast<std::size_t>(cfg.instance_size), n);
    std::vector<FieldSample> sub(isz);
    for (int e = 0; e < cfg.epochs; ++e) {
        double epoch_loss = 0.0;
        for (int b = 0; b < cfg.instances_per_epoch; ++b) {
            const std::vector<std::size_t> idx = draw_subset(trainer.rng(), n, isz);
            for (std::size_t i = 0; i < isz; ++i) sub[i] = normalized[idx[i]];
            const ScatterSet inst =
                make_instance(sub, cfg.cond_fraction, trainer.rng().next_u64());
            const StepLoss sl = trainer.train_step(inst);
            epoch_loss += sl.loss_total;
            result.log.push_back(sl);
        }
        if (on_epoch) on_epoch(e + 1, epoch_loss / cfg.instances_per_epoch);
    }

    result.checkpoint.params = trainer.params();
    result.checkpoint.norm = stats;
    result.checkpoint.T = cfg.T;
    result.checkpoint.beta_start = cfg.beta_start;
    result.checkpoint.beta_end = cfg.beta_end;
    result.checkpoint.k_min = cfg.k_min;
    result.checkpoint.k_max = cfg.k_max;
    result.checkpoint.full_attention = cfg.disable_mask;
    return result;
}

void save_loss_log(const std::string& path, const std::vector<StepLoss>& log) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("save_loss_log: cannot open " + path);
    out << "step,loss_eps,loss_kriging,loss_total\n";
    char buf[160];
    for (std::size_t i = 0; i < log.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", i + 1, log[i].loss_eps,
                      log[i].loss_kriging, log[i].loss_total);
        out << buf;
    }
    if (!out) throw DataError("save_loss_log: write failed for " + path);
}

std::vector<int> strided_steps(int T, int steps) {
    if (T < 1) throw ConfigError("strided_steps: T must be at least 1");
    if (steps < 1 || steps > T)
        throw ConfigError("strided_steps: steps must lie in [1, T]");
    if (steps == 1) return {T};
    std::vector<int> taus(static_cast<std::size_t>(steps));
    for (int j = 1; j <= steps; ++j)
        taus[j - 1] = static_cast<int>(
            std::llround(1.0 + static_cast<double>(j - 1) * (T - 1) / (steps - 1)));
    // spacing >= 1 guarantees strict increase; endpoints land exactly
    return taus;
}

std::vector<double> interpolate(const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                                const std::vector<GeoPoint>& m_ta, const Checkpoint& ckpt,
                                const SampleConfig& scfg) {
    if (m_co.empty()) throw DataError("interpolate: empty condition set");
    if (m_co.size() != x_co.size()) throw DimensionError("interpolate: condition length mismatch");
    if (m_ta.empty()) throw DataError("interpolate: empty target set");

    const NoiseSchedule full = make_schedule(ckpt.T, ckpt.beta_start, ckpt.beta_end);
    const std::vector<int> taus = strided_steps(ckpt.T, scfg.steps);

    // Sub-chain noise levels: beta'_j = 1 - abar(tau_j)/abar(tau_{j-1}).
    // The stride-1 chain reuses the original schedule so it matches the full
    // reverse process exactly.
    NoiseSchedule sub;
    if (scfg.steps == ckpt.T) {
        sub = full;
    } else {
        std::vector<double> betas(taus.size());
        double prev = 1.0;
        for (std::size_t j = 0; j < taus.size(); ++j) {
            const double ab = full.alpha_bar_at(taus[j]);
            betas[j] = 1.0 - ab / prev;
            prev = ab;
        }
        sub = schedule_from_betas(std::move(betas));
    }

    const std::vector<double> x_co_n = normalize_apply(x_co, ckpt.norm);
    const std::size_t n_ta = m_ta.size();
    Rng rng(scfg.seed);
    Tensor x(n_ta, 1);
    for (double& v : x.data()) v = rng.normal();

    const MaskScheduleConfig mcfg{ckpt.k_min, ckpt.k_max, ckpt.T};
    Tensor z = Tensor::zeros(n_ta, 1);
    for (int j = static_cast<int>(taus.size()); j >= 1; --j) {
        const int tau = taus[static_cast<std::size_t>(j) - 1];
        const ReceptiveMask mask = ckpt.full_attention
                                       ? ReceptiveMask::full(n_ta, m_co.size())
                                       : knn_mask(m_ta, m_co, k_for_step(tau, mcfg));
        Tape tape;
        const ParamVars pv = ParamVars::lift(tape, ckpt.params);
        const Var eps_hat =
            denoiser_forward(tape, pv, ckpt.params, m_co, x_co_n, m_ta, x.to_vector(), tau, mask);
        if (j > 1)
            for (double& v : z.data()) v = rng.normal();
        x = reverse_step(x, tape.value(eps_hat), j, sub, z);
    }
    return denormalize(x.to_vector(), ckpt.norm);
}

namespace {

struct EvalSplit {
    std::vector<GeoPoint> m_co;
    std::vector<double> x_co;
    std::vector<GeoPoint> m_ta;
    std::vector<double> y_true;
};

EvalSplit make_eval_split(const std::vector<FieldSample>& test_samples, double cond_fraction,
                          std::uint64_t seed) {
    const ScatterSet s = make_instance(test_samples, cond_fraction, seed);
    return {locations_of(s.observed), values_of(s.observed), locations_of(s.targets),
            values_of(s.targets)};
}

} // namespace

std::vector<VariantMetrics> ablate(const std::vector<FieldSample>& train_samples,
                                   const std::vector<FieldSample>& test_samples,
                                   const std::vector<std::string>& variants,
                                   const AblationConfig& cfg, const EpochCallback& on_epoch) {
    if (variants.empty()) throw ConfigError("ablate: no variants given");
    const EvalSplit ev = make_eval_split(test_samples, cfg.eval_cond_fraction, cfg.base.seed);

    std::vector<VariantMetrics> out;
    for (const std::string& name : variants) {
        TrainConfig tc = cfg.base;
        if (name == "full") {
        } else if (name == "no-mask") {
            tc.disable_mask = true;
        } else if (name == "no-kriging") {
            tc.disable_kriging = true;
        } else {
            throw ConfigError("ablate: unknown variant: " + name);
        }
        const TrainResult tr = train(train_samples, tc, on_epoch);
        const std::vector<double> pred =
            interpolate(ev.m_co, ev.x_co, ev.m_ta, tr.checkpoint, cfg.sample);
        out.push_back({name, compute_metrics(ev.y_true, pred)});
    }
    return out;
}

std::vector<SweepRow> sweep_steps(const Checkpoint& ckpt,
                                  const std::vector<FieldSample>& test_samples,
                                  double cond_fraction, const std::vector<int>& step_counts,
                                  std::uint64_t seed) {
    if (step_counts.empty()) throw ConfigError("sweep_steps: no step counts given");
    const EvalSplit ev = make_eval_split(test_samples, cond_fraction, seed);

    std::vector<SweepRow> rows;
    for (int steps : step_counts) {
        SampleConfig scfg;
        scfg.steps = steps;
        scfg.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<double> pred = interpolate(ev.m_co, ev.x_co, ev.m_ta, ckpt, scfg);
        const auto t1 = std::chrono::steady_clock::now();
        SweepRow row;
        row.steps = steps;
        row.metrics = compute_metrics(ev.y_true, pred);
        row.seconds = std::chrono::duration<double>(t1 - t0).count();
        rows.push_back(row);
    }
    return rows;
}

std::vector<KSweepRow> sweep_k(const std::vector<FieldSample>& train_samples,
                               const std::vector<FieldSample>& test_samples,
                               const std::vector<int>& k_max_values,
                               const std::vector<int>& k_min_values, const TrainConfig& base,
                               const SampleConfig& sample, double eval_cond_fraction,
                               const EpochCallback& on_epoch) {
    if (k_max_values.empty() || k_min_values.empty())
        throw ConfigError("sweep_k: empty endpoint list");
    const EvalSplit ev = make_eval_split(test_samples, eval_cond_fraction, base.seed);

    std::vector<KSweepRow> rows;
    for (int kmax : k_max_values) {
        for (int kmin : k_min_values) {
            TrainConfig tc = base;
            tc.k_max = kmax;
            tc.k_min = kmin;
            const TrainResult tr = train(train_samples, tc, on_epoch);
            const std::vector<double> pred =
                interpolate(ev.m_co, ev.x_co, ev.m_ta, tr.checkpoint, sample);
            rows.push_back({kmax, kmin, compute_metrics(ev.y_true, pred)});
        }
    }
    return rows;
}

} // namespace pdg
