#include "pdg/schedule.hpp"

#include <cmath>
#include <string>

namespace pdg {

std::size_t NoiseSchedule::check(int t) const {
    if (t < 1 || t > T)
        throw NumericError("schedule: step " + std::to_string(t) + " outside [1," +
                           std::to_string(T) + "]");
    return static_cast<std::size_t>(t - 1);
}

NoiseSchedule make_schedule(int T, double beta_start, double beta_end) {
    if (T < 1) throw ConfigError("make_schedule: T must be >= 1");
    if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0))
        throw ConfigError("make_schedule: need 0 < beta_start <= beta_end < 1");
    std::vector<double> betas(static_cast<std::size_t>(T));
    for (int t = 1; t <= T; ++t) {
        const double frac = (T == 1) ? 0.0 : static_cast<double>(t - 1) / (T - 1);
        betas[static_cast<std::size_t>(t - 1)] = beta_start + frac * (beta_end - beta_start);
    }
    return schedule_from_betas(std::move(betas));
}

NoiseSchedule schedule_from_betas(std::vector<double> betas) {
    if (betas.empty()) throw ConfigError("schedule_from_betas: empty beta table");
    NoiseSchedule s;
    s.T = static_cast<int>(betas.size());
    s.beta = std::move(betas);
    s.alpha.resize(s.beta.size());
    s.alpha_bar.resize(s.beta.size());
    double prod = 1.0;
    for (std::size_t i = 0; i < s.beta.size(); ++i) {
        if (!(s.beta[i] > 0.0 && s.beta[i] < 1.0))
            throw ConfigError("schedule_from_betas: beta out of (0,1) at step " +
                              std::to_string(i + 1));
        s.alpha[i] = 1.0 - s.beta[i];
        prod *= s.alpha[i];
        s.alpha_bar[i] = prod;
    }
    return s;
}

Tensor forward_noise(const Tensor& x0, int t, const Tensor& eps, const NoiseSchedule& s) {
    if (!x0.same_shape(eps)) throw DimensionError("forward_noise: x0/eps shape mismatch");
    const double ab = s.alpha_bar_at(t);
    const double c0 = std::sqrt(ab);
    const double ce = std::sqrt(1.0 - ab);
    Tensor out = x0;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = c0 * x0[i] + ce * eps[i];
    return out;
}

Tensor recover_x0(const Tensor& xt, const Tensor& eps_hat, int t, const NoiseSchedule& s) {
    if (!xt.same_shape(eps_hat)) throw DimensionError("recover_x0: shape mismatch");
    const double ab = s.alpha_bar_at(t);
    const double inv = 1.0 / std::sqrt(ab);
    const double ce = std::sqrt(1.0 - ab);
    Tensor out = xt;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = (xt[i] - ce * eps_hat[i]) * inv;
    return out;
}

Var recover_x0(Tape& tape, const Tensor& xt, Var eps_hat, int t, const NoiseSchedule& s) {
    if (!xt.same_shape(tape.value(eps_hat))) throw DimensionError("recover_x0: shape mismatch");
    const double ab = s.alpha_bar_at(t);
    const double inv = 1.0 / std::sqrt(ab);
    const double ce = std::sqrt(1.0 - ab);
    Tensor xt_scaled = xt;
    for (std::size_t i = 0; i < xt_scaled.numel(); ++i) xt_scaled[i] *= inv;
    const Var base = tape.leaf(std::move(xt_scaled));
    return tape.add(base, tape.scale(eps_hat, -ce * inv));
}

Tensor reverse_step(const Tensor& xt, const Tensor& eps_hat, int t, const NoiseSchedule& s,
                    const Tensor& z) {
    if (!xt.same_shape(eps_hat)) throw DimensionError("reverse_step: shape mismatch");
    const double a = s.alpha_at(t);
    const double ab = s.alpha_bar_at(t);
    const double inv_sqrt_a = 1.0 / std::sqrt(a);
    const double coef_eps = (1.0 - a) / (std::sqrt(1.0 - ab) * std::sqrt(a));
    const double sigma = (t == 1) ? 0.0 : std::sqrt(s.beta_at(t));
    if (sigma != 0.0 && !xt.same_shape(z)) throw DimensionError("reverse_step: z shape mismatch");
    Tensor out = xt;
    for (std::size_t i = 0; i < out.numel(); ++i) {
        out[i] = inv_sqrt_a * xt[i] - coef_eps * eps_hat[i];
        if (sigma != 0.0) out[i] += sigma * z[i];
    }
    return out;
}

} // namespace pdg
