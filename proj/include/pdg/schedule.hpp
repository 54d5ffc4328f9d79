#pragma once

#include <vector>

#include "pdg/autodiff.hpp"
#include "pdg/tensor.hpp"

namespace pdg {

/// Per-step noise levels and their cumulative products. Immutable after
/// construction; step indices t run 1..T.
struct NoiseSchedule {
    int T = 0;
    std::vector<double> beta;      // beta[t-1]
    std::vector<double> alpha;     // 1 - beta
    std::vector<double> alpha_bar; // running product of alpha

    double beta_at(int t) const { return beta[check(t)]; }
    double alpha_at(int t) const { return alpha[check(t)]; }
    double alpha_bar_at(int t) const { return alpha_bar[check(t)]; }

private:
    std::size_t check(int t) const;
};

/// Linear beta spacing from beta_start to beta_end over T steps.
NoiseSchedule make_schedule(int T, double beta_start, double beta_end);

/// Schedule from an explicit beta table (used for strided sub-chains).
NoiseSchedule schedule_from_betas(std::vector<double> betas);

/// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) eps
Tensor forward_noise(const Tensor& x0, int t, const Tensor& eps, const NoiseSchedule& s);

/// x0_hat = (x_t - sqrt(1 - abar_t) eps_hat) / sqrt(abar_t)
Tensor recover_x0(const Tensor& xt, const Tensor& eps_hat, int t, const NoiseSchedule& s);

/// Tape form of recover_x0: differentiable w.r.t. eps_hat, xt held constant.
Var recover_x0(Tape& tape, const Tensor& xt, Var eps_hat, int t, const NoiseSchedule& s);

/// One reverse step with fixed variance sigma_t^2 = beta_t:
/// x_{t-1} = x_t / sqrt(alpha_t) - (1 - alpha_t) / (sqrt(1-abar_t) sqrt(alpha_t)) eps_hat
///           + sigma_t z
/// z is ignored at t == 1 (no noise on the final step).
Tensor reverse_step(const Tensor& xt, const Tensor& eps_hat, int t, const NoiseSchedule& s,
                    const Tensor& z);

} // namespace pdg
