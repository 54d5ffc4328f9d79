#pragma once

#include <vector>

#include "pdg/autodiff.hpp"
#include "pdg/geometry.hpp"
#include "pdg/tensor.hpp"

namespace pdg {

/// Settings for the variogram-matching loss. n_neighbors is the size of each
/// target's local neighborhood in value space (distinct from the diffusion
/// step count); lambda weights the term in the total loss.
struct KrigingLossConfig {
    int n_neighbors = 8;
    double lambda = 0.1;
};

/// Mean squared error between true and predicted noise, plain form.
double epsilon_loss(const Tensor& eps_true, const Tensor& eps_hat);

/// Tape form, differentiable w.r.t. eps_hat.
Var epsilon_loss(Tape& tape, const Tensor& eps_true, Var eps_hat);

/// Empirical semivariance of a value pair: half the squared difference.
double variogram(double xi, double xj);

/// For each point, the indices of its n nearest other points by Euclidean
/// distance, ties broken by lower index. Shared by the loss and its tests.
std::vector<std::vector<std::size_t>> nearest_neighbor_sets(const std::vector<GeoPoint>& points,
                                                            int n);

/// Variogram-matching loss: mean over targets of the mean squared gap
/// between predicted and true pairwise semivariances over each target's
/// neighborhood. Plain form.
double kriging_loss(const std::vector<double>& x_true, const std::vector<double>& x_pred,
                    const std::vector<GeoPoint>& m_ta, const KrigingLossConfig& cfg);

/// Tape form, differentiable w.r.t. x_pred (an n x 1 column on the tape).
Var kriging_loss(Tape& tape, const std::vector<double>& x_true, Var x_pred,
                 const std::vector<GeoPoint>& m_ta, const KrigingLossConfig& cfg);

/// l_eps + lambda * l_kriging
double total_loss(double l_eps, double l_kriging, double lambda);
Var total_loss(Tape& tape, Var l_eps, Var l_kriging, double lambda);

} // namespace pdg
