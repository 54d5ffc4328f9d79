#include "pdg/losses.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace pdg {

double epsilon_loss(const Tensor& eps_true, const Tensor& eps_hat) {
    if (!eps_true.same_shape(eps_hat)) throw DimensionError("epsilon_loss: shape mismatch");
    if (eps_true.numel() == 0) throw DimensionError("epsilon_loss: empty tensors");
    double s = 0.0;
    for (std::size_t i = 0; i < eps_true.numel(); ++i) {
        const double d = eps_true[i] - eps_hat[i];
        s += d * d;
    }
    return s / static_cast<double>(eps_true.numel());
}

Var epsilon_loss(Tape& tape, const Tensor& eps_true, Var eps_hat) {
    if (!eps_true.same_shape(tape.value(eps_hat)))
        throw DimensionError("epsilon_loss: shape mismatch");
    const Var truth = tape.leaf(eps_true);
    const Var diff = tape.sub(truth, eps_hat);
    return tape.mean(tape.mul(diff, diff));
}

double variogram(double xi, double xj) {
    const double d = xi - xj;
    return 0.5 * d * d;
}

std::vector<std::vector<std::size_t>> nearest_neighbor_sets(const std::vector<GeoPoint>& points,
                                                            int n) {
    if (n < 1) throw ConfigError("nearest_neighbor_sets: n must be >= 1");
    const std::size_t count = points.size();
    if (static_cast<std::size_t>(n) >= count)
        throw ConfigError("nearest_neighbor_sets: need more points than neighbors");
    std::vector<std::vector<std::size_t>> sets(count);
    std::vector<std::size_t> order(count);
    std::vector<double> dist(count);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) dist[j] = squared_distance(points[i], points[j]);
        std::iota(order.begin(), order.end(), std::size_t{0});
        order.erase(order.begin() + static_cast<std::ptrdiff_t>(i)); // a point is not its own neighbor
        std::partial_sort(order.begin(), order.begin() + n, order.end(),
                          [&dist](std::size_t a, std::size_t b) {
                              return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
                          });
        sets[i].assign(order.begin(), order.begin() + n);
        order.push_back(0); // restore size for the next iota
    }
    return sets;
}

double kriging_loss(const std::vector<double>& x_true, const std::vector<double>& x_pred,
                    const std::vector<GeoPoint>& m_ta, const KrigingLossConfig& cfg) {
    const std::size_t n = m_ta.size();
    if (x_true.size() != n || x_pred.size() != n)
        throw DimensionError("kriging_loss: value/location length mismatch");
    if (n < 2) throw DataError("kriging_loss: need at least 2 targets");
    const auto sets = nearest_neighbor_sets(m_ta, cfg.n_neighbors);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j : sets[i]) {
            const double gap = variogram(x_pred[i], x_pred[j]) - variogram(x_true[i], x_true[j]);
            acc += gap * gap;
        }
        total += acc / static_cast<double>(cfg.n_neighbors);
    }
    return total / static_cast<double>(n);
}

Var kriging_loss(Tape& tape, const std::vector<double>& x_true, Var x_pred,
                 const std::vector<GeoPoint>& m_ta, const KrigingLossConfig& cfg) {
    const std::size_t n = m_ta.size();
    const Tensor& pred = tape.value(x_pred);
    if (x_true.size() != n || pred.rows() != n || pred.cols() != 1)
        throw DimensionError("kriging_loss: expected n x 1 predictions");
    if (n < 2) throw DataError("kriging_loss: need at least 2 targets");
    const auto sets = nearest_neighbor_sets(m_ta, cfg.n_neighbors);

    // Flatten every (i, j in N(i)) pair, then express the loss with gather
    // and elementwise ops so the gradient flows back through x_pred.
    std::vector<std::size_t> rows_i, rows_j;
    std::vector<double> gamma_true;
    rows_i.reserve(n * static_cast<std::size_t>(cfg.n_neighbors));
    rows_j.reserve(rows_i.capacity());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : sets[i]) {
            rows_i.push_back(i);
            rows_j.push_back(j);
            gamma_true.push_back(variogram(x_true[i], x_true[j]));
        }

    const Var xi = tape.gather_rows(x_pred, rows_i);
    const Var xj = tape.gather_rows(x_pred, rows_j);
    const Var diff = tape.sub(xi, xj);
    const Var gamma_pred = tape.scale(tape.mul(diff, diff), 0.5);
    const Var gap = tape.sub(gamma_pred, tape.leaf(Tensor::column(gamma_true)));
    const Var sq = tape.mul(gap, gap);
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(cfg.n_neighbors));
    return tape.scale(tape.sum(sq), scale);
}

double total_loss(double l_eps, double l_kriging, double lambda) {
    if (lambda < 0.0) throw ConfigError("total_loss: lambda must be >= 0");
    return l_eps + lambda * l_kriging;
}

Var total_loss(Tape& tape, Var l_eps, Var l_kriging, double lambda) {
    if (lambda < 0.0) throw ConfigError("total_loss: lambda must be >= 0");
    return tape.add(l_eps, tape.scale(l_kriging, lambda));
}

} // namespace pdg
