#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pdg/mask.hpp"
#include "pdg/tensor.hpp"

namespace pdg {

/// Handle to a value recorded on a Tape.
struct Var {
    std::uint32_t id = 0;
};

/// Reverse-mode tape. Operations record their output and a local gradient
/// rule; backward() sweeps the recorded nodes once, newest to oldest, and
/// accumulates dLoss/dX into every node. One tape per forward pass,
/// single-writer; Tensors handed in are copied (value semantics).
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    /// Record an input (parameter or constant).
    Var leaf(Tensor value);

    const Tensor& value(Var v) const { return nodes_[v.id].value; }

    /// Gradient of the last backward() loss w.r.t. this node.
    const Tensor& grad(Var v) const;

    // --- recorded operations ------------------------------------------------

    Var matmul(Var a, Var b);    // [m x k] * [k x n]
    Var matmul_nt(Var a, Var b); // a * b^T, b given as [n x k]
    Var add(Var a, Var b);       // same shape
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);       // elementwise
    Var add_rowvec(Var a, Var rowvec); // [n x d] + broadcast [1 x d]
    Var scale(Var a, double s);
    Var silu(Var a); // x * sigmoid(x)
    Var gather_rows(Var a, std::vector<std::size_t> row_ids);
    Var sum(Var a);  // -> 1x1
    Var mean(Var a); // -> 1x1

    /// Row-wise softmax over the allowed entries only. Masked entries get
    /// exactly zero weight; each row is stabilized by its allowed max.
    /// A row with no allowed entry is an error.
    Var softmax_masked(Var scores, const ReceptiveMask& mask);

    /// Accumulate dLoss/dX for every recorded node. loss must be 1x1.
    void backward(Var loss);

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Tensor value;
        Tensor grad;
        std::function<void(Tape&)> backprop; // empty for leaves
    };

    Var push(Tensor value, std::function<void(Tape&)> backprop);
    Node& node(Var v) { return nodes_[v.id]; }

    std::vector<Node> nodes_;
    bool grads_valid_ = false;
};

/// One Adam moment pair for a single parameter tensor.
struct AdamState {
    Tensor m;
    Tensor v;
    long step = 0;
};

/// Standard Adam update with bias correction, in place. Deterministic.
void adam_step(Tensor& param, const Tensor& grad, AdamState& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

/// Applies adam_step across a fixed list of parameters with one shared
/// step counter.
class Adam {
public:
    explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

    void step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads);

    double learning_rate() const { return lr_; }

private:
    double lr_, beta1_, beta2_, eps_;
    std::vector<AdamState> states_;
};

} // namespace pdg
