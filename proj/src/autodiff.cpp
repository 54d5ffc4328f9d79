#include "pdg/autodiff.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace pdg {

namespace {

// C += A * B
void accum_matmul(Tensor& c, const Tensor& a, const Tensor& b) {
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double av = a(i, p);
            if (av == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += av * b(p, j);
        }
    }
}

// C += A * B^T, b given as [n x k]
void accum_matmul_nt(Tensor& c, const Tensor& a, const Tensor& b) {
    const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) s += a(i, p) * b(j, p);
            c(i, j) += s;
        }
    }
}

// C += A^T * B, a given as [k x m]
void accum_matmul_tn(Tensor& c, const Tensor& a, const Tensor& b) {
    const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t i = 0; i < m; ++i) {
            const double av = a(p, i);
            if (av == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += av * b(p, j);
        }
    }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace

Var Tape::push(Tensor value, std::function<void(Tape&)> backprop) {
    nodes_.push_back(Node{std::move(value), Tensor{}, std::move(backprop)});
    grads_valid_ = false;
    return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::leaf(Tensor value) { return push(std::move(value), nullptr); }

const Tensor& Tape::grad(Var v) const {
    if (!grads_valid_) throw Error("grad: backward() has not run on this tape");
    return nodes_[v.id].grad;
}

Var Tape::matmul(Var a, Var b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (av.cols() != bv.rows())
        throw DimensionError("matmul: inner dimensions disagree (" + std::to_string(av.rows()) +
                             "x" + std::to_string(av.cols()) + " by " + std::to_string(bv.rows()) +
                             "x" + std::to_string(bv.cols()) + ")");
    Tensor out(av.rows(), bv.cols());
    accum_matmul(out, av, bv);
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(std::move(out), [a, b, self](Tape& t) {
        const Tensor& g = t.node(self).grad;
        accum_matmul_nt(t.node(a).grad, g, t.node(b).value); // dA += G * B^T
        accum_matmul_tn(t.node(b).grad, t.node(a).value, g); // dB += A^T * G
    });
}

Var Tape::matmul_nt(Var a, Var b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (av.cols() != bv.cols())
        throw DimensionError("matmul_nt: inner dimensions disagree");
    Tensor out(av.rows(), bv.rows());
    accum_matmul_nt(out, av, bv);
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(std::move(out), [a, b, self](Tape& t) {
        const Tensor& g = t.node(self).grad;
        accum_matmul(t.node(a).grad, g, t.node(b).value);    // dA += G * B
        accum_matmul_tn(t.node(b).grad, g, t.node(a).value); // dB += G^T * A
    });
}

Var Tape::add(Var a, Var b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (!av.same_shape(bv)) throw DimensionError("add: shape mismatch");
    Tensor out = av;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] += bv[i];
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(std::move(out), [a, b, self](Tape& t) {
        const Tensor& g = t.node(self).grad;
        Tensor& ga = t.node(a).grad;
        Tensor& gb = t.node(b).grad;
        for (std::size_t i = 0; i < g.numel(); ++i) {
            ga[i] += g[i];
            gb[i] += g[i];
        }
    });
}

Var Tape::sub(Var a, Var b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (!av.same_shape(bv)) throw DimensionError("sub: shape mismatch");
    Tensor out = av;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] -= bv[i];
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(std::move(out), [a, b, self](Tape& t) {
        const Tensor& g = t.node(self).grad;
        Tensor& ga = t.node(a).grad;
        Tensor& gb = t.node(b).grad;
        for (std::size_t i = 0; i < g.numel(); ++i) {
            ga[i] += g[i];
            gb[i] -= g[i];
        }
    });
}

Var Tape::mul(Var a, Var b) {
    const Tensor& av = value(a);
    const Tensor& bv = value(b);
    if (!av.same_shape(bv)) throw DimensionError("mul: shape mismatch");
    Tensor out = av;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] *= bv[i];
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(std::move(out), [a, b, self](Tape& t) {
        const Tensor& g = t.node(self).grad;
        const Tensor& av2 = t.node(a).value;
        const Tensor& bv2 = t.node(b).value;
        Tensor& ga = t.node(a).grad;
        Tensor& gb = t.node(b).grad;
        for (std::size_t i = 0; i < g.numel(); ++i) {
            ga[i] += g[i] * bv2[i];
            gb[i] += g[i] * av2[i];
        }
    });
}

Var Tape::add_rowvec(Var a, Var rowvec) {
    const Tensor& av = value(a);
    const Tensor& rv = value(rowvec);
    if (rv.rows() != 1 || rv.cols() != av.cols())
        throw DimensionError("add_rowvec: broadcast shape mismatch");
    Tensor out = av;
    for (std::size_t i = 0; i < av.rows(); ++i)
        for (std::size_t j = 0; j < av.cols(); ++j) out(i, j) += rv(0, j);
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(std::move(out), [a, rowvec, self](Tape& t) {
        const Tensor& g = t.node(self).grad;
        Tensor& ga = t.node(a).grad;
        Tensor& gr = t.node(rowvec).grad;
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j) {
                ga(i, j) += g(i, j);
                gr(0, j) += g(i, j);
            }
    });
}

Var Tape::scale(Var a, double s) {
    Tensor out = value(a);
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] *= s;
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(std::move(out), [a, s, self](Tape& t) {
        const Tensor& g = t.node(self).grad;
        Tensor& ga = t.node(a).grad;
        for (std::size_t i = 0; i < g.numel(); ++i) ga[i] += s * g[i];
    });
}

Var Tape::silu(Var a) {
    const Tensor& av = value(a);
    Tensor out = av;
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = av[i] * sigmoid(av[i]);
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(std::move(out), [a, self](Tape& t) {
        const Tensor& g = t.node(self).grad;
        const Tensor& x = t.node(a).value;
        Tensor& ga = t.node(a).grad;
        for (std::size_t i = 0; i < g.numel(); ++i) {
            const double s = sigmoid(x[i]);
            ga[i] += g[i] * (s + x[i] * s * (1.0 - s));
        }
    });
}

Var Tape::gather_rows(Var a, std::vector<std::size_t> row_ids) {
    const Tensor& av = value(a);
    Tensor out(row_ids.size(), av.cols());
    for (std::size_t i = 0; i < row_ids.size(); ++i) {
        if (row_ids[i] >= av.rows()) throw DimensionError("gather_rows: row index out of range");
        for (std::size_t j = 0; j < av.cols(); ++j) out(i, j) = av(row_ids[i], j);
    }
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(std::move(out), [a, ids = std::move(row_ids), self](Tape& t) {
        const Tensor& g = t.node(self).grad;
        Tensor& ga = t.node(a).grad;
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j) ga(ids[i], j) += g(i, j);
    });
}

Var Tape::sum(Var a) {
    const Tensor& av = value(a);
    double s = 0.0;
    for (std::size_t i = 0; i < av.numel(); ++i) s += av[i];
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(Tensor::scalar(s), [a, self](Tape& t) {
        const double g = t.node(self).grad[0];
        Tensor& ga = t.node(a).grad;
        for (std::size_t i = 0; i < ga.numel(); ++i) ga[i] += g;
    });
}

Var Tape::mean(Var a) {
    const Tensor& av = value(a);
    if (av.numel() == 0) throw DimensionError("mean: empty tensor");
    double s = 0.0;
    for (std::size_t i = 0; i < av.numel(); ++i) s += av[i];
    const double inv = 1.0 / static_cast<double>(av.numel());
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(Tensor::scalar(s * inv), [a, inv, self](Tape& t) {
        const double g = t.node(self).grad[0] * inv;
        Tensor& ga = t.node(a).grad;
        for (std::size_t i = 0; i < ga.numel(); ++i) ga[i] += g;
    });
}

Var Tape::softmax_masked(Var scores, const ReceptiveMask& mask) {
    const Tensor& sv = value(scores);
    if (sv.rows() != mask.n_ta || sv.cols() != mask.n_co)
        throw DimensionError("softmax_masked: mask shape mismatch");
    const std::size_t n = sv.rows(), m = sv.cols();
    Tensor out(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        double mx = 0.0;
        bool any = false;
        for (std::size_t j = 0; j < m; ++j) {
            if (!mask.allowed(i, j)) continue;
            if (!any || sv(i, j) > mx) mx = sv(i, j);
            any = true;
        }
        if (!any)
            throw NumericError("softmax_masked: row " + std::to_string(i) +
                               " has no allowed entries");
        double z = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (!mask.allowed(i, j)) continue; // stays exactly 0
            const double e = std::exp(sv(i, j) - mx);
            out(i, j) = e;
            z += e;
        }
        const double inv = 1.0 / z;
        for (std::size_t j = 0; j < m; ++j)
            if (mask.allowed(i, j)) out(i, j) *= inv;
    }
    const Var self{static_cast<std::uint32_t>(nodes_.size())};
    return push(std::move(out), [scores, mask, self](Tape& t) {
        // row-wise softmax Jacobian restricted to the allowed set:
        // ds_k = p_k * (g_k - sum_j g_j p_j)
        const Tensor& g = t.node(self).grad;
        const Tensor& p = t.node(self).value;
        Tensor& gs = t.node(scores).grad;
        for (std::size_t i = 0; i < p.rows(); ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < p.cols(); ++j)
                if (mask.allowed(i, j)) dot += g(i, j) * p(i, j);
            for (std::size_t j = 0; j < p.cols(); ++j)
                if (mask.allowed(i, j)) gs(i, j) += p(i, j) * (g(i, j) - dot);
        }
    });
}

void Tape::backward(Var loss) {
    if (!value(loss).is_scalar())
        throw DimensionError("backward: loss must be a scalar (1x1)");
    for (Node& n : nodes_) n.grad = Tensor(n.value.rows(), n.value.cols());
    nodes_[loss.id].grad[0] = 1.0;
    // Reverse creation order is a topological order: operands precede users.
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        if (nodes_[i].backprop) nodes_[i].backprop(*this);
    }
    grads_valid_ = true;
}

void adam_step(Tensor& param, const Tensor& grad, AdamState& state, double lr, double beta1,
               double beta2, double eps) {
    if (lr <= 0.0) throw ConfigError("adam_step: learning rate must be positive");
    if (!param.same_shape(grad)) throw DimensionError("adam_step: param/grad shape mismatch");
    if (state.m.numel() == 0) {
        state.m = Tensor(param.rows(), param.cols());
        state.v = Tensor(param.rows(), param.cols());
    }
    if (!state.m.same_shape(param)) throw DimensionError("adam_step: state shape mismatch");
    state.step += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < param.numel(); ++i) {
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grad[i];
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grad[i] * grad[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

Adam::Adam(double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    if (lr <= 0.0) throw ConfigError("Adam: learning rate must be positive");
}

void Adam::step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads) {
    if (params.size() != grads.size()) throw DimensionError("Adam::step: list size mismatch");
    if (states_.empty()) states_.resize(params.size());
    if (states_.size() != params.size()) throw DimensionError("Adam::step: parameter count changed");
    for (std::size_t i = 0; i < params.size(); ++i)
        adam_step(*params[i], *grads[i], states_[i], lr_, beta1_, beta2_, eps_);
}

} // namespace pdg
