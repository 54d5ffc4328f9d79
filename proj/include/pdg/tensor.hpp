#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "pdg/errors.hpp"

namespace pdg {

/// Dense row-major matrix of 64-bit reals. Vectors are n x 1 columns or
/// 1 x d rows; scalars are 1 x 1. Value semantics, safe to share by copy.
class Tensor {
public:
    Tensor() = default;

    Tensor(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Tensor zeros(std::size_t rows, std::size_t cols) { return Tensor(rows, cols); }

    static Tensor full(std::size_t rows, std::size_t cols, double v) {
        Tensor t(rows, cols);
        for (double& x : t.data_) x = v;
        return t;
    }

    static Tensor scalar(double v) {
        Tensor t(1, 1);
        t.data_[0] = v;
        return t;
    }

    static Tensor column(const std::vector<double>& values) {
        Tensor t(values.size(), 1);
        t.data_ = values;
        return t;
    }

    static Tensor row(const std::vector<double>& values) {
        Tensor t(1, values.size());
        t.data_ = values;
        return t;
    }

    static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.begin()->size() : 0;
        Tensor t(r, c);
        std::size_t i = 0;
        for (const auto& rv : rows) {
            if (rv.size() != c) throw DimensionError("from_rows: ragged rows");
            for (double v : rv) t.data_[i++] = v;
        }
        return t;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t numel() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double& operator[](std::size_t k) { return data_[k]; }
    double operator[](std::size_t k) const { return data_[k]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool is_scalar() const { return rows_ == 1 && cols_ == 1; }

    double scalar_value() const {
        if (!is_scalar()) throw DimensionError("scalar_value: tensor is not 1x1");
        return data_[0];
    }

    std::vector<double> to_vector() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace pdg
