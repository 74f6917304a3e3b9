// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "segt/errors.hpp"

namespace segt {

/// Dense row-major matrix. All kernels in this project run fixed-order
/// loops over it, so results are reproducible bit-for-bit across runs.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    T* row_data(std::size_t i) { return data_.data() + i * cols_; }
    const T* row_data(std::size_t i) const { return data_.data() + i * cols_; }
    std::span<T> row(std::size_t i) { return {row_data(i), cols_}; }
    std::span<const T> row(std::size_t i) const { return {row_data(i), cols_}; }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// out = a * b. Accumulation order over k is fixed (outer-product style),
/// independent of any grouping of the rows.
template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) {
        throw shape_error("matmul: inner dimensions differ");
    }
    Matrix<T> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T* dst = out.row_data(i);
        const T* arow = a.row_data(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T f = arow[k];
            const T* brow = b.row_data(k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                dst[j] += f * brow[j];
            }
        }
    }
    return out;
}

/// out = a * transpose(b), with b given as (m x k): out(i, j) = <a_i, b_j>.
template <class T>
Matrix<T> matmul_bt(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.cols()) {
        throw shape_error("matmul_bt: inner dimensions differ");
    }
    Matrix<T> out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const T* arow = a.row_data(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const T* brow = b.row_data(j);
            T acc{};
            for (std::size_t k = 0; k < a.cols(); ++k) {
                acc += arow[k] * brow[k];
            }
            out(i, j) = acc;
        }
    }
    return out;
}

/// out = transpose(a) * b.
template <class T>
Matrix<T> matmul_at(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows()) {
        throw shape_error("matmul_at: row counts differ");
    }
    Matrix<T> out(a.cols(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const T* arow = a.row_data(r);
        const T* brow = b.row_data(r);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const T f = arow[i];
            T* dst = out.row_data(i);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                dst[j] += f * brow[j];
            }
        }
    }
    return out;
}

template <class T>
void add_row_vector(Matrix<T>& m, std::span<const T> v) {
    if (v.size() != m.cols()) {
        throw shape_error("add_row_vector: length mismatch");
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        T* row = m.row_data(i);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row[j] += v[j];
        }
    }
}

template <class T>
void add_inplace(Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw shape_error("add_inplace: shape mismatch");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        a.data()[i] += b.data()[i];
    }
}

/// Column sums as a vector (used for bias gradients).
template <class T>
std::vector<T> column_sums(const Matrix<T>& m) {
    std::vector<T> out(m.cols(), T{});
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const T* row = m.row_data(i);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[j] += row[j];
        }
    }
    return out;
}

} // namespace segt
