#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lsxgc {

/// Dense row-major double matrix. Plain value type: copyable, movable,
/// immutable-by-convention once handed to analysis code.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);

/// C = A * B.
Matrix matmul(const Matrix& a, const Matrix& b);

/// C = A * B^T (rows of both operands are contiguous, so this is the
/// cache-friendly product used for Gram and cross-Gram matrices).
Matrix matmul_abt(const Matrix& a, const Matrix& b);

/// G = A * A^T, exploiting symmetry.
Matrix gram(const Matrix& a);

Matrix transpose(const Matrix& a);

Matrix remove_row(const Matrix& a, std::size_t r);
Matrix remove_col(const Matrix& a, std::size_t c);

bool all_finite(const Matrix& a);

/// Mean of a row/vector.
double mean(std::span<const double> v);

/// Population variance (1/n denominator) around the sample mean.
double population_variance(std::span<const double> v);

} // namespace lsxgc
