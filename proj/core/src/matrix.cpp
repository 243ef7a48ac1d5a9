#include "lsxgc/matrix.hpp"

#include <cmath>

namespace lsxgc {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    const std::size_t r = a.rows(), k = a.cols(), c = b.cols();
    Matrix out(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        double* oi = out.row(i).data();
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = a(i, p);
            if (aip == 0.0) continue;
            const double* bp = b.row(p).data();
            for (std::size_t j = 0; j < c; ++j) oi[j] += aip * bp[j];
        }
    }
    return out;
}

Matrix matmul_abt(const Matrix& a, const Matrix& b) {
    const std::size_t r = a.rows(), c = b.rows();
    Matrix out(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out(i, j) = dot(a.row(i), b.row(j));
    return out;
}

Matrix gram(const Matrix& a) {
    const std::size_t n = a.rows();
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = dot(a.row(i), a.row(j));
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Matrix remove_row(const Matrix& a, std::size_t r) {
    Matrix out(a.rows() - 1, a.cols());
    for (std::size_t i = 0, o = 0; i < a.rows(); ++i) {
        if (i == r) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) out(o, j) = a(i, j);
        ++o;
    }
    return out;
}

Matrix remove_col(const Matrix& a, std::size_t c) {
    Matrix out(a.rows(), a.cols() - 1);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0, o = 0; j < a.cols(); ++j) {
            if (j == c) continue;
            out(i, o++) = a(i, j);
        }
    return out;
}

bool all_finite(const Matrix& a) {
    for (double v : a.storage())
        if (!std::isfinite(v)) return false;
    return true;
}

double mean(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

double population_variance(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const double mu = mean(v);
    double acc = 0.0;
    for (double x : v) {
        const double d = x - mu;
        acc += d * d;
    }
    return acc / static_cast<double>(v.size());
}

} // namespace lsxgc
