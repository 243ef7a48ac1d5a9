#include "lsxgc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lsxgc/errors.hpp"

namespace lsxgc {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) acc += a(i, j) * a(i, j);
    return std::sqrt(2.0 * acc);
}

double frobenius_norm(const Matrix& a) {
    double acc = 0.0;
    for (double v : a.storage()) acc += v * v;
    return std::sqrt(acc);
}

} // namespace

SymmetricEigen jacobi_eigendecomposition(const Matrix& sym) {
    const std::size_t n = sym.rows();
    if (n == 0 || sym.cols() != n) throw DimensionError("jacobi: matrix must be square");

    Matrix a = sym;
    Matrix v = Matrix::identity(n);
    const double scale = std::max(frobenius_norm(a), 1.0);
    const double tol = 1e-14 * scale;

    for (int sweep = 0; sweep < 64 && off_diagonal_norm(a) > tol; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(p, k) = a(k, p);
                    a(k, q) = s * akp + c * akq;
                    a(q, k) = a(k, q);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

PcaResult pca_fit(const TimeSeriesEnsemble& x, std::size_t p) {
    const std::size_t n = x.series_count();
    const std::size_t t = x.sample_count();
    if (p < 1 || p > std::min(n, t - 1))
        throw DimensionError("pca_fit: p=" + std::to_string(p) + " outside [1, min(N, T-1)] for N=" +
                             std::to_string(n) + ", T=" + std::to_string(t));

    PcaResult out;
    out.input_row_means.resize(n);
    Matrix centered(n, t);
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = mean(x.data.row(i));
        out.input_row_means[i] = mu;
        for (std::size_t j = 0; j < t; ++j) centered(i, j) = x.data(i, j) - mu;
    }

    Matrix cov = gram(centered);
    const double inv_t = 1.0 / static_cast<double>(t);
    for (double& v : cov.storage()) v *= inv_t;

    const SymmetricEigen eig = jacobi_eigendecomposition(cov);

    out.coefficients = Matrix(p, n);
    out.explained_variance.resize(p);
    for (std::size_t r = 0; r < p; ++r) {
        out.explained_variance[r] = std::max(eig.values[r], 0.0);
        // Largest-magnitude entry positive, ties to the lowest index.
        std::size_t arg = 0;
        double best = std::abs(eig.vectors(0, r));
        for (std::size_t i = 1; i < n; ++i) {
            const double m = std::abs(eig.vectors(i, r));
            if (m > best) {
                best = m;
                arg = i;
            }
        }
        const double flip = eig.vectors(arg, r) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) out.coefficients(r, i) = flip * eig.vectors(i, r);
    }

    out.components = matmul(out.coefficients, centered);
    return out;
}

AffineFit least_squares_affine(const Matrix& design, const Matrix& targets, double ridge) {
    const std::size_t d = design.rows();
    const std::size_t t_eff = design.cols();
    const std::size_t n_out = targets.rows();
    if (d < 1 || t_eff < 1) throw DimensionError("least_squares_affine: empty design");
    if (targets.cols() != t_eff)
        throw DimensionError("least_squares_affine: design/target sample counts differ");
    if (!all_finite(design) || !all_finite(targets) || !std::isfinite(ridge))
        throw NumericalError("least_squares_affine: non-finite input");
    if (ridge < 0.0) throw NumericalError("least_squares_affine: negative ridge");

    std::vector<double> design_mean(d), target_mean(n_out);
    Matrix dc(d, t_eff), tc(n_out, t_eff);
    for (std::size_t i = 0; i < d; ++i) {
        design_mean[i] = mean(design.row(i));
        for (std::size_t j = 0; j < t_eff; ++j) dc(i, j) = design(i, j) - design_mean[i];
    }
    for (std::size_t i = 0; i < n_out; ++i) {
        target_mean[i] = mean(targets.row(i));
        for (std::size_t j = 0; j < t_eff; ++j) tc(i, j) = targets(i, j) - target_mean[i];
    }

    Matrix g = gram(dc); // d x d
    for (std::size_t i = 0; i < d; ++i) g(i, i) += ridge;
    const Matrix cross = matmul_abt(tc, dc); // n_out x d

    const LdltFactor factor(g);
    AffineFit out;
    out.coefficients = Matrix(n_out, d);
    out.bias.resize(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        const std::vector<double> ai = factor.solve(cross.row(i));
        double b = target_mean[i];
        for (std::size_t k = 0; k < d; ++k) {
            out.coefficients(i, k) = ai[k];
            b -= ai[k] * design_mean[k];
        }
        out.bias[i] = b;
    }

    out.residuals = Matrix(n_out, t_eff);
    for (std::size_t i = 0; i < n_out; ++i) {
        const auto a_row = out.coefficients.row(i);
        for (std::size_t j = 0; j < t_eff; ++j) {
            double pred = out.bias[i];
            for (std::size_t k = 0; k < d; ++k) pred += a_row[k] * design(k, j);
            out.residuals(i, j) = targets(i, j) - pred;
        }
    }
    return out;
}

LdltFactor::LdltFactor(const Matrix& sym) {
    const std::size_t n = sym.rows();
    lower_ = Matrix(n, n);
    diag_.resize(n);

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(sym(i, i)));
    const double tol = static_cast<double>(n) * 1e-15 * scale;

    for (std::size_t j = 0; j < n; ++j) {
        double dj = sym(j, j);
        for (std::size_t k = 0; k < j; ++k) dj -= lower_(j, k) * lower_(j, k) * diag_[k];
        if (!(std::abs(dj) > tol))
            throw SingularMatrixError("LDLT breakdown at pivot " + std::to_string(j));
        diag_[j] = dj;
        lower_(j, j) = 1.0;
        for (std::size_t i = j + 1; i < n; ++i) {
            double lij = sym(i, j);
            for (std::size_t k = 0; k < j; ++k) lij -= lower_(i, k) * lower_(j, k) * diag_[k];
            lower_(i, j) = lij / dj;
        }
    }
}

std::vector<double> LdltFactor::solve(std::span<const double> rhs) const {
    const std::size_t n = diag_.size();
    std::vector<double> x(rhs.begin(), rhs.end());
    // Forward: L y = rhs
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) x[i] -= lower_(i, k) * x[k];
    // Diagonal
    for (std::size_t i = 0; i < n; ++i) x[i] /= diag_[i];
    // Backward: L^T x = y
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t k = i + 1; k < n; ++k) x[i] -= lower_(k, i) * x[k];
    return x;
}

std::vector<double> solve_symmetric(const Matrix& m, std::span<const double> rhs) {
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n) throw DimensionError("solve_symmetric: matrix must be square");
    if (rhs.size() != n) throw DimensionError("solve_symmetric: rhs size mismatch");
    double scale = 1.0;
    for (double v : m.storage()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-10 * scale)
                throw NumericalError("solve_symmetric: matrix is not symmetric");
    return LdltFactor(m).solve(rhs);
}

} // namespace lsxgc
