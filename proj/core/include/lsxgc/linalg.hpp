#pragma once

#include <vector>

#include "lsxgc/matrix.hpp"
#include "lsxgc/timeseries.hpp"

namespace lsxgc {

/// Eigendecomposition of a symmetric matrix, eigenvalues descending,
/// eigenvectors as columns of `vectors` (column i pairs with values[i]).
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;
};

/// Cyclic Jacobi sweeps. Deterministic: fixed (p,q) sweep order, no pivot
/// search, so identical inputs give bit-identical results. Adequate for the
/// n <= few hundred matrices this library works with.
SymmetricEigen jacobi_eigendecomposition(const Matrix& sym);

struct PcaResult {
    Matrix coefficients;                    // W, p x N; rows orthonormal
    Matrix components;                      // Z = W * X_centered, p x T
    std::vector<double> explained_variance; // top-p covariance eigenvalues, nonincreasing
    std::vector<double> input_row_means;    // length N; the centering applied
};

/// Top-p principal components of the N-series ensemble (rows as variables,
/// population 1/T covariance). Sign convention: in each row of W the entry
/// of largest magnitude is positive, ties broken by lowest index.
/// Requires 1 <= p <= min(N, T-1).
PcaResult pca_fit(const TimeSeriesEnsemble& x, std::size_t p);

struct AffineFit {
    Matrix coefficients;      // A, N_out x d
    std::vector<double> bias; // b, length N_out
    Matrix residuals;         // targets - (A*design + b), N_out x T_eff
};

/// Ridge-regularized affine least squares: minimizes
/// sum_t ||targets(t) - A*design(t) - b||^2 + ridge*||A||_F^2
/// via centered normal equations and a symmetric factorization.
/// design is d x T_eff, targets is N_out x T_eff.
AffineFit least_squares_affine(const Matrix& design, const Matrix& targets, double ridge);

/// Unpivoted LDL^T factorization of a symmetric matrix with a breakdown
/// guard. Factor once, solve many right-hand sides.
class LdltFactor {
public:
    explicit LdltFactor(const Matrix& sym); // throws SingularMatrixError on breakdown
    std::vector<double> solve(std::span<const double> rhs) const;

private:
    Matrix lower_;
    std::vector<double> diag_;
};

/// Solves M x = rhs for symmetric M (checked within 1e-10).
std::vector<double> solve_symmetric(const Matrix& m, std::span<const double> rhs);

} // namespace lsxgc
