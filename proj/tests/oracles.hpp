// Brute-force reference implementations used to check the library's
// numerics. Everything here is written independently of core/: classical
// (largest-pivot) Jacobi with explicit rotation-matrix products, pair
// enumeration for rank statistics, explicit restricted/unrestricted AR
// fits, and a separate power iteration. Slow on purpose.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lsxgc/matrix.hpp"
#include "lsxgc/synth.hpp"

namespace oracle {

struct Eigen {
    std::vector<double> values; // descending
    std::vector<std::vector<double>> vectors; // vectors[j] pairs with values[j]
};

/// Classical Jacobi: pick the largest off-diagonal pivot, build the full
/// rotation matrix, and multiply it out.
Eigen jacobi_classical(const std::vector<std::vector<double>>& sym);

/// Gaussian elimination with partial pivoting.
std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b);

/// Frobenius norm of the least-squares residual of
/// targets ~ Theta * [design; 1], using a pseudoinverse built from
/// jacobi_classical (eigenvalues below 1e-12 * lambda_max dropped).
double least_squares_residual_norm(const lsxgc::Matrix& design, const lsxgc::Matrix& targets);

/// Largest principal angle (radians) between the row spaces of two p x n
/// matrices with orthonormal rows.
double max_principal_angle(const lsxgc::Matrix& a, const lsxgc::Matrix& b);

/// Kendall tau-b by O(n^2) pair enumeration.
double kendall_brute(const std::vector<double>& x, const std::vector<double>& y);

/// AUC by pair counting: (#{pos>neg} + 0.5 #{pos=neg}) / (#pos #neg).
double auc_brute(const std::vector<double>& scores, const std::vector<int>& labels01);

/// Bivariate Granger indices (log RSS ratio of the lag-1 AR fit without vs
/// with the other series). Returns {gc(0->1), gc(1->0)}.
std::pair<double, double> bivariate_granger(const lsxgc::Matrix& x);

/// Companion spectral radius by an independently coded power iteration,
/// three std::mt19937_64 restarts.
double companion_radius(const lsxgc::VarModel& model, std::uint64_t seed);

/// Population lag-h autocorrelation of a series.
double autocorrelation(std::span<const double> x, std::size_t lag);

} // namespace oracle
