#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace oracle {

namespace {

std::vector<std::vector<double>> matmul_vv(const std::vector<std::vector<double>>& a,
                                           const std::vector<std::vector<double>>& b) {
    const std::size_t r = a.size(), k = b.size(), c = b[0].size();
    std::vector<std::vector<double>> out(r, std::vector<double>(c, 0.0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t j = 0; j < c; ++j) out[i][j] += a[i][p] * b[p][j];
    return out;
}

} // namespace

Eigen jacobi_classical(const std::vector<std::vector<double>>& sym) {
    const std::size_t n = sym.size();
    std::vector<std::vector<double>> a = sym;
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    double scale = 0.0;
    for (const auto& row : a)
        for (double x : row) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) scale = 1.0;

    for (std::size_t iter = 0; iter < 200 * n * n; ++iter) {
        std::size_t p = 0, q = 1;
        double biggest = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(a[i][j]) > biggest) {
                    biggest = std::abs(a[i][j]);
                    p = i;
                    q = j;
                }
        if (biggest <= 1e-13 * scale) break;

        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) g[i][i] = 1.0;
        g[p][p] = c;
        g[q][q] = c;
        g[p][q] = s;
        g[q][p] = -s;

        std::vector<std::vector<double>> gt(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) gt[i][j] = g[j][i];

        a = matmul_vv(gt, matmul_vv(a, g));
        v = matmul_vv(v, g);
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a[i][i] > a[j][j]; });

    Eigen out;
    out.values.resize(n);
    out.vectors.resize(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a[order[j]][order[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors[j][i] = v[i][order[j]];
    }
    return out;
}

std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-300) throw std::runtime_error("gauss_solve: singular");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t cc = col; cc < n; ++cc) a[r][cc] -= f * a[col][cc];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a[i][j] * x[j];
        x[i] = acc / a[i][i];
    }
    return x;
}

double least_squares_residual_norm(const lsxgc::Matrix& design, const lsxgc::Matrix& targets) {
    const std::size_t d = design.rows(), t = design.cols(), nout = targets.rows();

    // Augmented design with an intercept row.
    std::vector<std::vector<double>> aug(d + 1, std::vector<double>(t, 1.0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < t; ++j) aug[i][j] = design(i, j);

    // G = aug * aug^T, pseudo-inverted through its eigendecomposition.
    const std::size_t m = d + 1;
    std::vector<std::vector<double>> g(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < t; ++k) g[i][j] += aug[i][k] * aug[j][k];

    const Eigen eig = jacobi_classical(g);
    const double lambda_max = std::max(eig.values.front(), 0.0);

    std::vector<std::vector<double>> ginv(m, std::vector<double>(m, 0.0));
    for (std::size_t e = 0; e < m; ++e) {
        if (eig.values[e] <= 1e-12 * lambda_max) continue;
        const double inv = 1.0 / eig.values[e];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                ginv[i][j] += inv * eig.vectors[e][i] * eig.vectors[e][j];
    }

    double norm_sq = 0.0;
    for (std::size_t row = 0; row < nout; ++row) {
        std::vector<double> rhs(m, 0.0); // targets_row * aug^T
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < t; ++k) rhs[i] += targets(row, k) * aug[i][k];
        std::vector<double> theta(m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) theta[i] += ginv[i][j] * rhs[j];
        for (std::size_t k = 0; k < t; ++k) {
            double pred = 0.0;
            for (std::size_t i = 0; i < m; ++i) pred += theta[i] * aug[i][k];
            const double r = targets(row, k) - pred;
            norm_sq += r * r;
        }
    }
    return std::sqrt(norm_sq);
}

double max_principal_angle(const lsxgc::Matrix& a, const lsxgc::Matrix& b) {
    const std::size_t p = a.rows(), n = a.cols();
    // M = A B^T; singular values from eigenvalues of M M^T.
    std::vector<std::vector<double>> m(p, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = 0; k < n; ++k) m[i][j] += a(i, k) * b(j, k);
    std::vector<std::vector<double>> mmt(p, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = 0; k < p; ++k) mmt[i][j] += m[i][k] * m[j][k];
    const Eigen eig = jacobi_classical(mmt);
    const double sigma_min = std::sqrt(std::clamp(eig.values.back(), 0.0, 1.0));
    return std::acos(std::min(sigma_min, 1.0));
}

double kendall_brute(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double concordant = 0, discordant = 0, ties_x = 0, ties_y = 0, ties_both = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j], dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) ++ties_both;
            else if (dx == 0.0) ++ties_x;
            else if (dy == 0.0) ++ties_y;
            else if (dx * dy > 0.0) ++concordant;
            else ++discordant;
        }
    const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const double n1 = ties_x + ties_both;
    const double n2 = ties_y + ties_both;
    if (n0 == n1 || n0 == n2) return 0.0;
    return (concordant - discordant) / std::sqrt((n0 - n1) * (n0 - n2));
}

double auc_brute(const std::vector<double>& scores, const std::vector<int>& labels01) {
    double wins = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels01[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels01[j] != 0) continue;
            pairs += 1.0;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / pairs;
}

namespace {

// RSS of x_target(t) ~ intercept + lag-1 regressors (one row per predictor).
double ar_fit_rss(const lsxgc::Matrix& x, std::size_t target,
                  const std::vector<std::size_t>& predictors) {
    const std::size_t t = x.cols();
    const std::size_t d = predictors.size() + 1; // + intercept
    std::vector<std::vector<double>> gram(d, std::vector<double>(d, 0.0));
    std::vector<double> rhs(d, 0.0);
    for (std::size_t tau = 1; tau < t; ++tau) {
        std::vector<double> reg(d, 1.0); // reg[0] = intercept
        for (std::size_t k = 0; k < predictors.size(); ++k)
            reg[k + 1] = x(predictors[k], tau - 1);
        for (std::size_t i = 0; i < d; ++i) {
            rhs[i] += reg[i] * x(target, tau);
            for (std::size_t j = 0; j < d; ++j) gram[i][j] += reg[i] * reg[j];
        }
    }
    const std::vector<double> beta = gauss_solve(gram, rhs);
    double rss = 0.0;
    for (std::size_t tau = 1; tau < t; ++tau) {
        double pred = beta[0];
        for (std::size_t k = 0; k < predictors.size(); ++k)
            pred += beta[k + 1] * x(predictors[k], tau - 1);
        const double r = x(target, tau) - pred;
        rss += r * r;
    }
    return rss;
}

} // namespace

std::pair<double, double> bivariate_granger(const lsxgc::Matrix& x) {
    const double rss_1_full = ar_fit_rss(x, 1, {1, 0});
    const double rss_1_own = ar_fit_rss(x, 1, {1});
    const double rss_0_full = ar_fit_rss(x, 0, {0, 1});
    const double rss_0_own = ar_fit_rss(x, 0, {0});
    return {std::log(rss_1_own / rss_1_full), std::log(rss_0_own / rss_0_full)};
}

double companion_radius(const lsxgc::VarModel& model, std::uint64_t seed) {
    const std::size_t n = model.series_count();
    const std::size_t q = model.order;
    const std::size_t dim = n * q;
    std::vector<std::vector<double>> m(dim, std::vector<double>(dim, 0.0));
    for (std::size_t lag = 0; lag < q; ++lag)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m[i][lag * n + j] = model.coefficients[lag](i, j);
    for (std::size_t lag = 1; lag < q; ++lag)
        for (std::size_t i = 0; i < n; ++i) m[lag * n + i][(lag - 1) * n + i] = 1.0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double best = 0.0;
    for (int restart = 0; restart < 3; ++restart) {
        std::vector<double> v(dim);
        double norm = 0.0;
        for (double& x : v) {
            x = gauss(rng);
            norm += x * x;
        }
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;

        std::vector<double> growth;
        std::vector<double> w(dim);
        for (int it = 0; it < 300; ++it) {
            for (std::size_t i = 0; i < dim; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < dim; ++j) acc += m[i][j] * v[j];
                w[i] = acc;
            }
            double g = 0.0;
            for (double x : w) g += x * x;
            g = std::sqrt(g);
            if (g < 1e-280) {
                growth.clear();
                break;
            }
            for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / g;
            growth.push_back(g);
        }
        double est = 0.0;
        for (std::size_t i = growth.size() / 2; i < growth.size(); ++i)
            est = std::max(est, growth[i]);
        best = std::max(best, est);
    }
    return best;
}

double autocorrelation(std::span<const double> x, std::size_t lag) {
    const std::size_t n = x.size();
    double mu = 0.0;
    for (double v : x) mu += v;
    mu /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) den += (x[i] - mu) * (x[i] - mu);
    for (std::size_t i = lag; i < n; ++i) num += (x[i] - mu) * (x[i - lag] - mu);
    return num / den;
}

} // namespace oracle
