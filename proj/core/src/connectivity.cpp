#include "lsxgc/connectivity.hpp"

#include <algorithm>
#include <cmath>

#include "lsxgc/errors.hpp"
#include "lsxgc/parallel.hpp"

namespace lsxgc {

const char* to_string(SignConvention s) {
    return s == SignConvention::standard ? "standard" : "paper-literal";
}

const char* to_string(ConnectivityMethod m) {
    return m == ConnectivityMethod::lsxgc ? "lsxgc" : "correlation";
}

SignConvention sign_convention_from_string(const std::string& s) {
    if (s == "standard") return SignConvention::standard;
    if (s == "paper-literal" || s == "paper_literal") return SignConvention::paper_literal;
    throw ConfigError("unknown sign convention: " + s);
}

ConnectivityMethod method_from_string(const std::string& s) {
    if (s == "lsxgc") return ConnectivityMethod::lsxgc;
    if (s == "correlation" || s == "cross-correlation" || s == "cross_correlation")
        return ConnectivityMethod::cross_correlation;
    throw ConfigError("unknown connectivity method: " + s);
}

LagEmbedding build_lag_vectorization(const Matrix& y, std::size_t lags) {
    const std::size_t rows = y.rows();
    const std::size_t t = y.cols();
    if (lags < 1) throw DimensionError("lag vectorization: lags must be >= 1");
    if (t <= lags)
        throw DimensionError("lag vectorization: need T > m, got T=" + std::to_string(t) +
                             ", m=" + std::to_string(lags));

    LagEmbedding out;
    out.first_target = lags;
    out.design = Matrix(lags * rows, t - lags);
    for (std::size_t j = 0; j < t - lags; ++j) {
        const std::size_t target_time = lags + j;
        for (std::size_t lag = 1; lag <= lags; ++lag)
            for (std::size_t r = 0; r < rows; ++r)
                out.design((lag - 1) * rows + r, j) = y(r, target_time - lag);
    }
    return out;
}

namespace {

// ridge = ridge_rel * trace(centered Gram)/d, floored so an all-constant
// design still factors (the cross term is exactly zero there, so the fit
// degenerates to the intercept as it should).
double relative_ridge(const Matrix& design, double ridge_rel) {
    double tr = 0.0;
    for (std::size_t i = 0; i < design.rows(); ++i) {
        const double mu = mean(design.row(i));
        for (double v : design.row(i)) {
            const double d = v - mu;
            tr += d * d;
        }
    }
    const double ridge = ridge_rel * tr / static_cast<double>(design.rows());
    return std::max(ridge, 1e-30);
}

Matrix vstack(const Matrix& top, std::span<const double> extra_row) {
    Matrix out(top.rows() + 1, top.cols());
    for (std::size_t i = 0; i < top.rows(); ++i)
        for (std::size_t j = 0; j < top.cols(); ++j) out(i, j) = top(i, j);
    for (std::size_t j = 0; j < top.cols(); ++j) out(top.rows(), j) = extra_row[j];
    return out;
}

std::vector<double> residual_variances(const Matrix& residuals) {
    std::vector<double> v(residuals.rows());
    for (std::size_t i = 0; i < residuals.rows(); ++i)
        v[i] = population_variance(residuals.row(i));
    return v;
}

} // namespace

ConnectivityMatrix lsxgc_matrix(const TimeSeriesEnsemble& x, const LsxgcConfig& cfg,
                                unsigned threads) {
    const std::size_t n = x.series_count();
    const std::size_t t = x.sample_count();
    if (n < 2) throw DimensionError("lsxgc: need at least 2 series");
    if (!all_finite(x.data)) throw NumericalError("lsxgc: non-finite input");
    if (cfg.components < 1 || cfg.lags < 1)
        throw DimensionError("lsxgc: p and m must be >= 1");
    if (cfg.lags >= t) throw DimensionError("lsxgc: m must be < T");
    if (cfg.components > std::min(n - 1, t - 1))
        throw DimensionError("lsxgc: p=" + std::to_string(cfg.components) +
                             " exceeds min(N-1, T-1) for N=" + std::to_string(n) +
                             ", T=" + std::to_string(t));

    ConnectivityMatrix out;
    out.method = ConnectivityMethod::lsxgc;
    out.config = cfg;
    out.roi_names = x.roi_names.empty() ? default_roi_names(n) : x.roi_names;

    TimeSeriesEnsemble work;
    if (cfg.standardize_input) {
        StandardizeResult sr = standardize(x);
        work = std::move(sr.ensemble);
        for (std::size_t r : sr.constant_rows)
            out.warnings.push_back("series " + out.roi_names[r] +
                                   ": constant, standardized to zeros");
    } else {
        work = x;
    }

    const PcaResult pca = pca_fit(work, cfg.components);

    Matrix centered(n, t);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < t; ++j)
            centered(i, j) = work.data(i, j) - pca.input_row_means[i];

    // Both models predict the same targets over the same temporal support.
    const std::size_t t_eff = t - cfg.lags;
    Matrix targets(n, t_eff);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < t_eff; ++j) targets(i, j) = work.data(i, j + cfg.lags);

    out.values = Matrix(n, n);
    std::vector<std::vector<std::string>> source_warnings(n);

    parallel_for(n, threads, [&](std::size_t s) {
        // WITH model: compressed ensemble augmented with the raw source row.
        const Matrix y_with = vstack(pca.components, work.data.row(s));
        const LagEmbedding emb_with = build_lag_vectorization(y_with, cfg.lags);
        const AffineFit fit_with = least_squares_affine(
            emb_with.design, targets, relative_ridge(emb_with.design, cfg.ridge_rel));
        const std::vector<double> var_with = residual_variances(fit_with.residuals);

        // WITHOUT model: drop the source's column from W and its row from
        // the centered input; no PCA refit.
        const Matrix w_prime = remove_col(pca.coefficients, s);
        const Matrix x_prime = remove_row(centered, s);
        const Matrix z_prime = matmul(w_prime, x_prime);
        const LagEmbedding emb_wo = build_lag_vectorization(z_prime, cfg.lags);
        const AffineFit fit_wo = least_squares_affine(
            emb_wo.design, targets, relative_ridge(emb_wo.design, cfg.ridge_rel));
        const std::vector<double> var_without = residual_variances(fit_wo.residuals);

        for (std::size_t tgt = 0; tgt < n; ++tgt) {
            if (tgt == s) {
                out.values(s, tgt) = 0.0;
                continue;
            }
            double vw = var_with[tgt];
            double vwo = var_without[tgt];
            if (vw < 1e-300 || vwo < 1e-300) {
                source_warnings[s].push_back("variance underflow clamped for " +
                                             out.roi_names[s] + "->" + out.roi_names[tgt]);
                vw = std::max(vw, 1e-300);
                vwo = std::max(vwo, 1e-300);
            }
            const double standard_index = std::log(vwo / vw);
            out.values(s, tgt) =
                cfg.sign == SignConvention::standard ? standard_index : -standard_index;
        }
    });

    for (auto& w : source_warnings)
        out.warnings.insert(out.warnings.end(), w.begin(), w.end());
    return out;
}

ConnectivityMatrix cross_correlation_matrix(const TimeSeriesEnsemble& x) {
    const std::size_t n = x.series_count();
    const std::size_t t = x.sample_count();
    if (n < 2) throw DimensionError("cross_correlation: need at least 2 series");
    if (t < 3) throw DimensionError("cross_correlation: need T >= 3");
    if (!all_finite(x.data)) throw NumericalError("cross_correlation: non-finite input");

    ConnectivityMatrix out;
    out.method = ConnectivityMethod::cross_correlation;
    out.roi_names = x.roi_names.empty() ? default_roi_names(n) : x.roi_names;

    StandardizeResult sr = standardize(x);
    std::vector<bool> constant(n, false);
    for (std::size_t r : sr.constant_rows) {
        constant[r] = true;
        out.warnings.push_back("series " + out.roi_names[r] +
                               ": constant, correlations set to 0");
    }

    out.values = Matrix(n, n);
    const double inv_t = 1.0 / static_cast<double>(t);
    for (std::size_t i = 0; i < n; ++i) {
        out.values(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double r = 0.0;
            if (!constant[i] && !constant[j])
                r = dot(sr.ensemble.data.row(i), sr.ensemble.data.row(j)) * inv_t;
            out.values(i, j) = r;
            out.values(j, i) = r;
        }
    }
    return out;
}

} // namespace lsxgc
