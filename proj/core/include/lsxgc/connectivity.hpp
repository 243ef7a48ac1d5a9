#pragma once

#include <string>
#include <vector>

#include "lsxgc/linalg.hpp"
#include "lsxgc/matrix.hpp"
#include "lsxgc/timeseries.hpp"

namespace lsxgc {

/// Sign of the variance-ratio index. `standard` makes positive values mean
/// "the source improves prediction of the target" (the usual Granger
/// orientation); `paper_literal` is the exact negation, matching the
/// log var(e_s)/var(e_\s) form as it is sometimes printed. Downstream
/// |tau|-based feature ranking is insensitive to the choice.
enum class SignConvention { standard, paper_literal };

enum class ConnectivityMethod { lsxgc, cross_correlation };

struct LsxgcConfig {
    std::size_t components = 8; // p: retained principal components
    std::size_t lags = 4;       // m: model order
    SignConvention sign = SignConvention::standard;
    double ridge_rel = 1e-8; // ridge = ridge_rel * trace(G)/d per regression
    bool standardize_input = true;
};

const char* to_string(SignConvention s);
const char* to_string(ConnectivityMethod m);
SignConvention sign_convention_from_string(const std::string& s);
ConnectivityMethod method_from_string(const std::string& s);

/// N x N directed (lsxgc) or symmetric (cross_correlation) connectivity.
/// values(s, t) is the influence of series s on series t.
struct ConnectivityMatrix {
    Matrix values;
    ConnectivityMethod method = ConnectivityMethod::lsxgc;
    LsxgcConfig config; // snapshot; defaults for cross_correlation
    std::vector<std::string> roi_names;
    std::vector<std::string> warnings;
};

/// Lagged design matrix: column j predicts time t = lags + j and stacks
/// Y(t-1), Y(t-2), ..., Y(t-lags) top to bottom (lag-major, series within a
/// lag in row order of Y). Shape lags*rows(Y) x (T - lags).
struct LagEmbedding {
    Matrix design;
    std::size_t first_target = 0; // 0-based column index of the first predicted sample
};

LagEmbedding build_lag_vectorization(const Matrix& y, std::size_t lags);

/// The variance-ratio connectivity index. For each source s: PCA-compress
/// the ensemble to p components, augment with the raw source row, predict
/// all N series from m lags; repeat without the source (its coefficient
/// column removed from W, its row dropped from the input); the index is the
/// log ratio of the two per-target prediction-error variances. Diagonal is 0.
ConnectivityMatrix lsxgc_matrix(const TimeSeriesEnsemble& x, const LsxgcConfig& cfg,
                                unsigned threads = 1);

/// Zero-lag Pearson correlation; symmetric, unit diagonal. Constant rows
/// correlate 0 with everything and are reported in warnings.
ConnectivityMatrix cross_correlation_matrix(const TimeSeriesEnsemble& x);

} // namespace lsxgc
