#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lsxgc/connectivity.hpp"
#include "lsxgc/matrix.hpp"
#include "lsxgc/timeseries.hpp"

namespace lsxgc {

/// One subject's connectivity flattened into features. lsxgc matrices yield
/// all off-diagonal entries row-major, (0,1),(0,2),...,(1,0),(1,2),...
/// (F = N(N-1)); correlation matrices the strict upper triangle row-major
/// (F = N(N-1)/2).
struct FeatureVector {
    std::vector<double> values;
    std::vector<std::pair<std::size_t, std::size_t>> ids; // (source, target) indices
};

FeatureVector vectorize(const ConnectivityMatrix& conn);

struct FeatureTable {
    Matrix features; // subjects x F
    std::vector<int> labels;
    std::vector<std::pair<std::size_t, std::size_t>> feature_ids;

    std::size_t subject_count() const { return features.rows(); }
    std::size_t feature_count() const { return features.cols(); }
};

/// Per-subject connectivity, vectorized. Connectivity is split-independent,
/// so callers compute this once and reuse it across CV splits.
FeatureTable build_feature_table(const SubjectDataset& dataset, ConnectivityMethod method,
                                 const LsxgcConfig& cfg, unsigned threads = 1);

/// Kendall's tau-b with tie correction:
/// (C - D) / sqrt((n0 - n1)(n0 - n2)). O(n log n) (sort + merge-count).
/// Returns 0 when either variable is constant.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

struct TauRanking {
    std::vector<double> tau;        // per feature, against the labels
    std::vector<std::size_t> order; // indices by descending |tau|, ties by ascending index
};

/// Feature relevance against binary labels. Callers must pass training rows
/// only. Throws InvalidLabelsError when only one class is present.
TauRanking rank_features(const FeatureTable& table);

/// Least-squares SVM with linear kernel. Training solves the bordered
/// system [0 y^T; y Omega.(yy^T) + I/gamma][b; alpha] = [0; 1] by block
/// elimination: H a = 1 and H c = y share one factorization, then
/// b = (y^T a)/(y^T c) and alpha = a - b c.
struct LssvmModel {
    std::vector<double> alpha;
    double bias = 0.0;
    double gamma = 1.0;
    Matrix train_features;              // n x k
    std::vector<double> train_labels_pm; // +-1
};

LssvmModel lssvm_train(const Matrix& features, const std::vector<int>& labels01, double gamma);

/// Decision value d(x) = sum_i alpha_i y_i (x_i . x) + b; class = sign.
double lssvm_decision(const LssvmModel& model, std::span<const double> x);

/// Relative residual of the assembled (n+1) bordered KKT system.
double lssvm_kkt_residual(const LssvmModel& model);

/// Mann-Whitney AUC: (#{pos>neg} + 0.5 #{pos=neg}) / (#pos #neg), computed
/// via average ranks. Throws UndefinedMetricError on single-class input.
double roc_auc(std::span<const double> scores, const std::vector<int>& labels01);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Class-preserving random split. Per class, test count =
/// round(class_count * test_fraction) clamped to [1, class_count - 1].
/// Deterministic in `seed`; indices returned ascending.
SplitIndices stratified_split(const std::vector<int>& labels, double test_fraction,
                              std::uint64_t seed);

struct SplitKOutcome {
    std::size_t feature_count = 0;
    std::vector<std::size_t> selected_features;
    std::vector<double> alpha;
    double bias = 0.0;
    std::vector<double> test_decisions;
    double accuracy = 0.0;
    double auc = 0.0;
};

/// One split end to end: tau ranking on train rows, per-feature z-scoring
/// with train statistics, then an LS-SVM per feature count. Nothing here
/// reads test labels or test-derived statistics before scoring.
std::vector<SplitKOutcome> evaluate_split(const FeatureTable& table, const SplitIndices& split,
                                          const std::vector<std::size_t>& feature_counts,
                                          double gamma);

struct CvConfig {
    ConnectivityMethod method = ConnectivityMethod::lsxgc;
    LsxgcConfig estimator;
    std::vector<std::size_t> feature_counts; // default 5,10,...,175
    std::size_t n_splits = 100;
    double test_fraction = 0.1;
    double gamma = 1.0;
    std::uint64_t seed = 0;
};

/// 5:175:5, the default evaluation grid.
std::vector<std::size_t> default_feature_grid();

struct SplitScore {
    double accuracy = 0.0;
    double auc = 0.0;
};

struct PerFeatureCount {
    std::size_t feature_count = 0;
    std::vector<SplitScore> per_split;
    double mean_accuracy = 0.0;
    double mean_auc = 0.0;
    double ci95_accuracy = 0.0; // 1.96 * sd / sqrt(n_splits), sample sd
    double ci95_auc = 0.0;
};

struct CvReport {
    CvConfig config;
    std::vector<PerFeatureCount> per_k;
};

/// Repeated stratified cross-validation over the whole pipeline.
/// Split seeds derive from config.seed by split index, and results
/// aggregate in split order, so the report does not depend on `threads`.
CvReport run_cv(const SubjectDataset& dataset, const CvConfig& config, unsigned threads = 1);

/// run_cv on a precomputed feature table (the connectivity cache).
CvReport run_cv(const FeatureTable& table, const CvConfig& config, unsigned threads = 1);

} // namespace lsxgc
