#include "lsxgc/mvpa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lsxgc/errors.hpp"
#include "lsxgc/linalg.hpp"
#include "lsxgc/parallel.hpp"
#include "lsxgc/rng.hpp"

namespace lsxgc {

FeatureVector vectorize(const ConnectivityMatrix& conn) {
    const std::size_t n = conn.values.rows();
    FeatureVector out;
    if (conn.method == ConnectivityMethod::lsxgc) {
        out.values.reserve(n * (n - 1));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                out.values.push_back(conn.values(i, j));
                out.ids.emplace_back(i, j);
            }
    } else {
        out.values.reserve(n * (n - 1) / 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                out.values.push_back(conn.values(i, j));
                out.ids.emplace_back(i, j);
            }
    }
    return out;
}

FeatureTable build_feature_table(const SubjectDataset& dataset, ConnectivityMethod method,
                                 const LsxgcConfig& cfg, unsigned threads) {
    if (dataset.records.empty()) throw DimensionError("build_feature_table: empty dataset");

    std::vector<FeatureVector> vectors(dataset.records.size());
    parallel_for(dataset.records.size(), threads, [&](std::size_t i) {
        const ConnectivityMatrix conn =
            method == ConnectivityMethod::lsxgc
                ? lsxgc_matrix(dataset.records[i].ensemble, cfg)
                : cross_correlation_matrix(dataset.records[i].ensemble);
        vectors[i] = vectorize(conn);
    });

    FeatureTable table;
    table.feature_ids = vectors[0].ids;
    table.features = Matrix(dataset.records.size(), vectors[0].values.size());
    table.labels.reserve(dataset.records.size());
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        if (vectors[i].values.size() != table.feature_count())
            throw DimensionError("build_feature_table: inconsistent feature counts");
        std::copy(vectors[i].values.begin(), vectors[i].values.end(),
                  table.features.row(i).begin());
        table.labels.push_back(dataset.records[i].label);
    }
    return table;
}

namespace {

std::size_t merge_count_inversions(std::vector<double>& values, std::vector<double>& scratch,
                                   std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::size_t count = merge_count_inversions(values, scratch, lo, mid) +
                        merge_count_inversions(values, scratch, mid, hi);
    std::size_t a = lo, b = mid, o = lo;
    while (a < mid && b < hi) {
        if (values[b] < values[a]) {
            count += mid - a;
            scratch[o++] = values[b++];
        } else {
            scratch[o++] = values[a++];
        }
    }
    while (a < mid) scratch[o++] = values[a++];
    while (b < hi) scratch[o++] = values[b++];
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
              scratch.begin() + static_cast<std::ptrdiff_t>(hi),
              values.begin() + static_cast<std::ptrdiff_t>(lo));
    return count;
}

double tie_pair_count(const std::vector<double>& sorted) {
    double pairs = 0.0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
        if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
            ++run;
        } else {
            pairs += 0.5 * static_cast<double>(run) * static_cast<double>(run - 1);
            run = 1;
        }
    }
    return pairs;
}

} // namespace

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw DimensionError("kendall_tau_b: length mismatch");
    if (n < 2) throw DimensionError("kendall_tau_b: need n >= 2");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);

    // Tie pair counts: n1 in x, n2 in y, n3 joint.
    double n1 = 0.0, n3 = 0.0;
    {
        std::size_t run_x = 1, run_xy = 1;
        for (std::size_t i = 1; i <= n; ++i) {
            const bool same_x = i < n && x[idx[i]] == x[idx[i - 1]];
            const bool same_xy = same_x && y[idx[i]] == y[idx[i - 1]];
            if (same_x) ++run_x;
            else {
                n1 += 0.5 * static_cast<double>(run_x) * static_cast<double>(run_x - 1);
                run_x = 1;
            }
            if (same_xy) ++run_xy;
            else {
                n3 += 0.5 * static_cast<double>(run_xy) * static_cast<double>(run_xy - 1);
                run_xy = 1;
            }
        }
    }
    std::vector<double> y_sorted(n);
    for (std::size_t i = 0; i < n; ++i) y_sorted[i] = y[i];
    std::sort(y_sorted.begin(), y_sorted.end());
    const double n2 = tie_pair_count(y_sorted);

    if (n0 == n1 || n0 == n2) return 0.0; // a constant variable

    // Discordant pairs = strict inversions of y in x-order (ties in x are
    // adjacent and y-ascending there, so they contribute none).
    std::vector<double> y_in_x_order(n), scratch(n);
    for (std::size_t i = 0; i < n; ++i) y_in_x_order[i] = y[idx[i]];
    const double discordant =
        static_cast<double>(merge_count_inversions(y_in_x_order, scratch, 0, n));

    const double numerator = n0 - n1 - n2 + n3 - 2.0 * discordant;
    return numerator / std::sqrt((n0 - n1) * (n0 - n2));
}

TauRanking rank_features(const FeatureTable& table) {
    const std::size_t subjects = table.subject_count();
    const std::size_t f = table.feature_count();
    bool has0 = false, has1 = false;
    for (int l : table.labels) (l == 0 ? has0 : has1) = true;
    if (!has0 || !has1) throw InvalidLabelsError("rank_features: need both classes");

    std::vector<double> labels(subjects);
    for (std::size_t i = 0; i < subjects; ++i) labels[i] = static_cast<double>(table.labels[i]);

    TauRanking out;
    out.tau.resize(f);
    std::vector<double> column(subjects);
    for (std::size_t j = 0; j < f; ++j) {
        for (std::size_t i = 0; i < subjects; ++i) column[i] = table.features(i, j);
        out.tau[j] = kendall_tau_b(column, labels);
    }

    out.order.resize(f);
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
        const double ma = std::abs(out.tau[a]), mb = std::abs(out.tau[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    return out;
}

LssvmModel lssvm_train(const Matrix& features, const std::vector<int>& labels01, double gamma) {
    const std::size_t n = features.rows();
    if (labels01.size() != n) throw DimensionError("lssvm_train: labels/features mismatch");
    if (!(gamma > 0.0)) throw ConfigError("lssvm_train: gamma must be positive");
    bool has0 = false, has1 = false;
    for (int l : labels01) (l == 0 ? has0 : has1) = true;
    if (!has0 || !has1) throw InvalidLabelsError("lssvm_train: need both classes");

    LssvmModel model;
    model.gamma = gamma;
    model.train_features = features;
    model.train_labels_pm.resize(n);
    for (std::size_t i = 0; i < n; ++i) model.train_labels_pm[i] = labels01[i] == 1 ? 1.0 : -1.0;

    // H = Omega.(y y^T) + I/gamma with Omega the linear-kernel Gram.
    Matrix h = gram(features);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) *= model.train_labels_pm[i] * model.train_labels_pm[j];
        h(i, i) += 1.0 / gamma;
    }

    const LdltFactor factor(h);
    const std::vector<double> ones(n, 1.0);
    const std::vector<double> a = factor.solve(ones);
    const std::vector<double> c = factor.solve(model.train_labels_pm);

    double ya = 0.0, yc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ya += model.train_labels_pm[i] * a[i];
        yc += model.train_labels_pm[i] * c[i];
    }
    if (!(std::abs(yc) > 1e-300)) throw SingularMatrixError("lssvm_train: y^T H^-1 y vanished");
    model.bias = ya / yc;

    model.alpha.resize(n);
    for (std::size_t i = 0; i < n; ++i) model.alpha[i] = a[i] - model.bias * c[i];
    return model;
}

double lssvm_decision(const LssvmModel& model, std::span<const double> x) {
    double d = model.bias;
    for (std::size_t i = 0; i < model.alpha.size(); ++i)
        d += model.alpha[i] * model.train_labels_pm[i] * dot(model.train_features.row(i), x);
    return d;
}

double lssvm_kkt_residual(const LssvmModel& model) {
    const std::size_t n = model.alpha.size();
    const Matrix omega = gram(model.train_features);

    // Row 0: y^T alpha = 0; rows i: y_i b + sum_j (y_i y_j omega_ij + delta_ij/gamma) alpha_j = 1.
    double residual_sq = 0.0;
    double r0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) r0 += model.train_labels_pm[i] * model.alpha[i];
    residual_sq += r0 * r0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = model.train_labels_pm[i] * model.bias + model.alpha[i] / model.gamma;
        for (std::size_t j = 0; j < n; ++j)
            row += model.train_labels_pm[i] * model.train_labels_pm[j] * omega(i, j) *
                   model.alpha[j];
        const double r = row - 1.0;
        residual_sq += r * r;
    }
    const double rhs_norm = std::sqrt(static_cast<double>(n));
    return std::sqrt(residual_sq) / rhs_norm;
}

double roc_auc(std::span<const double> scores, const std::vector<int>& labels01) {
    const std::size_t n = scores.size();
    if (labels01.size() != n) throw DimensionError("roc_auc: scores/labels mismatch");

    std::size_t n_pos = 0, n_neg = 0;
    for (int l : labels01) (l == 1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw UndefinedMetricError("roc_auc: both classes required");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over ties; the positive rank-sum form of Mann-Whitney.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k)
            if (labels01[idx[k]] == 1) rank_sum_pos += avg_rank;
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

SplitIndices stratified_split(const std::vector<int>& labels, double test_fraction,
                              std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw SplitError("stratified_split: test_fraction must be in (0, 1)");

    Rng rng(seed);
    SplitIndices out;
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) members.push_back(i);
        if (members.empty()) throw SplitError("stratified_split: class " + std::to_string(cls) +
                                              " has no members");

        const auto count = static_cast<double>(members.size());
        auto test_count = static_cast<std::size_t>(std::lround(count * test_fraction));
        test_count = std::max<std::size_t>(test_count, 1);
        if (test_count >= members.size())
            throw SplitError("stratified_split: class " + std::to_string(cls) +
                             " too small for test fraction " + std::to_string(test_fraction));

        // Fisher-Yates on the class members; first test_count go to test.
        for (std::size_t i = members.size(); i-- > 1;) {
            const std::size_t j = rng.next_below(i + 1);
            std::swap(members[i], members[j]);
        }
        out.test.insert(out.test.end(), members.begin(),
                        members.begin() + static_cast<std::ptrdiff_t>(test_count));
        out.train.insert(out.train.end(),
                         members.begin() + static_cast<std::ptrdiff_t>(test_count),
                         members.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

namespace {

FeatureTable subset_rows(const FeatureTable& table, const std::vector<std::size_t>& rows) {
    FeatureTable out;
    out.feature_ids = table.feature_ids;
    out.features = Matrix(rows.size(), table.feature_count());
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy(table.features.row(rows[i]).begin(), table.features.row(rows[i]).end(),
                  out.features.row(i).begin());
        out.labels.push_back(table.labels[rows[i]]);
    }
    return out;
}

} // namespace

std::vector<SplitKOutcome> evaluate_split(const FeatureTable& table, const SplitIndices& split,
                                          const std::vector<std::size_t>& feature_counts,
                                          double gamma) {
    const std::size_t f = table.feature_count();
    for (std::size_t k : feature_counts)
        if (k < 1 || k > f)
            throw DimensionError("evaluate_split: feature count " + std::to_string(k) +
                                 " outside [1, F=" + std::to_string(f) + "]");

    const FeatureTable train = subset_rows(table, split.train);
    const TauRanking ranking = rank_features(train);

    // Per-feature z-scoring with training statistics only; test rows reuse
    // the training mean and sd.
    std::vector<double> mu(f), sd(f);
    for (std::size_t j = 0; j < f; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < train.subject_count(); ++i) acc += train.features(i, j);
        mu[j] = acc / static_cast<double>(train.subject_count());
        double var = 0.0;
        for (std::size_t i = 0; i < train.subject_count(); ++i) {
            const double d = train.features(i, j) - mu[j];
            var += d * d;
        }
        sd[j] = std::sqrt(var / static_cast<double>(train.subject_count()));
        if (sd[j] < 1e-300) sd[j] = 1.0; // constant feature: center only
    }

    const std::size_t n_test = split.test.size();
    std::vector<int> test_labels(n_test);
    for (std::size_t i = 0; i < n_test; ++i) test_labels[i] = table.labels[split.test[i]];

    std::vector<SplitKOutcome> out;
    out.reserve(feature_counts.size());
    for (std::size_t k : feature_counts) {
        SplitKOutcome res;
        res.feature_count = k;
        res.selected_features.assign(ranking.order.begin(),
                                     ranking.order.begin() + static_cast<std::ptrdiff_t>(k));

        Matrix ztrain(train.subject_count(), k);
        for (std::size_t i = 0; i < train.subject_count(); ++i)
            for (std::size_t c = 0; c < k; ++c) {
                const std::size_t j = res.selected_features[c];
                ztrain(i, c) = (train.features(i, j) - mu[j]) / sd[j];
            }

        const LssvmModel model = lssvm_train(ztrain, train.labels, gamma);
        res.alpha = model.alpha;
        res.bias = model.bias;

        res.test_decisions.resize(n_test);
        std::vector<double> zrow(k);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < n_test; ++i) {
            const std::size_t row = split.test[i];
            for (std::size_t c = 0; c < k; ++c) {
                const std::size_t j = res.selected_features[c];
                zrow[c] = (table.features(row, j) - mu[j]) / sd[j];
            }
            const double d = lssvm_decision(model, zrow);
            res.test_decisions[i] = d;
            const int predicted = d >= 0.0 ? 1 : 0;
            if (predicted == test_labels[i]) ++correct;
        }
        res.accuracy = static_cast<double>(correct) / static_cast<double>(n_test);
        res.auc = roc_auc(res.test_decisions, test_labels);
        out.push_back(std::move(res));
    }
    return out;
}

std::vector<std::size_t> default_feature_grid() {
    std::vector<std::size_t> grid;
    for (std::size_t k = 5; k <= 175; k += 5) grid.push_back(k);
    return grid;
}

CvReport run_cv(const FeatureTable& table, const CvConfig& config, unsigned threads) {
    CvConfig cfg = config;
    if (cfg.feature_counts.empty()) cfg.feature_counts = default_feature_grid();
    if (cfg.n_splits < 1) throw ConfigError("run_cv: need at least one split");
    const std::size_t f = table.feature_count();
    for (std::size_t k : cfg.feature_counts)
        if (k > f)
            throw DimensionError("run_cv: feature count " + std::to_string(k) + " exceeds F=" +
                                 std::to_string(f));

    std::vector<std::vector<SplitKOutcome>> split_results(cfg.n_splits);
    std::vector<std::string> split_errors(cfg.n_splits);
    parallel_for(cfg.n_splits, threads, [&](std::size_t s) {
        try {
            const SplitIndices split =
                stratified_split(table.labels, cfg.test_fraction, hash_combine(cfg.seed, s));
            split_results[s] = evaluate_split(table, split, cfg.feature_counts, cfg.gamma);
        } catch (const Error& e) {
            split_errors[s] = e.what();
        }
    });
    for (std::size_t s = 0; s < cfg.n_splits; ++s)
        if (!split_errors[s].empty())
            throw Error("run_cv: split " + std::to_string(s) + " failed: " + split_errors[s]);

    CvReport report;
    report.config = cfg;
    report.per_k.resize(cfg.feature_counts.size());
    for (std::size_t ki = 0; ki < cfg.feature_counts.size(); ++ki) {
        PerFeatureCount& pk = report.per_k[ki];
        pk.feature_count = cfg.feature_counts[ki];
        pk.per_split.resize(cfg.n_splits);
        double acc_sum = 0.0, auc_sum = 0.0;
        for (std::size_t s = 0; s < cfg.n_splits; ++s) {
            pk.per_split[s] = {split_results[s][ki].accuracy, split_results[s][ki].auc};
            acc_sum += pk.per_split[s].accuracy;
            auc_sum += pk.per_split[s].auc;
        }
        const double n = static_cast<double>(cfg.n_splits);
        pk.mean_accuracy = acc_sum / n;
        pk.mean_auc = auc_sum / n;
        if (cfg.n_splits > 1) {
            double acc_var = 0.0, auc_var = 0.0;
            for (const SplitScore& s : pk.per_split) {
                acc_var += (s.accuracy - pk.mean_accuracy) * (s.accuracy - pk.mean_accuracy);
                auc_var += (s.auc - pk.mean_auc) * (s.auc - pk.mean_auc);
            }
            acc_var /= (n - 1.0);
            auc_var /= (n - 1.0);
            pk.ci95_accuracy = 1.96 * std::sqrt(acc_var) / std::sqrt(n);
            pk.ci95_auc = 1.96 * std::sqrt(auc_var) / std::sqrt(n);
        }
    }
    return report;
}

CvReport run_cv(const SubjectDataset& dataset, const CvConfig& config, unsigned threads) {
    const FeatureTable table =
        build_feature_table(dataset, config.method, config.estimator, threads);
    return run_cv(table, config, threads);
}

} // namespace lsxgc
