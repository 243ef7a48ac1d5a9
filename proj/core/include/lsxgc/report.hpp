#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lsxgc/mvpa.hpp"

namespace lsxgc {

/// CvReport <-> JSON. The schema is
/// {"schema_version":"1",
///  "config":{"method","p","m","standardize","ridge_rel","n_splits",
///            "test_fraction","gamma","seed","feature_counts":[...]},
///  "per_k":[{"k","mean_auc","ci95_auc","mean_accuracy","ci95_accuracy",
///            "per_split":[{"split","accuracy","auc"},...]},...]}
/// Serialization is deterministic (sorted keys, shortest round-trip floats),
/// so identical reports compare byte-for-byte. The lsXGC sign convention is
/// deliberately not part of the snapshot: reports are invariant under it.
std::string cv_report_to_json(const CvReport& report);
CvReport cv_report_from_json(const std::string& text);

void save_cv_report(const CvReport& report, const std::filesystem::path& path);
CvReport load_cv_report(const std::filesystem::path& path);

/// One labelled curve set extracted from a report for plotting.
struct ReportCurve {
    std::string label;
    std::vector<std::size_t> feature_counts;
    std::vector<double> mean_auc, ci95_auc;
    std::vector<double> mean_accuracy, ci95_accuracy;
};

ReportCurve curve_from_report(const CvReport& report, const std::string& label);

/// Two-panel SVG (mean AUC, mean accuracy vs feature count) with shaded
/// 95% CI bands, one colour per input report.
std::string render_comparison_svg(const std::vector<ReportCurve>& curves);

/// The plotted values as CSV:
/// method,k,mean_auc,ci95_auc,mean_accuracy,ci95_accuracy
std::string render_comparison_csv(const std::vector<ReportCurve>& curves);

} // namespace lsxgc
