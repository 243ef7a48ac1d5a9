#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lsxgc/matrix.hpp"

namespace lsxgc {

/// Multivariate time-series: N series (rows, one per region of interest)
/// by T temporal samples (columns).
struct TimeSeriesEnsemble {
    Matrix data;
    std::vector<std::string> roi_names; // size N; defaults to roi_0..roi_{N-1}

    std::size_t series_count() const { return data.rows(); }
    std::size_t sample_count() const { return data.cols(); }
};

/// "roi_0", "roi_1", ...
std::vector<std::string> default_roi_names(std::size_t n);

/// Wraps a matrix into an ensemble. Throws DimensionError unless
/// N >= min_series and T >= 2, NumericalError on non-finite entries.
TimeSeriesEnsemble make_ensemble(Matrix data, std::vector<std::string> roi_names = {},
                                 std::size_t min_series = 2);

struct StandardizeResult {
    TimeSeriesEnsemble ensemble;
    std::vector<std::size_t> constant_rows; // mapped to all-zeros
};

/// Per-row z-scoring with the population (1/T) standard deviation.
/// Constant rows (population sd below 1e-300) become all-zeros and are
/// reported rather than raising.
StandardizeResult standardize(const TimeSeriesEnsemble& e);

/// Loads a numeric CSV, rows = series. An optional leading header row
/// (any non-numeric cell) is skipped; an optional non-numeric first column
/// provides ROI names. Throws ParseError (ragged/non-numeric/non-finite,
/// 1-based row/col in the message) or DimensionError (N < 2 or T < 2).
TimeSeriesEnsemble load_matrix_csv(const std::filesystem::path& path);

/// Serializes with 17 significant digits, so save -> load round-trips exactly.
/// Writes are atomic (temp file + rename).
void save_matrix_csv(const Matrix& m, const std::filesystem::path& path);

/// Raw binary matrix format: 8-byte magic "LSXGCMAT", rows and cols as
/// little-endian u64, then row-major little-endian f64. Intended for large
/// cohorts; CSV remains the canonical format.
void save_matrix_binary(const Matrix& m, const std::filesystem::path& path);
Matrix load_matrix_binary(const std::filesystem::path& path);

/// Loads either format, sniffing the magic bytes. No shape constraints.
Matrix load_matrix_file(const std::filesystem::path& path);

struct SubjectRecord {
    TimeSeriesEnsemble ensemble;
    int label = 0; // 0 = control, 1 = case
    std::string subject_id;
};

struct SubjectDataset {
    std::vector<SubjectRecord> records;
};

/// Loads a JSON manifest {"subjects":[{"id":str,"label":0|1,"path":str},...]}.
/// Relative subject paths resolve against the manifest's directory. Subjects
/// may be CSV or binary matrices. Record order equals manifest order even
/// when loading in parallel. Throws ManifestError naming the offending
/// subject on missing files, bad labels, or N mismatches.
SubjectDataset load_dataset_manifest(const std::filesystem::path& path, unsigned threads = 1);

/// Writes `content` to `path` via a temp file + rename, so a failed run
/// never leaves a partial file at the target.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Matrix -> CSV text (17 significant digits per value).
std::string matrix_to_csv(const Matrix& m);

} // namespace lsxgc
