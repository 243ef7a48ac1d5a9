#include "lsxgc/timeseries.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lsxgc/errors.hpp"
#include "lsxgc/parallel.hpp"

namespace lsxgc {

namespace {

constexpr char kBinaryMagic[8] = {'L', 'S', 'X', 'G', 'C', 'M', 'A', 'T'};

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (std::isspace(static_cast<unsigned char>(s[b])) != 0)) ++b;
    while (e > b && (std::isspace(static_cast<unsigned char>(s[e - 1])) != 0)) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            cells.push_back(trim(std::string_view(line).substr(start, i - start)));
            start = i + 1;
        }
    }
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

void format_value(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

} // namespace

std::vector<std::string> default_roi_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back("roi_" + std::to_string(i));
    return names;
}

TimeSeriesEnsemble make_ensemble(Matrix data, std::vector<std::string> roi_names,
                                 std::size_t min_series) {
    if (data.rows() < min_series || data.cols() < 2)
        throw DimensionError("ensemble must have at least " + std::to_string(min_series) +
                             " series and 2 samples, got " + std::to_string(data.rows()) + "x" +
                             std::to_string(data.cols()));
    if (!all_finite(data)) throw NumericalError("ensemble contains non-finite values");
    if (roi_names.empty()) roi_names = default_roi_names(data.rows());
    if (roi_names.size() != data.rows())
        throw DimensionError("roi_names size does not match series count");
    return {std::move(data), std::move(roi_names)};
}

StandardizeResult standardize(const TimeSeriesEnsemble& e) {
    const std::size_t n = e.series_count(), t = e.sample_count();
    StandardizeResult out;
    out.ensemble.data = Matrix(n, t);
    out.ensemble.roi_names = e.roi_names;
    for (std::size_t i = 0; i < n; ++i) {
        const auto src = e.data.row(i);
        const double mu = mean(src);
        const double sd = std::sqrt(population_variance(src));
        auto dst = out.ensemble.data.row(i);
        if (sd < 1e-300) {
            out.constant_rows.push_back(i);
            for (std::size_t j = 0; j < t; ++j) dst[j] = 0.0;
        } else {
            for (std::size_t j = 0; j < t; ++j) dst[j] = (src[j] - mu) / sd;
        }
    }
    return out;
}

TimeSeriesEnsemble load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) throw ParseError(path.string() + ": empty file");

    // A leading row with non-numeric cells beyond the first column is a
    // header; it labels the temporal samples, which we do not use. A row
    // whose only non-numeric cell is the first is a labelled data row.
    std::size_t first_data = 0;
    {
        double tmp;
        bool header = false;
        for (std::size_t c = 1; c < rows[0].size(); ++c)
            if (!parse_double(rows[0][c], tmp)) {
                header = true;
                break;
            }
        if (header) first_data = 1;
    }
    if (first_data >= rows.size()) throw ParseError(path.string() + ": no data rows");

    // A non-numeric first column supplies ROI names; all data rows must agree.
    double tmp;
    const bool has_row_labels = !parse_double(rows[first_data][0], tmp);

    std::vector<std::string> roi_names;
    const std::size_t header_rows = first_data;
    const std::size_t expected_cells = rows[first_data].size();
    const std::size_t t = expected_cells - (has_row_labels ? 1 : 0);
    const std::size_t n = rows.size() - first_data;

    Matrix data(n, t);
    for (std::size_t r = first_data; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        const std::size_t report_row = r + 1; // 1-based, counting the header
        if (cells.size() != expected_cells)
            throw ParseError(path.string() + ": row " + std::to_string(report_row - header_rows) +
                             " has " + std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(expected_cells));
        std::size_t c0 = 0;
        if (has_row_labels) {
            roi_names.push_back(cells[0]);
            c0 = 1;
        }
        for (std::size_t c = c0; c < cells.size(); ++c) {
            double v;
            if (!parse_double(cells[c], v))
                throw ParseError(path.string() + ": non-numeric cell at row " +
                                 std::to_string(report_row - header_rows) + ", col " +
                                 std::to_string(c + 1));
            if (!std::isfinite(v))
                throw ParseError(path.string() + ": non-finite value at row " +
                                 std::to_string(report_row - header_rows) + ", col " +
                                 std::to_string(c + 1));
            data(r - first_data, c - c0) = v;
        }
    }

    if (n < 2 || t < 2)
        throw DimensionError(path.string() + ": need at least 2 series and 2 samples, got " +
                             std::to_string(n) + "x" + std::to_string(t));
    return make_ensemble(std::move(data), std::move(roi_names));
}

std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    out.reserve(m.rows() * m.cols() * 12);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            format_value(out, m(i, j));
        }
        out += '\n';
    }
    return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            std::filesystem::remove(tmp);
            throw ParseError("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
    write_text_atomic(path, matrix_to_csv(m));
}

void save_matrix_binary(const Matrix& m, const std::filesystem::path& path) {
    std::string buf;
    buf.reserve(24 + m.storage().size() * 8);
    buf.append(kBinaryMagic, 8);
    auto append_u64 = [&buf](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
    };
    append_u64(m.rows());
    append_u64(m.cols());
    static_assert(sizeof(double) == 8);
    for (double v : m.storage()) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        append_u64(bits);
    }
    write_text_atomic(path, buf);
}

Matrix load_matrix_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kBinaryMagic, 8) != 0)
        throw ParseError(path.string() + ": bad magic bytes");
    auto read_u64 = [&in, &path]() {
        unsigned char b[8];
        if (!in.read(reinterpret_cast<char*>(b), 8))
            throw ParseError(path.string() + ": truncated header");
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    };
    const std::uint64_t rows = read_u64();
    const std::uint64_t cols = read_u64();
    if (rows == 0 || cols == 0 || rows > (1ULL << 32) || cols > (1ULL << 32))
        throw ParseError(path.string() + ": implausible shape in header");
    Matrix m(rows, cols);
    for (double& v : m.storage()) {
        const std::uint64_t bits = read_u64();
        std::memcpy(&v, &bits, 8);
    }
    return m;
}

Matrix load_matrix_file(const std::filesystem::path& path) {
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ParseError("cannot open " + path.string());
        char magic[8];
        if (in.read(magic, 8) && std::memcmp(magic, kBinaryMagic, 8) == 0)
            return load_matrix_binary(path);
    }
    return load_matrix_csv(path).data;
}

SubjectDataset load_dataset_manifest(const std::filesystem::path& path, unsigned threads) {
    std::ifstream in(path);
    if (!in) throw ManifestError("cannot open manifest " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError("manifest " + path.string() + ": " + e.what());
    }
    if (!doc.contains("subjects") || !doc["subjects"].is_array())
        throw ManifestError("manifest " + path.string() + ": missing \"subjects\" array");

    const auto& subjects = doc["subjects"];
    const std::filesystem::path base = path.parent_path();

    struct Entry {
        std::string id;
        int label;
        std::filesystem::path file;
    };
    std::vector<Entry> entries;
    entries.reserve(subjects.size());
    for (const auto& s : subjects) {
        Entry e;
        e.id = s.value("id", std::string("<unnamed>"));
        if (!s.contains("label") || !s["label"].is_number_integer())
            throw ManifestError("subject " + e.id + ": missing integer label");
        e.label = s["label"].get<int>();
        if (e.label != 0 && e.label != 1)
            throw ManifestError("subject " + e.id + ": label must be 0 or 1, got " +
                                std::to_string(e.label));
        if (!s.contains("path") || !s["path"].is_string())
            throw ManifestError("subject " + e.id + ": missing path");
        std::filesystem::path p = s["path"].get<std::string>();
        e.file = p.is_absolute() ? p : base / p;
        entries.push_back(std::move(e));
    }

    SubjectDataset ds;
    ds.records.resize(entries.size());
    parallel_for(entries.size(), threads, [&](std::size_t i) {
        const Entry& e = entries[i];
        if (!std::filesystem::exists(e.file))
            throw ManifestError("subject " + e.id + ": file not found: " + e.file.string());
        Matrix m;
        try {
            m = load_matrix_file(e.file);
        } catch (const Error& err) {
            throw ManifestError("subject " + e.id + ": " + err.what());
        }
        ds.records[i] = {make_ensemble(std::move(m)), e.label, e.id};
    });

    for (std::size_t i = 1; i < ds.records.size(); ++i) {
        if (ds.records[i].ensemble.series_count() != ds.records[0].ensemble.series_count())
            throw ManifestError("subject " + ds.records[i].subject_id + ": N mismatch (" +
                                std::to_string(ds.records[i].ensemble.series_count()) + " vs " +
                                std::to_string(ds.records[0].ensemble.series_count()) + ")");
        if (ds.records[i].ensemble.roi_names != ds.records[0].ensemble.roi_names)
            throw ManifestError("subject " + ds.records[i].subject_id + ": roi_names mismatch");
    }
    return ds;
}

} // namespace lsxgc
