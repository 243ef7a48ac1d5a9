// lsxgc command-line tool: directed connectivity estimation, synthetic
// cohort generation, the full cross-validated classification pipeline, and
// comparison figures. All subcommands are deterministic for a fixed seed,
// independent of --threads.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsxgc/connectivity.hpp"
#include "lsxgc/errors.hpp"
#include "lsxgc/mvpa.hpp"
#include "lsxgc/parallel.hpp"
#include "lsxgc/report.hpp"
#include "lsxgc/synth.hpp"
#include "lsxgc/timeseries.hpp"

namespace {

struct CommonFlags {
    unsigned threads = 0; // 0 = auto
    bool quiet = false;
};

void log_line(const CommonFlags& common, const std::string& msg) {
    if (!common.quiet) std::cerr << "[lsxgc] " << msg << "\n";
}

unsigned resolve_thread_flag(unsigned flag_value) {
    if (flag_value != 0) return flag_value;
    if (const char* env = std::getenv("LSXGC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 0; // auto
}

std::vector<std::size_t> parse_feature_grid(const std::string& text) {
    std::vector<std::size_t> out;
    if (text.find(':') != std::string::npos) {
        std::size_t start = 0, stop = 0, step = 0;
        if (std::sscanf(text.c_str(), "%zu:%zu:%zu", &start, &stop, &step) != 3 || step == 0 ||
            start == 0 || stop < start)
            throw lsxgc::ConfigError("bad feature grid '" + text + "', expected start:stop:step");
        for (std::size_t k = start; k <= stop; k += step) out.push_back(k);
        return out;
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string tok = text.substr(pos, comma - pos);
        char* end = nullptr;
        const unsigned long v = std::strtoul(tok.c_str(), &end, 10);
        if (end == tok.c_str() || *end != '\0' || v == 0)
            throw lsxgc::ConfigError("bad feature count '" + tok + "'");
        out.push_back(v);
        pos = comma + 1;
    }
    if (out.empty()) throw lsxgc::ConfigError("empty feature grid");
    return out;
}

// Grid points above the available feature count are dropped with a notice;
// the library itself treats them as errors.
std::vector<std::size_t> cap_feature_grid(const CommonFlags& common,
                                          std::vector<std::size_t> grid, std::size_t f) {
    std::vector<std::size_t> capped;
    for (std::size_t k : grid)
        if (k <= f) capped.push_back(k);
    if (capped.size() != grid.size())
        log_line(common, "feature grid capped at F=" + std::to_string(f) + " (" +
                             std::to_string(grid.size() - capped.size()) + " points dropped)");
    if (capped.empty())
        throw lsxgc::ConfigError("no feature grid point is <= F=" + std::to_string(f));
    return capped;
}

int run_connectivity(const CommonFlags& common, lsxgc::ConnectivityMethod method,
                     const lsxgc::LsxgcConfig& cfg, const std::string& input,
                     const std::string& output) {
    const auto t0 = std::chrono::steady_clock::now();
    const lsxgc::TimeSeriesEnsemble ensemble =
        lsxgc::make_ensemble(lsxgc::load_matrix_file(input));
    const unsigned threads = resolve_thread_flag(common.threads);

    const lsxgc::ConnectivityMatrix conn = method == lsxgc::ConnectivityMethod::lsxgc
                                               ? lsxgc::lsxgc_matrix(ensemble, cfg, threads)
                                               : lsxgc::cross_correlation_matrix(ensemble);
    lsxgc::save_matrix_csv(conn.values, output);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json sidecar;
    sidecar["schema_version"] = "1";
    sidecar["method"] = lsxgc::to_string(conn.method);
    sidecar["config"] = {{"p", cfg.components},
                         {"m", cfg.lags},
                         {"sign", lsxgc::to_string(cfg.sign)},
                         {"standardize", cfg.standardize_input},
                         {"ridge_rel", cfg.ridge_rel}};
    sidecar["rois"] = ensemble.series_count();
    sidecar["samples"] = ensemble.sample_count();
    sidecar["roi_names"] = conn.roi_names;
    sidecar["warnings"] = conn.warnings;
    sidecar["elapsed_seconds"] = elapsed;
    lsxgc::write_text_atomic(output + ".json", sidecar.dump(2) + "\n");

    log_line(common, "connectivity (" + std::string(lsxgc::to_string(conn.method)) + "): " +
                         std::to_string(ensemble.series_count()) + " series -> " + output);
    return 0;
}

int run_simulate(const CommonFlags& common, const lsxgc::CohortSpec& spec,
                 const std::string& out_dir, bool binary) {
    const unsigned threads = resolve_thread_flag(common.threads);
    const auto [base, modified] = lsxgc::cohort_models(spec);
    const lsxgc::SubjectDataset cohort = lsxgc::gen_cohort(spec, threads);
    lsxgc::save_cohort(cohort, base.adjacency, out_dir, binary);
    log_line(common, "simulate: wrote " + std::to_string(cohort.records.size()) +
                         " subjects + manifest.json + adjacency.csv to " + out_dir);
    return 0;
}

int run_mvpa(const CommonFlags& common, const std::string& manifest, lsxgc::CvConfig cv,
             const std::vector<std::size_t>& feature_grid, const std::string& output) {
    const unsigned threads = resolve_thread_flag(common.threads);
    const lsxgc::SubjectDataset dataset = lsxgc::load_dataset_manifest(manifest, threads);
    log_line(common, "mvpa: " + std::to_string(dataset.records.size()) + " subjects, method " +
                         lsxgc::to_string(cv.method));

    const lsxgc::FeatureTable table =
        lsxgc::build_feature_table(dataset, cv.method, cv.estimator, threads);
    cv.feature_counts = cap_feature_grid(common, feature_grid, table.feature_count());

    const lsxgc::CvReport report = lsxgc::run_cv(table, cv, threads);
    lsxgc::save_cv_report(report, output);
    log_line(common, "mvpa: report written to " + output);
    return 0;
}

int run_report(const CommonFlags& common, const std::vector<std::string>& inputs,
               const std::string& svg_out, const std::string& csv_out) {
    std::vector<lsxgc::ReportCurve> curves;
    std::vector<std::string> used;
    for (const std::string& path : inputs) {
        const lsxgc::CvReport report = lsxgc::load_cv_report(path);
        std::string label = lsxgc::to_string(report.config.method);
        if (std::count(used.begin(), used.end(), label) > 0)
            label += " (" + std::to_string(std::count(used.begin(), used.end(), label) + 1) + ")";
        used.push_back(lsxgc::to_string(report.config.method));
        curves.push_back(lsxgc::curve_from_report(report, label));
    }
    lsxgc::write_text_atomic(svg_out, lsxgc::render_comparison_svg(curves));
    if (!csv_out.empty())
        lsxgc::write_text_atomic(csv_out, lsxgc::render_comparison_csv(curves));
    log_line(common, "report: wrote " + svg_out + (csv_out.empty() ? "" : " and " + csv_out));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Directed connectivity (variance-ratio Granger index over a PCA-compressed "
                 "ensemble), correlation baseline, synthetic VAR cohorts, and a cross-validated "
                 "classification pipeline"};
    app.require_subcommand(1);

    CommonFlags common;
    app.add_option("--threads", common.threads,
                   "Worker threads (0 = auto; env LSXGC_THREADS as fallback)")
        ->capture_default_str();
    app.add_flag("--quiet", common.quiet, "Suppress log lines");

    // connectivity
    auto* conn_cmd = app.add_subcommand("connectivity", "Estimate an N x N connectivity matrix");
    std::string conn_method = "lsxgc", conn_input, conn_output, conn_sign = "standard";
    lsxgc::LsxgcConfig conn_cfg;
    bool conn_no_standardize = false;
    conn_cmd->add_option("--method", conn_method, "lsxgc | correlation")->capture_default_str();
    conn_cmd->add_option("--p", conn_cfg.components, "Retained principal components")
        ->capture_default_str();
    conn_cmd->add_option("--m", conn_cfg.lags, "Model order (lags)")->capture_default_str();
    conn_cmd->add_option("--input", conn_input, "Input matrix (CSV or binary)")->required();
    conn_cmd->add_option("--output", conn_output, "Output CSV (a .json sidecar is added)")
        ->required();
    conn_cmd->add_option("--sign", conn_sign, "standard | paper-literal")->capture_default_str();
    conn_cmd->add_flag("--no-standardize", conn_no_standardize,
                       "Skip per-series z-scoring before estimation");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Generate a two-class synthetic VAR cohort");
    lsxgc::CohortSpec spec;
    std::string sim_out_dir;
    bool sim_binary = false;
    sim_cmd->add_option("--n", spec.series_count, "Series per subject")->capture_default_str();
    sim_cmd->add_option("--t", spec.t_samples, "Temporal samples per subject")
        ->capture_default_str();
    sim_cmd->add_option("--q", spec.order, "VAR order")->capture_default_str();
    sim_cmd->add_option("--density", spec.density, "Directed edge probability")
        ->capture_default_str();
    sim_cmd->add_option("--subjects-per-class", spec.subjects_per_class, "Subjects per class")
        ->capture_default_str();
    sim_cmd->add_option("--coupling-delta", spec.coupling_delta,
                        "Class-1 scaling of the strongest edges (1 + delta)")
        ->capture_default_str();
    sim_cmd->add_option("--noise-sd", spec.noise_sd, "Innovation standard deviation")
        ->capture_default_str();
    sim_cmd->add_option("--seed", spec.seed, "Cohort seed")->capture_default_str();
    sim_cmd->add_option("--out-dir", sim_out_dir, "Output directory")->required();
    sim_cmd->add_flag("--binary", sim_binary, "Write binary subject matrices instead of CSV");

    // mvpa
    auto* mvpa_cmd = app.add_subcommand(
        "mvpa", "Cross-validated classification from connectivity features");
    std::string mvpa_manifest, mvpa_method = "lsxgc", mvpa_features = "5:175:5", mvpa_out,
                mvpa_sign = "standard";
    lsxgc::CvConfig cv;
    bool mvpa_no_standardize = false;
    mvpa_cmd->add_option("--manifest", mvpa_manifest, "Dataset manifest JSON")->required();
    mvpa_cmd->add_option("--method", mvpa_method, "lsxgc | correlation")->capture_default_str();
    mvpa_cmd->add_option("--p", cv.estimator.components, "Retained principal components")
        ->capture_default_str();
    mvpa_cmd->add_option("--m", cv.estimator.lags, "Model order (lags)")->capture_default_str();
    mvpa_cmd->add_option("--splits", cv.n_splits, "Cross-validation repetitions")
        ->capture_default_str();
    mvpa_cmd->add_option("--test-frac", cv.test_fraction, "Held-out fraction per split")
        ->capture_default_str();
    mvpa_cmd->add_option("--features", mvpa_features, "Grid start:stop:step or comma list")
        ->capture_default_str();
    mvpa_cmd->add_option("--gamma", cv.gamma, "LS-SVM regularization")->capture_default_str();
    mvpa_cmd->add_option("--seed", cv.seed, "Split seed")->capture_default_str();
    mvpa_cmd->add_option("--sign", mvpa_sign, "standard | paper-literal")->capture_default_str();
    mvpa_cmd->add_flag("--no-standardize", mvpa_no_standardize,
                       "Skip per-series z-scoring before estimation");
    mvpa_cmd->add_option("--out", mvpa_out, "Report JSON path")->required();

    // report
    auto* rep_cmd = app.add_subcommand("report", "Comparison figure from report JSONs");
    std::vector<std::string> rep_inputs;
    std::string rep_svg, rep_csv;
    rep_cmd->add_option("--in", rep_inputs, "Input report JSONs")->required()->expected(-1);
    rep_cmd->add_option("--out", rep_svg, "Output SVG")->required();
    rep_cmd->add_option("--csv", rep_csv, "Underlying values as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nRun with --help for usage.\n";
        return 2;
    }

    // Flag-level validation happens before any file is touched; bad values
    // are usage errors.
    lsxgc::ConnectivityMethod conn_method_parsed = lsxgc::ConnectivityMethod::lsxgc;
    std::vector<std::size_t> mvpa_grid;
    try {
        if (conn_cmd->parsed()) {
            conn_method_parsed = lsxgc::method_from_string(conn_method);
            conn_cfg.sign = lsxgc::sign_convention_from_string(conn_sign);
            conn_cfg.standardize_input = !conn_no_standardize;
        }
        if (mvpa_cmd->parsed()) {
            cv.method = lsxgc::method_from_string(mvpa_method);
            cv.estimator.sign = lsxgc::sign_convention_from_string(mvpa_sign);
            cv.estimator.standardize_input = !mvpa_no_standardize;
            mvpa_grid = parse_feature_grid(mvpa_features);
        }
    } catch (const lsxgc::ConfigError& e) {
        std::cerr << e.what() << "\nRun with --help for usage.\n";
        return 2;
    }

    try {
        if (conn_cmd->parsed())
            return run_connectivity(common, conn_method_parsed, conn_cfg, conn_input,
                                    conn_output);
        if (sim_cmd->parsed()) return run_simulate(common, spec, sim_out_dir, sim_binary);
        if (mvpa_cmd->parsed()) return run_mvpa(common, mvpa_manifest, cv, mvpa_grid, mvpa_out);
        if (rep_cmd->parsed()) return run_report(common, rep_inputs, rep_svg, rep_csv);
    } catch (const lsxgc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
