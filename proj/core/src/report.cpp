#include "lsxgc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "lsxgc/errors.hpp"
#include "lsxgc/timeseries.hpp"

namespace lsxgc {

std::string cv_report_to_json(const CvReport& report) {
    nlohmann::json doc;
    doc["schema_version"] = "1";
    nlohmann::json cfg;
    cfg["method"] = to_string(report.config.method);
    cfg["p"] = report.config.estimator.components;
    cfg["m"] = report.config.estimator.lags;
    cfg["standardize"] = report.config.estimator.standardize_input;
    cfg["ridge_rel"] = report.config.estimator.ridge_rel;
    cfg["n_splits"] = report.config.n_splits;
    cfg["test_fraction"] = report.config.test_fraction;
    cfg["gamma"] = report.config.gamma;
    cfg["seed"] = report.config.seed;
    cfg["feature_counts"] = report.config.feature_counts;
    doc["config"] = std::move(cfg);

    doc["per_k"] = nlohmann::json::array();
    for (const PerFeatureCount& pk : report.per_k) {
        nlohmann::json entry;
        entry["k"] = pk.feature_count;
        entry["mean_auc"] = pk.mean_auc;
        entry["ci95_auc"] = pk.ci95_auc;
        entry["mean_accuracy"] = pk.mean_accuracy;
        entry["ci95_accuracy"] = pk.ci95_accuracy;
        entry["per_split"] = nlohmann::json::array();
        for (std::size_t s = 0; s < pk.per_split.size(); ++s)
            entry["per_split"].push_back({{"split", s},
                                          {"accuracy", pk.per_split[s].accuracy},
                                          {"auc", pk.per_split[s].auc}});
        doc["per_k"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

CvReport cv_report_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report JSON: ") + e.what());
    }
    try {
        CvReport report;
        const auto& cfg = doc.at("config");
        report.config.method = method_from_string(cfg.at("method").get<std::string>());
        report.config.estimator.components = cfg.at("p").get<std::size_t>();
        report.config.estimator.lags = cfg.at("m").get<std::size_t>();
        report.config.estimator.standardize_input = cfg.at("standardize").get<bool>();
        report.config.estimator.ridge_rel = cfg.at("ridge_rel").get<double>();
        report.config.n_splits = cfg.at("n_splits").get<std::size_t>();
        report.config.test_fraction = cfg.at("test_fraction").get<double>();
        report.config.gamma = cfg.at("gamma").get<double>();
        report.config.seed = cfg.at("seed").get<std::uint64_t>();
        report.config.feature_counts = cfg.at("feature_counts").get<std::vector<std::size_t>>();

        for (const auto& entry : doc.at("per_k")) {
            PerFeatureCount pk;
            pk.feature_count = entry.at("k").get<std::size_t>();
            pk.mean_auc = entry.at("mean_auc").get<double>();
            pk.ci95_auc = entry.at("ci95_auc").get<double>();
            pk.mean_accuracy = entry.at("mean_accuracy").get<double>();
            pk.ci95_accuracy = entry.at("ci95_accuracy").get<double>();
            for (const auto& s : entry.at("per_split"))
                pk.per_split.push_back(
                    {s.at("accuracy").get<double>(), s.at("auc").get<double>()});
            report.per_k.push_back(std::move(pk));
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report JSON schema: ") + e.what());
    }
}

void save_cv_report(const CvReport& report, const std::filesystem::path& path) {
    write_text_atomic(path, cv_report_to_json(report));
}

CvReport load_cv_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return cv_report_from_json(text);
}

ReportCurve curve_from_report(const CvReport& report, const std::string& label) {
    ReportCurve c;
    c.label = label;
    for (const PerFeatureCount& pk : report.per_k) {
        c.feature_counts.push_back(pk.feature_count);
        c.mean_auc.push_back(pk.mean_auc);
        c.ci95_auc.push_back(pk.ci95_auc);
        c.mean_accuracy.push_back(pk.mean_accuracy);
        c.ci95_accuracy.push_back(pk.ci95_accuracy);
    }
    return c;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[40];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

struct Panel {
    double x0, y0, width, height; // plot area in SVG coordinates
    double kmin, kmax, vmin, vmax;

    double px(double k) const { return x0 + (k - kmin) / (kmax - kmin) * width; }
    double py(double v) const { return y0 + height - (v - vmin) / (vmax - vmin) * height; }
};

void render_panel(std::string& svg, const Panel& p, const std::vector<ReportCurve>& curves,
                  bool auc, const std::string& title) {
    svg += "<rect x='" + fmt(p.x0) + "' y='" + fmt(p.y0) + "' width='" + fmt(p.width) +
           "' height='" + fmt(p.height) + "' fill='white' stroke='#888'/>\n";
    svg += "<text x='" + fmt(p.x0 + p.width / 2) + "' y='" + fmt(p.y0 - 10) +
           "' text-anchor='middle' font-size='14'>" + title + "</text>\n";

    // y ticks every 0.1, x ticks at ~6 positions
    for (double v = std::ceil(p.vmin * 10.0) / 10.0; v <= p.vmax + 1e-9; v += 0.1) {
        const double y = p.py(v);
        svg += "<line x1='" + fmt(p.x0) + "' y1='" + fmt(y) + "' x2='" + fmt(p.x0 + p.width) +
               "' y2='" + fmt(y) + "' stroke='#ddd'/>\n";
        svg += "<text x='" + fmt(p.x0 - 6) + "' y='" + fmt(y + 4) +
               "' text-anchor='end' font-size='11'>" + fmt(v, "%.1f") + "</text>\n";
    }
    const double kstep = std::max(1.0, std::round((p.kmax - p.kmin) / 5.0));
    for (double k = p.kmin; k <= p.kmax + 1e-9; k += kstep) {
        const double x = p.px(k);
        svg += "<text x='" + fmt(x) + "' y='" + fmt(p.y0 + p.height + 16) +
               "' text-anchor='middle' font-size='11'>" + fmt(k, "%.0f") + "</text>\n";
    }
    svg += "<text x='" + fmt(p.x0 + p.width / 2) + "' y='" + fmt(p.y0 + p.height + 32) +
           "' text-anchor='middle' font-size='12'>number of selected features</text>\n";

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const ReportCurve& cur = curves[c];
        const auto& means = auc ? cur.mean_auc : cur.mean_accuracy;
        const auto& cis = auc ? cur.ci95_auc : cur.ci95_accuracy;
        const std::string color = kPalette[c % 6];

        // CI band: upper edge forward, lower edge backward.
        std::string band = "<polygon fill='" + color + "' fill-opacity='0.15' stroke='none' points='";
        for (std::size_t i = 0; i < cur.feature_counts.size(); ++i)
            band += fmt(p.px(static_cast<double>(cur.feature_counts[i]))) + "," +
                    fmt(p.py(std::min(means[i] + cis[i], p.vmax))) + " ";
        for (std::size_t i = cur.feature_counts.size(); i-- > 0;)
            band += fmt(p.px(static_cast<double>(cur.feature_counts[i]))) + "," +
                    fmt(p.py(std::max(means[i] - cis[i], p.vmin))) + " ";
        band += "'/>\n";
        svg += band;

        std::string line = "<polyline fill='none' stroke='" + color + "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < cur.feature_counts.size(); ++i)
            line += fmt(p.px(static_cast<double>(cur.feature_counts[i]))) + "," +
                    fmt(p.py(means[i])) + " ";
        line += "'/>\n";
        svg += line;
    }
}

} // namespace

std::string render_comparison_svg(const std::vector<ReportCurve>& curves) {
    if (curves.empty()) throw ConfigError("render_comparison_svg: no curves");

    double kmin = 1e300, kmax = -1e300, vmin = 1e300, vmax = -1e300;
    for (const ReportCurve& c : curves) {
        for (std::size_t k : c.feature_counts) {
            kmin = std::min(kmin, static_cast<double>(k));
            kmax = std::max(kmax, static_cast<double>(k));
        }
        for (std::size_t i = 0; i < c.feature_counts.size(); ++i) {
            vmin = std::min({vmin, c.mean_auc[i] - c.ci95_auc[i],
                             c.mean_accuracy[i] - c.ci95_accuracy[i]});
            vmax = std::max({vmax, c.mean_auc[i] + c.ci95_auc[i],
                             c.mean_accuracy[i] + c.ci95_accuracy[i]});
        }
    }
    if (kmax <= kmin) kmax = kmin + 1.0;
    vmin = std::max(0.0, std::floor((vmin - 0.02) * 10.0) / 10.0);
    vmax = std::min(1.0, std::ceil((vmax + 0.02) * 10.0) / 10.0);
    if (vmax <= vmin) vmax = vmin + 0.1;

    const double width = 900, height = 400;
    std::string svg = "<svg xmlns='http://www.w3.org/2000/svg' width='" + fmt(width) +
                      "' height='" + fmt(height) + "' font-family='sans-serif'>\n" +
                      "<rect width='100%' height='100%' fill='white'/>\n";

    const Panel left{60, 40, 340, 290, kmin, kmax, vmin, vmax};
    const Panel right{510, 40, 340, 290, kmin, kmax, vmin, vmax};
    render_panel(svg, left, curves, true, "Mean AUC");
    render_panel(svg, right, curves, false, "Mean accuracy");

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const double y = 385.0 - 0.0;
        const double x = 60.0 + 180.0 * static_cast<double>(c);
        svg += "<line x1='" + fmt(x) + "' y1='" + fmt(y - 4) + "' x2='" + fmt(x + 24) + "' y2='" +
               fmt(y - 4) + "' stroke='" + std::string(kPalette[c % 6]) +
               "' stroke-width='2'/>\n";
        svg += "<text x='" + fmt(x + 30) + "' y='" + fmt(y) + "' font-size='12'>" +
               curves[c].label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_comparison_csv(const std::vector<ReportCurve>& curves) {
    std::string out = "method,k,mean_auc,ci95_auc,mean_accuracy,ci95_accuracy\n";
    for (const ReportCurve& c : curves)
        for (std::size_t i = 0; i < c.feature_counts.size(); ++i) {
            out += c.label + "," + std::to_string(c.feature_counts[i]) + "," +
                   fmt(c.mean_auc[i], "%.10g") + "," + fmt(c.ci95_auc[i], "%.10g") + "," +
                   fmt(c.mean_accuracy[i], "%.10g") + "," + fmt(c.ci95_accuracy[i], "%.10g") +
                   "\n";
        }
    return out;
}

} // namespace lsxgc
