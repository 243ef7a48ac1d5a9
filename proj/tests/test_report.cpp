#include <doctest.h>

#include "lsxgc/errors.hpp"
#include "lsxgc/report.hpp"
#include "test_helpers.hpp"

using namespace lsxgc;

namespace {

CvReport sample_report(ConnectivityMethod method, std::uint64_t seed) {
    CvReport r;
    r.config.method = method;
    r.config.estimator.components = 4;
    r.config.estimator.lags = 2;
    r.config.feature_counts = {5, 10, 15};
    r.config.n_splits = 3;
    r.config.test_fraction = 0.2;
    r.config.gamma = 1.0;
    r.config.seed = seed;
    Rng rng(seed);
    for (std::size_t k : r.config.feature_counts) {
        PerFeatureCount pk;
        pk.feature_count = k;
        for (std::size_t s = 0; s < 3; ++s)
            pk.per_split.push_back({0.5 + 0.4 * rng.next_double(), 0.5 + 0.4 * rng.next_double()});
        pk.mean_accuracy = (pk.per_split[0].accuracy + pk.per_split[1].accuracy +
                            pk.per_split[2].accuracy) / 3.0;
        pk.mean_auc = (pk.per_split[0].auc + pk.per_split[1].auc + pk.per_split[2].auc) / 3.0;
        pk.ci95_accuracy = 0.05;
        pk.ci95_auc = 0.04;
        r.per_k.push_back(std::move(pk));
    }
    return r;
}

} // namespace

TEST_SUITE("report") {

TEST_CASE("JSON round-trip preserves every field") {
    const CvReport r = sample_report(ConnectivityMethod::lsxgc, 3);
    const std::string text = cv_report_to_json(r);
    const CvReport back = cv_report_from_json(text);

    CHECK(back.config.method == r.config.method);
    CHECK(back.config.estimator.components == 4);
    CHECK(back.config.estimator.lags == 2);
    CHECK(back.config.feature_counts == r.config.feature_counts);
    CHECK(back.config.n_splits == 3);
    CHECK(back.config.seed == 3);
    REQUIRE(back.per_k.size() == r.per_k.size());
    for (std::size_t i = 0; i < r.per_k.size(); ++i) {
        CHECK(back.per_k[i].feature_count == r.per_k[i].feature_count);
        CHECK(back.per_k[i].mean_auc == r.per_k[i].mean_auc);
        CHECK(back.per_k[i].ci95_accuracy == r.per_k[i].ci95_accuracy);
        REQUIRE(back.per_k[i].per_split.size() == 3);
        for (std::size_t s = 0; s < 3; ++s) {
            CHECK(back.per_k[i].per_split[s].accuracy == r.per_k[i].per_split[s].accuracy);
            CHECK(back.per_k[i].per_split[s].auc == r.per_k[i].per_split[s].auc);
        }
    }

    // Deterministic serialization.
    CHECK(cv_report_to_json(back) == text);
    CHECK(text.find("\"schema_version\": \"1\"") != std::string::npos);
}

TEST_CASE("save/load through files") {
    testutil::TempDir tmp("report");
    const CvReport r = sample_report(ConnectivityMethod::cross_correlation, 9);
    save_cv_report(r, tmp.path() / "r.json");
    const CvReport back = load_cv_report(tmp.path() / "r.json");
    CHECK(cv_report_to_json(back) == cv_report_to_json(r));
}

TEST_CASE("malformed JSON raises ParseError") {
    CHECK_THROWS_AS(cv_report_from_json("{not json"), ParseError);
    CHECK_THROWS_AS(cv_report_from_json("{\"schema_version\":\"1\"}"), ParseError);
}

TEST_CASE("SVG has both panels, curves, bands, legend") {
    const std::vector<ReportCurve> curves = {
        curve_from_report(sample_report(ConnectivityMethod::lsxgc, 3), "lsxgc"),
        curve_from_report(sample_report(ConnectivityMethod::cross_correlation, 4),
                          "correlation")};
    const std::string svg = render_comparison_svg(curves);
    CHECK(svg.find("Mean AUC") != std::string::npos);
    CHECK(svg.find("Mean accuracy") != std::string::npos);
    CHECK(svg.find("lsxgc") != std::string::npos);
    CHECK(svg.find("correlation") != std::string::npos);
    // one polyline and one band polygon per curve per panel
    std::size_t polylines = 0, polygons = 0;
    for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos)
        ++polylines;
    for (std::size_t pos = 0; (pos = svg.find("<polygon", pos)) != std::string::npos; ++pos)
        ++polygons;
    CHECK(polylines == 4);
    CHECK(polygons == 4);

    // Deterministic rendering.
    CHECK(render_comparison_svg(curves) == svg);
}

TEST_CASE("CSV lists every grid point per curve") {
    const std::vector<ReportCurve> curves = {
        curve_from_report(sample_report(ConnectivityMethod::lsxgc, 3), "lsxgc"),
        curve_from_report(sample_report(ConnectivityMethod::cross_correlation, 4),
                          "correlation")};
    const std::string csv = render_comparison_csv(curves);
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 3 + 3); // header + 3 grid points per curve
    CHECK(csv.rfind("method,k,mean_auc,ci95_auc,mean_accuracy,ci95_accuracy\n", 0) == 0);
}

} // TEST_SUITE
