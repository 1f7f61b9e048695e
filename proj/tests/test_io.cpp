#include "lpreduce/io.hpp"

#include "lpreduce/datasets.hpp"
#include "lpreduce/errors.hpp"
#include "lpreduce/version.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <charconv>

using lpreduce::parse_matrix_csv;

TEST_CASE("CSV parsing: header auto-detection and malformed rows") {
    const Eigen::MatrixXd plain = parse_matrix_csv("1,2,3\n4,5,6\n", "test");
    CHECK(plain.rows() == 2);
    CHECK(plain.cols() == 3);
    CHECK(plain(1, 2) == 6.0);

    const Eigen::MatrixXd with_header = parse_matrix_csv("x,y,z\n1,2,3\n4,5,6\n", "test");
    CHECK(with_header.rows() == 2);
    CHECK(with_header(0, 0) == 1.0);

    // Scientific notation, negatives, and surrounding spaces.
    const Eigen::MatrixXd sci = parse_matrix_csv(" 1e-3 , -2.5E2 \n 0.0 , 7 \n", "test");
    CHECK(sci(0, 0) == 1e-3);
    CHECK(sci(0, 1) == -250.0);

    CHECK_THROWS_AS(parse_matrix_csv("", "test"), lpreduce::validation_error);
    CHECK_THROWS_AS(parse_matrix_csv("a,b\nc,d\n", "test"), lpreduce::validation_error);
    CHECK_THROWS_AS(parse_matrix_csv("1,2\n3\n", "test"), lpreduce::validation_error);
    CHECK_THROWS_AS(lpreduce::read_matrix_csv("/nonexistent/path.csv"),
                    lpreduce::validation_error);
}

TEST_CASE("CSV round trip preserves every bit") {
    lpreduce::Rng rng(47);
    const Eigen::MatrixXd original = oracles::random_matrix(rng, 6, 9) * 1e3;
    const Eigen::MatrixXd parsed =
        parse_matrix_csv(lpreduce::format_matrix_csv(original), "roundtrip");
    REQUIRE(parsed.rows() == original.rows());
    REQUIRE(parsed.cols() == original.cols());
    CHECK((parsed - original).norm() == 0.0);
}

namespace {

lpreduce::RunReport sample_report() {
    lpreduce::RunReport r;
    r.artifact_version = lpreduce::artifact_version;
    r.p = 1.5;
    r.eps_total = 0.25;
    r.eps_snow = 0.0389;
    r.d_bss = 9.0;
    r.normalization = "balanced";
    r.explicit_range = false;
    r.range_u_min = 1e-3;
    r.range_u_max = 17.25;
    r.rank_tol = 1e-10;
    r.input_path = "points.csv";
    r.k = 10;
    r.m = 200;
    r.n = 3;
    r.sigma = {2, 17, 101};
    r.weights = {0.5, 1.25, 3.75};
    r.kappa = 3.9921;
    r.certified_factor = 2.9184;
    r.normalization_scale = 1.0172;
    r.degenerate = false;
    r.snowflake = {0.75, 0.1, 1e-3, 17.25, 40, 80, 0.5412, {0.93, 1.04, 0.002, 3.1, 10000}};
    r.distortion = {0.97, 1.03, 0, 4, 2, 7, 0.95, 1.06, 2.05, 45, 1, 0};
    r.timings = {12.0, 3.0, 900.0, 0.4, 1.1, 916.5};
    return r;
}

}  // namespace

TEST_CASE("run report round-trips losslessly") {
    const lpreduce::RunReport report = sample_report();
    const std::string once = lpreduce::run_report_to_json(report);
    const lpreduce::RunReport parsed = lpreduce::run_report_from_json(once);
    const std::string twice = lpreduce::run_report_to_json(parsed);
    CHECK(once == twice);
    CHECK(parsed.eps_total.has_value());
    CHECK(parsed.sigma == report.sigma);
    CHECK(parsed.distortion.pair_count == 45);

    // Without eps_total the field serializes as null and stays absent.
    lpreduce::RunReport plain = report;
    plain.eps_total.reset();
    const std::string plain_json = lpreduce::run_report_to_json(plain);
    CHECK_FALSE(lpreduce::run_report_from_json(plain_json).eps_total.has_value());

    CHECK_THROWS_AS(lpreduce::run_report_from_json("{not json"), lpreduce::validation_error);
    CHECK_THROWS_AS(lpreduce::run_report_from_json("{}"), lpreduce::validation_error);
}

TEST_CASE("strip_timings removes exactly the timings block") {
    const std::string full = lpreduce::run_report_to_json(sample_report());
    const std::string stripped = lpreduce::strip_timings(full);
    CHECK(stripped.find("timings_ms") == std::string::npos);
    CHECK(stripped.find("certified_factor") != std::string::npos);
    // Stripping twice is a fixed point.
    CHECK(lpreduce::strip_timings(stripped) == stripped);
}

TEST_CASE("sparse weights JSON round trip") {
    lpreduce::SparseWeights w;
    w.weights = Eigen::VectorXd::Zero(10);
    w.weights(3) = 1.5;
    w.weights(7) = 0.25;
    w.support = {3, 7};
    w.rank_used = 2;
    w.d_used = 6.76;
    w.kappa = 3.4;
    w.scale = 0.01562;
    const std::string once = lpreduce::sparse_weights_to_json(w);
    const lpreduce::SparseWeights parsed = lpreduce::sparse_weights_from_json(once);
    CHECK(parsed.support == w.support);
    CHECK(parsed.weights.size() == 10);
    CHECK(parsed.weights(3) == 1.5);
    CHECK(parsed.weights(0) == 0.0);
    CHECK(lpreduce::sparse_weights_to_json(parsed) == once);
}

TEST_CASE("reduced point set JSON round trip") {
    lpreduce::ReducedPointSet r;
    r.p = 0.5;
    r.sigma = {1, 4};
    r.weights = Eigen::VectorXd::Zero(2);
    r.weights << 2.0, 0.125;
    r.n = 2;
    r.points = Eigen::MatrixXd::Zero(3, 2);
    r.points << 1.0, -2.0, 0.5, 3.25, 0.0, 1e-7;
    r.certified_factor = 2.1;
    r.normalization_scale = 1.0;
    r.kappa = 3.2;
    r.eps_snow = 0.1;
    r.d_bss = 9.0;
    r.snowflake = {0.25, 0.1, 0.01, 10.0, 16, 32, 0.77, {0.95, 1.05, 0.01, 9.0, 4000}};
    const std::string once = lpreduce::reduced_points_to_json(r);
    const lpreduce::ReducedPointSet parsed = lpreduce::reduced_points_from_json(once);
    CHECK(parsed.sigma == r.sigma);
    CHECK((parsed.points - r.points).norm() == 0.0);
    CHECK(lpreduce::reduced_points_to_json(parsed) == once);
}

TEST_CASE("format_double emits shortest round-trip forms") {
    CHECK(lpreduce::format_double(5.0) == "5");
    CHECK(lpreduce::format_double(0.1) == "0.1");
    CHECK(lpreduce::format_double(-2.5e-7) == "-2.5e-07");
    const double awkward = 0.1 + 0.2;
    double parsed = 0.0;
    const std::string text = lpreduce::format_double(awkward);
    std::from_chars(text.data(), text.data() + text.size(), parsed);
    CHECK(parsed == awkward);
}
