#pragma once

#include "lpreduce/pipeline.hpp"
#include "lpreduce/sparsifier.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace lpreduce {

// ---------------------------------------------------------------------------
// CSV: one point (or vector) per row, comma-separated numeric columns, an
// optional header line auto-detected, locale-independent parsing.
// ---------------------------------------------------------------------------

Eigen::MatrixXd parse_matrix_csv(const std::string& text, const std::string& origin);
Eigen::MatrixXd read_matrix_csv(const std::string& path);
std::string format_matrix_csv(const Eigen::MatrixXd& rows);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& rows);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// ---------------------------------------------------------------------------
// JSON report schemas (schema_version 1). Serialization is deterministic:
// identical values give identical bytes.
// ---------------------------------------------------------------------------

/// Everything a reduce run reports. Round-trips losslessly through its JSON
/// form; the timings block is the only part excluded from determinism checks.
struct RunReport {
    int schema_version = 1;
    std::string artifact_version;
    // config echo
    double p = 1.0;
    std::optional<double> eps_total;
    double eps_snow = 0.0;
    double d_bss = 0.0;
    std::string normalization;
    bool explicit_range = false;
    double range_u_min = 0.0;
    double range_u_max = 0.0;
    double rank_tol = 0.0;
    std::string input_path;
    int k = 0;
    int m = 0;
    // results
    int n = 0;
    std::vector<int> sigma;
    std::vector<double> weights;
    double kappa = 1.0;
    double certified_factor = 1.0;
    double normalization_scale = 1.0;
    bool degenerate = false;
    SnowflakeSummary snowflake;
    DistortionReport distortion;
    StageTimings timings;
};

std::string run_report_to_json(const RunReport& report);
RunReport run_report_from_json(const std::string& text);

std::string sparse_weights_to_json(const SparseWeights& weights);
SparseWeights sparse_weights_from_json(const std::string& text);

std::string reduced_points_to_json(const ReducedPointSet& reduced);
ReducedPointSet reduced_points_from_json(const std::string& text);

std::string snowflake_summary_to_json(const SnowflakeSummary& summary);

/// Parses arbitrary JSON, drops the top-level "timings_ms" member if present,
/// and re-serializes; the determinism comparison runs on the result.
std::string strip_timings(const std::string& report_json);

}  // namespace lpreduce
