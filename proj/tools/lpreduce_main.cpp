// lpreduce: weighted coordinate selection for finite point sets in l_p, 0 < p < 2.
//
// Subcommands:
//   gen             write a synthetic point set as CSV
//   reduce          reduce a point set to few weighted coordinates, with reports
//   sparsify        run the barrier sparsifier on raw vectors from CSV
//   snowflake-audit build a snowflake map and report its ratio band
//   bench           sweep the point count and tabulate bound vs. actual size
//
// Exit codes: 0 success, 2 validation/parse errors, 3 numerical or pipeline failures.

#include "lpreduce/datasets.hpp"
#include "lpreduce/errors.hpp"
#include "lpreduce/io.hpp"
#include "lpreduce/pipeline.hpp"
#include "lpreduce/snowflake.hpp"
#include "lpreduce/sparsifier.hpp"
#include "lpreduce/version.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct GenArgs {
    std::string kind = "gaussian";
    int k = 0;
    int m = 0;
    double scale = 1.0;
    int clusters = 3;
    double noise = 0.05;
    std::uint64_t seed = 0;
    std::string output;
};

int run_gen(const GenArgs& args) {
    lpreduce::GenSpec spec;
    spec.kind = lpreduce::parse_gen_kind(args.kind);
    spec.k = args.k;
    spec.m = args.m;
    spec.scale = args.scale;
    spec.clusters = args.clusters;
    spec.noise = args.noise;
    spec.seed = args.seed;
    const Eigen::MatrixXd points = lpreduce::generate_points(spec);
    lpreduce::write_matrix_csv(args.output, points);
    std::cout << "wrote " << points.rows() << " points in dimension " << points.cols() << " to "
              << args.output << "\n";
    return 0;
}

struct ReduceArgs {
    std::string input;
    double p = 1.0;
    std::optional<double> eps_total;
    double eps_snow = 0.1;
    double d_bss = 9.0;
    std::string normalization = "balanced";
    std::optional<double> u_min;
    std::optional<double> u_max;
    double rank_tol = 1e-10;
    std::string output;
    std::string report;
};

lpreduce::ReductionConfig make_config(const ReduceArgs& args) {
    lpreduce::ReductionConfig config;
    config.eps_total = args.eps_total;
    config.eps_snow = args.eps_snow;
    config.d_bss = args.d_bss;
    if (args.normalization == "balanced") {
        config.normalization = lpreduce::Normalization::balanced;
    } else if (args.normalization == "certified") {
        config.normalization = lpreduce::Normalization::certified;
    } else {
        throw lpreduce::validation_error("normalization must be 'balanced' or 'certified'");
    }
    if (args.u_min.has_value() != args.u_max.has_value()) {
        throw lpreduce::validation_error("--umin and --umax must be given together");
    }
    if (args.u_min.has_value()) {
        config.range = {true, *args.u_min, *args.u_max};
    }
    config.rank_tol = args.rank_tol;
    return config;
}

int run_reduce(const ReduceArgs& args) {
    const auto start = Clock::now();
    lpreduce::LpPointSet points;
    points.p = args.p;
    points.points = lpreduce::read_matrix_csv(args.input);
    const lpreduce::ReductionConfig config = make_config(args);

    lpreduce::StageTimings timings;
    const lpreduce::ReducedPointSet reduced = lpreduce::reduce_lp(points, config, &timings);

    const auto audit_start = Clock::now();
    const lpreduce::DistortionReport distortion = lpreduce::measure_distortion(points, reduced);
    timings.audit_ms = ms_since(audit_start);
    timings.total_ms = ms_since(start);

    lpreduce::RunReport report;
    report.artifact_version = lpreduce::artifact_version;
    report.p = args.p;
    report.eps_total = args.eps_total;
    report.eps_snow = reduced.eps_snow;
    report.d_bss = reduced.d_bss;
    report.normalization = args.normalization;
    report.explicit_range = config.range.explicit_range;
    report.range_u_min = reduced.degenerate ? 0.0 : reduced.snowflake.u_min;
    report.range_u_max = reduced.degenerate ? 0.0 : reduced.snowflake.u_max;
    report.rank_tol = args.rank_tol;
    report.input_path = args.input;
    report.k = points.count();
    report.m = points.ambient();
    report.n = reduced.n;
    report.sigma = reduced.sigma;
    report.weights.assign(reduced.weights.data(), reduced.weights.data() + reduced.weights.size());
    report.kappa = reduced.kappa;
    report.certified_factor = reduced.certified_factor;
    report.normalization_scale = reduced.normalization_scale;
    report.degenerate = reduced.degenerate;
    report.snowflake = reduced.snowflake;
    report.distortion = distortion;
    report.timings = timings;

    if (!args.output.empty()) {
        lpreduce::write_text_file(args.output, lpreduce::reduced_points_to_json(reduced));
    }
    if (!args.report.empty()) {
        lpreduce::write_text_file(args.report, lpreduce::run_report_to_json(report));
    }
    std::cout << "reduced " << report.k << " points: m = " << report.m << " -> n = " << report.n
              << ", kappa = " << report.kappa << ", certified factor F = "
              << report.certified_factor << "\n"
              << "distance ratios [" << distortion.min_ratio << ", " << distortion.max_ratio
              << "], certified side " << distortion.certified_side << " (" << timings.total_ms
              << " ms)\n";
    return 0;
}

struct SparsifyArgs {
    std::string input;
    double d = 0.0;
    double rank_tol = 1e-10;
    std::string output;
    bool verify = false;
};

int run_sparsify(const SparsifyArgs& args) {
    const Eigen::MatrixXd rows = lpreduce::read_matrix_csv(args.input);
    lpreduce::VectorFamily family;
    family.columns = rows.transpose();  // CSV rows are vectors

    lpreduce::BssOptions opts;
    opts.rank_tol = args.rank_tol;
    const lpreduce::SparseWeights weights = lpreduce::bss_sparsify(family, args.d, opts);
    if (!args.output.empty()) {
        lpreduce::write_text_file(args.output, lpreduce::sparse_weights_to_json(weights));
    }
    std::cout << "sparsified " << family.count() << " vectors of dimension " << family.dim()
              << ": rank = " << weights.rank_used << ", support = " << weights.support.size()
              << " (bound " << static_cast<long>(std::ceil(args.d * weights.rank_used))
              << "), kappa = " << weights.kappa << "\n";
    if (args.verify) {
        const lpreduce::SpectralBounds bounds =
            lpreduce::verify_sandwich(family, weights, args.rank_tol);
        const double lo = 1.0 / std::sqrt(weights.kappa) - 1e-8;
        const double hi = std::sqrt(weights.kappa) + 1e-8;
        std::cout << "verify: eigenvalues [" << bounds.lambda_min << ", " << bounds.lambda_max
                  << "] within [" << lo << ", " << hi << "]\n";
        if (!(bounds.lambda_min >= lo && bounds.lambda_max <= hi)) {
            std::cerr << "error: sandwich verification failed\n";
            return 3;
        }
    }
    return 0;
}

struct AuditArgs {
    double rho = 0.5;
    double eps = 0.1;
    double u_min = 0.0;
    double u_max = 0.0;
    int samples = 10000;
    std::string output;
};

int run_snowflake_audit(const AuditArgs& args) {
    const lpreduce::SnowflakeMap map =
        lpreduce::build_snowflake_map(args.rho, args.eps, args.u_min, args.u_max);
    const lpreduce::SnowflakeAudit audit = map.audit(args.samples);
    const lpreduce::SnowflakeSummary summary{map.rho(),   map.eps_target(), map.u_min(),
                                             map.u_max(), map.bands(),      map.dim(),
                                             map.calibration(),             audit};
    if (!args.output.empty()) {
        lpreduce::write_text_file(args.output, lpreduce::snowflake_summary_to_json(summary));
    }
    std::cout << "snowflake rho = " << map.rho() << ", dim = " << map.dim() << " (" << map.bands()
              << " bands), range [" << map.u_min() << ", " << map.u_max() << "]\n"
              << "ratio band [" << audit.min_ratio << ", " << audit.max_ratio << "] over "
              << audit.samples << " samples (target [" << 1.0 / (1.0 + args.eps) << ", "
              << 1.0 + args.eps << "]), worst at u = " << audit.argmin_u << " / " << audit.argmax_u
              << "\n";
    return 0;
}

struct BenchArgs {
    std::vector<int> k_list;
    int m = 200;
    double p = 1.0;
    double eps_snow = 0.1;
    double d_bss = 9.0;
    std::string kind = "gaussian";
    double scale = 1.0;
    std::uint64_t seed = 0;
    double range_ratio = 1e4;
    std::string output;
};

int run_bench(const BenchArgs& args) {
    if (args.k_list.empty()) {
        throw lpreduce::validation_error("--k-list must name at least one point count");
    }
    lpreduce::ReductionConfig config;
    config.eps_snow = args.eps_snow;
    config.d_bss = args.d_bss;

    std::string csv = "k,s,n_bound,n_actual,measured_distortion,runtime_ms\n";
    for (int k : args.k_list) {
        lpreduce::GenSpec spec;
        spec.kind = lpreduce::parse_gen_kind(args.kind);
        spec.k = k;
        spec.m = args.m;
        spec.scale = args.scale;
        spec.seed = args.seed;
        lpreduce::LpPointSet points;
        points.p = args.p;
        points.points = lpreduce::generate_points(spec);

        const auto start = Clock::now();
        const lpreduce::ReducedPointSet reduced = lpreduce::reduce_lp(points, config);
        const lpreduce::DistortionReport distortion = lpreduce::measure_distortion(points, reduced);
        const double elapsed = ms_since(start);

        // The a-priori bound uses the fixed range ratio so n_bound/k is the same
        // constant on every row; the run itself uses the data-derived range.
        const lpreduce::PredictedBound bound =
            lpreduce::predicted_n(k, args.p, config, args.range_ratio);
        const double spread = distortion.max_ratio / distortion.min_ratio;

        csv += std::to_string(k) + "," + std::to_string(reduced.snowflake.dim) + "," +
               std::to_string(bound.n_bound) + "," + std::to_string(reduced.n) + "," +
               lpreduce::format_double(spread) + "," + lpreduce::format_double(elapsed) + "\n";
        std::cout << "k = " << k << ": n = " << reduced.n << " (bound " << bound.n_bound
                  << ", bound/k = " << static_cast<double>(bound.n_bound) / k
                  << "), ratio spread = " << spread << ", " << elapsed << " ms\n";
    }
    if (!args.output.empty()) {
        lpreduce::write_text_file(args.output, csv);
    } else {
        std::cout << csv;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted coordinate selection for finite point sets in l_p, 0 < p < 2"};
    app.set_version_flag("--version", lpreduce::artifact_version);
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate a synthetic point set CSV");
    gen->add_option("--kind", gen_args.kind, "gaussian | simplex | clustered")
        ->default_val("gaussian");
    gen->add_option("--k", gen_args.k, "number of points")->required();
    gen->add_option("--m", gen_args.m, "ambient dimension")->required();
    gen->add_option("--scale", gen_args.scale, "magnitude scale")->default_val(1.0);
    gen->add_option("--clusters", gen_args.clusters, "cluster count (clustered kind)")
        ->default_val(3);
    gen->add_option("--noise", gen_args.noise, "relative noise level (clustered kind)")
        ->default_val(0.05);
    gen->add_option("--seed", gen_args.seed, "random seed")->default_val(0);
    gen->add_option("--output", gen_args.output, "output CSV path")->required();

    ReduceArgs reduce_args;
    auto* reduce = app.add_subcommand("reduce", "reduce a point set to weighted coordinates");
    reduce->add_option("--input", reduce_args.input, "input CSV, one point per row")->required();
    reduce->add_option("--p", reduce_args.p, "exponent p in (0, 2)")->required();
    double eps_total_flag = 0.0;
    auto* eps_total_opt =
        reduce->add_option("--eps-total", eps_total_flag,
                           "total distortion budget; overrides --eps-snow/--d-bss");
    reduce->add_option("--eps-snow", reduce_args.eps_snow, "snowflake stage error target")
        ->default_val(0.1);
    reduce->add_option("--d-bss", reduce_args.d_bss, "sparsifier oversampling (> 1)")
        ->default_val(9.0);
    reduce->add_option("--normalization", reduce_args.normalization, "balanced | certified")
        ->default_val("balanced");
    double u_min_flag = 0.0, u_max_flag = 0.0;
    auto* umin_opt = reduce->add_option("--umin", u_min_flag, "explicit range lower end");
    auto* umax_opt = reduce->add_option("--umax", u_max_flag, "explicit range upper end");
    reduce->add_option("--rank-tol", reduce_args.rank_tol, "relative rank threshold")
        ->default_val(1e-10);
    reduce->add_option("--output", reduce_args.output, "reduced point set JSON path");
    reduce->add_option("--report", reduce_args.report, "run report JSON path");

    SparsifyArgs sparsify_args;
    auto* sparsify = app.add_subcommand("sparsify", "barrier-sparsify vectors from CSV rows");
    sparsify->add_option("--input", sparsify_args.input, "input CSV, one vector per row")
        ->required();
    sparsify->add_option("--d", sparsify_args.d, "oversampling parameter (> 1)")->required();
    sparsify->add_option("--rank-tol", sparsify_args.rank_tol, "relative rank threshold")
        ->default_val(1e-10);
    sparsify->add_option("--output", sparsify_args.output, "weights JSON path");
    sparsify->add_flag("--verify", sparsify_args.verify,
                       "re-check the sandwich with the eigenvalue oracle");

    AuditArgs audit_args;
    auto* audit = app.add_subcommand("snowflake-audit", "build a snowflake map and audit it");
    audit->add_option("--rho", audit_args.rho, "exponent in (0, 1)")->required();
    audit->add_option("--eps", audit_args.eps, "error target")->required();
    audit->add_option("--umin", audit_args.u_min, "range lower end")->required();
    audit->add_option("--umax", audit_args.u_max, "range upper end")->required();
    audit->add_option("--samples", audit_args.samples, "audit grid size")->default_val(10000);
    audit->add_option("--output", audit_args.output, "audit report JSON path");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "sweep k and tabulate bound vs. actual size");
    bench->add_option("--k-list", bench_args.k_list, "point counts, e.g. --k-list 8 16 32")
        ->required()
        ->delimiter(',');
    bench->add_option("--m", bench_args.m, "ambient dimension")->default_val(200);
    bench->add_option("--p", bench_args.p, "exponent p in (0, 2)")->default_val(1.0);
    bench->add_option("--eps-snow", bench_args.eps_snow, "snowflake stage error target")
        ->default_val(0.1);
    bench->add_option("--d-bss", bench_args.d_bss, "sparsifier oversampling")->default_val(9.0);
    bench->add_option("--kind", bench_args.kind, "generator kind")->default_val("gaussian");
    bench->add_option("--scale", bench_args.scale, "generator scale")->default_val(1.0);
    bench->add_option("--seed", bench_args.seed, "random seed")->default_val(0);
    bench->add_option("--range-ratio", bench_args.range_ratio,
                      "fixed range ratio for the a-priori bound column")
        ->default_val(1e4);
    bench->add_option("--output", bench_args.output, "output CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return run_gen(gen_args);
        if (reduce->parsed()) {
            if (*eps_total_opt) reduce_args.eps_total = eps_total_flag;
            if (*umin_opt) reduce_args.u_min = u_min_flag;
            if (*umax_opt) reduce_args.u_max = u_max_flag;
            return run_reduce(reduce_args);
        }
        if (sparsify->parsed()) return run_sparsify(sparsify_args);
        if (audit->parsed()) return run_snowflake_audit(audit_args);
        if (bench->parsed()) return run_bench(bench_args);
    } catch (const lpreduce::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lpreduce::construction_error& e) {
        std::cerr << "error: " << e.what() << " (best ratio band [" << e.best_min_ratio << ", "
                  << e.best_max_ratio << "])\n";
        return 3;
    } catch (const lpreduce::numerical_error& e) {
        std::cerr << "error: " << e.what() << " (barriers [" << e.lower << ", " << e.upper
                  << "])\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
