#include "lpreduce/pipeline.hpp"

#include "lpreduce/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace lpreduce {

namespace {

void check_point_set(const LpPointSet& ps) {
    if (!(ps.p > 0.0 && ps.p < 2.0)) {
        throw validation_error("p must lie in (0, 2), got " + std::to_string(ps.p));
    }
    if (ps.count() < 1 || ps.ambient() < 1) {
        throw validation_error("point set must have at least one point and one coordinate");
    }
    if (!ps.points.allFinite()) {
        throw validation_error("point set contains non-finite entries");
    }
}

/// p-th power of the l_p distance between two rows.
double power_distance(const Eigen::MatrixXd& rows, int u, int v, double p) {
    return (rows.row(u) - rows.row(v)).array().abs().pow(p).sum();
}

struct PowerRatioScan {
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    int min_u = -1, min_v = -1;
    int max_u = -1, max_v = -1;
    long pairs = 0;
    long duplicates = 0;
    long violations = 0;
};

/// Ratios of reduced to original p-th-power distances over all pairs.
PowerRatioScan scan_power_ratios(const Eigen::MatrixXd& original, const Eigen::MatrixXd& reduced,
                                 double p) {
    PowerRatioScan scan;
    const int k = static_cast<int>(original.rows());
    for (int u = 0; u < k; ++u) {
        for (int v = u + 1; v < k; ++v) {
            ++scan.pairs;
            const double orig = power_distance(original, u, v, p);
            const double red = power_distance(reduced, u, v, p);
            if (orig == 0.0) {
                ++scan.duplicates;
                if (red > 0.0) ++scan.violations;
                continue;
            }
            const double ratio = red / orig;
            if (ratio < scan.min_ratio) {
                scan.min_ratio = ratio;
                scan.min_u = u;
                scan.min_v = v;
            }
            if (ratio > scan.max_ratio) {
                scan.max_ratio = ratio;
                scan.max_u = u;
                scan.max_v = v;
            }
        }
    }
    return scan;
}

/// Milliseconds elapsed since `from`, and resets `from` to now.
double lap_ms(std::chrono::steady_clock::time_point& from) {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - from).count();
    from = now;
    return ms;
}

ReducedPointSet degenerate_result(const LpPointSet& ps, const ReductionConfig::Resolved& resolved) {
    ReducedPointSet out;
    out.p = ps.p;
    out.sigma = {0};
    out.weights = Eigen::VectorXd::Ones(1);
    out.n = 1;
    out.points = Eigen::MatrixXd::Zero(ps.count(), 1);
    out.certified_factor = 1.0;
    out.normalization_scale = 1.0;
    out.degenerate = true;
    out.kappa = 1.0;
    out.eps_snow = resolved.eps_snow;
    out.d_bss = resolved.d_bss;
    return out;
}

}  // namespace

ReductionConfig::Resolved ReductionConfig::resolve(double p) const {
    if (eps_total.has_value()) {
        const double total = *eps_total;
        if (!(total > 0.0) || !std::isfinite(total)) {
            throw validation_error("eps_total must be positive");
        }
        // One budget for both stages: (1 + e)^(6/p) = 1 + eps_total.
        const double e = std::pow(1.0 + total, p / 6.0) - 1.0;
        return {e, d_for_eps(std::min(e, 1.0))};
    }
    if (!(eps_snow > 0.0) || !std::isfinite(eps_snow)) {
        throw validation_error("eps_snow must be positive");
    }
    if (!(d_bss > 1.0) || !std::isfinite(d_bss)) {
        throw validation_error("d_bss must exceed 1");
    }
    return {eps_snow, d_bss};
}

ReducedPointSet reduce_lp(const LpPointSet& ps, const ReductionConfig& config,
                          StageTimings* timings) {
    check_point_set(ps);
    const ReductionConfig::Resolved resolved = config.resolve(ps.p);
    if (config.range.explicit_range &&
        !(config.range.u_min > 0.0 && config.range.u_min < config.range.u_max)) {
        throw validation_error("explicit range requires 0 < u_min < u_max");
    }
    const int k = ps.count();
    const int m = ps.ambient();
    auto clock = std::chrono::steady_clock::now();

    // Range of nonzero coordinate differences across all pairs.
    double u_min = std::numeric_limits<double>::infinity();
    double u_max = 0.0;
    for (int u = 0; u < k; ++u) {
        for (int v = u + 1; v < k; ++v) {
            for (int i = 0; i < m; ++i) {
                const double diff = std::abs(ps.points(u, i) - ps.points(v, i));
                if (diff > 0.0) {
                    u_min = std::min(u_min, diff);
                    u_max = std::max(u_max, diff);
                }
            }
        }
    }
    if (u_max == 0.0) {
        return degenerate_result(ps, resolved);
    }
    if (u_max / u_min < 1.01) {
        // All nonzero differences share one magnitude (scaled basis vectors do
        // this); widen so the snowflake builder has a real interval to certify.
        u_min /= 2.0;
        u_max *= 2.0;
    }
    if (config.range.explicit_range) {
        u_min = config.range.u_min;
        u_max = config.range.u_max;
    }

    const SnowflakeMap map = build_snowflake_map(ps.p / 2.0, resolved.eps_snow, u_min, u_max);
    const int s = map.dim();
    const SnowflakeAudit map_audit = map.audit(10000);
    if (timings) timings->snowflake_ms = lap_ms(clock);

    // One subspace per lifted block coordinate l: X_l is spanned by the k
    // vectors whose i-th entry is coordinate l of the lift of z_j(i).
    SubspaceFamily family;
    family.ambient = m;
    family.spanning.assign(s, Eigen::MatrixXd(m, k));
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < m; ++i) {
            const Eigen::VectorXd lifted = map.eval(ps.points(j, i));
            for (int l = 0; l < s; ++l) {
                family.spanning[static_cast<std::size_t>(l)](i, j) = lifted(l);
            }
        }
    }

    if (timings) timings->subspaces_ms = lap_ms(clock);

    BssOptions opts;
    opts.rank_tol = config.rank_tol;
    const CoordinateSelection selection = simultaneous_sparsify(family, resolved.d_bss, opts,
                                                                config.rank_tol);
    if (timings) timings->sparsify_ms = lap_ms(clock);

    ReducedPointSet out;
    out.p = ps.p;
    out.sigma = selection.sigma;
    out.weights = selection.weights;
    out.n = static_cast<int>(selection.sigma.size());
    out.kappa = selection.kappa;
    out.eps_snow = resolved.eps_snow;
    out.d_bss = resolved.d_bss;
    out.certified_factor =
        std::pow(1.0 + resolved.eps_snow, 4.0) * std::sqrt(selection.kappa);
    out.snowflake = {map.rho(),   map.eps_target(), map.u_min(),       map.u_max(),
                     map.bands(), map.dim(),        map.calibration(), map_audit};

    out.points.resize(k, out.n);
    const double inv_p = 1.0 / ps.p;
    for (int j = 0; j < out.n; ++j) {
        out.points.col(j) =
            std::pow(out.weights(j), inv_p) * ps.points.col(out.sigma[static_cast<std::size_t>(j)]);
    }

    // Normalization: balanced centers the measured p-th-power ratio band at 1;
    // certified lifts the certified lower bound to exactly 1.
    double scale = 1.0;
    if (config.normalization == Normalization::balanced) {
        const PowerRatioScan scan = scan_power_ratios(ps.points, out.points, ps.p);
        if (scan.max_ratio > 0.0 && std::isfinite(scan.min_ratio)) {
            scale = std::pow(1.0 / std::sqrt(scan.min_ratio * scan.max_ratio), inv_p);
        }
    } else {
        scale = std::pow(out.certified_factor, inv_p);
    }
    out.points *= scale;
    out.normalization_scale = scale;
    if (timings) timings->emit_ms = lap_ms(clock);
    return out;
}

DistortionReport measure_distortion(const LpPointSet& original, const ReducedPointSet& reduced) {
    check_point_set(original);
    if (original.count() != static_cast<int>(reduced.points.rows())) {
        throw validation_error("point counts of original and reduced sets differ");
    }
    if (original.p != reduced.p) {
        throw validation_error("exponent p of original and reduced sets differ");
    }

    const PowerRatioScan scan = scan_power_ratios(original.points, reduced.points, original.p);
    DistortionReport report;
    report.pair_count = scan.pairs;
    report.duplicate_count = scan.duplicates;
    report.violation_count = scan.violations;
    report.certified_side = std::pow(reduced.certified_factor, 1.0 / original.p);
    if (scan.max_ratio > 0.0 && std::isfinite(scan.min_ratio)) {
        report.min_power_ratio = scan.min_ratio;
        report.max_power_ratio = scan.max_ratio;
        report.min_ratio = std::pow(scan.min_ratio, 1.0 / original.p);
        report.max_ratio = std::pow(scan.max_ratio, 1.0 / original.p);
        report.worst_min_u = scan.min_u;
        report.worst_min_v = scan.min_v;
        report.worst_max_u = scan.max_u;
        report.worst_max_v = scan.max_v;
    }
    return report;
}

PredictedBound predicted_n(int k, double p, const ReductionConfig& config, double range_ratio) {
    if (k < 1) {
        throw validation_error("point count must be at least 1");
    }
    if (!(p > 0.0 && p < 2.0)) {
        throw validation_error("p must lie in (0, 2)");
    }
    if (!(range_ratio > 1.0) || !std::isfinite(range_ratio)) {
        throw validation_error("range ratio must exceed 1");
    }
    const ReductionConfig::Resolved resolved = config.resolve(p);
    const SnowflakeMap map = build_snowflake_map(p / 2.0, resolved.eps_snow, 1.0, range_ratio);

    PredictedBound out;
    out.snowflake_dim = map.dim();
    out.n_bound = static_cast<long long>(
        std::ceil(resolved.d_bss * static_cast<double>(k) * static_cast<double>(map.dim())));
    out.asymptotic_eps_exponent = 2.0 + 2.0 / p;
    return out;
}

}  // namespace lpreduce
