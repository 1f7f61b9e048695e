#pragma once

#include "lpreduce/snowflake.hpp"
#include "lpreduce/subspace.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace lpreduce {

/// k points in l_p^m, 0 < p < 2, one point per row.
struct LpPointSet {
    double p = 1.0;
    Eigen::MatrixXd points;  ///< k x m

    int count() const { return static_cast<int>(points.rows()); }
    int ambient() const { return static_cast<int>(points.cols()); }
};

enum class Normalization { balanced, certified };

struct RangePolicy {
    bool explicit_range = false;  ///< false: derive [u_min, u_max] from the data
    double u_min = 0.0;
    double u_max = 0.0;
};

struct ReductionConfig {
    /// When set, a single distortion budget split across both stages:
    /// eps_snow solves (1+e)^{6/p} = 1 + eps_total and d_bss = d_for_eps(eps_snow).
    std::optional<double> eps_total;
    /// Advanced knobs, used when eps_total is absent.
    double eps_snow = 0.1;
    double d_bss = 9.0;
    Normalization normalization = Normalization::balanced;
    RangePolicy range;
    double rank_tol = 1e-10;

    /// The (eps_snow, d_bss) pair this config resolves to.
    struct Resolved {
        double eps_snow;
        double d_bss;
    };
    Resolved resolve(double p) const;
};

/// Serialized description of the snowflake stage inside reports; frequencies
/// and amplitudes are reconstructible from (rho, eps, u_min, u_max, bands).
struct SnowflakeSummary {
    double rho = 0.0;
    double eps = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    int bands = 0;
    int dim = 0;
    double calibration = 0.0;
    SnowflakeAudit audit;
};

/// k points in l_p^n given by weighted restriction to the selected coordinates:
/// point row u has entries s_i^{1/p} z_u(i), i in sigma, times the
/// normalization scale.
struct ReducedPointSet {
    double p = 1.0;
    std::vector<int> sigma;
    Eigen::VectorXd weights;  ///< positive, aligned with sigma
    int n = 0;                ///< |sigma|
    Eigen::MatrixXd points;   ///< k x n
    double certified_factor = 1.0;   ///< two-sided bound F on p-th-power ratios (pre-normalization)
    double normalization_scale = 1.0;
    bool degenerate = false;  ///< all input points identical
    double kappa = 1.0;
    SnowflakeSummary snowflake;
    double eps_snow = 0.0;
    double d_bss = 0.0;
};

/// Brute-force pairwise distortion audit of a reduction.
struct DistortionReport {
    double min_ratio = 1.0;  ///< reduced/original distance ratio extremes
    double max_ratio = 1.0;
    int worst_min_u = -1, worst_min_v = -1;
    int worst_max_u = -1, worst_max_v = -1;
    double min_power_ratio = 1.0;  ///< extremes on p-th powers
    double max_power_ratio = 1.0;
    double certified_side = 1.0;   ///< F^{1/p}, the pre-normalization per-side bound
    long pair_count = 0;
    long duplicate_count = 0;   ///< pairs with zero original distance
    long violation_count = 0;   ///< duplicates mapped to distinct reduced points
};

/// Wall-clock stage breakdown of a reduce run, milliseconds. The audit and
/// total entries are filled by the caller.
struct StageTimings {
    double snowflake_ms = 0.0;
    double subspaces_ms = 0.0;
    double sparsify_ms = 0.0;
    double emit_ms = 0.0;
    double audit_ms = 0.0;
    double total_ms = 0.0;
};

/// End-to-end reduction: snowflake lift of every coordinate, one subspace per
/// lifted block coordinate, simultaneous sparsification, weighted coordinate
/// restriction. The certified two-sided bound on p-th-power distance ratios is
/// F = (1+eps_snow)^4 * kappa^{1/2} before normalization.
ReducedPointSet reduce_lp(const LpPointSet& points, const ReductionConfig& config,
                          StageTimings* timings = nullptr);

/// Exhaustive pairwise ratio audit (all k(k-1)/2 pairs, measured on the actual
/// reduced points). Pairs at zero original distance are excluded from the
/// ratio extremes and counted; nonzero reduced distance for such a pair counts
/// as a violation.
DistortionReport measure_distortion(const LpPointSet& original, const ReducedPointSet& reduced);

/// A priori support bound for a hypothetical run: ceil(d * k * s) where s is
/// the snowflake dimension the builder would produce for this config and range
/// ratio, plus the asymptotic shape for comparison (constant unspecified).
struct PredictedBound {
    long long n_bound = 0;
    int snowflake_dim = 0;
    double asymptotic_eps_exponent = 0.0;  ///< n grows like k / eps^(2 + 2/p)
};
PredictedBound predicted_n(int k, double p, const ReductionConfig& config, double range_ratio);

}  // namespace lpreduce
