#pragma once

#include <Eigen/Core>

#include <vector>

namespace lpreduce {

/// Extremes of the ratio distance(u) / u^rho over a log-spaced grid of u.
struct SnowflakeAudit {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double argmin_u = 0.0;   ///< grid point attaining min_ratio
    double argmax_u = 0.0;   ///< grid point attaining max_ratio
    int samples = 0;
};

/// Finite trigonometric curve t -> R^{2J} whose chord lengths realize |x-y|^rho
/// within a multiplicative 1+eps band over a declared range of |x-y|.
///
/// Coordinates come in (cos, sin) pairs, one pair per frequency:
///   eval(t)[2j]   = c * a_j * cos(lambda_j * t)
///   eval(t)[2j+1] = c * a_j * sin(lambda_j * t)
/// so that ||eval(x) - eval(y)||^2 = c^2 * sum_j 2 a_j^2 (1 - cos(lambda_j (x-y)))
/// depends on x - y alone.
///
/// Immutable after construction; all member functions are pure and safe for
/// concurrent use.
class SnowflakeMap {
public:
    double rho() const { return rho_; }
    double eps_target() const { return eps_target_; }
    double u_min() const { return u_min_; }
    double u_max() const { return u_max_; }
    /// Frequencies lambda_1 < ... < lambda_J, a geometric progression.
    const std::vector<double>& frequencies() const { return frequencies_; }
    /// Band amplitudes a_1..a_J (calibration factor not folded in).
    const std::vector<double>& amplitudes() const { return amplitudes_; }
    double calibration() const { return calibration_; }
    /// Output dimension s = 2J.
    int dim() const { return 2 * static_cast<int>(frequencies_.size()); }
    int bands() const { return static_cast<int>(frequencies_.size()); }

    /// Image of the scalar t; total on the reals.
    Eigen::VectorXd eval(double t) const;

    /// Closed-form chord length for a coordinate difference u = x - y.
    /// Agrees with ||eval(x) - eval(y)|| to relative 1e-10; even in u.
    double distance(double u) const;

    /// Ratio extremes of distance(u)/u^rho over n_samples log-spaced points
    /// of [u_min, u_max]. Requires n_samples >= 2; endpoints always included.
    SnowflakeAudit audit(int n_samples) const;

private:
    friend SnowflakeMap build_snowflake_grid(double, double, double, double, double, int);
    friend SnowflakeMap build_snowflake_map(double, double, double, double, int);

    double rho_ = 0.0;
    double eps_target_ = 0.0;
    double u_min_ = 0.0;
    double u_max_ = 0.0;
    std::vector<double> frequencies_;
    std::vector<double> amplitudes_;
    double calibration_ = 1.0;
};

/// Hard cap on the number of frequency bands the builder may use.
inline constexpr int snowflake_band_cap = 1 << 20;

/// Builds a map certified by its own audit: doubles the band count (and first
/// widens the frequency window analytically so endpoint truncation cannot eat
/// the error budget) until ratios over [u_min, u_max] fit inside
/// [1/(1+eps), 1+eps]. Throws construction_error carrying the best band
/// achieved if the cap is reached, validation_error on bad arguments.
SnowflakeMap build_snowflake_map(double rho, double eps, double u_min, double u_max,
                                 int max_bands = snowflake_band_cap);

/// Fixed-grid variant: lays down exactly `bands` geometric frequency bands on
/// [theta_low/u_max, theta_high/u_min] and calibrates at sqrt(u_min*u_max),
/// with no audit enforcement. The refinement loop and tests build on this.
SnowflakeMap build_snowflake_grid(double rho, double u_min, double u_max,
                                  double theta_low, double theta_high, int bands);

/// Frequency window implied by (rho, eps) alone: the default [1e-2, 1e2]
/// dimensionless window, widened decade by decade until the analytic
/// truncation deficit at each range endpoint is below eps/8.
struct SnowflakeWindow {
    double theta_low;
    double theta_high;
};
SnowflakeWindow snowflake_window(double rho, double eps);

/// The Levy helix normalization constant: integral over (0, inf) of
/// (1 - cos v) v^{-1-2 rho} dv, in closed form.
double snowflake_scale_constant(double rho);

}  // namespace lpreduce
