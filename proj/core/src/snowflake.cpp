#include "lpreduce/snowflake.hpp"

#include "lpreduce/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace lpreduce {

namespace {

void check_range(double rho, double u_min, double u_max) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw validation_error("snowflake exponent must lie in (0, 1), got " + std::to_string(rho));
    }
    if (!(u_min > 0.0 && u_min < u_max) || !std::isfinite(u_min) || !std::isfinite(u_max)) {
        throw validation_error("snowflake range requires 0 < u_min < u_max");
    }
}

}  // namespace

double snowflake_scale_constant(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw validation_error("snowflake exponent must lie in (0, 1)");
    }
    const double alpha = 2.0 * rho;
    if (alpha == 1.0) {
        return std::numbers::pi / 2.0;
    }
    // integral of (1-cos v) v^{-1-alpha} = cos(pi alpha / 2) Gamma(2-alpha) / (alpha (1-alpha));
    // cos written as sin(pi(1-alpha)/2) to stay accurate near alpha = 1.
    return std::sin(std::numbers::pi * (1.0 - alpha) / 2.0) * std::tgamma(2.0 - alpha) /
           (alpha * (1.0 - alpha));
}

SnowflakeWindow snowflake_window(double rho, double eps) {
    if (!(rho > 0.0 && rho < 1.0) || !(eps > 0.0)) {
        throw validation_error("snowflake_window requires rho in (0,1) and eps > 0");
    }
    const double scale = snowflake_scale_constant(rho);
    const double budget = eps / 8.0;
    double theta_low = 1e-2;
    double theta_high = 1e2;
    // Missing low-frequency mass hurts u = u_max; the deficit there is bounded by
    // theta_low^{2-2rho} / (2(2-2rho) C). Missing tail mass hurts u = u_min with
    // deficit ~ theta_high^{-2rho} / (2rho C). One decade per iteration.
    for (int i = 0; i < 12; ++i) {
        const double deficit = std::pow(theta_low, 2.0 - 2.0 * rho) / (2.0 * (2.0 - 2.0 * rho) * scale);
        if (deficit <= budget) break;
        theta_low /= 10.0;
    }
    for (int i = 0; i < 12; ++i) {
        const double deficit = std::pow(theta_high, -2.0 * rho) / (2.0 * rho * scale);
        if (deficit <= budget) break;
        theta_high *= 10.0;
    }
    return {theta_low, theta_high};
}

SnowflakeMap build_snowflake_grid(double rho, double u_min, double u_max,
                                  double theta_low, double theta_high, int bands) {
    check_range(rho, u_min, u_max);
    if (!(theta_low > 0.0 && theta_high > 0.0)) {
        throw validation_error("frequency window factors must be positive");
    }
    if (bands < 1) {
        throw validation_error("band count must be at least 1");
    }
    const double lambda_lo = theta_low / u_max;
    const double lambda_hi = theta_high / u_min;
    if (!(lambda_lo < lambda_hi)) {
        throw validation_error("frequency window is empty for this range");
    }

    SnowflakeMap map;
    map.rho_ = rho;
    map.u_min_ = u_min;
    map.u_max_ = u_max;
    map.frequencies_.resize(bands);
    map.amplitudes_.resize(bands);

    // Geometric band edges e_0..e_J; frequency at the geometric midpoint of each
    // band, amplitude^2 the exact integral of lambda^{-1-2rho} over the band.
    const double log_lo = std::log(lambda_lo);
    const double log_step = (std::log(lambda_hi) - log_lo) / bands;
    const double band_factor = -std::expm1(-2.0 * rho * log_step);  // 1 - g^{-2rho}
    for (int j = 0; j < bands; ++j) {
        const double edge = std::exp(log_lo + j * log_step);
        map.frequencies_[j] = std::exp(log_lo + (j + 0.5) * log_step);
        map.amplitudes_[j] = std::sqrt(std::pow(edge, -2.0 * rho) * band_factor / (2.0 * rho));
    }

    // Calibrate so the chord length is exact at the geometric midpoint of the range.
    map.calibration_ = 1.0;
    const double u_mid = std::sqrt(u_min * u_max);
    const double raw = map.distance(u_mid);
    if (!(raw > 0.0) || !std::isfinite(raw)) {
        throw validation_error("degenerate frequency grid: zero chord at calibration point");
    }
    map.calibration_ = std::pow(u_mid, rho) / raw;
    return map;
}

SnowflakeMap build_snowflake_map(double rho, double eps, double u_min, double u_max,
                                 int max_bands) {
    check_range(rho, u_min, u_max);
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw validation_error("snowflake error target must be positive");
    }
    if (max_bands < 1 || max_bands > snowflake_band_cap) {
        throw validation_error("band cap out of range");
    }

    const SnowflakeWindow window = snowflake_window(rho, eps);
    const double decades = std::log10((window.theta_high / u_min) / (window.theta_low / u_max));

    // Construction audit is slightly stricter than the contract so the map also
    // passes finer grids than the one used here.
    constexpr int audit_samples = 8193;
    constexpr double guard = 5e-4;
    const double hi_bound = (1.0 + eps) * (1.0 - guard);

    int bands = std::max(8, static_cast<int>(std::ceil(4.0 * decades)));
    double best_min = 0.0;
    double best_max = std::numeric_limits<double>::infinity();
    while (true) {
        SnowflakeMap map = build_snowflake_grid(rho, u_min, u_max,
                                                window.theta_low, window.theta_high, bands);
        map.eps_target_ = eps;
        const SnowflakeAudit a = map.audit(audit_samples);
        if (a.max_ratio <= hi_bound && a.min_ratio >= 1.0 / hi_bound) {
            return map;
        }
        if (a.max_ratio / a.min_ratio < best_max / best_min) {
            best_min = a.min_ratio;
            best_max = a.max_ratio;
        }
        if (bands > max_bands / 2) {
            throw construction_error(
                "snowflake refinement hit the band cap (" + std::to_string(max_bands) +
                    ") before meeting eps = " + std::to_string(eps),
                best_min, best_max);
        }
        bands *= 2;
    }
}

Eigen::VectorXd SnowflakeMap::eval(double t) const {
    const int n = bands();
    Eigen::VectorXd out(2 * n);
    for (int j = 0; j < n; ++j) {
        const double arg = frequencies_[j] * t;
        // The product rounding (up to half an ulp of a possibly huge argument)
        // would dominate chord noise at high frequencies; recover it exactly
        // and correct the pair to first order.
        const double err = std::fma(frequencies_[j], t, -arg);
        const double c = std::cos(arg);
        const double s = std::sin(arg);
        const double amp = calibration_ * amplitudes_[j];
        out[2 * j] = amp * (c - s * err);
        out[2 * j + 1] = amp * (s + c * err);
    }
    return out;
}

double SnowflakeMap::distance(double u) const {
    // 2 (1 - cos x) = 4 sin^2(x/2); the sin form keeps full relative precision
    // when lambda_j * u is small.
    double sum = 0.0;
    const int n = bands();
    for (int j = 0; j < n; ++j) {
        const double s = std::sin(0.5 * frequencies_[j] * u);
        const double term = 2.0 * amplitudes_[j] * s;
        sum += term * term;
    }
    return calibration_ * std::sqrt(sum);
}

SnowflakeAudit SnowflakeMap::audit(int n_samples) const {
    if (n_samples < 2) {
        throw validation_error("audit needs at least 2 samples");
    }
    SnowflakeAudit report;
    report.samples = n_samples;
    report.min_ratio = std::numeric_limits<double>::infinity();
    report.max_ratio = 0.0;
    const double log_lo = std::log(u_min_);
    const double log_step = (std::log(u_max_) - log_lo) / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) {
        // Pin the endpoints exactly; interior points are log-spaced.
        const double u = (i == 0) ? u_min_
                       : (i == n_samples - 1) ? u_max_
                                              : std::exp(log_lo + i * log_step);
        const double ratio = distance(u) / std::pow(u, rho_);
        if (ratio < report.min_ratio) {
            report.min_ratio = ratio;
            report.argmin_u = u;
        }
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.argmax_u = u;
        }
    }
    return report;
}

}  // namespace lpreduce
