#include "lpreduce/datasets.hpp"

#include "lpreduce/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace lpreduce {

std::uint64_t Rng::next_bits() {
    // splitmix64; a full mt19937_64 per stream is overkill for data generation
    // and this keeps the byte-determinism contract trivially portable.
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return static_cast<double>(next_bits() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

GenSpec::Kind parse_gen_kind(const std::string& name) {
    if (name == "gaussian") return GenSpec::Kind::gaussian;
    if (name == "simplex") return GenSpec::Kind::simplex;
    if (name == "clustered") return GenSpec::Kind::clustered;
    throw validation_error("unknown generator kind '" + name +
                           "' (expected gaussian, simplex, or clustered)");
}

std::string gen_kind_name(GenSpec::Kind kind) {
    switch (kind) {
        case GenSpec::Kind::gaussian: return "gaussian";
        case GenSpec::Kind::simplex: return "simplex";
        case GenSpec::Kind::clustered: return "clustered";
    }
    return "unknown";
}

Eigen::MatrixXd generate_points(const GenSpec& spec) {
    if (spec.k < 1 || spec.m < 1) {
        throw validation_error("generator needs k >= 1 and m >= 1");
    }
    if (!(spec.scale > 0.0)) {
        throw validation_error("generator scale must be positive");
    }
    Eigen::MatrixXd points(spec.k, spec.m);
    Rng rng(spec.seed);

    switch (spec.kind) {
        case GenSpec::Kind::gaussian: {
            for (int u = 0; u < spec.k; ++u) {
                for (int i = 0; i < spec.m; ++i) {
                    points(u, i) = spec.scale * rng.normal();
                }
            }
            break;
        }
        case GenSpec::Kind::simplex: {
            if (spec.k > spec.m) {
                throw validation_error("simplex kind requires k <= m");
            }
            points.setZero();
            for (int u = 0; u < spec.k; ++u) {
                points(u, u) = spec.scale;
            }
            break;
        }
        case GenSpec::Kind::clustered: {
            if (spec.clusters < 1) {
                throw validation_error("cluster count must be at least 1");
            }
            Eigen::MatrixXd centers(spec.clusters, spec.m);
            for (int c = 0; c < spec.clusters; ++c) {
                for (int i = 0; i < spec.m; ++i) {
                    centers(c, i) = 3.0 * spec.scale * rng.normal();
                }
            }
            for (int u = 0; u < spec.k; ++u) {
                const int c = u % spec.clusters;
                for (int i = 0; i < spec.m; ++i) {
                    points(u, i) = centers(c, i) + spec.noise * spec.scale * rng.normal();
                }
            }
            break;
        }
    }
    return points;
}

}  // namespace lpreduce
