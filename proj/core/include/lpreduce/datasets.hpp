#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>

namespace lpreduce {

/// Synthetic point-set generators. Sampling is hand-rolled (splitmix64 bits,
/// Box-Muller) so identical seeds give identical bytes on every platform.
struct GenSpec {
    enum class Kind { gaussian, simplex, clustered };
    Kind kind = Kind::gaussian;
    int k = 0;             ///< number of points (rows)
    int m = 0;             ///< ambient dimension (columns)
    double scale = 1.0;
    int clusters = 3;      ///< clustered kind only
    double noise = 0.05;   ///< clustered kind: noise level relative to scale
    std::uint64_t seed = 0;
};

GenSpec::Kind parse_gen_kind(const std::string& name);
std::string gen_kind_name(GenSpec::Kind kind);

/// gaussian: i.i.d. N(0, scale^2) entries. simplex: row u is scale * e_u
/// (requires k <= m; all pairwise l_p^p distances are 2 * scale^p).
/// clustered: round-robin cluster assignment around gaussian centers.
Eigen::MatrixXd generate_points(const GenSpec& spec);

/// Deterministic scalar streams used by the generators; exposed for tests and
/// seeded random instances elsewhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    double uniform01();                       ///< [0, 1), 53-bit resolution
    double uniform(double lo, double hi);
    double normal();                          ///< standard normal, Box-Muller

private:
    std::uint64_t next_bits();
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace lpreduce
