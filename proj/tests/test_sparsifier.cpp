#include "lpreduce/sparsifier.hpp"

#include "lpreduce/datasets.hpp"
#include "lpreduce/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using lpreduce::BarrierStep;
using lpreduce::BssOptions;
using lpreduce::SparseWeights;
using lpreduce::SpectralBounds;
using lpreduce::VectorFamily;
using lpreduce::bss_sparsify;
using lpreduce::d_for_eps;
using lpreduce::kappa_bound;
using lpreduce::verify_sandwich;

namespace {

void check_sandwich(const VectorFamily& family, const SparseWeights& sw) {
    const SpectralBounds bounds = verify_sandwich(family, sw);
    CHECK(bounds.lambda_min >= 1.0 / std::sqrt(sw.kappa) - 1e-8);
    CHECK(bounds.lambda_max <= std::sqrt(sw.kappa) + 1e-8);
}

}  // namespace

TEST_CASE("d_for_eps closed forms and monotonicity") {
    CHECK(d_for_eps(1.0) == doctest::Approx(25.0 / 9.0).epsilon(1e-12));
    CHECK(d_for_eps(0.5) == doctest::Approx(6.76).epsilon(1e-12));
    CHECK(d_for_eps(0.1) > d_for_eps(0.5));
    // The produced d really delivers the (1+eps)^2 per-side guarantee.
    for (double eps : {0.1, 0.5, 1.0}) {
        const double side = std::pow(1.0 + eps, 2.0);
        CHECK(std::sqrt(kappa_bound(d_for_eps(eps))) <= side * (1.0 + 1e-12));
    }
    CHECK_THROWS_AS(d_for_eps(0.0), lpreduce::validation_error);
    CHECK_THROWS_AS(d_for_eps(1.5), lpreduce::validation_error);
}

TEST_CASE("standard basis family: every index is kept") {
    const int k = 4;
    VectorFamily family;
    family.columns = Eigen::MatrixXd::Identity(k, k);
    const SparseWeights sw = bss_sparsify(family, 4.0);
    CHECK(sw.rank_used == k);
    REQUIRE(sw.support.size() == static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        CHECK(sw.support[static_cast<std::size_t>(i)] == i);
        CHECK(sw.weights(i) > 0.0);
    }
    CHECK(sw.kappa <= kappa_bound(4.0) + 1e-12);
    check_sandwich(family, sw);
}

TEST_CASE("twenty copies of one vector collapse to a single weight") {
    VectorFamily family;
    family.columns = Eigen::MatrixXd::Constant(1, 20, 3.0);
    const SparseWeights sw = bss_sparsify(family, 4.0);
    CHECK(sw.support.size() == 1);
    CHECK(sw.kappa <= 9.0 + 1e-12);
    // A = 20 * 9; the sandwich pins the total weight.
    const double total = sw.weights.sum();
    CHECK(total >= 20.0 / std::sqrt(sw.kappa) - 1e-9);
    CHECK(total <= 20.0 * std::sqrt(sw.kappa) + 1e-9);
}

TEST_CASE("fifty random vectors in R^4 at d = 9") {
    lpreduce::Rng rng(42);
    VectorFamily family;
    family.columns = oracles::random_matrix(rng, 4, 50);
    const SparseWeights sw = bss_sparsify(family, 9.0);
    CHECK(sw.rank_used == 4);
    CHECK(sw.support.size() <= 36);
    CHECK(sw.kappa <= 4.0 + 1e-12);
    check_sandwich(family, sw);
}

TEST_CASE("verify_sandwich on hand-built weights") {
    lpreduce::Rng rng(9);
    VectorFamily family;
    family.columns = oracles::random_matrix(rng, 3, 17);

    SparseWeights ones;
    ones.weights = Eigen::VectorXd::Ones(17);
    const SpectralBounds id = verify_sandwich(family, ones);
    CHECK(id.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.lambda_max == doctest::Approx(1.0).epsilon(1e-12));

    SparseWeights twos;
    twos.weights = Eigen::VectorXd::Constant(17, 2.0);
    const SpectralBounds doubled = verify_sandwich(family, twos);
    CHECK(doubled.lambda_min == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(doubled.lambda_max == doctest::Approx(2.0).epsilon(1e-12));

    SparseWeights wrong;
    wrong.weights = Eigen::VectorXd::Ones(5);
    CHECK_THROWS_AS(verify_sandwich(family, wrong), lpreduce::validation_error);
}

TEST_CASE("barrier trace: safety and potential bounds at every step") {
    lpreduce::Rng rng(3);
    VectorFamily family;
    family.columns = oracles::random_matrix(rng, 6, 80);

    const double d = 4.0;
    std::vector<BarrierStep> trace;
    BssOptions opts;
    opts.trace = &trace;
    const SparseWeights sw = bss_sparsify(family, d, opts);

    const long steps = static_cast<long>(std::ceil(d * sw.rank_used));
    REQUIRE(trace.size() == static_cast<std::size_t>(steps) + 1);
    const double sd = std::sqrt(d);
    const double phi_u_bound = (sd - 1.0) / (d + sd) + 1e-9;
    const double phi_l_bound = 1.0 / sd + 1e-9;
    for (const BarrierStep& row : trace) {
        CHECK(row.lower < row.lambda_min);
        CHECK(row.lambda_max < row.upper);
        CHECK(row.phi_upper <= phi_u_bound);
        CHECK(row.phi_lower <= phi_l_bound);
    }
    // Every selection row carries a positive increment; the final row is state only.
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        CHECK(trace[i].index >= 0);
        CHECK(trace[i].t > 0.0);
    }
    CHECK(trace.back().index == -1);
}

TEST_CASE("rank-deficient family sparsifies on its range") {
    // Vectors confined to a plane of R^3.
    lpreduce::Rng rng(14);
    Eigen::MatrixXd plane = oracles::random_matrix(rng, 3, 2);
    VectorFamily family;
    family.columns = plane * oracles::random_matrix(rng, 2, 12);
    const SparseWeights sw = bss_sparsify(family, 4.0);
    CHECK(sw.rank_used == 2);
    CHECK(sw.support.size() <= 8);
    check_sandwich(family, sw);
}

TEST_CASE("sandwich containment holds across seeded random instances") {
    for (int seed = 0; seed < 25; ++seed) {
        lpreduce::Rng rng(static_cast<std::uint64_t>(seed) + 1000);
        const int r = 2 + static_cast<int>(rng.uniform01() * 7.0);
        const int m = r + 1 + static_cast<int>(rng.uniform01() * 150.0);
        const double d = (seed % 2 == 0) ? 4.0 : 9.0;
        VectorFamily family;
        family.columns = oracles::random_matrix(rng, r, m);
        const SparseWeights sw = bss_sparsify(family, d);
        CHECK(sw.support.size() <= static_cast<std::size_t>(std::ceil(d * sw.rank_used)));
        CHECK(sw.kappa <= kappa_bound(d) + 1e-12);
        check_sandwich(family, sw);
    }
}

TEST_CASE("identical inputs give bit-identical weights") {
    lpreduce::Rng rng(77);
    VectorFamily family;
    family.columns = oracles::random_matrix(rng, 5, 60);
    const SparseWeights a = bss_sparsify(family, 6.0);
    const SparseWeights b = bss_sparsify(family, 6.0);
    REQUIRE(a.weights.size() == b.weights.size());
    for (Eigen::Index i = 0; i < a.weights.size(); ++i) {
        CHECK(a.weights(i) == b.weights(i));
    }
    CHECK(a.support == b.support);
}

TEST_CASE("invalid inputs are rejected") {
    VectorFamily family;
    family.columns = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(bss_sparsify(family, 1.0), lpreduce::validation_error);
    CHECK_THROWS_AS(bss_sparsify(family, 0.5), lpreduce::validation_error);

    VectorFamily zero;
    zero.columns = Eigen::MatrixXd::Zero(3, 5);
    CHECK_THROWS_AS(bss_sparsify(zero, 4.0), lpreduce::validation_error);

    VectorFamily empty;
    empty.columns = Eigen::MatrixXd(0, 0);
    CHECK_THROWS_AS(bss_sparsify(empty, 4.0), lpreduce::validation_error);
}
