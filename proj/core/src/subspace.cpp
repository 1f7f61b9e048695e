#include "lpreduce/subspace.hpp"

#include "lpreduce/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace lpreduce {

namespace {

void check_family(const SubspaceFamily& family) {
    if (family.ambient < 1) {
        throw validation_error("ambient dimension must be at least 1");
    }
    if (family.spanning.empty()) {
        throw validation_error("subspace family is empty");
    }
    for (const auto& s : family.spanning) {
        if (s.rows() != family.ambient) {
            throw validation_error("spanning set row count does not match the ambient dimension");
        }
        if (s.cols() < 1) {
            throw validation_error("each subspace needs at least one spanning vector");
        }
    }
}

std::vector<Eigen::MatrixXd> all_bases(const SubspaceFamily& family, double tol) {
    std::vector<Eigen::MatrixXd> bases;
    bases.reserve(family.spanning.size());
    for (const auto& s : family.spanning) {
        bases.push_back(orthonormal_basis(s, tol));
    }
    return bases;
}

/// Eigenvalue range of B^T D B for one basis, D the diagonal of weights on sigma.
SpectralBounds compressed_bounds(const Eigen::MatrixXd& basis, const std::vector<int>& sigma,
                                 const Eigen::VectorXd& weights) {
    const auto k = basis.cols();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        gram.noalias() += weights(static_cast<Eigen::Index>(j)) *
                          (basis.row(sigma[j]).transpose() * basis.row(sigma[j]));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    return {es.eigenvalues()(0), es.eigenvalues()(k - 1)};
}

}  // namespace

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& spanning, double tol) {
    if (spanning.cols() < 1 || spanning.rows() < 1) {
        throw validation_error("spanning set is empty");
    }
    if (!spanning.allFinite()) {
        throw validation_error("spanning set contains non-finite entries");
    }
    if (!(tol > 0.0 && tol < 1.0)) {
        throw validation_error("rank threshold must lie in (0, 1)");
    }
    const double ref = spanning.colwise().norm().maxCoeff();
    if (!(ref > 0.0)) {
        throw validation_error("all spanning vectors are below the rank threshold");
    }

    Eigen::MatrixXd basis(spanning.rows(), spanning.cols());
    Eigen::Index accepted = 0;
    Eigen::VectorXd v(spanning.rows());
    for (Eigen::Index j = 0; j < spanning.cols(); ++j) {
        v = spanning.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index b = 0; b < accepted; ++b) {
                v.noalias() -= basis.col(b).dot(v) * basis.col(b);
            }
        }
        const double norm = v.norm();
        if (norm > tol * ref) {
            basis.col(accepted++) = v / norm;
        }
    }
    if (accepted == 0) {
        throw validation_error("all spanning vectors are below the rank threshold");
    }
    return basis.leftCols(accepted);
}

CoordinateSelection simultaneous_sparsify(const SubspaceFamily& family, double d,
                                          const BssOptions& opts, double basis_tol) {
    check_family(family);
    const std::vector<Eigen::MatrixXd> bases = all_bases(family, basis_tol);

    Eigen::Index total_dims = 0;
    for (const auto& b : bases) total_dims += b.cols();

    // Column i holds the concatenation of the i-th rows of all bases: the
    // coordinate-i evaluation of every basis vector of every subspace.
    VectorFamily concatenated;
    concatenated.columns.resize(total_dims, family.ambient);
    Eigen::Index offset = 0;
    for (const auto& b : bases) {
        concatenated.columns.middleRows(offset, b.cols()) = b.transpose();
        offset += b.cols();
    }

    const SparseWeights sw = bss_sparsify(concatenated, d, opts);

    CoordinateSelection out;
    out.sigma = sw.support;
    out.weights.resize(static_cast<Eigen::Index>(sw.support.size()));
    for (std::size_t j = 0; j < sw.support.size(); ++j) {
        out.weights(static_cast<Eigen::Index>(j)) = sw.weights(sw.support[j]);
    }
    out.kappa = sw.kappa;
    out.rank_used = sw.rank_used;
    out.d_used = sw.d_used;
    out.per_subspace.reserve(bases.size());
    for (const auto& b : bases) {
        out.per_subspace.push_back(compressed_bounds(b, out.sigma, out.weights));
    }
    return out;
}

std::vector<SpectralBounds> verify_selection(const SubspaceFamily& family,
                                             const CoordinateSelection& selection,
                                             double basis_tol) {
    check_family(family);
    if (selection.weights.size() != static_cast<Eigen::Index>(selection.sigma.size())) {
        throw validation_error("selection weights do not align with sigma");
    }
    for (int idx : selection.sigma) {
        if (idx < 0 || idx >= family.ambient) {
            throw validation_error("sigma index " + std::to_string(idx) +
                                   " is outside the ambient dimension");
        }
    }
    const std::vector<Eigen::MatrixXd> bases = all_bases(family, basis_tol);
    std::vector<SpectralBounds> out;
    out.reserve(bases.size());
    for (const auto& b : bases) {
        out.push_back(compressed_bounds(b, selection.sigma, selection.weights));
    }
    return out;
}

}  // namespace lpreduce
