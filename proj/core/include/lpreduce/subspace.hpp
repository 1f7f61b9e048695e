#pragma once

#include "lpreduce/sparsifier.hpp"

#include <Eigen/Core>

#include <vector>

namespace lpreduce {

/// A list of subspaces of R^m, each given by a spanning set (one column per
/// spanning vector). Effective dimensions come out of rank-revealing
/// orthonormalization, so heterogeneous and redundant spanning sets are fine.
struct SubspaceFamily {
    int ambient = 0;                         ///< m
    std::vector<Eigen::MatrixXd> spanning;   ///< each m x (#spanning vectors)
};

/// Weighted coordinate set preserving the norm of every vector of every
/// subspace in the family it was built from.
struct CoordinateSelection {
    std::vector<int> sigma;                    ///< ascending coordinate indices
    Eigen::VectorXd weights;                   ///< positive, aligned with sigma
    std::vector<SpectralBounds> per_subspace;  ///< eigenvalue range of B_l^T D B_l
    double kappa = 1.0;                        ///< inherited from the sparsifier
    int rank_used = 0;                         ///< rank of the concatenated form
    double d_used = 0.0;
};

/// Modified Gram-Schmidt with one re-orthogonalization pass and relative rank
/// threshold tol: returns an m x k_l matrix with orthonormal columns spanning
/// the input up to rank filtering. Throws validation_error if every spanning
/// vector falls below the threshold.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& spanning, double tol = 1e-10);

/// Simultaneous selection: orthonormalizes each subspace, concatenates the
/// per-coordinate rows of all bases into vectors v_i in R^{sum k_l}, and
/// sparsifies that family. The support becomes sigma and the sparsifier
/// weights become the coordinate weights; per-subspace eigenvalue bounds of
/// B_l^T D B_l land in [kappa^{-1/2}, kappa^{1/2}].
CoordinateSelection simultaneous_sparsify(const SubspaceFamily& family, double d,
                                          const BssOptions& opts = {}, double basis_tol = 1e-10);

/// Independent oracle: recomputes orthonormal bases and returns, per subspace,
/// the eigenvalue range of B_l^T D B_l under the selection's weights.
std::vector<SpectralBounds> verify_selection(const SubspaceFamily& family,
                                             const CoordinateSelection& selection,
                                             double basis_tol = 1e-10);

}  // namespace lpreduce
