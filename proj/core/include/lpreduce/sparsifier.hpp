#pragma once

#include <Eigen/Core>

#include <vector>

namespace lpreduce {

/// A family of m column vectors in R^k whose outer-product sum is the target
/// quadratic form.
struct VectorFamily {
    Eigen::MatrixXd columns;  ///< k x m, one vector per column

    int dim() const { return static_cast<int>(columns.rows()); }
    int count() const { return static_cast<int>(columns.cols()); }
};

/// Output of the deterministic barrier sparsifier.
struct SparseWeights {
    Eigen::VectorXd weights;   ///< size m; exactly zero off the support
    std::vector<int> support;  ///< ascending indices of strictly positive weights
    int rank_used = 0;         ///< effective rank r of the target form
    double d_used = 0.0;       ///< oversampling parameter
    double kappa = 1.0;        ///< achieved condition ratio of the whitened weighted sum
    double scale = 1.0;        ///< global factor folded into weights (geometric centering)
};

/// One row of the barrier iteration trace, recorded before the step acts:
/// barrier positions, spectrum extremes of the partial sum, and both potentials,
/// then the chosen index and weight increment. The final state is appended with
/// index = -1 and t = 0.
struct BarrierStep {
    long step = 0;
    int index = -1;
    double t = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double phi_upper = 0.0;
    double phi_lower = 0.0;
};

struct BssOptions {
    /// Relative eigenvalue threshold for the whitening rank decision.
    double rank_tol = 1e-10;
    /// Optional per-step trace sink (cleared first).
    std::vector<BarrierStep>* trace = nullptr;
};

/// Smallest oversampling d whose condition bound ((sqrt d + 1)/(sqrt d - 1))^2
/// guarantees each sandwich side at most (1+eps)^2. Requires 0 < eps <= 1.
double d_for_eps(double eps);

/// Condition-ratio bound ((sqrt d + 1)/(sqrt d - 1))^2 for a given d > 1.
double kappa_bound(double d);

/// Deterministic spectral sparsification by barrier potentials.
///
/// Whitens A = sum v_i v_i^T to the identity on its range, then runs
/// ceil(d * rank) rank-one selection steps, each picking the smallest index
/// whose upper score does not exceed its lower score and advancing both
/// barriers. Weights are rescaled by 1/sqrt(u_T * l_T) at the end, giving
///
///   kappa^{-1/2} x^T A x <= x^T (sum s_i v_i v_i^T) x <= kappa^{1/2} x^T A x
///
/// for every x, with kappa = u_T / l_T <= ((sqrt d + 1)/(sqrt d - 1))^2 and
/// at most ceil(d * rank) nonzero weights.
///
/// Throws validation_error for d <= 1 or a zero family, numerical_error if a
/// barrier or potential invariant is violated (carrying step and barriers).
SparseWeights bss_sparsify(const VectorFamily& family, double d, const BssOptions& opts = {});

/// Eigenvalue extremes of the whitened weighted sum; the independent check of
/// the sandwich above. Callers assert containment in [kappa^{-1/2}, kappa^{1/2}].
struct SpectralBounds {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};
SpectralBounds verify_sandwich(const VectorFamily& family, const SparseWeights& weights,
                               double rank_tol = 1e-10);

namespace detail {

/// Whitened family: columns w_i = Lambda_r^{-1/2} Q_r^T v_i with
/// sum_i w_i w_i^T = I_r. Computed from whichever of the k x k outer-product
/// matrix or the m x m Gram matrix is smaller.
struct Whitened {
    Eigen::MatrixXd vectors;      ///< r x m
    Eigen::VectorXd eigenvalues;  ///< the r retained eigenvalues of A, ascending
    int rank = 0;
};
Whitened whiten(const Eigen::MatrixXd& columns, double rank_tol);

}  // namespace detail

}  // namespace lpreduce
