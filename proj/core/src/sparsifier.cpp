#include "lpreduce/sparsifier.hpp"

#include "lpreduce/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace lpreduce {

double d_for_eps(double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw validation_error("d_for_eps requires eps in (0, 1], got " + std::to_string(eps));
    }
    const double g = (1.0 + eps) * (1.0 + eps);
    const double sqrt_d = (g + 1.0) / (g - 1.0);
    return sqrt_d * sqrt_d;
}

double kappa_bound(double d) {
    if (!(d > 1.0)) {
        throw validation_error("oversampling d must exceed 1");
    }
    const double sd = std::sqrt(d);
    const double side = (sd + 1.0) / (sd - 1.0);
    return side * side;
}

namespace detail {

Whitened whiten(const Eigen::MatrixXd& columns, double rank_tol) {
    const auto k = columns.rows();
    const auto m = columns.cols();
    if (k < 1 || m < 1) {
        throw validation_error("vector family must be nonempty");
    }
    if (!columns.allFinite()) {
        throw validation_error("vector family contains non-finite entries");
    }
    if (!(rank_tol > 0.0 && rank_tol < 1.0)) {
        throw validation_error("rank tolerance must lie in (0, 1)");
    }

    Whitened out;
    if (k <= m) {
        Eigen::MatrixXd outer(k, k);
        outer.noalias() = columns * columns.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(outer);
        const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
        const double lambda_max = ev(k - 1);
        if (!(lambda_max > 0.0)) {
            throw validation_error("vector family sums to the zero form");
        }
        const double cut = rank_tol * lambda_max;
        int r = 0;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (ev(j) > cut) ++r;
        }
        out.rank = r;
        out.eigenvalues = ev.tail(r);
        out.vectors.noalias() =
            out.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() *
            (es.eigenvectors().rightCols(r).transpose() * columns);
    } else {
        // Gram route: the nonzero spectrum of A equals that of G = V^T V, and the
        // whitened vectors are exactly the rows of the retained Gram eigenvectors.
        Eigen::MatrixXd gram(m, m);
        gram.noalias() = columns.transpose() * columns;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        const Eigen::VectorXd& ev = es.eigenvalues();
        const double lambda_max = ev(m - 1);
        if (!(lambda_max > 0.0)) {
            throw validation_error("vector family sums to the zero form");
        }
        const double cut = rank_tol * lambda_max;
        int r = 0;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (ev(j) > cut) ++r;
        }
        out.rank = r;
        out.eigenvalues = ev.tail(r);
        out.vectors = es.eigenvectors().rightCols(r).transpose();
    }
    return out;
}

}  // namespace detail

SparseWeights bss_sparsify(const VectorFamily& family, double d, const BssOptions& opts) {
    if (!(d > 1.0) || !std::isfinite(d)) {
        throw validation_error("oversampling d must exceed 1, got " + std::to_string(d));
    }
    const detail::Whitened wh = detail::whiten(family.columns, opts.rank_tol);
    const int r = wh.rank;
    const int m = family.count();
    const Eigen::MatrixXd& w = wh.vectors;  // r x m
    const Eigen::VectorXd wnorm2 = w.colwise().squaredNorm();

    const double sd = std::sqrt(d);
    double lower = -static_cast<double>(r) * sd;
    double upper = static_cast<double>(r) * (d + sd) / (sd - 1.0);
    const double step_lower = 1.0;
    const double step_upper = (sd + 1.0) / (sd - 1.0);
    const long steps = static_cast<long>(std::ceil(d * r));

    const double phi_upper_bound = (sd - 1.0) / (d + sd) + 1e-9;
    const double phi_lower_bound = 1.0 / sd + 1e-9;

    if (opts.trace) {
        opts.trace->clear();
        opts.trace->reserve(steps + 1);
    }

    Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(r, r);
    Eigen::VectorXd raw_weights = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd shifted_up(r), shifted_lo(r);
    Eigen::MatrixXd projected(r, m), projected_sq(r, m);

    for (long step = 0; step <= steps; ++step) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(partial);
        const Eigen::VectorXd& mu = es.eigenvalues();  // ascending
        const double mu_min = mu(0);
        const double mu_max = mu(r - 1);

        // Barrier safety: the spectrum must sit strictly between the barriers.
        if (!(lower < mu_min && mu_max < upper)) {
            throw numerical_error("barrier crossed at step " + std::to_string(step), step, lower,
                                  upper);
        }
        const double phi_upper = ((upper - mu.array()).inverse()).sum();
        const double phi_lower = ((mu.array() - lower).inverse()).sum();
        if (!(phi_upper <= phi_upper_bound && phi_lower <= phi_lower_bound)) {
            throw numerical_error("barrier potential exceeded its bound at step " +
                                      std::to_string(step),
                                  step, lower, upper);
        }
        if (opts.trace) {
            opts.trace->push_back({step, -1, 0.0, lower, upper, mu_min, mu_max, phi_upper,
                                   phi_lower});
        }
        if (step == steps) break;

        const double upper_next = upper + step_upper;
        const double lower_next = lower + step_lower;
        const double dphi_upper =
            phi_upper - ((upper_next - mu.array()).inverse()).sum();
        const double dphi_lower =
            ((mu.array() - lower_next).inverse()).sum() - phi_lower;

        // Scores of every vector against both shifted barriers, through the
        // eigenbasis of the partial sum: one GEMM, then weighted column sums.
        projected.noalias() = es.eigenvectors().transpose() * w;
        projected_sq = projected.cwiseAbs2();
        shifted_up = (upper_next - mu.array()).inverse();
        shifted_lo = (mu.array() - lower_next).inverse();
        const Eigen::VectorXd up_lin = projected_sq.transpose() * shifted_up;
        const Eigen::VectorXd up_quad = projected_sq.transpose() * shifted_up.cwiseAbs2();
        const Eigen::VectorXd lo_lin = projected_sq.transpose() * shifted_lo;
        const Eigen::VectorXd lo_quad = projected_sq.transpose() * shifted_lo.cwiseAbs2();

        int pick = -1;
        double upper_score = 0.0, lower_score = 0.0;
        for (int i = 0; i < m; ++i) {
            if (wnorm2(i) <= 0.0) continue;  // zero vectors are never selectable
            const double u_score = up_quad(i) / dphi_upper + up_lin(i);
            const double l_score = lo_quad(i) / dphi_lower - lo_lin(i);
            if (u_score <= l_score) {
                pick = i;
                upper_score = u_score;
                lower_score = l_score;
                break;
            }
        }
        if (pick < 0) {
            throw numerical_error("no index satisfies the selection inequality at step " +
                                      std::to_string(step),
                                  step, lower, upper);
        }

        const double t = 2.0 / (upper_score + lower_score);
        raw_weights(pick) += t;
        partial.noalias() += t * (w.col(pick) * w.col(pick).transpose());
        if (opts.trace) {
            opts.trace->back().index = pick;
            opts.trace->back().t = t;
        }
        upper = upper_next;
        lower = lower_next;
    }

    SparseWeights out;
    out.rank_used = r;
    out.d_used = d;
    out.kappa = upper / lower;
    out.scale = 1.0 / std::sqrt(upper * lower);
    out.weights = raw_weights * out.scale;
    for (int i = 0; i < m; ++i) {
        if (out.weights(i) > 0.0) out.support.push_back(i);
    }
    return out;
}

SpectralBounds verify_sandwich(const VectorFamily& family, const SparseWeights& weights,
                               double rank_tol) {
    if (weights.weights.size() != family.count()) {
        throw validation_error("weight vector length does not match the family");
    }
    const detail::Whitened wh = detail::whiten(family.columns, rank_tol);
    Eigen::MatrixXd form(wh.rank, wh.rank);
    form.noalias() = wh.vectors * weights.weights.asDiagonal() * wh.vectors.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(form);
    return {es.eigenvalues()(0), es.eigenvalues()(wh.rank - 1)};
}

}  // namespace lpreduce
