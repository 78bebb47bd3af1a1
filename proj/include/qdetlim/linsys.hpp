// linsys.hpp — linear Gaussian detector: drift dynamics, propagator rows,
// position autocovariance and the time-domain fidelity of a known force.
//
// The canonical vector Z obeys dZ/dt = G Z (+ white noise with diffusion D
// when the system is an open reduction of a larger closed one). A force x(t)
// couples through -q x, and for a Gaussian initial state the fidelity is
//
//     F_x = exp[ -(1/hbar^2) int int x(t) Sigma_q(t,t') x(t') dt dt' ].
//
// Any constant source term only adds a c-number phase to the overlap and so
// never enters F_x; it is not represented.

#pragma once

#include "qdetlim/errors.hpp"
#include "qdetlim/fidelity.hpp"
#include "qdetlim/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstddef>
#include <utility>

namespace qdetlim {

struct LinearSystem {
    // Drift matrix G (n_z x n_z). Canonical pairs are adjacent: (q1, p1, q2, p2, ...).
    Eigen::MatrixXd drift;
    // Position of q inside Z.
    Eigen::Index q_index = 0;
    double hbar = 1.0;
    // Symmetrized white-noise diffusion D of a traced-out bath. Empty or zero
    // means a closed system, for which Sigma_q(t,t') = V_q(t) Sigma V_q(t')^T.
    Eigen::MatrixXd diffusion;

    Eigen::Index dim() const noexcept { return drift.rows(); }
    bool is_open() const { return diffusion.size() != 0 && !diffusion.isZero(0.0); }

    void validate() const {
        const Eigen::Index n = drift.rows();
        if (n == 0 || drift.cols() != n) throw InvalidArgument("LinearSystem: drift must be square");
        if (n % 2 != 0) throw InvalidArgument("LinearSystem: dimension must be even (canonical pairs)");
        if (q_index < 0 || q_index >= n) throw InvalidArgument("LinearSystem: q_index out of range");
        if (!drift.allFinite()) throw InvalidArgument("LinearSystem: drift not finite");
        if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("LinearSystem: hbar must be > 0");
        if (diffusion.size() != 0) {
            if (diffusion.rows() != n || diffusion.cols() != n) {
                throw InvalidArgument("LinearSystem: diffusion shape mismatch");
            }
            if (!diffusion.allFinite() || !diffusion.isApprox(diffusion.transpose(), 1e-12)) {
                throw InvalidArgument("LinearSystem: diffusion must be finite and symmetric");
            }
        }
    }
};

// Wigner mean and (Weyl-ordered) covariance at the initial time.
struct GaussianState {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    void validate(Eigen::Index n_z) const {
        if (mean.size() != n_z || cov.rows() != n_z || cov.cols() != n_z) {
            throw InvalidArgument("GaussianState: dimension mismatch");
        }
        if (!mean.allFinite() || !cov.allFinite()) throw InvalidArgument("GaussianState: non-finite entries");
        const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
        if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            throw InvalidArgument("GaussianState: covariance not symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
        const double tr = std::abs(cov.trace());
        if (es.eigenvalues().minCoeff() < -1e-12 * std::max(tr, 1e-300)) {
            throw InvalidArgument("GaussianState: covariance not positive semidefinite");
        }
    }
};

// Optional physical check: Sigma + i (hbar/2) J >= 0 with J the symplectic
// form over adjacent (q, p) pairs.
inline bool satisfies_uncertainty(const GaussianState& state, double hbar, double tol = 1e-10) {
    const Eigen::Index n = state.cov.rows();
    Eigen::MatrixXcd m = state.cov.cast<cplx>();
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        m(k, k + 1) += cplx(0.0, hbar / 2.0);
        m(k + 1, k) -= cplx(0.0, hbar / 2.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol * std::max(1.0, state.cov.trace());
}

// Row q_index of exp(G (t - t_i)).
inline Eigen::RowVectorXd propagator_row(const LinearSystem& sys, double t, double t_i) {
    if (t < t_i) throw InvalidArgument("propagator_row: t < t_i");
    return matrix_exponential(sys.drift, t - t_i).row(sys.q_index);
}

// Q(tau) = int_0^tau exp(G s) D exp(G^T s) ds (Van Loan block exponential).
inline Eigen::MatrixXd noise_covariance(const LinearSystem& sys, double tau) {
    const Eigen::Index n = sys.dim();
    if (!sys.is_open() || tau == 0.0) return Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = -sys.drift;
    block.topRightCorner(n, n) = sys.diffusion;
    block.bottomRightCorner(n, n) = sys.drift.transpose();
    const Eigen::MatrixXd e = matrix_exponential(block, tau);
    const Eigen::MatrixXd phi_t = e.bottomRightCorner(n, n);  // exp(G^T tau)
    Eigen::MatrixXd q = phi_t.transpose() * e.topRightCorner(n, n);
    return 0.5 * (q + q.transpose());
}

// Covariance of Z at time t given the state at t_i.
inline Eigen::MatrixXd evolved_covariance(const LinearSystem& sys, const GaussianState& state,
                                          double t_i, double t) {
    if (t < t_i) throw InvalidArgument("evolved_covariance: t < t_i");
    const Eigen::MatrixXd phi = matrix_exponential(sys.drift, t - t_i);
    Eigen::MatrixXd s = phi * state.cov * phi.transpose() + noise_covariance(sys, t - t_i);
    return 0.5 * (s + s.transpose());
}

// Sigma_q(t, t2): symmetrized two-time covariance of q given the state at t_i.
// For a closed system this is V_q(t) Sigma V_q(t2)^T.
inline double position_autocovariance(const LinearSystem& sys, const GaussianState& state,
                                      double t_i, double t, double t2) {
    if (t < t_i || t2 < t_i) throw InvalidArgument("position_autocovariance: time before t_i");
    if (!sys.is_open()) {
        return propagator_row(sys, t, t_i).dot(state.cov * propagator_row(sys, t2, t_i).transpose());
    }
    const double late = std::max(t, t2);
    const double early = std::min(t, t2);
    const Eigen::MatrixXd s_early = evolved_covariance(sys, state, t_i, early);
    return propagator_row(sys, late, early).dot(s_early.col(sys.q_index));
}

// Stationary covariance: solves G S + S G^T + D = 0. G must be Hurwitz.
inline Eigen::MatrixXd stationary_covariance(const Eigen::MatrixXd& drift, const Eigen::MatrixXd& diffusion) {
    const Eigen::Index n = drift.rows();
    if (drift.cols() != n || diffusion.rows() != n || diffusion.cols() != n) {
        throw InvalidArgument("stationary_covariance: shape mismatch");
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(drift, false);
    if (es.eigenvalues().real().maxCoeff() >= 0.0) {
        throw InvalidArgument("stationary_covariance: drift has no stationary state (not Hurwitz)");
    }
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd kron(n * n, n * n);
    // vec(G S + S G^T) = (I (x) G + G (x) I) vec(S), column-major vec
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            kron.block(a * n, b * n, n, n) = id(a, b) * drift + drift(a, b) * id;
        }
    }
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(diffusion.data(), n * n);
    const Eigen::VectorXd sol = kron.partialPivLu().solve(rhs);
    Eigen::MatrixXd s = Eigen::Map<const Eigen::MatrixXd>(sol.data(), n, n);
    return 0.5 * (s + s.transpose());
}

// Time-domain fidelity of a known force sampled on x.grid:
//   ln F_x = -(dt^2/hbar^2) sum_{j,k} x_j Sigma_q(t_j, t_k) x_k.
//
// Closed systems use the vector kappa = (dt/hbar) sum_j x_j V_q(t_j)^T, with
// ln F_x = -kappa^T Sigma kappa. Open systems accumulate the causal half of
// the double sum through w_k = Phi(dt) w_{k-1} + Sigma(t_k) e_q x_k, which
// visits every pair (j >= k) exactly once.
inline Fidelity fidelity_deterministic_timedomain(const LinearSystem& sys, const GaussianState& state,
                                                  const RealSeries& x, double t_i) {
    sys.validate();
    state.validate(sys.dim());
    const TimeGrid& g = x.grid;
    if (g.t_i() < t_i) throw InvalidArgument("fidelity_deterministic_timedomain: grid starts before t_i");

    const Eigen::Index n_z = sys.dim();
    const Eigen::Index q = sys.q_index;
    const double dt = g.dt();
    const Eigen::MatrixXd step = matrix_exponential(sys.drift, dt);
    const Eigen::MatrixXd phi0 = matrix_exponential(sys.drift, g.t_i() - t_i);

    double quad = 0.0;
    double diag_scale = 0.0;
    if (!sys.is_open()) {
        Eigen::RowVectorXd v = phi0.row(q);
        Eigen::VectorXd kappa = Eigen::VectorXd::Zero(n_z);
        for (std::size_t j = 0; j < g.n(); ++j) {
            kappa += x.values[j] * v.transpose();
            v = v * step;
        }
        kappa *= dt / sys.hbar;
        quad = kappa.dot(state.cov * kappa);
        diag_scale = kappa.squaredNorm() * state.cov.cwiseAbs().maxCoeff();
    } else {
        const Eigen::MatrixXd q_step = noise_covariance(sys, dt);
        Eigen::MatrixXd cov = phi0 * state.cov * phi0.transpose() + noise_covariance(sys, g.t_i() - t_i);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n_z);
        double causal = 0.0;
        double diag = 0.0;
        for (std::size_t j = 0; j < g.n(); ++j) {
            const double xj = x.values[j];
            w = step * w + xj * cov.col(q);
            causal += xj * w(q);
            diag += xj * xj * cov(q, q);
            cov = step * cov * step.transpose() + q_step;
        }
        const double scale = dt * dt / (sys.hbar * sys.hbar);
        quad = scale * (2.0 * causal - diag);
        diag_scale = scale * std::abs(diag);
    }
    if (quad < -1e-9 * std::max(1.0, diag_scale)) {
        throw NumericalError("fidelity_deterministic_timedomain: negative quadratic form (covariance not PSD)");
    }
    return Fidelity::from_exponent(std::max(quad, 0.0));
}

inline Fidelity fidelity_deterministic_timedomain(const LinearSystem& sys, const GaussianState& state,
                                                  const RealSeries& x) {
    return fidelity_deterministic_timedomain(sys, state, x, x.grid.t_i());
}

}  // namespace qdetlim
