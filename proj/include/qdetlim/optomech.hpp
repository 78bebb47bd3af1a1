// optomech.hpp — cavity optomechanical force detector.
//
// A resonantly pumped cavity (decay rate gamma, carrier omega0, length L,
// input mean field A) with a moving mirror (mass m, resonance omega_m,
// damping gamma_m). Frequency responses under the +i w t convention:
//
//     K1(w) = (i w + gamma) / (-i w + gamma)            input -> output field
//     K2(w) = (2 omega0 / L) / (-i w + gamma)           position -> field
//     K3(w) = 1 / [m (omega_m^2 - w^2 - i gamma_m w)]   force -> position
//     K4(w) = K3(w) K2(w)
//
// Backaction noise is white with S_xi = |A|^2 (coherent input); measurement
// noise has S_eta = s_eta_excess / (4 S_xi), so S_xi S_eta >= 1/4.

#pragma once

#include "qdetlim/errors.hpp"
#include "qdetlim/linsys.hpp"
#include "qdetlim/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

namespace qdetlim {

struct OptomechDetector {
    double gamma = 10.0;       // cavity decay rate [rad/s]
    double omega0 = 5.0;       // optical carrier [rad/s]
    double cav_length = 1.0;   // L [m]
    cplx mean_field{1.0, 0.0}; // A [sqrt(photons/s)]
    double mass = 1.0;         // m [kg]
    double omega_m = 1.0;      // mechanical resonance [rad/s]
    double gamma_m = 0.2;      // mechanical damping [rad/s]
    double hbar = 1.0;         // [J s]
    double s_eta_excess = 1.0; // multiplies the shot-noise-limited S_eta

    // hbar = m = omega_m = 1, gamma = 10, 2 omega0 / L = 10, |A| = 1.
    static OptomechDetector natural_units() { return {}; }

    void validate() const {
        auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!positive(gamma)) throw InvalidArgument("detector.gamma must be > 0");
        if (!positive(omega0)) throw InvalidArgument("detector.omega0 must be > 0");
        if (!positive(cav_length)) throw InvalidArgument("detector.cav_length must be > 0");
        if (!positive(mass)) throw InvalidArgument("detector.mass must be > 0");
        if (!positive(omega_m)) throw InvalidArgument("detector.omega_m must be > 0");
        if (!(std::isfinite(gamma_m) && gamma_m >= 0.0)) throw InvalidArgument("detector.gamma_m must be >= 0");
        if (!positive(hbar)) throw InvalidArgument("detector.hbar must be > 0");
        if (!(std::isfinite(s_eta_excess) && s_eta_excess >= 1.0)) {
            throw InvalidArgument("detector.s_eta_excess must be >= 1");
        }
        if (!(std::isfinite(std::norm(mean_field)) && std::norm(mean_field) > 0.0)) {
            throw InvalidArgument("detector.mean_field must be nonzero");
        }
    }

    // Amplitude ring-down time 2 / gamma_m (infinite without damping).
    double mechanical_decay_time() const {
        return gamma_m > 0.0 ? 2.0 / gamma_m : std::numeric_limits<double>::infinity();
    }
    double readout_gain() const { return 2.0 * omega0 / cav_length; }
};

enum class Transfer { K1, K2, K3, K4 };

inline std::string_view to_string(Transfer which) {
    switch (which) {
        case Transfer::K1: return "K1";
        case Transfer::K2: return "K2";
        case Transfer::K3: return "K3";
        case Transfer::K4: return "K4";
    }
    return "?";
}

inline cplx transfer(const OptomechDetector& det, Transfer which, double omega) {
    if (!std::isfinite(omega)) throw InvalidArgument("transfer: non-finite omega");
    const cplx iw{0.0, omega};
    switch (which) {
        case Transfer::K1:
            return (iw + det.gamma) / (-iw + det.gamma);
        case Transfer::K2:
            return det.readout_gain() / (-iw + det.gamma);
        case Transfer::K3:
            return 1.0 / (det.mass * cplx(det.omega_m * det.omega_m - omega * omega, -det.gamma_m * omega));
        case Transfer::K4:
            return transfer(det, Transfer::K3, omega) * transfer(det, Transfer::K2, omega);
    }
    throw InvalidArgument("transfer: unknown response");
}

struct NoisePsds {
    double s_xi;
    double s_eta;
};

inline NoisePsds noise_psds(const OptomechDetector& det, double /*omega*/) {
    const double s_xi = std::norm(det.mean_field);
    return {s_xi, det.s_eta_excess / (4.0 * s_xi)};
}

// S_q(w) = hbar^2 |K4(w)|^2 S_xi(w).
inline double position_psd(const OptomechDetector& det, double omega) {
    return det.hbar * det.hbar * std::norm(transfer(det, Transfer::K4, omega)) *
           noise_psds(det, omega).s_xi;
}

// White force PSD that reproduces S_q at the mechanical resonance when the
// cavity filter K2 is flattened to its value there.
inline double equivalent_force_psd(const OptomechDetector& det) {
    return det.hbar * det.hbar * std::norm(transfer(det, Transfer::K2, det.omega_m)) *
           noise_psds(det, det.omega_m).s_xi;
}

// Mechanical oscillator Z = (q, p) driven to its stationary backaction-heated
// state by white force noise of PSD equivalent_force_psd(det):
//   G = [[0, 1/m], [-m omega_m^2, -gamma_m]],  D = diag(0, S_F).
// The returned state is the stationary covariance, so Sigma_q(t,t') depends
// only on t - t' and transforms to S_F |K3(w)|^2.
inline std::pair<LinearSystem, GaussianState> stationary_equivalent_linsys(const OptomechDetector& det) {
    det.validate();
    if (!(det.gamma_m > 0.0)) {
        throw InvalidArgument("stationary_equivalent_linsys: gamma_m = 0 has no stationary state");
    }
    LinearSystem sys;
    sys.drift.resize(2, 2);
    sys.drift << 0.0, 1.0 / det.mass, -det.mass * det.omega_m * det.omega_m, -det.gamma_m;
    sys.q_index = 0;
    sys.hbar = det.hbar;
    sys.diffusion = Eigen::MatrixXd::Zero(2, 2);
    sys.diffusion(1, 1) = equivalent_force_psd(det);

    GaussianState state;
    state.mean = Eigen::VectorXd::Zero(2);
    state.cov = stationary_covariance(sys.drift, sys.diffusion);
    return {std::move(sys), std::move(state)};
}

// Samples k(t_j), t_j = j dt, j = 0..n-1, of the causal impulse response of
// K2, K3 or K4. K2 is sampled with its right limit at t = 0.
inline std::vector<double> impulse_response(const OptomechDetector& det, Transfer which, double dt,
                                            std::size_t n) {
    if (!(dt > 0.0)) throw InvalidArgument("impulse_response: dt must be > 0");
    std::vector<double> k(n, 0.0);
    if (which == Transfer::K1) throw InvalidArgument("impulse_response: K1 has a delta component");
    if (which == Transfer::K2) {
        for (std::size_t j = 0; j < n; ++j) k[j] = det.readout_gain() * std::exp(-det.gamma * dt * static_cast<double>(j));
        return k;
    }
    // State (q, p, a): force impulse sets p = 1; a is the K2-filtered q.
    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
    g(0, 1) = 1.0 / det.mass;
    g(1, 0) = -det.mass * det.omega_m * det.omega_m;
    g(1, 1) = -det.gamma_m;
    g(2, 0) = det.readout_gain();
    g(2, 2) = -det.gamma;
    const Eigen::Matrix3d step = matrix_exponential(g, dt);
    const Eigen::Index out = (which == Transfer::K3) ? 0 : 2;
    Eigen::Vector3d z(0.0, 1.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        k[j] = z(out);
        z = step * z;
    }
    return k;
}

}  // namespace qdetlim
