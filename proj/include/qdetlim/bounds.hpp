// bounds.hpp — fidelities and the quantum error bounds built from them.
//
// For a detector in a pure initial state, with F the fidelity between the
// final states under the two hypotheses:
//
//   Bayes:           P_e  >= (1 - sqrt(1 - 4 P0 P1 F)) / 2
//   Neyman-Pearson:  P01  >= 1 - [sqrt(P10 F) + sqrt((1 - P10)(1 - F))]^2   (P10 < F)
//                    P01  >= 0                                             (P10 >= F)
//   Exponent:        Gamma_F = -ln F / T

#pragma once

#include "qdetlim/errors.hpp"
#include "qdetlim/fidelity.hpp"
#include "qdetlim/optomech.hpp"
#include "qdetlim/options.hpp"
#include "qdetlim/spectral.hpp"
#include "qdetlim/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace qdetlim {

// ------------------------------------------------------------------ fidelities

// ln F_x = -(1/hbar^2) int dw/2pi S_q(w) |x(w)|^2 for a stationary detector.
template <class Psd>
Fidelity fidelity_deterministic_freq(Psd&& s_q, const Spectrum& x_spec, double hbar,
                                     const NumericOptions& opts = {}, Diagnostics* diag = nullptr) {
    if (!(hbar > 0.0)) throw InvalidArgument("fidelity_deterministic_freq: hbar must be > 0");
    std::vector<double> f(x_spec.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = s_q(x_spec.omega(k)) * std::norm(x_spec.values[k]);
    }
    const double e = freq_integral(f, x_spec.grid, opts, diag) / (hbar * hbar);
    if (e < 0.0) throw NumericalError("fidelity_deterministic_freq: negative S_q");
    return Fidelity::from_exponent(e);
}

// Long-record fidelity of x(t) = X cos(Omega t + theta), Omega != 0:
// |x(+-Omega)|^2 = (X T / 2)^2 on the two signal bins, so
// ln F = -T S_q(Omega) X^2 / (2 hbar^2).
inline Fidelity fidelity_sinusoid(double s_q_at_omega, double amplitude, double duration, double hbar) {
    if (!(duration > 0.0)) throw InvalidArgument("fidelity_sinusoid: duration must be > 0");
    if (!(hbar > 0.0)) throw InvalidArgument("fidelity_sinusoid: hbar must be > 0");
    if (s_q_at_omega < 0.0) throw InvalidArgument("fidelity_sinusoid: S_q must be >= 0");
    return Fidelity::from_exponent(duration * s_q_at_omega * amplitude * amplitude / (2.0 * hbar * hbar));
}

// ln F_x = -int dw/2pi S_xi |K4 x|^2; the hbar^2 in S_q cancels.
inline Fidelity fidelity_optomech(const OptomechDetector& det, const Spectrum& x_spec,
                                  const NumericOptions& opts = {}, Diagnostics* diag = nullptr) {
    det.validate();
    return fidelity_deterministic_freq([&](double w) { return position_psd(det, w); }, x_spec, det.hbar,
                                       opts, diag);
}

// Gaussian average of F_x over a circulant prior:
//   F = det(I + (2 dt^2 / hbar^2) Sigma_q Sigma_x)^(-1/2)
//     = exp(-1/2 sum_w ln lambda_w),  lambda_w = 1 + (2 dt^2/hbar^2) eig_q(w) eig_x(w).
inline Fidelity fidelity_stochastic_circulant(std::span<const double> s_q_row, std::span<const double> s_x_row,
                                              double dt, double hbar, const NumericOptions& opts = {}) {
    if (s_q_row.size() != s_x_row.size() || s_q_row.empty()) {
        throw InvalidArgument("fidelity_stochastic_circulant: rows must have equal nonzero length");
    }
    if (!(dt > 0.0) || !(hbar > 0.0)) throw InvalidArgument("fidelity_stochastic_circulant: dt, hbar must be > 0");
    const auto eq = symmetric_circulant_eigenvalues(s_q_row, opts);
    const auto ex = symmetric_circulant_eigenvalues(s_x_row, opts);
    const double c = 2.0 * dt * dt / (hbar * hbar);
    double sum = 0.0;
    for (std::size_t k = 0; k < eq.size(); ++k) {
        const double u = c * eq[k] * ex[k];
        if (1.0 + u < 1.0 - opts.psd_tol) {
            throw NumericalError("fidelity_stochastic_circulant: eigenvalue below 1 (non-PSD input)");
        }
        sum += std::log1p(std::max(u, 0.0));
    }
    return Fidelity::from_exponent(0.5 * sum);
}

struct StochasticFidelity {
    double gamma_f;     // 1/s
    Fidelity fidelity;  // exp(-gamma_f T)
};

// Gamma_F = 1/2 int dw/2pi ln(1 + 2 S_q S_x / hbar^2), evaluated on grid.
template <class PsdQ, class PsdX>
StochasticFidelity gamma_f_stochastic(PsdQ&& s_q, PsdX&& s_x, double hbar, const TimeGrid& grid,
                                      const NumericOptions& opts = {}, Diagnostics* diag = nullptr) {
    if (!(hbar > 0.0)) throw InvalidArgument("gamma_f_stochastic: hbar must be > 0");
    std::vector<double> f(grid.n());
    for (std::size_t k = 0; k < grid.n(); ++k) {
        const double w = grid.omega(k);
        const double sq = s_q(w);
        const double sx = s_x(w);
        if (sq < 0.0 || sx < 0.0) throw InvalidArgument("gamma_f_stochastic: negative PSD sample");
        f[k] = 0.5 * std::log1p(2.0 * sq * sx / (hbar * hbar));
    }
    const double g = freq_integral(f, grid, opts, diag);
    return {g, Fidelity::from_exponent(g * grid.duration())};
}

inline StochasticFidelity gamma_f_stochastic(const OptomechDetector& det, const StochasticPrior& prior,
                                             const TimeGrid& grid, const NumericOptions& opts = {},
                                             Diagnostics* diag = nullptr) {
    det.validate();
    validate(prior, grid);
    return gamma_f_stochastic([&](double w) { return position_psd(det, w); },
                              [&](double w) { return prior_psd(prior, w); }, det.hbar, grid, opts, diag);
}

// Gamma_F = (1/T) int dw/2pi S_xi |K4 x|^2 for a known waveform.
inline double gamma_f_deterministic(const OptomechDetector& det, const Spectrum& x_spec, double duration,
                                    const NumericOptions& opts = {}, Diagnostics* diag = nullptr) {
    if (!(duration > 0.0)) throw InvalidArgument("gamma_f_deterministic: duration must be > 0");
    return fidelity_optomech(det, x_spec, opts, diag).exponent() / duration;
}

// ---------------------------------------------------------------------- bounds

inline double helstrom_bayes_bound(double f, double p0) {
    if (!(f >= 0.0 && f <= 1.0)) throw InvalidArgument("helstrom_bayes_bound: F outside [0, 1]");
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw InvalidArgument("helstrom_bayes_bound: P0 outside [0, 1]");
    const double p1 = 1.0 - p0;
    const double disc = std::max(0.0, 1.0 - 4.0 * p0 * p1 * f);
    return 0.5 * (1.0 - std::sqrt(disc));
}

enum class NpRole {
    miss_given_false_alarm,  // argument P10, result bounds P01
    false_alarm_given_miss,  // argument P01, result bounds P10
};

// Lower bound on one error probability given the other. The expression is
// the same for both roles; NpRole only records which one is fixed.
inline double neyman_pearson_bound(double f, double p10, NpRole role = NpRole::miss_given_false_alarm) {
    (void)role;
    if (!(f >= 0.0 && f <= 1.0)) throw InvalidArgument("neyman_pearson_bound: F outside [0, 1]");
    if (!(p10 >= 0.0 && p10 <= 1.0)) throw InvalidArgument("neyman_pearson_bound: P10 outside [0, 1]");
    if (p10 >= f) return 0.0;
    const double r = std::sqrt(p10 * f) + std::sqrt((1.0 - p10) * (1.0 - f));
    return std::clamp(1.0 - r * r, 0.0, 1.0);
}

struct NpPoint {
    double p10;
    double p01_lower;
};

struct BoundsReport {
    Fidelity fidelity;
    double p0 = 0.5;
    double bayes_bound = 0.0;
    std::vector<NpPoint> np_curve;
    double gamma_f = 0.0;
};

inline std::vector<NpPoint> np_curve(double f, std::size_t points = 101,
                                     NpRole role = NpRole::miss_given_false_alarm) {
    if (points < 2) throw InvalidArgument("np_curve: need at least 2 points");
    std::vector<NpPoint> curve(points);
    for (std::size_t k = 0; k < points; ++k) {
        const double p10 = static_cast<double>(k) / static_cast<double>(points - 1);
        curve[k] = {p10, neyman_pearson_bound(f, p10, role)};
    }
    return curve;
}

inline BoundsReport make_bounds_report(Fidelity f, double p0, double duration, std::size_t np_points = 101) {
    if (!(duration > 0.0)) throw InvalidArgument("make_bounds_report: duration must be > 0");
    BoundsReport r;
    r.fidelity = f;
    r.p0 = p0;
    r.bayes_bound = helstrom_bayes_bound(f.value(), p0);
    r.np_curve = np_curve(f.value(), np_points);
    r.gamma_f = f.exponent() / duration;
    return r;
}

}  // namespace qdetlim
