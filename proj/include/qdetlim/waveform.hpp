// waveform.hpp — deterministic force waveforms and stationary Gaussian priors.
//
// Stochastic priors are zero-mean stationary Gaussian processes described by
// their PSD S_x(w). On a grid they are embedded as circulant covariances: the
// first row is the inverse transform of the sampled PSD, so its circulant
// eigenvalues are S_x(w_k) / dt.

#pragma once

#include "qdetlim/errors.hpp"
#include "qdetlim/options.hpp"
#include "qdetlim/rng.hpp"
#include "qdetlim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <variant>
#include <vector>

namespace qdetlim {

// ---------------------------------------------------------------- deterministic

struct Sinusoid {
    double amplitude = 0.0;  // X [N]
    double omega = 0.0;      // Omega [rad/s]
    double phase = 0.0;      // theta [rad]
};

struct Sampled {
    RealSeries series;
};

struct GaussianPulse {
    double area = 0.0;    // [N s]
    double center = 0.0;  // [s]
    double width = 1.0;   // standard deviation [s]
};

using DeterministicWaveform = std::variant<Sinusoid, Sampled, GaussianPulse>;

inline void validate(const DeterministicWaveform& w) {
    struct {
        void operator()(const Sinusoid& s) const {
            if (!(std::isfinite(s.amplitude) && s.amplitude >= 0.0)) {
                throw InvalidArgument("sinusoid amplitude must be finite and >= 0");
            }
            if (!std::isfinite(s.omega) || !std::isfinite(s.phase)) {
                throw InvalidArgument("sinusoid omega and phase must be finite");
            }
        }
        void operator()(const Sampled& s) const {
            for (double v : s.series.values) {
                if (!std::isfinite(v)) throw InvalidArgument("sampled waveform has non-finite values");
            }
        }
        void operator()(const GaussianPulse& p) const {
            if (!(p.width > 0.0) || !std::isfinite(p.width)) throw InvalidArgument("pulse width must be > 0");
            if (!std::isfinite(p.area) || !std::isfinite(p.center)) {
                throw InvalidArgument("pulse area and center must be finite");
            }
        }
    } visitor;
    std::visit(visitor, w);
}

// Evaluates the waveform on grid. A Sampled waveform only renders on the grid
// it was recorded on.
inline RealSeries render(const DeterministicWaveform& w, const TimeGrid& grid) {
    validate(w);
    RealSeries out(grid);
    if (const auto* s = std::get_if<Sinusoid>(&w)) {
        for (std::size_t k = 0; k < grid.n(); ++k) {
            out.values[k] = s->amplitude * std::cos(s->omega * grid.time(k) + s->phase);
        }
    } else if (const auto* p = std::get_if<GaussianPulse>(&w)) {
        const double norm = p->area / (std::sqrt(2.0 * std::numbers::pi) * p->width);
        for (std::size_t k = 0; k < grid.n(); ++k) {
            const double u = (grid.time(k) - p->center) / p->width;
            out.values[k] = norm * std::exp(-0.5 * u * u);
        }
    } else {
        const auto& sampled = std::get<Sampled>(w);
        if (!(sampled.series.grid == grid)) throw InvalidArgument("render: grid differs from sampled waveform grid");
        out.values = sampled.series.values;
    }
    return out;
}

// ---------------------------------------------------------------- stochastic

// S_x(w) = s0 omega_c^2 / (w^2 + omega_c^2); sigma_x(tau) = (s0 omega_c / 2) exp(-omega_c |tau|).
struct Lorentzian {
    double s0 = 0.0;
    double omega_c = 1.0;
};

// S_x(w) = s0 for omega_lo <= |w| <= omega_hi, 0 otherwise.
struct FlatBand {
    double s0 = 0.0;
    double omega_lo = 0.0;
    double omega_hi = 1.0;
};

using StochasticPrior = std::variant<Lorentzian, FlatBand>;

inline double prior_psd(const StochasticPrior& p, double omega) {
    const double w = std::abs(omega);
    if (const auto* l = std::get_if<Lorentzian>(&p)) {
        return l->s0 * l->omega_c * l->omega_c / (w * w + l->omega_c * l->omega_c);
    }
    const auto& f = std::get<FlatBand>(p);
    return (w >= f.omega_lo && w <= f.omega_hi) ? f.s0 : 0.0;
}

inline void validate(const StochasticPrior& p) {
    if (const auto* l = std::get_if<Lorentzian>(&p)) {
        if (!(std::isfinite(l->s0) && l->s0 >= 0.0)) throw InvalidArgument("lorentzian s0 must be >= 0");
        if (!(std::isfinite(l->omega_c) && l->omega_c > 0.0)) throw InvalidArgument("lorentzian omega_c must be > 0");
        return;
    }
    const auto& f = std::get<FlatBand>(p);
    if (!(std::isfinite(f.s0) && f.s0 >= 0.0)) throw InvalidArgument("flat_band s0 must be >= 0");
    if (!(f.omega_lo >= 0.0 && f.omega_hi > f.omega_lo && std::isfinite(f.omega_hi))) {
        throw InvalidArgument("flat_band requires 0 <= omega_lo < omega_hi");
    }
}

// The prior's characteristic frequency must lie below the grid's Nyquist.
inline void validate(const StochasticPrior& p, const TimeGrid& grid) {
    validate(p);
    const double edge = std::holds_alternative<Lorentzian>(p) ? std::get<Lorentzian>(p).omega_c
                                                                : std::get<FlatBand>(p).omega_hi;
    if (edge > grid.nyquist()) {
        throw InvalidArgument("stochastic prior is not resolved by the grid (band edge above Nyquist)");
    }
}

inline std::vector<double> sample_prior_psd(const StochasticPrior& p, const TimeGrid& grid) {
    return sample_omegas(grid, [&](double w) { return prior_psd(p, w); });
}

// First row sigma_x(k dt) of the circulant covariance on grid.
// row[k] == row[n-k] holds exactly.
inline std::vector<double> covariance_row(const StochasticPrior& p, const TimeGrid& grid,
                                          const NumericOptions& opts = {}) {
    validate(p, grid);
    const std::size_t n = grid.n();
    // The row lives on lags 0..(n-1) dt, i.e. a grid starting at 0.
    const TimeGrid lag_grid(0.0, grid.duration(), n);
    const auto psd = sample_prior_psd(p, lag_grid);
    Spectrum s(lag_grid);
    for (std::size_t k = 0; k < n; ++k) s.values[k] = psd[k];
    const ComplexSeries z = inverse_transform(s);
    std::vector<double> row(n);
    for (std::size_t k = 0; k < n; ++k) row[k] = z.values[k].real();
    for (std::size_t k = 1; k < n; ++k) {
        const double avg = 0.5 * (row[k] + row[n - k]);
        row[k] = avg;
        row[n - k] = avg;
    }
    if (row[0] > 0.0) {
        const auto eig = circulant_eigenvalues(row);
        for (const auto& e : eig) {
            if (e.real() < -opts.psd_tol * row[0]) {
                throw NumericalError("covariance_row: circulant not PSD (aliasing too severe)");
            }
        }
    }
    return row;
}

// Spectrum of one real Gaussian-process draw on grid, with E|x(w_k)|^2 = T S_x(w_k).
// Coefficients at harmonics +-m are conjugate; m = 0 and the Nyquist bin are real.
template <class Rng>
Spectrum synthesize_spectrum(const std::vector<double>& psd, const TimeGrid& grid, Rng& rng) {
    const std::size_t n = grid.n();
    if (psd.size() != n) throw InvalidArgument("synthesize_spectrum: psd size mismatch");
    std::normal_distribution<double> normal(0.0, 1.0);
    Spectrum out(grid);
    const double T = grid.duration();
    const long half = static_cast<long>(n / 2);
    for (long m = 0; m <= half; ++m) {
        const std::size_t kp = grid.bin_of_harmonic(m);
        const bool self_conjugate = (m == 0) || (n % 2 == 0 && m == half);
        const double sd = std::sqrt(T * std::max(psd[kp], 0.0));
        const double phase = grid.omega(kp) * grid.t_i();
        if (self_conjugate) {
            const std::size_t k = (m == 0) ? kp : grid.bin_of_harmonic(-m);
            const double w = grid.omega(k) * grid.t_i();
            out.values[k] = std::polar(1.0, w) * (sd * normal(rng));
        } else {
            const double re = normal(rng);
            const double im = normal(rng);
            const cplx z = sd * std::sqrt(0.5) * cplx(re, im);
            out.values[kp] = std::polar(1.0, phase) * z;
            out.values[grid.bin_of_harmonic(-m)] = std::conj(out.values[kp]);
        }
    }
    return out;
}

// Real Gaussian-process draw with the circulant covariance of covariance_row.
// Deterministic in (seed, stream).
inline RealSeries sample_gp(const StochasticPrior& p, const TimeGrid& grid, std::uint64_t seed,
                            std::uint64_t stream = 0) {
    validate(p, grid);
    CounterRng rng(seed, stream);
    const Spectrum s = synthesize_spectrum(sample_prior_psd(p, grid), grid, rng);
    return real_part(inverse_transform(s));
}

}  // namespace qdetlim
