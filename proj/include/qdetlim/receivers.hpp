// receivers.hpp — concrete receivers behind a backaction-cancelled
// optomechanical detector: homodyne likelihood-ratio test, Kennedy photon
// counter, and the Dolinar receiver's achievable error.
//
// With backaction cancelled the homodyne record is y0 = eta under H0 and
// y1 = eta + K2*K3*x under H1, eta Gaussian with PSD S_eta. The log-likelihood
// ratio of a known signal s = K4 x has mean +-d^2/2 and variance d^2 with
// d^2 = int dw/2pi |s|^2 / S_eta = 8 sigma^2, hence
//
//     P10 = erfc(sigma + lambda / (4 sigma)) / 2,
//     P01 = erfc(sigma - lambda / (4 sigma)) / 2,
//
// for a log-likelihood threshold lambda.

#pragma once

#include "qdetlim/bounds.hpp"
#include "qdetlim/errors.hpp"
#include "qdetlim/fft.hpp"
#include "qdetlim/fidelity.hpp"
#include "qdetlim/optomech.hpp"
#include "qdetlim/options.hpp"
#include "qdetlim/rng.hpp"
#include "qdetlim/spectral.hpp"
#include "qdetlim/waveform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace qdetlim {

// Whether quantum-noise cancellation has removed backaction from the output.
enum class Backaction { cancelled, present };

inline void require_cancelled(Backaction b, const char* who) {
    if (b != Backaction::cancelled) {
        throw ReceiverUnavailable(std::string(who) +
                                  ": receiver output model requires backaction cancellation (qnc = true)");
    }
}

struct McStats {
    std::size_t trials = 0;
    double p10_hat = 0.0;
    double p01_hat = 0.0;
    double se10 = 0.0;
    double se01 = 0.0;
    std::vector<std::string> warnings;
};

struct ReceiverResult {
    std::string receiver;
    double p0 = 0.5;
    std::optional<double> p10;
    std::optional<double> p01;
    std::optional<double> p_e;
    std::optional<double> exponent;  // 1/s
    std::optional<McStats> mc;
};

inline double binomial_se(double p, std::size_t trials) {
    return trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

// Fills p_e = p10 P0 + p01 P1 when both error probabilities are known.
inline ReceiverResult& finish(ReceiverResult& r) {
    if (r.p10 && r.p01) r.p_e = *r.p10 * r.p0 + *r.p01 * (1.0 - r.p0);
    return r;
}

// -------------------------------------------------------------------- homodyne

// sigma^2 = (1/8) int dw/2pi |K4 x|^2 / S_eta.
inline double homodyne_snr(const OptomechDetector& det, const Spectrum& x_spec, Backaction b,
                           const NumericOptions& opts = {}, Diagnostics* diag = nullptr) {
    require_cancelled(b, "homodyne_snr");
    det.validate();
    std::vector<double> f(x_spec.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double w = x_spec.omega(k);
        f[k] = std::norm(transfer(det, Transfer::K4, w) * x_spec.values[k]) / (8.0 * noise_psds(det, w).s_eta);
    }
    return freq_integral(f, x_spec.grid, opts, diag);
}

struct ErrorPair {
    double p10;
    double p01;
};

inline ErrorPair homodyne_error_probs(double sigma, double lambda) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("homodyne_error_probs: sigma must be > 0");
    if (std::isnan(lambda)) throw InvalidArgument("homodyne_error_probs: lambda is NaN");
    const double shift = lambda / (4.0 * sigma);
    return {0.5 * std::erfc(sigma + shift), 0.5 * std::erfc(sigma - shift)};
}

// Bayes-optimal log-likelihood threshold ln(P0 / P1).
inline double bayes_threshold(double p0) {
    if (!(p0 > 0.0 && p0 < 1.0)) throw InvalidArgument("bayes_threshold: P0 must lie in (0, 1)");
    return std::log(p0 / (1.0 - p0));
}

// Threshold lambda giving P10 = target, by bisection on the monotone erfc map.
inline double threshold_for_p10(double sigma, double target, double tol = 1e-12) {
    if (!(target > 0.0 && target < 1.0)) throw InvalidArgument("threshold_for_p10: target must lie in (0, 1)");
    const auto p10 = [&](double lam) { return homodyne_error_probs(sigma, lam).p10; };
    double lo = -1.0, hi = 1.0;
    while (p10(lo) < target) lo *= 2.0;
    while (p10(hi) > target) hi *= 2.0;
    for (int it = 0; it < 400 && hi - lo > tol * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (p10(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double homodyne_exponent_deterministic(double sigma2, double duration) {
    if (!(duration > 0.0)) throw InvalidArgument("homodyne_exponent_deterministic: duration must be > 0");
    return sigma2 / duration;
}

inline ReceiverResult homodyne_analytic(const OptomechDetector& det, const Spectrum& x_spec, Backaction b,
                                        double lambda, double p0, const NumericOptions& opts = {},
                                        Diagnostics* diag = nullptr) {
    ReceiverResult r;
    r.receiver = "homodyne";
    r.p0 = p0;
    const double sigma2 = homodyne_snr(det, x_spec, b, opts, diag);
    r.exponent = homodyne_exponent_deterministic(sigma2, x_spec.duration());
    if (sigma2 > 0.0) {
        const auto e = homodyne_error_probs(std::sqrt(sigma2), lambda);
        r.p10 = e.p10;
        r.p01 = e.p01;
    } else {
        // no signal: the likelihood ratio is identically 1 and the test
        // reduces to the threshold's coin
        r.p10 = lambda < 0.0 ? 1.0 : (lambda > 0.0 ? 0.0 : 0.5);
        r.p01 = 1.0 - *r.p10;
    }
    return finish(r);
}

// ----------------------------------------------------- Chernoff (stochastic)

// R(w) = |K4(w)|^2 S_x(w) / S_eta(w) on the grid.
inline std::vector<double> homodyne_snr_density(const OptomechDetector& det, const StochasticPrior& prior,
                                                const TimeGrid& grid) {
    return sample_omegas(grid, [&](double w) {
        return std::norm(transfer(det, Transfer::K4, w)) * prior_psd(prior, w) / noise_psds(det, w).s_eta;
    });
}

// 1/2 int dw/2pi ln{[1 + (1-s) R] / (1 + R)^(1-s)}.
inline double chernoff_objective(const std::vector<double>& r, double duration, double s) {
    double sum = 0.0;
    for (double v : r) sum += std::log1p((1.0 - s) * v) - (1.0 - s) * std::log1p(v);
    const double out = 0.5 * sum / duration;
    if (!std::isfinite(out)) throw NumericalError("chernoff_objective: non-finite value");
    return out;
}

struct ChernoffResult {
    double gamma;   // 1/s
    double s_star;  // maximizing tilt in [0, 1]
};

inline ChernoffResult chernoff_maximize(const std::vector<double>& r, double duration,
                                        const NumericOptions& opts = {}) {
    const auto obj = [&](double s) { return chernoff_objective(r, duration, s); };
    const int m = std::max(opts.chernoff_prescan, 3);
    std::vector<double> scan(static_cast<std::size_t>(m));
    std::size_t best = 0;
    for (int i = 0; i < m; ++i) {
        scan[static_cast<std::size_t>(i)] = obj(static_cast<double>(i) / (m - 1));
        if (scan[static_cast<std::size_t>(i)] > scan[best]) best = static_cast<std::size_t>(i);
    }
    if (scan[best] <= 0.0) return {0.0, 0.5};

    // unimodal: non-decreasing up to best, non-increasing after (with slack)
    const double slack = 1e-14 * std::abs(scan[best]);
    bool unimodal = true;
    for (std::size_t i = 1; i <= best && unimodal; ++i) unimodal = scan[i] >= scan[i - 1] - slack;
    for (std::size_t i = best + 1; i < scan.size() && unimodal; ++i) unimodal = scan[i] <= scan[i - 1] + slack;

    double lo = 0.0, hi = 1.0;
    if (!unimodal) {
        lo = static_cast<double>(best == 0 ? 0 : best - 1) / (m - 1);
        hi = static_cast<double>(std::min<std::size_t>(best + 1, scan.size() - 1)) / (m - 1);
    }
    while (hi - lo > opts.chernoff_s_tol) {
        const double a = lo + (hi - lo) / 3.0;
        const double c = hi - (hi - lo) / 3.0;
        if (obj(a) < obj(c)) {
            lo = a;
        } else {
            hi = c;
        }
    }
    const double s = 0.5 * (lo + hi);
    const double g = obj(s);
    if (g < scan[best]) return {scan[best], static_cast<double>(best) / (m - 1)};
    return {g, s};
}

inline ChernoffResult chernoff_exponent_stochastic(const OptomechDetector& det, const StochasticPrior& prior,
                                                   const TimeGrid& grid, Backaction b,
                                                   const NumericOptions& opts = {}, Diagnostics* diag = nullptr) {
    require_cancelled(b, "chernoff_exponent_stochastic");
    det.validate();
    validate(prior, grid);
    const auto r = homodyne_snr_density(det, prior, grid);
    for (double v : r) {
        if (!std::isfinite(v)) throw NumericalError("chernoff_exponent_stochastic: R not finite on grid");
    }
    // bandwidth check on the s = 1/2 integrand
    std::vector<double> mid(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) mid[k] = std::log1p(0.5 * r[k]) - 0.5 * std::log1p(r[k]);
    (void)freq_integral(mid, grid, opts, diag);
    return chernoff_maximize(r, grid.duration(), opts);
}

// --------------------------------------------------------------------- Kennedy

namespace detail {

// Causal y_j = dt sum_{l=0..j} k_l x_{j-l}, j < out_len, through zero-padded FFTs.
inline std::vector<double> causal_convolution(const std::vector<double>& k, const std::vector<double>& x,
                                              double dt, std::size_t out_len) {
    const std::size_t m = std::bit_ceil(k.size() + x.size());
    std::vector<cplx> a(m, cplx{}), b(m, cplx{});
    std::copy(k.begin(), k.end(), a.begin());
    std::copy(x.begin(), x.end(), b.begin());
    fft::transform(a, fft::Sign::negative);
    fft::transform(b, fft::Sign::negative);
    for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
    fft::transform(a, fft::Sign::positive);
    std::vector<double> y(out_len);
    const double scale = dt / static_cast<double>(m);
    for (std::size_t j = 0; j < out_len; ++j) y[j] = a[j].real() * scale;
    return y;
}

}  // namespace detail

// Samples of warm-up before t_i used to let transients decay.
inline std::size_t warmup_samples(const OptomechDetector& det, const TimeGrid& grid, const NumericOptions& opts) {
    const double tau = det.mechanical_decay_time();
    if (!std::isfinite(tau)) throw InvalidArgument("receiver simulation needs gamma_m > 0 for transients to decay");
    const double w = std::ceil(opts.warmup_decay_times * tau / grid.dt());
    if (w > static_cast<double>(1u << 26)) throw InvalidArgument("receiver warm-up too long for this grid");
    return static_cast<std::size_t>(w);
}

// Mean photon number int_{t_i}^{t_f} dt |A (K2*K3*x)(t)|^2 by direct
// convolution with the sampled K4 impulse response. x is continued
// periodically into a warm-up interval before t_i.
inline double kennedy_energy_time(const OptomechDetector& det, const RealSeries& x, const NumericOptions& opts = {}) {
    det.validate();
    const TimeGrid& g = x.grid;
    const std::size_t n = g.n();
    const std::size_t w = warmup_samples(det, g, opts);
    std::vector<double> ext(w + n);
    for (std::size_t j = 0; j < w + n; ++j) {
        const long idx = (static_cast<long>(j) - static_cast<long>(w)) % static_cast<long>(n);
        ext[j] = x.values[static_cast<std::size_t>(idx < 0 ? idx + static_cast<long>(n) : idx)];
    }
    const auto k4 = impulse_response(det, Transfer::K4, g.dt(), w + n);
    const auto y = detail::causal_convolution(k4, ext, g.dt(), w + n);
    double e = 0.0;
    for (std::size_t j = w; j < w + n; ++j) e += y[j] * y[j];
    return std::norm(det.mean_field) * e * g.dt();
}

// Same energy through Parseval: int dw/2pi S_xi |K4 x|^2.
inline double kennedy_energy_freq(const OptomechDetector& det, const Spectrum& x_spec,
                                  const NumericOptions& opts = {}, Diagnostics* diag = nullptr) {
    return fidelity_optomech(det, x_spec, opts, diag).exponent();
}

struct KennedyDeterministic {
    double energy_time;
    double energy_freq;
    double p10 = 0.0;
    // exp(-energy_freq); consistent with the fidelity on the same grid.
    double p01;
    double log_p01;
    // exp(-energy_time) from the causal time-domain record.
    double log_p01_time;
};

// P01 = exp(-mean photon number), P10 = 0. Both energy routes must agree
// within opts.kennedy_path_tol or the grid is declared under-resolved.
inline KennedyDeterministic kennedy_p01_deterministic(const OptomechDetector& det, const RealSeries& x, Backaction b,
                                                      const NumericOptions& opts = {}, Diagnostics* diag = nullptr) {
    require_cancelled(b, "kennedy_p01_deterministic");
    const double et = kennedy_energy_time(det, x, opts);
    const double ef = kennedy_energy_freq(det, forward_transform(x), opts, diag);
    const double scale = std::max(et, ef);
    if (scale > 0.0 && std::abs(et - ef) > opts.kennedy_path_tol * scale) {
        throw NumericalError("kennedy_p01_deterministic: time and frequency photon energies disagree by " +
                             std::to_string(std::abs(et - ef) / scale) + " (grid under-resolved)");
    }
    return {et, ef, 0.0, std::exp(-ef), -ef, -et};
}

struct KennedyStochastic {
    double gamma_f;
    double p01;      // F = exp(-gamma_f T)
    double log_p01;
    std::optional<double> mc_estimate;  // E[exp(-energy)] over prior draws
    std::optional<double> mc_se;
    std::size_t mc_trials = 0;
};

// QDETLIM_THREADS caps parallelism; 0 or unset means hardware concurrency.
inline unsigned mc_thread_count(unsigned requested) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("QDETLIM_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}


namespace detail {

// Runs body(trial) for every trial, spreading contiguous blocks over threads.
template <class Body>
void for_each_trial(std::size_t trials, unsigned threads, Body&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
    if (threads == 1) {
        for (std::size_t t = 0; t < trials; ++t) body(t, 0u);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (trials + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(trials, begin + chunk);
        pool.emplace_back([&, begin, end, w] {
            for (std::size_t t = begin; t < end; ++t) body(t, w);
        });
    }
    for (auto& th : pool) th.join();
}

inline std::uint64_t stream_id(std::size_t trial, int hypothesis) {
    return 2 * static_cast<std::uint64_t>(trial) + static_cast<std::uint64_t>(hypothesis);
}

// Energy int dw/2pi S_xi |K4 x|^2 of a spectrum whose |K4|^2 S_xi weights
// are precomputed.
inline double weighted_energy(const std::vector<double>& weight, const Spectrum& x) {
    double e = 0.0;
    for (std::size_t k = 0; k < weight.size(); ++k) e += weight[k] * std::norm(x.values[k]);
    return e / x.duration();
}

}  // namespace detail

// Kennedy miss probability for a Gaussian prior: P01 = E exp(-energy) = F.
// With mc_trials > 0 the expectation is also estimated from prior draws.
inline KennedyStochastic kennedy_p01_stochastic(const OptomechDetector& det, const StochasticPrior& prior,
                                                const TimeGrid& grid, Backaction b, std::size_t mc_trials = 0,
                                                std::uint64_t seed = 0, unsigned threads = 0,
                                                const NumericOptions& opts = {}, Diagnostics* diag = nullptr) {
    require_cancelled(b, "kennedy_p01_stochastic");
    const auto sf = gamma_f_stochastic(det, prior, grid, opts, diag);
    KennedyStochastic out{sf.gamma_f, sf.fidelity.value(), sf.fidelity.log(), std::nullopt, std::nullopt, 0};
    if (mc_trials == 0) return out;

    const auto weight = sample_omegas(grid, [&](double w) {
        return std::norm(transfer(det, Transfer::K4, w)) * noise_psds(det, w).s_xi;
    });
    const auto psd = sample_prior_psd(prior, grid);
    std::vector<double> values(mc_trials);
    detail::for_each_trial(mc_trials, mc_thread_count(threads), [&](std::size_t t, unsigned) {
        CounterRng rng(seed, detail::stream_id(t, 1));
        const Spectrum xs = synthesize_spectrum(psd, grid, rng);
        values[t] = std::exp(-detail::weighted_energy(weight, xs));
    });
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(mc_trials);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(std::max<std::size_t>(mc_trials - 1, 1));
    out.mc_estimate = mean;
    out.mc_se = std::sqrt(var / static_cast<double>(mc_trials));
    out.mc_trials = mc_trials;
    return out;
}

inline ReceiverResult kennedy_analytic(const KennedyDeterministic& k, double p0, double duration) {
    ReceiverResult r;
    r.receiver = "kennedy";
    r.p0 = p0;
    r.p10 = 0.0;
    r.p01 = k.p01;
    r.exponent = -k.log_p01 / duration;
    return finish(r);
}

inline ReceiverResult kennedy_analytic(const KennedyStochastic& k, double p0, double duration) {
    ReceiverResult r;
    r.receiver = "kennedy";
    r.p0 = p0;
    r.p10 = 0.0;
    r.p01 = k.p01;
    r.exponent = -k.log_p01 / duration;
    return finish(r);
}

// --------------------------------------------------------------------- Dolinar

// Average error achieved by the Dolinar receiver for a known waveform; for a
// stochastic waveform this value is only a lower bound.
inline double dolinar_error(double f, double p0) { return helstrom_bayes_bound(f, p0); }

inline ReceiverResult dolinar_analytic(double f, double p0) {
    ReceiverResult r;
    r.receiver = "dolinar";
    r.p0 = p0;
    r.p_e = dolinar_error(f, p0);
    return r;
}

// ----------------------------------------------------------------- Monte Carlo

using Signal = std::variant<DeterministicWaveform, StochasticPrior>;

namespace detail {

inline void add_warnings(McStats& st, bool p10_exact_zero) {
    const auto check = [&](double p, const char* what) {
        const double events = static_cast<double>(st.trials) * std::min(p, 1.0 - p);
        if (events < 10.0) {
            st.warnings.push_back(std::string("fewer than 10 ") + what +
                                  " events; increase trials for a reliable estimate");
        }
    };
    if (!p10_exact_zero) check(st.p10_hat, "false-alarm");
    check(st.p01_hat, "miss");
}

inline McStats make_stats(std::size_t trials, std::size_t false_alarms, std::size_t misses,
                          bool p10_exact_zero = false) {
    McStats st;
    st.trials = trials;
    st.p10_hat = static_cast<double>(false_alarms) / static_cast<double>(trials);
    st.p01_hat = static_cast<double>(misses) / static_cast<double>(trials);
    st.se10 = binomial_se(st.p10_hat, trials);
    st.se01 = binomial_se(st.p01_hat, trials);
    add_warnings(st, p10_exact_zero);
    return st;
}

// Threshold decision with a fair coin on exact ties (randomized test).
template <class Rng>
bool decide_h1(double stat, double lambda, Rng& rng) {
    if (stat > lambda) return true;
    if (stat < lambda) return false;
    return (rng() >> 63) != 0;
}

}  // namespace detail

// Homodyne receiver by simulation. Noise records are drawn by spectral
// synthesis of S_eta directly on the frequency grid; the statistic is
// evaluated there, which is the same as transforming the synthesized
// time-domain record forward again.
//
// Known waveform: matched filter
//     l = (1/T) sum_k Re[conj(y_k) s_k] / S_eta - d^2/2,   s = K4 x,
// the log-likelihood ratio, reproducing the erfc error probabilities.
// Gaussian prior: estimator-correlator
//     l = 1/2 sum_k [ |y_k|^2/T * P_k / (S_eta (S_eta + P_k)) - ln(1 + P_k/S_eta) ],
// with P = |K4|^2 S_x. H1 is declared when l > lambda.
inline ReceiverResult simulate_homodyne_mc(const OptomechDetector& det, const Signal& signal, const TimeGrid& grid,
                                           Backaction b, std::size_t trials, double lambda, std::uint64_t seed,
                                           unsigned threads = 0, double p0 = 0.5) {
    require_cancelled(b, "simulate_homodyne_mc");
    det.validate();
    if (trials == 0) throw InvalidArgument("simulate_homodyne_mc: trials must be >= 1");
    const std::size_t n = grid.n();
    const double T = grid.duration();
    const auto s_eta = sample_omegas(grid, [&](double w) { return noise_psds(det, w).s_eta; });
    std::vector<cplx> k4(n);
    for (std::size_t k = 0; k < n; ++k) k4[k] = transfer(det, Transfer::K4, grid.omega(k));

    std::vector<unsigned char> fa(trials, 0), miss(trials, 0);
    const unsigned nthreads = mc_thread_count(threads);

    if (const auto* wave = std::get_if<DeterministicWaveform>(&signal)) {
        const Spectrum xs = forward_transform(render(*wave, grid));
        std::vector<cplx> s(n);
        double d2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            s[k] = k4[k] * xs.values[k];
            d2 += std::norm(s[k]) / s_eta[k];
        }
        d2 /= T;
        const auto stat = [&](const Spectrum& y) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += (std::conj(y.values[k]) * s[k]).real() / s_eta[k];
            return acc / T - 0.5 * d2;
        };
        detail::for_each_trial(trials, nthreads, [&](std::size_t t, unsigned) {
            CounterRng r0(seed, detail::stream_id(t, 0));
            const Spectrum y0 = synthesize_spectrum(s_eta, grid, r0);
            fa[t] = detail::decide_h1(stat(y0), lambda, r0);

            CounterRng r1(seed, detail::stream_id(t, 1));
            Spectrum y1 = synthesize_spectrum(s_eta, grid, r1);
            for (std::size_t k = 0; k < n; ++k) y1.values[k] += s[k];
            miss[t] = !detail::decide_h1(stat(y1), lambda, r1);
        });
    } else {
        const auto& prior = std::get<StochasticPrior>(signal);
        validate(prior, grid);
        const auto sx = sample_prior_psd(prior, grid);
        std::vector<double> gain(n), offset(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double p = std::norm(k4[k]) * sx[k];
            gain[k] = p / (s_eta[k] * (s_eta[k] + p));
            offset[k] = std::log1p(p / s_eta[k]);
        }
        const auto stat = [&](const Spectrum& y) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += std::norm(y.values[k]) / T * gain[k] - offset[k];
            return 0.5 * acc;
        };
        detail::for_each_trial(trials, nthreads, [&](std::size_t t, unsigned) {
            CounterRng r0(seed, detail::stream_id(t, 0));
            const Spectrum y0 = synthesize_spectrum(s_eta, grid, r0);
            fa[t] = detail::decide_h1(stat(y0), lambda, r0);

            CounterRng r1(seed, detail::stream_id(t, 1));
            Spectrum y1 = synthesize_spectrum(s_eta, grid, r1);
            const Spectrum xs = synthesize_spectrum(sx, grid, r1);
            for (std::size_t k = 0; k < n; ++k) y1.values[k] += k4[k] * xs.values[k];
            miss[t] = !detail::decide_h1(stat(y1), lambda, r1);
        });
    }

    std::size_t n_fa = 0, n_miss = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        n_fa += fa[t];
        n_miss += miss[t];
    }
    ReceiverResult r;
    r.receiver = "homodyne";
    r.p0 = p0;
    r.mc = detail::make_stats(trials, n_fa, n_miss);
    r.p10 = r.mc->p10_hat;
    r.p01 = r.mc->p01_hat;
    return finish(r);
}

// Kennedy receiver by simulation: under H1 the displaced output carries mean
// photon number mu = int dt |A (K2*K3*x)|^2 and the count is Poisson(mu);
// H1 is declared on any click. Under H0 the displaced output is vacuum, so
// no trial can click and p10_hat = 0.
inline ReceiverResult simulate_kennedy_mc(const OptomechDetector& det, const Signal& signal, const TimeGrid& grid,
                                          Backaction b, std::size_t trials, std::uint64_t seed, unsigned threads = 0,
                                          double p0 = 0.5, const NumericOptions& opts = {}) {
    require_cancelled(b, "simulate_kennedy_mc");
    det.validate();
    if (trials == 0) throw InvalidArgument("simulate_kennedy_mc: trials must be >= 1");
    std::vector<unsigned char> miss(trials, 0);
    const unsigned nthreads = mc_thread_count(threads);

    const auto count_is_zero = [](double mu, CounterRng& rng) {
        if (!(mu > 0.0)) return true;
        std::poisson_distribution<long> poisson(mu);
        return poisson(rng) == 0;
    };

    if (const auto* wave = std::get_if<DeterministicWaveform>(&signal)) {
        const double mu = kennedy_energy_time(det, render(*wave, grid), opts);
        detail::for_each_trial(trials, nthreads, [&](std::size_t t, unsigned) {
            CounterRng rng(seed, detail::stream_id(t, 1));
            miss[t] = count_is_zero(mu, rng);
        });
    } else {
        const auto& prior = std::get<StochasticPrior>(signal);
        validate(prior, grid);
        const auto psd = sample_prior_psd(prior, grid);
        const auto weight = sample_omegas(grid, [&](double w) {
            return std::norm(transfer(det, Transfer::K4, w)) * noise_psds(det, w).s_xi;
        });
        detail::for_each_trial(trials, nthreads, [&](std::size_t t, unsigned) {
            CounterRng rng(seed, detail::stream_id(t, 1));
            const Spectrum xs = synthesize_spectrum(psd, grid, rng);
            miss[t] = count_is_zero(detail::weighted_energy(weight, xs), rng);
        });
    }

    std::size_t n_miss = 0;
    for (auto m : miss) n_miss += m;
    ReceiverResult r;
    r.receiver = "kennedy";
    r.p0 = p0;
    r.mc = detail::make_stats(trials, 0, n_miss, true);  // no false alarms by construction
    r.p10 = r.mc->p10_hat;
    r.p01 = r.mc->p01_hat;
    return finish(r);
}

}  // namespace qdetlim
