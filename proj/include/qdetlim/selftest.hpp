// selftest.hpp — reduced-scale oracle checks, run by `qdetlim selftest`.

#pragma once

#include "qdetlim/bounds.hpp"
#include "qdetlim/linsys.hpp"
#include "qdetlim/optomech.hpp"
#include "qdetlim/receivers.hpp"
#include "qdetlim/rng.hpp"
#include "qdetlim/spectral.hpp"
#include "qdetlim/waveform.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace qdetlim {

struct SelftestResult {
    std::string name;
    bool pass;
    std::string detail;
};

namespace detail {

inline SelftestResult check_close(std::string name, double got, double want, double rel) {
    std::ostringstream d;
    d.precision(10);
    const double err = std::abs(got - want) / std::max(std::abs(want), 1e-300);
    d << "got " << got << ", want " << want << " (rel err " << err << ", tol " << rel << ")";
    return {std::move(name), err <= rel, d.str()};
}

}  // namespace detail

inline std::vector<SelftestResult> run_selftest() {
    using detail::check_close;
    constexpr double pi = std::numbers::pi;
    std::vector<SelftestResult> out;
    const auto guard = [&](const std::string& name, const std::function<void()>& f) {
        try {
            f();
        } catch (const std::exception& e) {
            out.push_back({name, false, std::string("threw: ") + e.what()});
        }
    };

    guard("parseval", [&] {
        const TimeGrid g(0.0, 10.0, 256);
        RealSeries x(g);
        for (std::size_t j = 0; j < g.n(); ++j) x.values[j] = std::sin(0.37 * j * j) + 0.1 * j / 256.0;
        double et = 0.0;
        for (double v : x.values) et += v * v * g.dt();
        const auto s = forward_transform(x);
        std::vector<double> f(g.n());
        for (std::size_t k = 0; k < g.n(); ++k) f[k] = std::norm(s.values[k]);
        out.push_back(check_close("parseval", freq_integral(f, g), et, 1e-10));
    });

    guard("circulant_4x4", [&] {
        const std::vector<double> row{2, 1, 0, 1};
        const auto e = symmetric_circulant_eigenvalues(row);
        const double err = std::abs(e[0] - 4) + std::abs(e[1] - 2) + std::abs(e[2]) + std::abs(e[3] - 2);
        out.push_back({"circulant_4x4", err < 1e-12, "eigenvalues of (2,1,0,1) = (4,2,0,2)"});
    });

    guard("expm_oscillator", [&] {
        Eigen::MatrixXd m(2, 2);
        m << 0, 1, -4, 0;
        const double t = 1.3;
        const auto e = matrix_exponential(m, t);
        out.push_back(check_close("expm_oscillator", e(0, 1), std::sin(2 * t) / 2, 1e-10));
    });

    guard("philox_kat", [&] {
        const auto b = philox4x32_10({0, 0, 0, 0}, {0, 0});
        out.push_back({"philox_kat", b[0] == 0x6627e8d5u && b[3] == 0x9b00dbd8u, "Philox4x32-10 zero vector"});
    });

    guard("helstrom", [&] {
        out.push_back(check_close("helstrom", helstrom_bayes_bound(0.5, 0.5), 0.5 * (1 - 1 / std::sqrt(2.0)), 1e-14));
    });

    const auto det = OptomechDetector::natural_units();
    const TimeGrid g(0.0, 100.0 * pi, 2048);
    const RealSeries x = render(Sinusoid{0.02, 1.0, 0.0}, g);
    const Spectrum xs = forward_transform(x);

    guard("half_exponent", [&] {
        const double ghom = homodyne_snr(det, xs, Backaction::cancelled) / g.duration();
        out.push_back(check_close("half_exponent", ghom, gamma_f_deterministic(det, xs, g.duration()) / 2, 1e-9));
    });

    guard("kennedy_vs_fidelity", [&] {
        const auto k = kennedy_p01_deterministic(det, x, Backaction::cancelled);
        out.push_back(check_close("kennedy_vs_fidelity", k.log_p01_time, fidelity_optomech(det, xs).log(), 0.01));
    });

    guard("homodyne_mc", [&] {
        const TimeGrid small(0.0, 40.0 * pi, 64);
        const Spectrum unit = forward_transform(render(Sinusoid{1.0, 1.0, 0.0}, small));
        const double amp = 1.0 / std::sqrt(homodyne_snr(det, unit, Backaction::cancelled));  // sigma = 1
        const std::size_t n = 20000;
        const auto r = simulate_homodyne_mc(det, DeterministicWaveform{Sinusoid{amp, 1.0, 0.0}}, small,
                                            Backaction::cancelled, n, 0.0, 1, 1);
        const double p = 0.5 * std::erfc(1.0);
        const double z = (r.mc->p10_hat - p) / binomial_se(p, n);
        std::ostringstream d;
        d << "p10_hat " << r.mc->p10_hat << " vs " << p << " (" << z << " SE)";
        out.push_back({"homodyne_mc", std::abs(z) <= 4.0, d.str()});
    });

    guard("chernoff_endpoints", [&] {
        const auto r = homodyne_snr_density(det, Lorentzian{1e-2, 1.0}, g);
        const double e0 = chernoff_objective(r, g.duration(), 0.0);
        const double e1 = chernoff_objective(r, g.duration(), 1.0);
        out.push_back({"chernoff_endpoints", std::abs(e0) <= 1e-12 && std::abs(e1) <= 1e-12,
                       "objective vanishes at s = 0 and s = 1"});
    });

    return out;
}

}  // namespace qdetlim
