#include <catch_amalgamated.hpp>

#include "qdetlim/receivers.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace qdetlim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

// erfc by its Maclaurin series for erf; adequate for |x| <= 3.
double erfc_series(double x) {
    double term = x, sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        sum += term / (2 * n + 1);
    }
    return 1.0 - 2.0 / std::sqrt(pi) * sum;
}

const OptomechDetector kDet = OptomechDetector::natural_units();
const TimeGrid kGrid(0.0, 400.0 * pi, 8192);

// Small grid whose on-grid sinusoid gives homodyne SNR sigma.
struct SmallScenario {
    TimeGrid grid{0.0, 40.0 * pi, 128};
    Sinusoid wave;
};

SmallScenario small_with_sigma(double sigma, const OptomechDetector& det = kDet) {
    SmallScenario s;
    const auto unit = forward_transform(render(Sinusoid{1.0, 1.0, 0.3}, s.grid));
    const double s2 = homodyne_snr(det, unit, Backaction::cancelled);
    s.wave = Sinusoid{sigma / std::sqrt(s2), 1.0, 0.3};
    return s;
}

}  // namespace

TEST_CASE("homodyne SNR", "[receivers][homodyne]") {
    SECTION("zero waveform") {
        CHECK(homodyne_snr(kDet, forward_transform(RealSeries(kGrid)), Backaction::cancelled) == 0.0);
    }
    SECTION("requires backaction cancellation") {
        CHECK_THROWS_AS(homodyne_snr(kDet, Spectrum(kGrid), Backaction::present), ReceiverUnavailable);
    }
    SECTION("minimum uncertainty: sigma^2 = Gamma_F T / 2") {
        const auto xs = forward_transform(render(Sinusoid{0.02, 1.0, 0.0}, kGrid));
        const double s2 = homodyne_snr(kDet, xs, Backaction::cancelled);
        const double gf = gamma_f_deterministic(kDet, xs, kGrid.duration());
        CHECK_THAT(homodyne_exponent_deterministic(s2, kGrid.duration()), WithinRel(gf / 2.0, 1e-12));
        auto noisy = kDet;
        noisy.s_eta_excess = 4.0;
        CHECK_THAT(homodyne_snr(noisy, xs, Backaction::cancelled), WithinRel(s2 / 4.0, 1e-12));
    }
    CHECK(homodyne_exponent_deterministic(0.0, 3.0) == 0.0);
}

TEST_CASE("homodyne error probabilities", "[receivers][homodyne]") {
    for (double s : {0.3, 1.0, 2.2}) {
        const auto e = homodyne_error_probs(s, 0.0);
        CHECK(e.p10 == e.p01);
        CHECK_THAT(e.p10, WithinRel(0.5 * erfc_series(s), 1e-12));
    }
    CHECK_THAT(homodyne_error_probs(1.0, 0.0).p10, WithinAbs(0.0786496, 1e-7));
    const auto far = homodyne_error_probs(1.0, 1e6);
    CHECK(far.p10 < 1e-300);
    CHECK(far.p01 == 1.0);
    CHECK_THROWS_AS(homodyne_error_probs(0.0, 0.0), InvalidArgument);

    SECTION("Bayes threshold minimizes the average error") {
        for (double p0 : {0.2, 0.5, 0.9}) {
            const double lam = bayes_threshold(p0);
            const auto pe = [&](double l) {
                const auto e = homodyne_error_probs(0.8, l);
                return p0 * e.p10 + (1.0 - p0) * e.p01;
            };
            CHECK(pe(lam) <= pe(lam + 0.05));
            CHECK(pe(lam) <= pe(lam - 0.05));
        }
        CHECK(bayes_threshold(0.5) == 0.0);
        CHECK_THROWS_AS(bayes_threshold(1.0), InvalidArgument);
    }
    SECTION("threshold for target P10") {
        for (double target : {1e-6, 0.01, 0.3, 0.9}) {
            const double lam = threshold_for_p10(1.2, target);
            CHECK_THAT(homodyne_error_probs(1.2, lam).p10, WithinRel(target, 1e-9));
        }
    }
    SECTION("LLR statistic has mean d^2/2 and variance d^2") {
        // P10 = P(N(-d^2/2, d^2) > lam) with d^2 = 8 sigma^2
        const double sigma = 0.7, lam = 0.4;
        const double d = std::sqrt(8.0) * sigma;
        const double ref = 0.5 * std::erfc((lam + 0.5 * d * d) / (d * std::sqrt(2.0)));
        CHECK_THAT(homodyne_error_probs(sigma, lam).p10, WithinRel(ref, 1e-13));
    }
}

TEST_CASE("half-exponent property over random detectors", "[receivers][homodyne][property]") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const TimeGrid g(0.0, 100.0 * pi, 2048);
    for (int i = 0; i < 30; ++i) {
        OptomechDetector d;
        d.gamma = 2.0 + 20.0 * u(rng);
        d.gamma_m = 0.05 + 0.5 * u(rng);
        d.mean_field = 0.2 + 3.0 * u(rng);
        d.s_eta_excess = 1.0 + 5.0 * u(rng);
        const auto xs = forward_transform(render(Sinusoid{0.05, 1.0 + 0.02 * i, 0.0}, g));
        const double ghom = homodyne_snr(d, xs, Backaction::cancelled) / g.duration();
        const double gf = gamma_f_deterministic(d, xs, g.duration());
        CHECK(ghom <= gf / 2.0 + 1e-12);
        CHECK_THAT(ghom * d.s_eta_excess, WithinRel(gf / 2.0, 1e-12));
    }
}

TEST_CASE("homodyne analytic result", "[receivers][homodyne]") {
    const auto xs = forward_transform(render(Sinusoid{0.02, 1.0, 0.0}, kGrid));
    const auto r = homodyne_analytic(kDet, xs, Backaction::cancelled, 0.0, 0.5);
    CHECK(*r.p10 == *r.p01);
    CHECK_THAT(*r.p_e, WithinRel(*r.p10, 1e-15));
    const auto zero = homodyne_analytic(kDet, Spectrum(kGrid), Backaction::cancelled, 0.0, 0.5);
    CHECK(*zero.p10 == 0.5);
    CHECK(*zero.exponent == 0.0);
}

TEST_CASE("Chernoff exponent", "[receivers][chernoff]") {
    SECTION("zero prior") {
        const auto c = chernoff_exponent_stochastic(kDet, Lorentzian{0.0, 1.0}, kGrid, Backaction::cancelled);
        CHECK(c.gamma == 0.0);
    }
    SECTION("endpoints vanish") {
        const auto r = homodyne_snr_density(kDet, Lorentzian{5e-3, 1.0}, kGrid);
        CHECK(std::abs(chernoff_objective(r, kGrid.duration(), 0.0)) <= 1e-12);
        CHECK(std::abs(chernoff_objective(r, kGrid.duration(), 1.0)) <= 1e-12);
    }
    SECTION("weak-signal limit (1/16) int R^2 at s = 1/2") {
        const Lorentzian p{1e-6, 1.0};
        const auto r = homodyne_snr_density(kDet, p, kGrid);
        REQUIRE(*std::max_element(r.begin(), r.end()) <= 1e-3);
        double r2 = 0.0;
        for (double v : r) r2 += v * v;
        const double weak = r2 / kGrid.duration() / 16.0;
        const auto c = chernoff_exponent_stochastic(kDet, p, kGrid, Backaction::cancelled);
        CHECK_THAT(c.gamma, WithinRel(weak, 0.01));
        CHECK(c.s_star >= 0.45);
        CHECK(c.s_star <= 0.55);
    }
    SECTION("maximum dominates the pre-scan") {
        const auto r = homodyne_snr_density(kDet, Lorentzian{1e-1, 1.0}, kGrid);
        const auto c = chernoff_maximize(r, kGrid.duration());
        for (double s = 0.0; s <= 1.0; s += 0.01) CHECK(chernoff_objective(r, kGrid.duration(), s) <= c.gamma + 1e-15);
    }
    CHECK_THROWS_AS(chernoff_exponent_stochastic(kDet, Lorentzian{1.0, 1.0}, kGrid, Backaction::present),
                    ReceiverUnavailable);
}

TEST_CASE("Kennedy receiver, known waveform", "[receivers][kennedy]") {
    SECTION("zero waveform never clicks") {
        const auto k = kennedy_p01_deterministic(kDet, RealSeries(kGrid), Backaction::cancelled);
        CHECK(k.p01 == 1.0);
        CHECK(k.p10 == 0.0);
    }
    SECTION("miss probability equals the fidelity") {
        const auto x = render(Sinusoid{0.02, 1.0, 0.0}, kGrid);
        const auto k = kennedy_p01_deterministic(kDet, x, Backaction::cancelled);
        const double lf = fidelity_optomech(kDet, forward_transform(x)).log();
        CHECK_THAT(k.log_p01, WithinRel(lf, 1e-12));
        CHECK_THAT(k.log_p01_time, WithinRel(lf, 0.01));
        const auto r = kennedy_analytic(k, 0.5, kGrid.duration());
        CHECK(*r.p10 == 0.0);
        CHECK_THAT(*r.exponent, WithinRel(-lf / kGrid.duration(), 1e-12));
    }
    SECTION("time-domain energy of a pulse matches Parseval") {
        const TimeGrid g(0.0, 200.0, 8192);
        const auto x = render(GaussianPulse{0.5, 80.0, 2.0}, g);
        const double et = kennedy_energy_time(kDet, x);
        const double ef = kennedy_energy_freq(kDet, forward_transform(x));
        CHECK_THAT(et, WithinRel(ef, 0.01));
    }
    SECTION("under-resolved grid is rejected") {
        const TimeGrid coarse(0.0, 400.0 * pi, 64);
        const auto x = render(GaussianPulse{1.0, 600.0, 0.5}, coarse);
        CHECK_THROWS_AS(kennedy_p01_deterministic(kDet, x, Backaction::cancelled), NumericalError);
    }
    SECTION("undamped mirror has no warm-up") {
        auto d = kDet;
        d.gamma_m = 0.0;
        CHECK_THROWS_AS(kennedy_energy_time(d, RealSeries(kGrid)), InvalidArgument);
    }
    CHECK_THROWS_AS(kennedy_p01_deterministic(kDet, RealSeries(kGrid), Backaction::present), ReceiverUnavailable);
}

TEST_CASE("Kennedy receiver, Gaussian prior", "[receivers][kennedy][mc]") {
    SECTION("zero prior never clicks") {
        const auto k = kennedy_p01_stochastic(kDet, Lorentzian{0.0, 1.0}, kGrid, Backaction::cancelled);
        CHECK(k.p01 == 1.0);
    }
    SECTION("prior average of exp(-energy) is the fidelity") {
        const TimeGrid g(0.0, 100.0 * pi, 1024);
        const auto k = kennedy_p01_stochastic(kDet, Lorentzian{3e-4, 1.0}, g, Backaction::cancelled, 20000, 11, 1);
        REQUIRE(k.mc_estimate);
        CHECK(k.p01 > 0.05);
        CHECK(k.p01 < 0.95);
        CHECK_THAT(*k.mc_estimate, WithinAbs(k.p01, 4.0 * *k.mc_se));
    }
}

TEST_CASE("Dolinar receiver", "[receivers][dolinar]") {
    for (double f : {0.0, 0.2, 0.5, 1.0}) {
        for (double p0 : {0.3, 0.5}) {
            CHECK(*dolinar_analytic(f, p0).p_e == helstrom_bayes_bound(f, p0));
        }
    }
    CHECK(dolinar_error(0.0, 0.5) == 0.0);
}

TEST_CASE("homodyne Monte Carlo", "[receivers][homodyne][mc]") {
    SECTION("no signal, zero threshold: p10 ~ 1/2") {
        const TimeGrid g(0.0, 40.0 * pi, 64);
        const auto r = simulate_homodyne_mc(kDet, DeterministicWaveform{Sinusoid{0.0, 1.0, 0.0}}, g,
                                            Backaction::cancelled, 20000, 0.0, 3, 1);
        CHECK_THAT(r.mc->p10_hat, WithinAbs(0.5, 3.0 * binomial_se(0.5, 20000)));
    }
    SECTION("known waveform matches erfc at sigma = 1") {
        const auto s = small_with_sigma(1.0);
        const std::size_t n = 100000;
        const auto r = simulate_homodyne_mc(kDet, DeterministicWaveform{s.wave}, s.grid, Backaction::cancelled, n,
                                            0.0, 5, 1);
        const double p = 0.5 * std::erfc(1.0);
        CHECK_THAT(r.mc->p10_hat, WithinAbs(p, 3.0 * binomial_se(p, n)));
        CHECK_THAT(r.mc->p01_hat, WithinAbs(p, 3.0 * binomial_se(p, n)));
    }
    SECTION("nonzero threshold shifts the errors as predicted") {
        const auto s = small_with_sigma(0.8);
        const std::size_t n = 100000;
        const double lam = 1.0;
        const auto r = simulate_homodyne_mc(kDet, DeterministicWaveform{s.wave}, s.grid, Backaction::cancelled, n,
                                            lam, 8, 1);
        const auto e = homodyne_error_probs(0.8, lam);
        CHECK_THAT(r.mc->p10_hat, WithinAbs(e.p10, 3.0 * binomial_se(e.p10, n)));
        CHECK_THAT(r.mc->p01_hat, WithinAbs(e.p01, 3.0 * binomial_se(e.p01, n)));
    }
    SECTION("results do not depend on the thread count") {
        const auto s = small_with_sigma(1.0);
        const DeterministicWaveform w{s.wave};
        const auto a = simulate_homodyne_mc(kDet, w, s.grid, Backaction::cancelled, 3001, 0.0, 9, 1);
        const auto b = simulate_homodyne_mc(kDet, w, s.grid, Backaction::cancelled, 3001, 0.0, 9, 4);
        CHECK(a.mc->p10_hat == b.mc->p10_hat);
        CHECK(a.mc->p01_hat == b.mc->p01_hat);
    }
    SECTION("Gaussian prior respects the Helstrom bound") {
        const TimeGrid g(0.0, 100.0 * pi, 512);
        const Lorentzian p{0.05, 1.0};
        const std::size_t n = 20000;
        const auto r = simulate_homodyne_mc(kDet, StochasticPrior{p}, g, Backaction::cancelled, n, 0.0, 4, 1);
        const double f = gamma_f_stochastic(kDet, p, g).fidelity.value();
        CHECK(*r.p_e >= helstrom_bayes_bound(f, 0.5) - 3.0 * binomial_se(*r.p_e, n));
        CHECK(*r.p_e < 0.5);
    }
    SECTION("few events raise a warning") {
        const auto s = small_with_sigma(3.0);
        const auto r = simulate_homodyne_mc(kDet, DeterministicWaveform{s.wave}, s.grid, Backaction::cancelled, 100,
                                            0.0, 1, 1);
        CHECK_FALSE(r.mc->warnings.empty());
    }
    CHECK_THROWS_AS(simulate_homodyne_mc(kDet, DeterministicWaveform{Sinusoid{}}, kGrid, Backaction::present, 10,
                                         0.0, 1),
                    ReceiverUnavailable);
}

TEST_CASE("Kennedy Monte Carlo", "[receivers][kennedy][mc]") {
    SECTION("zero waveform misses every time") {
        const TimeGrid g(0.0, 40.0 * pi, 256);
        const auto r = simulate_kennedy_mc(kDet, DeterministicWaveform{Sinusoid{0.0, 1.0, 0.0}}, g,
                                           Backaction::cancelled, 1000, 1, 1);
        CHECK(r.mc->p01_hat == 1.0);
        CHECK(r.mc->p10_hat == 0.0);
    }
    SECTION("Poisson miss rate e^-mu") {
        const TimeGrid g(0.0, 100.0 * pi, 2048);
        const auto unit = render(Sinusoid{1.0, 1.0, 0.0}, g);
        const double mu1 = kennedy_energy_time(kDet, unit);
        const Sinusoid w{std::sqrt(1.0 / mu1), 1.0, 0.0};  // mu = 1
        const std::size_t n = 50000;
        const auto r = simulate_kennedy_mc(kDet, DeterministicWaveform{w}, g, Backaction::cancelled, n, 21, 1);
        const double p = std::exp(-1.0);
        CHECK_THAT(r.mc->p01_hat, WithinAbs(p, 3.0 * binomial_se(p, n)));
        CHECK(r.mc->p10_hat == 0.0);
        CHECK(r.mc->warnings.empty());  // structural zero false-alarm rate is not under-sampled
    }
}

TEST_CASE("thread count honours QDETLIM_THREADS", "[receivers]") {
    ::setenv("QDETLIM_THREADS", "2", 1);
    CHECK(mc_thread_count(8) == 2);
    CHECK(mc_thread_count(1) == 1);
    ::setenv("QDETLIM_THREADS", "0", 1);
    CHECK(mc_thread_count(3) == 3);
    ::unsetenv("QDETLIM_THREADS");
}
