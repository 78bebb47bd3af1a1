#include <catch_amalgamated.hpp>

#include "qdetlim/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <random>

using namespace qdetlim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

// Helstrom error for two qubit pure states with |<a|b>|^2 = f, by
// diagonalizing p0 rho_a - p1 rho_b.
double qubit_helstrom(double f, double p0) {
    const double th = std::acos(std::sqrt(f));
    Eigen::Vector2d a(1.0, 0.0), b(std::cos(th), std::sin(th));
    const Eigen::Matrix2d m = p0 * a * a.transpose() - (1.0 - p0) * b * b.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
    return 0.5 * (1.0 - es.eigenvalues().cwiseAbs().sum());
}

Eigen::MatrixXd circulant(const std::vector<double>& row) {
    const std::size_t n = row.size();
    Eigen::MatrixXd c(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) c(i, j) = row[(j + n - i) % n];
    }
    return c;
}

}  // namespace

TEST_CASE("deterministic fidelity", "[bounds]") {
    const auto det = OptomechDetector::natural_units();
    const TimeGrid g(0.0, 400.0 * pi, 8192);

    SECTION("zero waveform gives F = 1") {
        CHECK(fidelity_optomech(det, forward_transform(RealSeries(g))).value() == 1.0);
        CHECK(fidelity_sinusoid(position_psd(det, 1.0), 0.0, g.duration(), det.hbar).value() == 1.0);
    }
    SECTION("no probe light gives F = 1") {
        auto dark = det;
        dark.mean_field = 1e-150;  // |A|^2 = 1e-300 still representable
        const auto x = render(Sinusoid{0.02, 1.0, 0.0}, g);
        CHECK(fidelity_optomech(dark, forward_transform(x)).value() == 1.0);
    }
    SECTION("on-grid sinusoid: two-bin closed form") {
        for (double w : {0.5, 1.0, 1.35}) {
            const double omega = std::round(w / g.domega()) * g.domega();
            const auto x = render(Sinusoid{0.02, omega, 0.7}, g);
            Diagnostics d;
            const double grid_log = fidelity_optomech(det, forward_transform(x), {}, &d).log();
            const double closed = fidelity_sinusoid(position_psd(det, omega), 0.02, g.duration(), det.hbar).log();
            INFO("omega = " << omega);
            CHECK_THAT(grid_log, WithinRel(closed, 1e-9));
        }
    }
    SECTION("fidelity scales as exp(-X^2)") {
        const auto x1 = forward_transform(render(Sinusoid{0.01, 1.0, 0.0}, g));
        const auto x2 = forward_transform(render(Sinusoid{0.03, 1.0, 0.0}, g));
        CHECK_THAT(fidelity_optomech(det, x2).log(), WithinRel(9.0 * fidelity_optomech(det, x1).log(), 1e-12));
    }
    SECTION("gamma_f_deterministic is exponent over T") {
        const auto xs = forward_transform(render(Sinusoid{0.02, 1.0, 0.0}, g));
        CHECK_THAT(gamma_f_deterministic(det, xs, g.duration()) * g.duration(),
                   WithinRel(fidelity_optomech(det, xs).exponent(), 1e-14));
    }
}

TEST_CASE("stochastic fidelity", "[bounds][circulant]") {
    SECTION("zero prior gives F = 1") {
        const std::vector<double> q{1.0, 0.2, 0.0, 0.2}, x(4, 0.0);
        CHECK(fidelity_stochastic_circulant(q, x, 0.5, 1.0).value() == 1.0);
        const auto det = OptomechDetector::natural_units();
        CHECK(gamma_f_stochastic(det, Lorentzian{0.0, 1.0}, TimeGrid(0.0, 100.0, 1024)).gamma_f == 0.0);
    }
    SECTION("dense determinant oracle, n <= 64") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.1, 1.0);
        for (std::size_t n : {4u, 9u, 16u, 33u, 64u}) {
            const TimeGrid g(0.0, 0.2 * static_cast<double>(n), n);
            const double wc = u(rng) * g.nyquist() * 0.5;
            const auto qrow = covariance_row(Lorentzian{u(rng), wc}, g);
            const auto xrow = covariance_row(FlatBand{u(rng), 0.0, 0.8 * g.nyquist()}, g);
            const double hbar = 0.7;
            const double dt = g.dt();
            const Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n) +
                                      (2.0 * dt * dt / (hbar * hbar)) * circulant(qrow) * circulant(xrow);
            const double ref = -0.5 * std::log(c.determinant());
            INFO("n = " << n);
            CHECK_THAT(fidelity_stochastic_circulant(qrow, xrow, dt, hbar).log(), WithinRel(ref, 1e-8));
        }
    }
    SECTION("circulant determinant equals exp(-Gamma_F T) on the same grid") {
        const auto det = OptomechDetector::natural_units();
        const TimeGrid g(0.0, 200.0, 2048);
        const Lorentzian prior{2e-3, 1.5};
        const auto sf = gamma_f_stochastic(det, prior, g);
        const TimeGrid lag(0.0, g.duration(), g.n());
        std::vector<double> sq = sample_omegas(lag, [&](double w) { return position_psd(det, w); });
        Spectrum s(lag);
        for (std::size_t k = 0; k < g.n(); ++k) s.values[k] = sq[k];
        auto qrow = real_part(inverse_transform(s)).values;
        for (std::size_t k = 1; k < g.n(); ++k) qrow[k] = qrow[g.n() - k] = 0.5 * (qrow[k] + qrow[g.n() - k]);
        const auto xrow = covariance_row(prior, g);
        CHECK_THAT(fidelity_stochastic_circulant(qrow, xrow, g.dt(), det.hbar).log(),
                   WithinRel(sf.fidelity.log(), 1e-10));
    }
    SECTION("non-PSD input rejected") {
        const std::vector<double> q{1.0, 0.0, 0.0, 0.0}, x{0.0, 1.0, 0.0, 1.0};  // eigenvalues 2, 0, -2, 0
        CHECK_THROWS_AS(fidelity_stochastic_circulant(q, x, 1.0, 1.0), NumericalError);
    }
    SECTION("Gamma_F grows with prior strength") {
        const auto det = OptomechDetector::natural_units();
        const TimeGrid g(0.0, 300.0, 4096);
        const double a = gamma_f_stochastic(det, Lorentzian{1e-3, 1.0}, g).gamma_f;
        const double b = gamma_f_stochastic(det, Lorentzian{2e-3, 1.0}, g).gamma_f;
        CHECK(b > a);
        CHECK(b < 2.0 * a);  // log1p is concave
    }
}

TEST_CASE("Helstrom Bayes bound", "[bounds]") {
    CHECK(helstrom_bayes_bound(0.0, 0.5) == 0.0);
    CHECK(helstrom_bayes_bound(1.0, 0.5) == 0.5);
    CHECK_THAT(helstrom_bayes_bound(0.5, 0.5), WithinAbs(0.5 * (1.0 - 1.0 / std::sqrt(2.0)), 1e-15));
    CHECK_THAT(helstrom_bayes_bound(0.5, 0.5), WithinAbs(0.146447, 1e-6));
    CHECK_THAT(helstrom_bayes_bound(1.0, 0.2), WithinAbs(0.2, 1e-15));
    CHECK_THROWS_AS(helstrom_bayes_bound(1.5, 0.5), InvalidArgument);
    CHECK_THROWS_AS(helstrom_bayes_bound(0.5, -0.1), InvalidArgument);

    SECTION("qubit brute force") {
        for (double f : {0.0, 0.1, 0.5, 0.9, 1.0}) {
            for (double p0 : {0.1, 0.5, 0.75}) {
                CHECK_THAT(helstrom_bayes_bound(f, p0), WithinAbs(qubit_helstrom(f, p0), 1e-12));
            }
        }
    }
    SECTION("monotone in F, symmetric in priors, below min prior") {
        double prev = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double f = i / 100.0;
            const double v = helstrom_bayes_bound(f, 0.3);
            CHECK(v >= prev);
            CHECK(v <= 0.3 + 1e-15);
            CHECK_THAT(v, WithinAbs(helstrom_bayes_bound(f, 0.7), 1e-15));
            prev = v;
        }
    }
}

TEST_CASE("Neyman-Pearson bound", "[bounds]") {
    CHECK(neyman_pearson_bound(0.3, 0.3) == 0.0);
    CHECK(neyman_pearson_bound(0.3, 0.8) == 0.0);
    CHECK_THAT(neyman_pearson_bound(0.3, 0.0), WithinAbs(0.3, 1e-15));
    CHECK(neyman_pearson_bound(1.0, 0.0) == 1.0);
    CHECK(neyman_pearson_bound(0.4, 0.0, NpRole::false_alarm_given_miss) == neyman_pearson_bound(0.4, 0.0));
    CHECK_THROWS_AS(neyman_pearson_bound(0.4, 1.2), InvalidArgument);

    SECTION("curve is non-increasing and within [0, 1]") {
        for (double f : {0.01, 0.3, 0.9}) {
            const auto c = np_curve(f, 201);
            CHECK(c.front().p10 == 0.0);
            CHECK(c.back().p10 == 1.0);
            for (std::size_t k = 1; k < c.size(); ++k) {
                CHECK(c[k].p01_lower <= c[k - 1].p01_lower + 1e-15);
                CHECK(c[k].p01_lower >= 0.0);
            }
        }
        CHECK_THROWS_AS(np_curve(0.5, 1), InvalidArgument);
    }
    SECTION("Helstrom point lies on or above the NP curve") {
        // the symmetric Bayes optimum achieves P10 = P01 = P_e at p0 = 1/2
        for (double f : {0.05, 0.4, 0.8}) {
            const double pe = helstrom_bayes_bound(f, 0.5);
            CHECK(pe >= neyman_pearson_bound(f, pe) - 1e-12);
        }
    }
}

TEST_CASE("bounds report", "[bounds]") {
    const auto r = make_bounds_report(Fidelity::from_exponent(2.0), 0.5, 4.0, 11);
    CHECK(r.gamma_f == 0.5);
    CHECK(r.np_curve.size() == 11);
    CHECK_THAT(r.bayes_bound, WithinAbs(helstrom_bayes_bound(std::exp(-2.0), 0.5), 1e-15));
    CHECK_THROWS_AS(make_bounds_report(Fidelity{}, 0.5, 0.0), InvalidArgument);
}

TEST_CASE("Fidelity log-domain storage", "[bounds]") {
    CHECK(Fidelity::from_exponent(1e4).value() == 0.0);
    CHECK(Fidelity::from_exponent(1e4).log() == -1e4);
    CHECK(Fidelity::from_log(1e-14).log() == 0.0);
    CHECK_THROWS_AS(Fidelity::from_log(1e-6), NumericalError);
    CHECK_THROWS_AS(Fidelity::from_value(1.5), InvalidArgument);
}
