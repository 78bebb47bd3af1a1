// spectral.hpp — time grids, Fourier transforms, frequency quadrature,
// circulant spectra and matrix exponentials.
//
// Transform convention (used by every module):
//
//     x(w) = integral dt x(t) exp(+i w t)
//     x(t) = integral dw/2pi x(w) exp(-i w t)
//
// On a grid of n samples spanning duration T the integrals become
//
//     x(w_k) = dt * sum_j x(t_j) exp(+i w_k t_j),      w_k = 2 pi m_k / T
//     x(t_j) = (1/T) * sum_k x(w_k) exp(-i w_k t_j)
//
// and every continuum integral dw/2pi is realized as (1/T) * sum_k.
// Spectra are stored with ascending angular frequency, m_k = k - n/2.

#pragma once

#include "qdetlim/errors.hpp"
#include "qdetlim/fft.hpp"
#include "qdetlim/options.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace qdetlim {

using cplx = std::complex<double>;

// --------------------------------------------------------------------------
// Grids and sampled signals
// --------------------------------------------------------------------------

// Uniform sampling t_k = t_i + k dt, k = 0..n-1, dt = (t_f - t_i) / n.
class TimeGrid {
public:
    TimeGrid(double t_i, double t_f, std::size_t n) : t_i_(t_i), t_f_(t_f), n_(n) {
        if (n < 2) throw InvalidArgument("TimeGrid: n must be >= 2");
        if (!std::isfinite(t_i) || !std::isfinite(t_f) || !(t_f > t_i)) {
            throw InvalidArgument("TimeGrid: require finite t_i < t_f");
        }
        dt_ = (t_f - t_i) / static_cast<double>(n);
        if (!(dt_ > 0.0)) throw InvalidArgument("TimeGrid: dt underflows");
    }

    double t_i() const noexcept { return t_i_; }
    double t_f() const noexcept { return t_f_; }
    std::size_t n() const noexcept { return n_; }
    double dt() const noexcept { return dt_; }
    // T = n * dt.
    double duration() const noexcept { return static_cast<double>(n_) * dt_; }
    double time(std::size_t k) const noexcept { return t_i_ + static_cast<double>(k) * dt_; }

    double domega() const noexcept { return 2.0 * std::numbers::pi / duration(); }
    // Signed harmonic number of ascending bin k.
    long harmonic(std::size_t k) const noexcept {
        return static_cast<long>(k) - static_cast<long>(n_ / 2);
    }
    double omega(std::size_t k) const noexcept {
        return static_cast<double>(harmonic(k)) * domega();
    }
    double nyquist() const noexcept { return std::numbers::pi / dt_; }

    std::vector<double> times() const {
        std::vector<double> t(n_);
        for (std::size_t k = 0; k < n_; ++k) t[k] = time(k);
        return t;
    }
    std::vector<double> omegas() const {
        std::vector<double> w(n_);
        for (std::size_t k = 0; k < n_; ++k) w[k] = omega(k);
        return w;
    }

    // Bin index of harmonic m, wrapped onto the grid.
    std::size_t bin_of_harmonic(long m) const noexcept {
        const long n = static_cast<long>(n_);
        long idx = (m + static_cast<long>(n_ / 2)) % n;
        if (idx < 0) idx += n;
        return static_cast<std::size_t>(idx);
    }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t_i_;
    double t_f_;
    std::size_t n_;
    double dt_ = 0.0;
};

template <class T>
struct TimeSeries {
    TimeGrid grid;
    std::vector<T> values;

    TimeSeries(TimeGrid g, std::vector<T> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.n()) {
            throw InvalidArgument("TimeSeries: values.size() != grid.n()");
        }
    }
    explicit TimeSeries(TimeGrid g) : grid(g), values(g.n(), T{}) {}

    std::size_t size() const noexcept { return values.size(); }
};

using RealSeries = TimeSeries<double>;
using ComplexSeries = TimeSeries<cplx>;

// Complex samples on the ascending frequency grid of `grid`.
struct Spectrum {
    TimeGrid grid;
    std::vector<cplx> values;

    Spectrum(TimeGrid g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.n()) {
            throw InvalidArgument("Spectrum: values.size() != grid.n()");
        }
    }
    explicit Spectrum(TimeGrid g) : grid(g), values(g.n(), cplx{}) {}

    std::size_t size() const noexcept { return values.size(); }
    double omega(std::size_t k) const noexcept { return grid.omega(k); }
    std::vector<double> omegas() const { return grid.omegas(); }
    double duration() const noexcept { return grid.duration(); }
};

// Largest |value(-w) - conj(value(w))| relative to max |value|, over the
// pairs present on the grid.
inline double conjugate_asymmetry(const Spectrum& s) {
    const std::size_t n = s.size();
    double peak = 0.0;
    for (const auto& v : s.values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const long m = s.grid.harmonic(k);
        if (-m < -static_cast<long>(n / 2) || -m > static_cast<long>((n - 1) / 2)) continue;
        const std::size_t j = s.grid.bin_of_harmonic(-m);
        worst = std::max(worst, std::abs(s.values[j] - std::conj(s.values[k])));
    }
    return worst / peak;
}

// --------------------------------------------------------------------------
// Transforms
// --------------------------------------------------------------------------

template <class T>
Spectrum forward_transform(const TimeSeries<T>& x) {
    static_assert(std::is_same_v<T, double> || std::is_same_v<T, cplx>);
    const TimeGrid& g = x.grid;
    const std::size_t n = g.n();

    std::vector<cplx> buf(x.values.begin(), x.values.end());
    fft::transform(buf, fft::Sign::positive);

    Spectrum out(g);
    const double dt = g.dt();
    for (std::size_t k = 0; k < n; ++k) {
        const double w = g.omega(k);
        // ascending bin k holds DFT index (m mod n)
        const long m = g.harmonic(k);
        const long nn = static_cast<long>(n);
        const std::size_t dft_idx = static_cast<std::size_t>(((m % nn) + nn) % nn);
        out.values[k] = dt * std::polar(1.0, w * g.t_i()) * buf[dft_idx];
    }
    return out;
}

inline ComplexSeries inverse_transform(const Spectrum& s) {
    const TimeGrid& g = s.grid;
    const std::size_t n = g.n();
    if (s.values.size() != n) throw InvalidArgument("inverse_transform: grid mismatch");

    const long nn = static_cast<long>(n);
    std::vector<cplx> buf(n);
    for (std::size_t k = 0; k < n; ++k) {
        const long m = g.harmonic(k);
        const std::size_t dft_idx = static_cast<std::size_t>(((m % nn) + nn) % nn);
        buf[dft_idx] = s.values[k] * std::polar(1.0, -g.omega(k) * g.t_i());
    }
    fft::transform(buf, fft::Sign::negative);

    ComplexSeries out(g);
    const double inv_T = 1.0 / g.duration();
    for (std::size_t j = 0; j < n; ++j) out.values[j] = buf[j] * inv_T;
    return out;
}

inline RealSeries real_part(const ComplexSeries& z) {
    RealSeries out(z.grid);
    for (std::size_t j = 0; j < z.size(); ++j) out.values[j] = z.values[j].real();
    return out;
}

// --------------------------------------------------------------------------
// Frequency quadrature
// --------------------------------------------------------------------------

// (1/T) * sum_k f(w_k): the grid realization of integral dw/2pi f(w).
//
// Raises a bandwidth warning (BandwidthError under strict mode) when the
// integrand has not decayed across the outermost tail_fraction of bins.
inline double freq_integral(std::span<const double> f, double duration,
                            const NumericOptions& opts = {}, Diagnostics* diag = nullptr) {
    if (!(duration > 0.0)) throw InvalidArgument("freq_integral: duration must be > 0");
    double sum = 0.0;
    double peak = 0.0;
    for (double v : f) {
        if (!std::isfinite(v)) throw NumericalError("freq_integral: non-finite sample");
        sum += v;
        peak = std::max(peak, std::abs(v));
    }
    const std::size_t n = f.size();
    if (n > 0 && peak > 0.0) {
        const double per_side = opts.tail_fraction * static_cast<double>(n) / 2.0;
        const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(per_side)));
        double tail = 0.0;
        for (std::size_t k = 0; k < std::min(m, n); ++k) {
            tail = std::max(tail, std::abs(f[k]));
            tail = std::max(tail, std::abs(f[n - 1 - k]));
        }
        if (tail > opts.tail_ratio * peak) {
            std::ostringstream msg;
            msg << "bandwidth: integrand tail/peak = " << tail / peak
                << " exceeds " << opts.tail_ratio << "; widen the frequency grid";
            if (opts.strict) throw BandwidthError(msg.str());
            if (diag) diag->warn(msg.str());
        }
    }
    return sum / duration;
}

inline double freq_integral(std::span<const double> f, const TimeGrid& grid,
                            const NumericOptions& opts = {}, Diagnostics* diag = nullptr) {
    if (f.size() != grid.n()) throw InvalidArgument("freq_integral: sample count != grid.n()");
    return freq_integral(f, grid.duration(), opts, diag);
}

// Samples fn(w_k) on the ascending frequency grid.
template <class Fn>
std::vector<double> sample_omegas(const TimeGrid& grid, Fn&& fn) {
    std::vector<double> out(grid.n());
    for (std::size_t k = 0; k < grid.n(); ++k) out[k] = fn(grid.omega(k));
    return out;
}

// --------------------------------------------------------------------------
// Circulant matrices
// --------------------------------------------------------------------------

// Eigenvalues of the circulant matrix with first row `row`, in DFT order:
// lambda_j = sum_k row[k] exp(+2 pi i j k / n).
inline std::vector<cplx> circulant_eigenvalues(std::span<const double> row) {
    if (row.empty()) throw InvalidArgument("circulant_eigenvalues: empty row");
    std::vector<cplx> buf(row.begin(), row.end());
    fft::transform(buf, fft::Sign::positive);
    return buf;
}

// Eigenvalues of a symmetric circulant (row[k] == row[n-k]); these are real.
// Throws NumericalError when the row or its spectrum is asymmetric beyond
// opts.symmetry_tol (relative).
inline std::vector<double> symmetric_circulant_eigenvalues(std::span<const double> row,
                                                           const NumericOptions& opts = {}) {
    const std::size_t n = row.size();
    if (n == 0) throw InvalidArgument("symmetric_circulant_eigenvalues: empty row");
    double scale = 0.0;
    for (double v : row) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 1; k < n; ++k) {
        if (std::abs(row[k] - row[n - k]) > opts.symmetry_tol * scale) {
            throw NumericalError("symmetric_circulant_eigenvalues: row is not symmetric");
        }
    }
    const auto eig = circulant_eigenvalues(row);
    double eig_scale = 0.0;
    for (const auto& e : eig) eig_scale = std::max(eig_scale, std::abs(e));
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(eig[k].imag()) > opts.symmetry_tol * std::max(eig_scale, 1e-300)) {
            throw NumericalError("symmetric_circulant_eigenvalues: complex eigenvalue");
        }
        out[k] = eig[k].real();
    }
    return out;
}

// --------------------------------------------------------------------------
// Matrix exponential
// --------------------------------------------------------------------------

// exp(m * t) by scaling and squaring with a Pade approximant.
inline Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m, double t) {
    if (m.rows() != m.cols()) throw InvalidArgument("matrix_exponential: matrix not square");
    if (!m.allFinite() || !std::isfinite(t)) {
        throw InvalidArgument("matrix_exponential: non-finite input");
    }
    if (t == 0.0 || m.isZero(0.0)) {
        return Eigen::MatrixXd::Identity(m.rows(), m.cols());
    }
    const Eigen::MatrixXd scaled = m * t;
    return scaled.exp();
}

}  // namespace qdetlim
