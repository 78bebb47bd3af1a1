// fft.hpp — in-place complex DFT for any length.
//
// Power-of-two lengths use an iterative radix-2 kernel; every other length
// goes through Bluestein's chirp-z reduction onto a power-of-two kernel.

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace qdetlim::fft {

using cplx = std::complex<double>;

// Sign of the exponent: X_k = sum_j x_j exp(sign * 2 pi i j k / n).
enum class Sign : int { negative = -1, positive = +1 };

namespace detail {

inline void radix2(std::span<cplx> a, Sign sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double s = static_cast<double>(static_cast<int>(sign));
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        // Twiddles evaluated directly rather than by recurrence; keeps the
        // round-off at a few ulp for long transforms.
        std::vector<cplx> w(half);
        for (std::size_t k = 0; k < half; ++k) {
            const double ang = s * 2.0 * std::numbers::pi * static_cast<double>(k) /
                               static_cast<double>(len);
            w[k] = {std::cos(ang), std::sin(ang)};
        }
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + half] * w[k];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

inline void bluestein(std::span<cplx> a, Sign sign) {
    const std::size_t n = a.size();
    const std::size_t m = std::bit_ceil(2 * n - 1);
    const double s = static_cast<double>(static_cast<int>(sign));

    // chirp_k = exp(sign * i pi k^2 / n); k^2 reduced mod 2n to keep the
    // argument small.
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t k2 = (k * k) % (2 * n);
        const double ang = s * std::numbers::pi * static_cast<double>(k2) /
                           static_cast<double>(n);
        chirp[k] = {std::cos(ang), std::sin(ang)};
    }

    std::vector<cplx> u(m, cplx{}), v(m, cplx{});
    for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
    v[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
        v[k] = std::conj(chirp[k]);
        v[m - k] = std::conj(chirp[k]);
    }
    radix2(u, Sign::negative);
    radix2(v, Sign::negative);
    for (std::size_t k = 0; k < m; ++k) u[k] *= v[k];
    radix2(u, Sign::positive);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = u[k] * inv_m * chirp[k];
}

}  // namespace detail

// Unnormalized DFT in place.
inline void transform(std::span<cplx> a, Sign sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (std::has_single_bit(n)) {
        detail::radix2(a, sign);
    } else {
        detail::bluestein(a, sign);
    }
}

inline std::vector<cplx> transformed(std::vector<cplx> a, Sign sign) {
    transform(a, sign);
    return a;
}

}  // namespace qdetlim::fft
