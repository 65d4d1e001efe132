// Self-contained complex FFT: iterative radix-2 for power-of-two lengths,
// Bluestein's chirp-z otherwise, so any vector length gets the O(n log n)
// path.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace ekge {

using Complex = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative Cooley-Tukey; n must be a power of two.
inline void fft_pow2(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const Complex wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

// Bluestein: X_k = conj(chirp_k) * (u (*) v)_k with u_j = x_j*conj(chirp_j),
// chirp_j = exp(i*pi*j^2/n), evaluated via a power-of-two circular
// convolution of length >= 2n-1.
inline void fft_bluestein(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<Complex> chirp(n);
    for (std::size_t j = 0; j < n; ++j) {
        // j^2 mod 2n keeps the angle argument small for large n
        const std::size_t j2 = (j * j) % (2 * n);
        const double ang = sign * std::numbers::pi * static_cast<double>(j2) / static_cast<double>(n);
        chirp[j] = Complex(std::cos(ang), std::sin(ang));
    }
    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<Complex> u(m, Complex(0, 0)), v(m, Complex(0, 0));
    for (std::size_t j = 0; j < n; ++j) u[j] = a[j] * chirp[j];
    for (std::size_t j = 0; j < n; ++j) {
        v[j] = std::conj(chirp[j]);
        if (j != 0) v[m - j] = std::conj(chirp[j]);
    }
    fft_pow2(u, false);
    fft_pow2(v, false);
    for (std::size_t j = 0; j < m; ++j) u[j] *= v[j];
    fft_pow2(u, true);
    for (std::size_t j = 0; j < n; ++j) a[j] = u[j] * chirp[j];
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

}  // namespace detail

// Forward (inverse=false) or inverse (inverse=true) DFT, any length >= 1.
// Forward convention: X_k = sum_j x_j exp(-2*pi*i*j*k/n); inverse divides
// by n.
inline void fft(std::vector<Complex>& a, bool inverse) {
    if (a.size() <= 1) return;
    if (detail::is_pow2(a.size())) detail::fft_pow2(a, inverse);
    else detail::fft_bluestein(a, inverse);
}

inline std::vector<Complex> dft(const std::vector<double>& x) {
    std::vector<Complex> a(x.begin(), x.end());
    fft(a, false);
    return a;
}

}  // namespace ekge
