#pragma once

// Complex FFT for arbitrary lengths: iterative radix-2 for powers of two,
// Bluestein's chirp-z algorithm otherwise. Bonn records are 4097 samples
// (= 17*241) and mirror-extend to 8194, so power-of-two-only transforms
// are not an option here.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vmdeeg::detail {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative Cooley-Tukey, n a power of two. inverse=true computes
// the unnormalized inverse (caller divides by n).
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? two_pi : -two_pi) / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Bluestein chirp-z: expresses a length-n DFT as a convolution, evaluated
// with power-of-two FFTs. The chirp exponent is reduced mod 2n before the
// trig call so large n does not lose precision.
inline void fft_bluestein(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    constexpr double pi = 3.141592653589793238462643383279;

    std::vector<cplx> chirp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t sq = (i * i) % (2 * n);
        const double ang = pi * static_cast<double>(sq) / static_cast<double>(n);
        chirp[i] = inverse ? cplx(std::cos(ang), std::sin(ang))
                           : cplx(std::cos(ang), -std::sin(ang));
    }

    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    std::vector<cplx> x(m, cplx(0.0, 0.0));
    std::vector<cplx> y(m, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i] * chirp[i];
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = std::conj(chirp[i]);
        if (i != 0) y[m - i] = std::conj(chirp[i]);
    }

    fft_pow2(x, false);
    fft_pow2(y, false);
    for (std::size_t i = 0; i < m; ++i) x[i] *= y[i];
    fft_pow2(x, true);
    const double inv_m = 1.0 / static_cast<double>(m);

    for (std::size_t i = 0; i < n; ++i) a[i] = x[i] * inv_m * chirp[i];
}

// Forward: X[k] = sum_n x[n] e^{-j2pikn/N}. Inverse divides by N.
inline void fft_inplace(std::vector<cplx>& a, bool inverse) {
    if (a.empty()) throw std::invalid_argument("fft: empty input");
    if (is_pow2(a.size())) {
        fft_pow2(a, inverse);
    } else {
        fft_bluestein(a, inverse);
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(a.size());
        for (auto& v : a) v *= inv_n;
    }
}

} // namespace vmdeeg::detail
