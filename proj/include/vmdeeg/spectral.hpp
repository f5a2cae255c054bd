#pragma once

// Discrete Fourier primitives shared by the VMD solver and the entropy
// feature: forward/inverse transform, analytic signal, one-sided
// periodogram, and mirror boundary extension.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmdeeg/detail/fft.hpp"

namespace vmdeeg::spectral {

using cplx = std::complex<double>;

struct Spectrum {
    std::vector<cplx> bins;        // full two-sided spectrum, length N
    double bin_resolution_hz = 0.0; // sample_rate / N
};

// One-sided power spectrum, DC through Nyquist inclusive.
struct Psd {
    std::vector<double> powers;
    double total_power = 0.0;
    double bin_spacing_hz = 0.0;
};

inline Spectrum dft(const std::vector<double>& samples, double sample_rate_hz = 1.0) {
    if (samples.empty()) throw std::invalid_argument("dft: empty signal");
    Spectrum s;
    s.bins.assign(samples.begin(), samples.end());
    detail::fft_inplace(s.bins, false);
    s.bin_resolution_hz = sample_rate_hz / static_cast<double>(samples.size());
    return s;
}

inline std::vector<cplx> idft(const Spectrum& spectrum) {
    if (spectrum.bins.empty()) throw std::invalid_argument("idft: empty spectrum");
    std::vector<cplx> out = spectrum.bins;
    detail::fft_inplace(out, true);
    return out;
}

// Inverse transform of a (nominally Hermitian-symmetric) spectrum back to a
// real signal. The imaginary residue is discarded after checking it stays
// below 1e-9 relative to the signal norm.
inline std::vector<double> idft_real(const Spectrum& spectrum) {
    const std::vector<cplx> z = idft(spectrum);
    double real_sq = 0.0, imag_sq = 0.0;
    for (const cplx& v : z) {
        real_sq += v.real() * v.real();
        imag_sq += v.imag() * v.imag();
    }
    if (imag_sq > 1e-18 * real_sq && imag_sq > 1e-24) {
        throw std::runtime_error(
            "idft_real: spectrum is not Hermitian-symmetric (imaginary residue "
            + std::to_string(std::sqrt(imag_sq / (real_sq > 0.0 ? real_sq : 1.0)))
            + " relative)");
    }
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
    return out;
}

// Analytic signal via spectrum-domain construction: keep DC (and Nyquist for
// even N), double the positive-frequency bins, zero the rest, inverse.
// real(analytic_signal(x)) == x up to transform round-off.
inline std::vector<cplx> analytic_signal(const std::vector<double>& samples) {
    if (samples.empty()) throw std::invalid_argument("analytic_signal: empty signal");
    const std::size_t n = samples.size();
    Spectrum s = dft(samples);
    const std::size_t half = n / 2;
    const bool even = (n % 2 == 0);
    for (std::size_t k = 1; k < n; ++k) {
        const bool positive = even ? (k < half) : (k <= half);
        if (positive) {
            s.bins[k] *= 2.0;
        } else if (!(even && k == half)) { // even-N Nyquist bin is kept as-is
            s.bins[k] = cplx(0.0, 0.0);
        }
    }
    return idft(s);
}

// powers[k] = |X[k]|^2 / N for k = 0..floor(N/2).
inline Psd periodogram(const std::vector<double>& samples, double sample_rate_hz = 1.0) {
    if (samples.empty()) throw std::invalid_argument("periodogram: empty signal");
    const std::size_t n = samples.size();
    const Spectrum s = dft(samples, sample_rate_hz);
    Psd psd;
    psd.powers.resize(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        psd.powers[k] = std::norm(s.bins[k]) / static_cast<double>(n);
        psd.total_power += psd.powers[k];
    }
    psd.bin_spacing_hz = s.bin_resolution_hz;
    return psd;
}

// Half-reflection boundary extension: floor(N/2) reversed leading samples,
// the signal, then the remaining reversed trailing samples, total length 2N.
// [1,2,3,4] -> [2,1,1,2,3,4,4,3].
inline std::vector<double> mirror_extend(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("mirror_extend: need at least 2 samples");
    const std::size_t pre = n / 2;
    const std::size_t post = n - pre;
    std::vector<double> out;
    out.reserve(2 * n);
    for (std::size_t i = 0; i < pre; ++i) out.push_back(samples[pre - 1 - i]);
    out.insert(out.end(), samples.begin(), samples.end());
    for (std::size_t i = 0; i < post; ++i) out.push_back(samples[n - 1 - i]);
    return out;
}

// Exact inverse of mirror_extend.
inline std::vector<double> mirror_crop(const std::vector<double>& extended,
                                       std::size_t original_length) {
    if (extended.size() != 2 * original_length)
        throw std::invalid_argument("mirror_crop: extended length must be twice the original");
    const std::size_t pre = original_length / 2;
    return std::vector<double>(extended.begin() + static_cast<std::ptrdiff_t>(pre),
                               extended.begin() + static_cast<std::ptrdiff_t>(pre + original_length));
}

} // namespace vmdeeg::spectral
