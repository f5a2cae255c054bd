#pragma once

// Variational mode decomposition: splits a signal into K band-limited modes
// with center frequencies by ADMM iteration on the positive half spectrum.
// Per iteration: a Gauss-Seidel sweep of Wiener-filter mode updates, then
// the power-centroid update of each center frequency, then the dual ascent
// step on the reconstruction multiplier.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmdeeg/detail/rng.hpp"
#include "vmdeeg/signal.hpp"
#include "vmdeeg/spectral.hpp"

namespace vmdeeg::vmd {

using cplx = std::complex<double>;
using HalfSpectrum = std::vector<cplx>; // bins DC..Nyquist, omega = bin * freq_step

enum class OmegaInit { Uniform, Zero, SeededRandom };

struct Config {
    int k = 5;              // mode count
    double alpha = 2000.0;  // bandwidth penalty
    double tau = 0.0;       // dual ascent step; 0 disables the multiplier
    double tol = 1e-6;      // relative convergence tolerance
    int max_iters = 500;
    OmegaInit init = OmegaInit::Uniform;
    std::uint64_t init_seed = 0; // SeededRandom only
    bool mirror = true;
};

inline void validate(const Config& cfg) {
    if (cfg.k < 1) throw std::invalid_argument("vmd: k must be >= 1");
    if (!(cfg.alpha > 0.0)) throw std::invalid_argument("vmd: alpha must be > 0");
    if (!(cfg.tau >= 0.0)) throw std::invalid_argument("vmd: tau must be >= 0");
    if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw std::invalid_argument("vmd: tol must be in (0, 1)");
    if (cfg.max_iters < 1) throw std::invalid_argument("vmd: max_iters must be >= 1");
}

struct ModeSet {
    std::vector<Signal> modes;        // original length, ascending center frequency
    std::vector<double> center_freqs; // normalized, in [0, 0.5], sorted ascending
    int iterations_used = 0;
    double final_residual = 0.0;      // last value of the stopping metric
    bool degenerate_input = false;    // all-zero input: modes zero, omegas at init
};

// Wiener-filter mode update (one mode, all bins):
//   u_k(w) = (f(w) - sum_{i!=k} u_i(w) + lambda(w)/2) / (1 + 2*alpha*(w - w_k)^2)
inline HalfSpectrum update_mode_spectrum(const HalfSpectrum& f_hat,
                                         const HalfSpectrum& other_modes_sum,
                                         const HalfSpectrum& lambda_hat,
                                         double omega_k,
                                         double alpha,
                                         double freq_step) {
    if (f_hat.size() != other_modes_sum.size() || f_hat.size() != lambda_hat.size())
        throw std::invalid_argument("update_mode_spectrum: spectrum length mismatch");
    HalfSpectrum u(f_hat.size());
    for (std::size_t bin = 0; bin < f_hat.size(); ++bin) {
        const double w = static_cast<double>(bin) * freq_step;
        const double d = w - omega_k;
        u[bin] = (f_hat[bin] - other_modes_sum[bin] + 0.5 * lambda_hat[bin])
                 / (1.0 + 2.0 * alpha * d * d);
    }
    return u;
}

// Power centroid of the half spectrum:
//   w_k = sum_bins w*|u(w)|^2 / sum_bins |u(w)|^2
// Returns nullopt for an all-zero spectrum (caller keeps the previous w_k).
inline std::optional<double> update_center_frequency(const HalfSpectrum& u_hat,
                                                     double freq_step) {
    double num = 0.0, den = 0.0;
    for (std::size_t bin = 0; bin < u_hat.size(); ++bin) {
        const double p = std::norm(u_hat[bin]);
        num += static_cast<double>(bin) * freq_step * p;
        den += p;
    }
    if (den == 0.0) return std::nullopt;
    return num / den;
}

// Dual ascent: lambda <- lambda + tau * (f - sum_k u_k).
inline HalfSpectrum update_multiplier(const HalfSpectrum& lambda_hat,
                                      const HalfSpectrum& f_hat,
                                      const HalfSpectrum& modes_sum,
                                      double tau) {
    if (lambda_hat.size() != f_hat.size() || lambda_hat.size() != modes_sum.size())
        throw std::invalid_argument("update_multiplier: spectrum length mismatch");
    HalfSpectrum out(lambda_hat.size());
    for (std::size_t bin = 0; bin < lambda_hat.size(); ++bin) {
        out[bin] = lambda_hat[bin] + tau * (f_hat[bin] - modes_sum[bin]);
    }
    return out;
}

namespace detail {

inline std::vector<double> initial_omegas(const Config& cfg) {
    std::vector<double> w(static_cast<std::size_t>(cfg.k), 0.0);
    switch (cfg.init) {
        case OmegaInit::Zero:
            break;
        case OmegaInit::Uniform:
            // midpoints of k equal bands of (0, 0.5)
            for (int i = 0; i < cfg.k; ++i)
                w[static_cast<std::size_t>(i)] = 0.5 * (static_cast<double>(i) + 0.5)
                                                 / static_cast<double>(cfg.k);
            break;
        case OmegaInit::SeededRandom: {
            vmdeeg::detail::Rng rng(cfg.init_seed);
            for (int i = 0; i < cfg.k; ++i)
                w[static_cast<std::size_t>(i)] = vmdeeg::detail::uniform(rng, 0.0, 0.5);
            break;
        }
    }
    return w;
}

} // namespace detail

// Decompose with explicit initial center frequencies (cfg.init/init_seed are
// ignored). The sorted result is insensitive to the order of init_omegas.
inline ModeSet decompose(const Signal& signal, const Config& cfg,
                         const std::vector<double>& init_omegas) {
    validate(cfg);
    const std::size_t n = signal.samples.size();
    const std::size_t k = static_cast<std::size_t>(cfg.k);
    if (n < 2 * k)
        throw std::invalid_argument("vmd: signal length " + std::to_string(n)
                                    + " < 2*k = " + std::to_string(2 * k));
    if (init_omegas.size() != k)
        throw std::invalid_argument("vmd: init_omegas must have k entries");

    const std::vector<double> work =
        cfg.mirror ? spectral::mirror_extend(signal.samples) : signal.samples;
    const std::size_t m = work.size();
    const std::size_t half = m / 2 + 1;
    const double freq_step = 1.0 / static_cast<double>(m);

    const spectral::Spectrum full = spectral::dft(work);
    HalfSpectrum f_hat(full.bins.begin(), full.bins.begin() + static_cast<std::ptrdiff_t>(half));

    std::vector<HalfSpectrum> u_hat(k, HalfSpectrum(half, cplx(0.0, 0.0)));
    HalfSpectrum sum_all(half, cplx(0.0, 0.0));
    HalfSpectrum lambda_hat(half, cplx(0.0, 0.0));
    std::vector<double> omega = init_omegas;

    const bool zero_input =
        std::all_of(work.begin(), work.end(), [](double v) { return v == 0.0; });

    int iterations = 0;
    double diff = std::numeric_limits<double>::infinity();
    HalfSpectrum others(half);

    while (iterations < cfg.max_iters) {
        ++iterations;
        diff = 0.0;

        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t bin = 0; bin < half; ++bin)
                others[bin] = sum_all[bin] - u_hat[j][bin];
            HalfSpectrum next =
                update_mode_spectrum(f_hat, others, lambda_hat, omega[j], cfg.alpha, freq_step);

            double num = 0.0, den = 0.0;
            for (std::size_t bin = 0; bin < half; ++bin) {
                num += std::norm(next[bin] - u_hat[j][bin]);
                den += std::norm(u_hat[j][bin]);
                sum_all[bin] += next[bin] - u_hat[j][bin];
            }
            if (!std::isfinite(num))
                throw std::runtime_error("vmd: non-finite mode spectrum at iteration "
                                         + std::to_string(iterations));
            diff += (den == 0.0) ? (num == 0.0 ? 0.0 : 1.0) : num / den;
            u_hat[j] = std::move(next);
        }

        for (std::size_t j = 0; j < k; ++j) {
            const auto w = update_center_frequency(u_hat[j], freq_step);
            if (w) omega[j] = *w; // degenerate mode keeps its previous omega
            if (!std::isfinite(omega[j]))
                throw std::runtime_error("vmd: non-finite center frequency at iteration "
                                         + std::to_string(iterations));
        }

        if (cfg.tau > 0.0) lambda_hat = update_multiplier(lambda_hat, f_hat, sum_all, cfg.tau);

        if (diff < cfg.tol) break;
    }

    // rebuild: Hermitian completion of each half spectrum, inverse, crop
    ModeSet result;
    result.iterations_used = iterations;
    result.final_residual = diff;
    result.degenerate_input = zero_input;

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&omega](std::size_t a, std::size_t b) { return omega[a] < omega[b]; });

    result.modes.reserve(k);
    result.center_freqs.reserve(k);
    for (std::size_t idx : order) {
        spectral::Spectrum s;
        s.bins.assign(m, cplx(0.0, 0.0));
        s.bin_resolution_hz = signal.sample_rate_hz / static_cast<double>(m);
        s.bins[0] = cplx(u_hat[idx][0].real(), 0.0);
        for (std::size_t bin = 1; bin < half; ++bin) {
            if (m % 2 == 0 && bin == m / 2) {
                s.bins[bin] = cplx(u_hat[idx][bin].real(), 0.0);
            } else {
                s.bins[bin] = u_hat[idx][bin];
                s.bins[m - bin] = std::conj(u_hat[idx][bin]);
            }
        }
        std::vector<double> mode_time = spectral::idft_real(s);
        if (cfg.mirror) mode_time = spectral::mirror_crop(mode_time, n);

        Signal mode;
        mode.samples = std::move(mode_time);
        mode.sample_rate_hz = signal.sample_rate_hz;
        mode.label = signal.label;
        mode.source_id = signal.source_id;
        result.modes.push_back(std::move(mode));
        result.center_freqs.push_back(std::clamp(omega[idx], 0.0, 0.5));
    }
    return result;
}

inline ModeSet decompose(const Signal& signal, const Config& cfg) {
    validate(cfg);
    return decompose(signal, cfg, detail::initial_omegas(cfg));
}

// One-sided periodogram per mode, in the mode's own Hz scale.
inline std::vector<spectral::Psd> mode_spectra(const ModeSet& set) {
    if (set.modes.empty()) throw std::invalid_argument("mode_spectra: empty mode set");
    std::vector<spectral::Psd> out;
    out.reserve(set.modes.size());
    for (const Signal& mode : set.modes)
        out.push_back(spectral::periodogram(mode.samples, mode.sample_rate_hz));
    return out;
}

} // namespace vmdeeg::vmd
