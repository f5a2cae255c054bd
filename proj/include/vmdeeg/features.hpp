#pragma once

// Per-mode scalar features: second/fourth-order difference-plot ellipse
// areas, quadratic Renyi entropy of the PSD, and average amplitude.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmdeeg/spectral.hpp"
#include "vmdeeg/vmd.hpp"

namespace vmdeeg::features {

enum class FeatureKind { SodpArea, FodpArea, RenyiEntropy, AvgAmplitude };

inline std::string to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::SodpArea: return "sodp-area";
        case FeatureKind::FodpArea: return "fodp-area";
        case FeatureKind::RenyiEntropy: return "renyi-entropy";
        case FeatureKind::AvgAmplitude: return "avg-amplitude";
    }
    throw std::invalid_argument("unknown feature kind");
}

inline FeatureKind feature_kind_from_string(const std::string& name) {
    if (name == "sodp-area" || name == "sodp") return FeatureKind::SodpArea;
    if (name == "fodp-area" || name == "fodp") return FeatureKind::FodpArea;
    if (name == "renyi-entropy" || name == "renyi") return FeatureKind::RenyiEntropy;
    if (name == "avg-amplitude" || name == "amp") return FeatureKind::AvgAmplitude;
    throw std::invalid_argument("unknown feature kind: " + name);
}

// The printed D formula mixes squared and fourth-power terms and can go
// negative on real data; Standard squares the first term, which makes every
// radicand provably nonnegative. PaperLiteral keeps the printed form behind
// a flag for auditability.
enum class EllipseVariant { Standard, PaperLiteral };

struct PointSeries {
    std::vector<double> xs;
    std::vector<double> ys;
    int lag = 1; // 1 = SODP, 2 = FODP
};

struct EllipseParams {
    double s_x = 0.0;  // RMS of xs
    double s_y = 0.0;  // RMS of ys
    double s_xy = 0.0; // mean cross product
    double d = 0.0;
    double a = 0.0;    // semi-axes, a >= b
    double b = 0.0;
    double area = 0.0; // pi*a*b
    EllipseVariant variant = EllipseVariant::Standard;
};

struct FeatureVector {
    std::vector<double> values; // one per mode, ascending-frequency order
    FeatureKind kind = FeatureKind::AvgAmplitude;
    std::string label;
    std::vector<bool> degenerate; // per mode; entropy of a zero-power mode
};

// X(n) = x(n+lag) - x(n), Y(n) = x(n+2*lag) - x(n+lag), n = 0..N-1-2*lag.
inline PointSeries difference_points(const std::vector<double>& x, int lag) {
    if (lag != 1 && lag != 2) throw std::invalid_argument("difference_points: lag must be 1 or 2");
    const std::size_t l = static_cast<std::size_t>(lag);
    if (x.size() <= 2 * l)
        throw std::invalid_argument("difference_points: signal too short for lag "
                                    + std::to_string(lag));
    const std::size_t count = x.size() - 2 * l;
    PointSeries pts;
    pts.lag = lag;
    pts.xs.resize(count);
    pts.ys.resize(count);
    for (std::size_t n = 0; n < count; ++n) {
        pts.xs[n] = x[n + l] - x[n];
        pts.ys[n] = x[n + 2 * l] - x[n + l];
    }
    return pts;
}

inline EllipseParams ellipse_params(const PointSeries& points,
                                    EllipseVariant variant = EllipseVariant::Standard) {
    const std::size_t n = points.xs.size();
    if (n == 0 || points.ys.size() != n)
        throw std::invalid_argument("ellipse_params: empty or mismatched point series");

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += points.xs[i] * points.xs[i];
        syy += points.ys[i] * points.ys[i];
        sxy += points.xs[i] * points.ys[i];
    }
    sxx /= static_cast<double>(n);
    syy /= static_cast<double>(n);
    sxy /= static_cast<double>(n);

    EllipseParams p;
    p.variant = variant;
    p.s_x = std::sqrt(sxx);
    p.s_y = std::sqrt(syy);
    p.s_xy = sxy;

    const double cross = sxx * syy - sxy * sxy; // >= 0 by Cauchy-Schwarz
    double d_radicand;
    if (variant == EllipseVariant::Standard) {
        d_radicand = (sxx + syy) * (sxx + syy) - 4.0 * cross;
        if (d_radicand < 0.0) d_radicand = 0.0; // round-off only; identity keeps it >= 0
    } else {
        d_radicand = (sxx + syy) - 4.0 * cross;
        if (d_radicand < 0.0)
            throw std::runtime_error(
                "ellipse_params: paper-literal D radicand is negative ("
                + std::to_string(d_radicand) + "); use the standard variant");
    }
    p.d = std::sqrt(d_radicand);

    const double scale = 1.7321; // sqrt(3): 2*3 ~ chi^2_2(0.95) = 5.99
    double b_radicand = sxx + syy - p.d;
    if (b_radicand < 0.0) {
        if (variant == EllipseVariant::PaperLiteral)
            throw std::runtime_error(
                "ellipse_params: paper-literal b radicand is negative ("
                + std::to_string(b_radicand) + "); use the standard variant");
        b_radicand = 0.0;
    }
    p.a = scale * std::sqrt(sxx + syy + p.d);
    p.b = scale * std::sqrt(b_radicand);
    p.area = 3.141592653589793238462643383279 * p.a * p.b;
    return p;
}

inline double ellipse_area(const std::vector<double>& x, int lag,
                           EllipseVariant variant = EllipseVariant::Standard) {
    return ellipse_params(difference_points(x, lag), variant).area;
}

// RenEn(alpha) = 1/(1-alpha) * ln(sum_f p_f^alpha) with p_f = P_f / sum P_f.
inline double renyi_entropy(const spectral::Psd& psd, double alpha = 2.0) {
    if (!(psd.total_power > 0.0))
        throw std::invalid_argument("renyi_entropy: zero total power, distribution undefined");
    if (!(alpha > 0.0) || alpha == 1.0)
        throw std::invalid_argument("renyi_entropy: alpha must be positive and != 1");
    double acc = 0.0;
    for (double p : psd.powers) {
        if (p > 0.0) acc += std::pow(p / psd.total_power, alpha);
    }
    return std::log(acc) / (1.0 - alpha);
}

inline double average_amplitude(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("average_amplitude: empty signal");
    double acc = 0.0;
    for (double v : x) acc += std::abs(v);
    return acc / static_cast<double>(x.size());
}

// Applies one scalar feature to every mode, in ascending-frequency order.
// A zero-power mode under entropy maps to the maximum-entropy value ln(M)
// with its degenerate flag set, so batch extraction never aborts.
inline FeatureVector extract(const vmd::ModeSet& set, FeatureKind kind,
                             EllipseVariant variant = EllipseVariant::Standard) {
    if (set.modes.empty()) throw std::invalid_argument("extract: empty mode set");
    FeatureVector fv;
    fv.kind = kind;
    fv.label = set.modes.front().label;
    fv.values.reserve(set.modes.size());
    fv.degenerate.assign(set.modes.size(), false);

    for (std::size_t i = 0; i < set.modes.size(); ++i) {
        const std::vector<double>& x = set.modes[i].samples;
        switch (kind) {
            case FeatureKind::SodpArea:
                fv.values.push_back(ellipse_area(x, 1, variant));
                break;
            case FeatureKind::FodpArea:
                fv.values.push_back(ellipse_area(x, 2, variant));
                break;
            case FeatureKind::AvgAmplitude:
                fv.values.push_back(average_amplitude(x));
                break;
            case FeatureKind::RenyiEntropy: {
                const spectral::Psd psd = spectral::periodogram(x, set.modes[i].sample_rate_hz);
                if (psd.total_power > 0.0) {
                    fv.values.push_back(renyi_entropy(psd, 2.0));
                } else {
                    fv.values.push_back(std::log(static_cast<double>(psd.powers.size())));
                    fv.degenerate[i] = true;
                }
                break;
            }
        }
    }
    return fv;
}

} // namespace vmdeeg::features
