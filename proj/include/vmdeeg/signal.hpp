#pragma once

// Bonn-format EEG loading, synthetic test-signal generation, and
// train/test splitting. Bonn files are plain text, one sample per line;
// the parser also accepts decimals so synthetic fixtures can reuse the
// format. Collections keep lexicographic file order so "first 80" means
// the same thing on every machine.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vmdeeg/detail/rng.hpp"

namespace vmdeeg {

inline constexpr double kBonnSampleRateHz = 173.61;
inline constexpr std::size_t kMinSignalLength = 8; // FODP consumes 4 lookahead samples

struct Signal {
    std::vector<double> samples;
    double sample_rate_hz = 1.0;
    std::string label;     // optional class tag
    std::string source_id;
};

struct SignalCollection {
    std::string set_id; // Z, O, N, F, S (or a synthetic tag)
    std::vector<Signal> signals;
};

enum class SplitMode { FixedPrefix, Random };

struct SplitSpec {
    SplitMode mode = SplitMode::FixedPrefix;
    std::size_t train_count = 80;
    std::uint64_t seed = 0; // random mode only
};

namespace io {

inline Signal load_signal(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_signal: cannot open " + path.string());

    Signal sig;
    sig.sample_rate_hz = kBonnSampleRateHz;
    sig.source_id = path.stem().string();

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // tolerate CR-LF and surrounding blanks
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(b, e - b + 1);

        std::size_t consumed = 0;
        double value = 0.0;
        try {
            value = std::stod(tok, &consumed);
        } catch (const std::exception&) {
            consumed = 0;
        }
        if (consumed != tok.size() || !std::isfinite(value)) {
            throw std::runtime_error("load_signal: " + path.string() + ":"
                                     + std::to_string(line_no) + ": not a finite number: '"
                                     + tok + "'");
        }
        sig.samples.push_back(value);
    }
    if (sig.samples.size() < kMinSignalLength) {
        throw std::runtime_error("load_signal: " + path.string() + ": only "
                                 + std::to_string(sig.samples.size())
                                 + " samples, need at least "
                                 + std::to_string(kMinSignalLength));
    }
    return sig;
}

// Loads every .txt/.TXT file in the set directory, in lexicographic name
// order. A set that is not exactly 100 signals warns rather than fails so
// partial datasets stay usable.
inline SignalCollection load_bonn_set(const std::filesystem::path& dir,
                                      const std::string& set_id,
                                      std::vector<std::string>* warnings = nullptr) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("load_bonn_set: not a directory: " + dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".txt" || ext == ".TXT") files.push_back(entry.path());
    }
    if (files.empty())
        throw std::runtime_error("load_bonn_set: no .txt files in " + dir.string());
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

    SignalCollection coll;
    coll.set_id = set_id;
    coll.signals.reserve(files.size());
    for (const auto& f : files) {
        Signal s = load_signal(f);
        s.label = set_id;
        coll.signals.push_back(std::move(s));
    }

    if (coll.signals.size() != 100) {
        const std::string msg = "set " + set_id + ": expected 100 signals, found "
                                + std::to_string(coll.signals.size());
        if (warnings) warnings->push_back(msg);
        else std::cerr << "warning: " << msg << "\n";
    }
    return coll;
}

// samples[t] = sum_i amps[i]*cos(2*pi*freqs[i]*t) + N(0, noise_std^2) from
// the seeded generator. Frequencies are normalized (cycles/sample) and must
// lie in (0, 0.5).
inline Signal synth_multitone(const std::vector<double>& freqs,
                              const std::vector<double>& amps,
                              std::size_t n,
                              double noise_std = 0.0,
                              std::uint64_t seed = 0) {
    if (freqs.size() != amps.size())
        throw std::invalid_argument("synth_multitone: freqs/amps length mismatch");
    for (double f : freqs) {
        if (!(f > 0.0 && f < 0.5))
            throw std::invalid_argument("synth_multitone: frequency " + std::to_string(f)
                                        + " outside (0, 0.5)");
    }
    if (n < kMinSignalLength)
        throw std::invalid_argument("synth_multitone: n must be at least "
                                    + std::to_string(kMinSignalLength));

    Signal sig;
    sig.sample_rate_hz = 1.0; // normalized frequency == Hz
    sig.source_id = "synth";
    sig.samples.resize(n, 0.0);

    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        for (std::size_t t = 0; t < n; ++t) {
            sig.samples[t] += amps[i] * std::cos(two_pi * freqs[i] * static_cast<double>(t));
        }
    }
    if (noise_std > 0.0) {
        detail::Rng rng(seed);
        detail::NormalSampler normal;
        for (std::size_t t = 0; t < n; ++t) sig.samples[t] += noise_std * normal(rng);
    }
    return sig;
}

// Index-level split: fixed-prefix takes indices 0..train_count-1 for
// training; random mode draws a seeded permutation. The two index sets are
// always disjoint and cover 0..n-1.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_indices(std::size_t n, const SplitSpec& spec) {
    if (spec.train_count == 0 || spec.train_count >= n)
        throw std::invalid_argument("split: train_count " + std::to_string(spec.train_count)
                                    + " out of range for collection of " + std::to_string(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (spec.mode == SplitMode::Random) {
        detail::Rng rng(spec.seed);
        detail::fisher_yates_shuffle(order, rng);
    }
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.train_count));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(spec.train_count), order.end());
    return {std::move(train), std::move(test)};
}

inline std::pair<SignalCollection, SignalCollection> split(const SignalCollection& coll,
                                                           const SplitSpec& spec) {
    const auto [train_idx, test_idx] = split_indices(coll.signals.size(), spec);
    SignalCollection train, test;
    train.set_id = coll.set_id;
    test.set_id = coll.set_id;
    for (std::size_t i : train_idx) train.signals.push_back(coll.signals[i]);
    for (std::size_t i : test_idx) test.signals.push_back(coll.signals[i]);
    return {std::move(train), std::move(test)};
}

} // namespace io
} // namespace vmdeeg
