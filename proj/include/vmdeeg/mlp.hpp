#pragma once

// Feed-forward multilayer perceptron, sigmoid activation on every node,
// trained by backpropagation on the sum-of-squared-errors loss with one-hot
// targets. Inputs are z-scored with statistics fitted on training data only.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vmdeeg/detail/rng.hpp"

namespace vmdeeg::mlp {

struct NormStats {
    std::vector<double> mean;
    std::vector<double> stddev;        // zero-variance dims recorded as 1
    std::vector<bool> constant_dim;    // flag for those dims
};

struct Model {
    std::vector<int> layer_sizes;              // input, hidden..., output
    std::vector<std::vector<double>> weights;  // per layer, row-major (out x in)
    std::vector<std::vector<double>> biases;   // per layer
    NormStats norm;
    std::uint64_t init_seed = 0;
};

struct TrainConfig {
    double learning_rate = 0.1;
    int epochs = 1000;
    std::uint64_t seed = 0;
    bool full_batch = false; // default: per-sample updates
    bool shuffle = true;
};

struct LabeledDataset {
    std::vector<std::vector<double>> inputs;
    std::vector<int> labels; // class indices in [0, C)
};

struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
// Draw order is layer by layer, row-major, so a seed pins every weight.
inline Model init(const std::vector<int>& layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 2)
        throw std::invalid_argument("mlp::init: need at least input and output layers");
    for (int s : layer_sizes)
        if (s < 1) throw std::invalid_argument("mlp::init: every layer size must be >= 1");

    Model m;
    m.layer_sizes = layer_sizes;
    m.init_seed = seed;
    detail::Rng rng(seed);
    for (std::size_t l = 1; l < layer_sizes.size(); ++l) {
        const int in = layer_sizes[l - 1];
        const int out = layer_sizes[l];
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        std::vector<double> w(static_cast<std::size_t>(in) * static_cast<std::size_t>(out));
        for (double& v : w) v = detail::uniform(rng, -bound, bound);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(static_cast<std::size_t>(out), 0.0);
    }
    return m;
}

namespace detail_mlp {

// Forward pass keeping every layer's activations (input included).
inline std::vector<std::vector<double>> activations(const Model& m,
                                                    const std::vector<double>& input) {
    if (input.size() != static_cast<std::size_t>(m.layer_sizes.front()))
        throw std::invalid_argument("mlp: input size " + std::to_string(input.size())
                                    + " != input layer " + std::to_string(m.layer_sizes.front()));
    std::vector<std::vector<double>> acts;
    acts.reserve(m.layer_sizes.size());
    acts.push_back(input);
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        const int in = m.layer_sizes[l];
        const int out = m.layer_sizes[l + 1];
        std::vector<double> next(static_cast<std::size_t>(out));
        for (int r = 0; r < out; ++r) {
            double z = m.biases[l][static_cast<std::size_t>(r)];
            const double* wrow = m.weights[l].data() + static_cast<std::size_t>(r) * in;
            for (int c = 0; c < in; ++c) z += wrow[c] * acts.back()[static_cast<std::size_t>(c)];
            next[static_cast<std::size_t>(r)] = sigmoid(z);
        }
        acts.push_back(std::move(next));
    }
    return acts;
}

} // namespace detail_mlp

inline std::vector<double> forward(const Model& m, const std::vector<double>& input) {
    return detail_mlp::activations(m, input).back();
}

// Gradients of the per-sample loss 1/2 * sum (out - target)^2.
inline Gradients gradient(const Model& m, const std::vector<double>& input,
                          const std::vector<double>& target) {
    if (target.size() != static_cast<std::size_t>(m.layer_sizes.back()))
        throw std::invalid_argument("mlp::gradient: target size mismatch");
    const auto acts = detail_mlp::activations(m, input);

    Gradients g;
    g.weights.resize(m.weights.size());
    g.biases.resize(m.biases.size());

    // delta for the output layer: (a - t) * a * (1 - a)
    std::vector<double> delta(acts.back().size());
    for (std::size_t i = 0; i < delta.size(); ++i) {
        const double a = acts.back()[i];
        delta[i] = (a - target[i]) * a * (1.0 - a);
    }

    for (std::size_t l = m.weights.size(); l-- > 0;) {
        const int in = m.layer_sizes[l];
        const int out = m.layer_sizes[l + 1];
        const std::vector<double>& a_prev = acts[l];

        g.weights[l].resize(static_cast<std::size_t>(in) * static_cast<std::size_t>(out));
        g.biases[l] = delta;
        for (int r = 0; r < out; ++r)
            for (int c = 0; c < in; ++c)
                g.weights[l][static_cast<std::size_t>(r) * in + static_cast<std::size_t>(c)] =
                    delta[static_cast<std::size_t>(r)] * a_prev[static_cast<std::size_t>(c)];

        if (l == 0) break;
        std::vector<double> prev_delta(static_cast<std::size_t>(in), 0.0);
        for (int c = 0; c < in; ++c) {
            double acc = 0.0;
            for (int r = 0; r < out; ++r)
                acc += m.weights[l][static_cast<std::size_t>(r) * in + static_cast<std::size_t>(c)]
                       * delta[static_cast<std::size_t>(r)];
            const double a = a_prev[static_cast<std::size_t>(c)];
            prev_delta[static_cast<std::size_t>(c)] = acc * a * (1.0 - a);
        }
        delta = std::move(prev_delta);
    }
    return g;
}

inline NormStats fit_normalizer(const LabeledDataset& train) {
    if (train.inputs.empty()) throw std::invalid_argument("fit_normalizer: empty training set");
    const std::size_t dim = train.inputs.front().size();
    const double n = static_cast<double>(train.inputs.size());

    NormStats stats;
    stats.mean.assign(dim, 0.0);
    stats.stddev.assign(dim, 0.0);
    stats.constant_dim.assign(dim, false);

    for (const auto& x : train.inputs) {
        if (x.size() != dim) throw std::invalid_argument("fit_normalizer: ragged inputs");
        for (std::size_t d = 0; d < dim; ++d) stats.mean[d] += x[d];
    }
    for (std::size_t d = 0; d < dim; ++d) stats.mean[d] /= n;
    for (const auto& x : train.inputs)
        for (std::size_t d = 0; d < dim; ++d) {
            const double c = x[d] - stats.mean[d];
            stats.stddev[d] += c * c;
        }
    for (std::size_t d = 0; d < dim; ++d) {
        stats.stddev[d] = std::sqrt(stats.stddev[d] / n);
        if (stats.stddev[d] == 0.0) {
            stats.stddev[d] = 1.0;
            stats.constant_dim[d] = true;
        }
    }
    return stats;
}

inline std::vector<double> apply_normalizer(const NormStats& stats,
                                            const std::vector<double>& input) {
    if (input.size() != stats.mean.size())
        throw std::invalid_argument("apply_normalizer: dimension mismatch");
    std::vector<double> out(input.size());
    for (std::size_t d = 0; d < input.size(); ++d)
        out[d] = (input[d] - stats.mean[d]) / stats.stddev[d];
    return out;
}

inline double sample_loss(const Model& m, const std::vector<double>& input,
                          const std::vector<double>& target) {
    const std::vector<double> out = forward(m, input);
    double loss = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double e = out[i] - target[i];
        loss += 0.5 * e * e;
    }
    return loss;
}

// Trains in place; returns the per-epoch mean sample loss. Per-sample mode
// applies one gradient step per sample in seeded-shuffle order; full-batch
// mode takes one step per epoch on the mean gradient.
inline std::vector<double> train(Model& m, const LabeledDataset& data, const TrainConfig& cfg) {
    if (!(cfg.learning_rate > 0.0))
        throw std::invalid_argument("mlp::train: learning_rate must be > 0");
    if (cfg.epochs < 1) throw std::invalid_argument("mlp::train: epochs must be >= 1");
    if (data.inputs.size() != data.labels.size() || data.inputs.empty())
        throw std::invalid_argument("mlp::train: empty or mismatched dataset");

    const int classes = m.layer_sizes.back();
    for (int label : data.labels)
        if (label < 0 || label >= classes)
            throw std::invalid_argument("mlp::train: label " + std::to_string(label)
                                        + " outside [0, " + std::to_string(classes) + ")");

    auto one_hot = [classes](int label) {
        std::vector<double> t(static_cast<std::size_t>(classes), 0.0);
        t[static_cast<std::size_t>(label)] = 1.0;
        return t;
    };

    detail::Rng rng(cfg.seed);
    std::vector<std::size_t> order(data.inputs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(cfg.epochs));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;

        if (cfg.full_batch) {
            Gradients total;
            for (std::size_t i = 0; i < data.inputs.size(); ++i) {
                const auto target = one_hot(data.labels[i]);
                epoch_loss += sample_loss(m, data.inputs[i], target);
                Gradients g = gradient(m, data.inputs[i], target);
                if (total.weights.empty()) {
                    total = std::move(g);
                } else {
                    for (std::size_t l = 0; l < total.weights.size(); ++l) {
                        for (std::size_t j = 0; j < total.weights[l].size(); ++j)
                            total.weights[l][j] += g.weights[l][j];
                        for (std::size_t j = 0; j < total.biases[l].size(); ++j)
                            total.biases[l][j] += g.biases[l][j];
                    }
                }
            }
            const double inv_n = 1.0 / static_cast<double>(data.inputs.size());
            for (std::size_t l = 0; l < m.weights.size(); ++l) {
                for (std::size_t j = 0; j < m.weights[l].size(); ++j)
                    m.weights[l][j] -= cfg.learning_rate * total.weights[l][j] * inv_n;
                for (std::size_t j = 0; j < m.biases[l].size(); ++j)
                    m.biases[l][j] -= cfg.learning_rate * total.biases[l][j] * inv_n;
            }
        } else {
            if (cfg.shuffle) detail::fisher_yates_shuffle(order, rng);
            for (std::size_t i : order) {
                const auto target = one_hot(data.labels[i]);
                epoch_loss += sample_loss(m, data.inputs[i], target);
                const Gradients g = gradient(m, data.inputs[i], target);
                for (std::size_t l = 0; l < m.weights.size(); ++l) {
                    for (std::size_t j = 0; j < m.weights[l].size(); ++j)
                        m.weights[l][j] -= cfg.learning_rate * g.weights[l][j];
                    for (std::size_t j = 0; j < m.biases[l].size(); ++j)
                        m.biases[l][j] -= cfg.learning_rate * g.biases[l][j];
                }
            }
        }

        epoch_loss /= static_cast<double>(data.inputs.size());
        if (!std::isfinite(epoch_loss))
            throw std::runtime_error("mlp::train: non-finite loss at epoch "
                                     + std::to_string(epoch));
        history.push_back(epoch_loss);
    }
    return history;
}

// Argmax over the output vector; ties break toward the lower class index.
inline int predict(const Model& m, const std::vector<double>& input) {
    const std::vector<double> out = forward(m, input);
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] > out[best]) best = i;
    return static_cast<int>(best);
}

inline nlohmann::json to_json(const Model& m) {
    nlohmann::json j;
    j["layer_sizes"] = m.layer_sizes;
    j["weights"] = m.weights;
    j["biases"] = m.biases;
    j["norm"] = {{"mean", m.norm.mean},
                 {"stddev", m.norm.stddev},
                 {"constant_dim", m.norm.constant_dim}};
    j["init_seed"] = m.init_seed;
    return j;
}

inline Model model_from_json(const nlohmann::json& j) {
    Model m;
    m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    m.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    m.norm.mean = j.at("norm").at("mean").get<std::vector<double>>();
    m.norm.stddev = j.at("norm").at("stddev").get<std::vector<double>>();
    m.norm.constant_dim = j.at("norm").at("constant_dim").get<std::vector<bool>>();
    m.init_seed = j.at("init_seed").get<std::uint64_t>();
    return m;
}

inline void save(const Model& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("mlp::save: cannot write " + path.string());
    out << to_json(m).dump(2) << "\n";
}

inline Model load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("mlp::load: cannot read " + path.string());
    nlohmann::json j;
    in >> j;
    return model_from_json(j);
}

} // namespace vmdeeg::mlp
