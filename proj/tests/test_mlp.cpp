#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <unistd.h>
#include <vector>

#include "vmdeeg/detail/rng.hpp"
#include "vmdeeg/mlp.hpp"

using namespace vmdeeg;
using Catch::Approx;

namespace {

std::vector<double> random_input(std::size_t dim, detail::Rng& rng) {
    std::vector<double> x(dim);
    for (double& v : x) v = detail::uniform(rng, -2.0, 2.0);
    return x;
}

// Central finite differences of the sample loss wrt every parameter.
mlp::Gradients fd_gradient(mlp::Model model, const std::vector<double>& input,
                           const std::vector<double>& target, double h) {
    mlp::Gradients g;
    g.weights.resize(model.weights.size());
    g.biases.resize(model.biases.size());
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        g.weights[l].resize(model.weights[l].size());
        for (std::size_t j = 0; j < model.weights[l].size(); ++j) {
            const double saved = model.weights[l][j];
            model.weights[l][j] = saved + h;
            const double up = mlp::sample_loss(model, input, target);
            model.weights[l][j] = saved - h;
            const double down = mlp::sample_loss(model, input, target);
            model.weights[l][j] = saved;
            g.weights[l][j] = (up - down) / (2.0 * h);
        }
        g.biases[l].resize(model.biases[l].size());
        for (std::size_t j = 0; j < model.biases[l].size(); ++j) {
            const double saved = model.biases[l][j];
            model.biases[l][j] = saved + h;
            const double up = mlp::sample_loss(model, input, target);
            model.biases[l][j] = saved - h;
            const double down = mlp::sample_loss(model, input, target);
            model.biases[l][j] = saved;
            g.biases[l][j] = (up - down) / (2.0 * h);
        }
    }
    return g;
}

mlp::LabeledDataset xor_dataset() {
    mlp::LabeledDataset d;
    d.inputs = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
    d.labels = {0, 1, 1, 0};
    return d;
}

} // namespace

TEST_CASE("mlp init", "[mlp]") {
    SECTION("shapes and bit-exact repeatability for (5,10,10,2) seed 42") {
        const auto a = mlp::init({5, 10, 10, 2}, 42);
        REQUIRE(a.weights.size() == 3);
        REQUIRE(a.weights[0].size() == 50);
        REQUIRE(a.weights[1].size() == 100);
        REQUIRE(a.weights[2].size() == 20);
        REQUIRE(a.biases[0] == std::vector<double>(10, 0.0));
        REQUIRE(a.biases[2] == std::vector<double>(2, 0.0));

        const auto b = mlp::init({5, 10, 10, 2}, 42);
        REQUIRE(a.weights == b.weights);

        const auto c = mlp::init({5, 10, 10, 2}, 43);
        REQUIRE(a.weights != c.weights);
    }
    SECTION("weights bounded by 1/sqrt(fan_in)") {
        const auto m = mlp::init({4, 16, 3}, 7);
        for (double w : m.weights[0]) REQUIRE(std::abs(w) <= 0.5);
        for (double w : m.weights[1]) REQUIRE(std::abs(w) <= 0.25);
    }
    SECTION("(1,1) network has a single weight in [-1, 1]") {
        const auto m = mlp::init({1, 1}, 3);
        REQUIRE(m.weights.size() == 1);
        REQUIRE(m.weights[0].size() == 1);
        REQUIRE(std::abs(m.weights[0][0]) <= 1.0);
    }
    SECTION("invalid layer sizes are rejected") {
        REQUIRE_THROWS_AS(mlp::init({5, 0, 2}, 0), std::invalid_argument);
        REQUIRE_THROWS_AS(mlp::init({5}, 0), std::invalid_argument);
    }
}

TEST_CASE("mlp forward", "[mlp]") {
    SECTION("all-zero parameters output 0.5 everywhere") {
        auto m = mlp::init({3, 4, 2}, 1);
        for (auto& layer : m.weights) std::fill(layer.begin(), layer.end(), 0.0);
        const auto out = mlp::forward(m, {0.3, -0.7, 2.0});
        for (double v : out) REQUIRE(v == Approx(0.5));
    }
    SECTION("outputs stay strictly inside (0,1)") {
        detail::Rng rng(4);
        const auto m = mlp::init({6, 10, 10, 3}, 9);
        for (int trial = 0; trial < 20; ++trial) {
            const auto out = mlp::forward(m, random_input(6, rng));
            for (double v : out) {
                REQUIRE(v > 0.0);
                REQUIRE(v < 1.0);
            }
        }
    }
    SECTION("1-1 network with w=1, b=0 evaluates the sigmoid") {
        auto m = mlp::init({1, 1}, 0);
        m.weights[0][0] = 1.0;
        m.biases[0][0] = 0.0;
        const auto out = mlp::forward(m, {0.881});
        REQUIRE(out[0] == Approx(1.0 / (1.0 + std::exp(-0.881))).epsilon(1e-12));
        REQUIRE(out[0] == Approx(0.7070).margin(5e-4));
    }
    SECTION("dimension mismatch is rejected") {
        const auto m = mlp::init({3, 2}, 0);
        REQUIRE_THROWS_AS(mlp::forward(m, {1.0, 2.0}), std::invalid_argument);
    }
}

TEST_CASE("mlp gradient", "[mlp]") {
    SECTION("target equal to the output zeroes every gradient") {
        detail::Rng rng(8);
        const auto m = mlp::init({4, 6, 2}, 11);
        const auto x = random_input(4, rng);
        const auto g = mlp::gradient(m, x, mlp::forward(m, x));
        for (const auto& layer : g.weights)
            for (double v : layer) REQUIRE(v == Approx(0.0).margin(1e-15));
        for (const auto& layer : g.biases)
            for (double v : layer) REQUIRE(v == Approx(0.0).margin(1e-15));
    }
    SECTION("matches central finite differences on random (5,10,10,2) pairs") {
        detail::Rng rng(21);
        for (int pair = 0; pair < 10; ++pair) {
            const auto m = mlp::init({5, 10, 10, 2}, 100 + static_cast<std::uint64_t>(pair));
            const auto x = random_input(5, rng);
            const std::vector<double> t{detail::uniform01(rng) > 0.5 ? 1.0 : 0.0, 0.0};
            const auto bp = mlp::gradient(m, x, t);
            const auto fd = fd_gradient(m, x, t, 1e-5);
            for (std::size_t l = 0; l < bp.weights.size(); ++l) {
                for (std::size_t j = 0; j < bp.weights[l].size(); ++j) {
                    const double scale = std::max(std::abs(fd.weights[l][j]), 1e-6);
                    REQUIRE(std::abs(bp.weights[l][j] - fd.weights[l][j]) / scale < 1e-4);
                }
                for (std::size_t j = 0; j < bp.biases[l].size(); ++j) {
                    const double scale = std::max(std::abs(fd.biases[l][j]), 1e-6);
                    REQUIRE(std::abs(bp.biases[l][j] - fd.biases[l][j]) / scale < 1e-4);
                }
            }
        }
    }
    SECTION("single 1-1 layer matches the closed form (out-t)*s'*x") {
        auto m = mlp::init({1, 1}, 0);
        m.weights[0][0] = 0.7;
        m.biases[0][0] = -0.2;
        const double x = 1.3, t = 1.0;
        const double z = 0.7 * x - 0.2;
        const double a = 1.0 / (1.0 + std::exp(-z));
        const auto g = mlp::gradient(m, {x}, {t});
        REQUIRE(g.weights[0][0] == Approx((a - t) * a * (1.0 - a) * x).epsilon(1e-12));
        REQUIRE(g.biases[0][0] == Approx((a - t) * a * (1.0 - a)).epsilon(1e-12));
    }
}

TEST_CASE("normalizer", "[mlp]") {
    SECTION("mean 1, std 1 for inputs {0, 2}") {
        mlp::LabeledDataset d;
        d.inputs = {{0.0}, {2.0}};
        d.labels = {0, 1};
        const auto stats = mlp::fit_normalizer(d);
        REQUIRE(stats.mean[0] == Approx(1.0));
        REQUIRE(stats.stddev[0] == Approx(1.0));
        REQUIRE_FALSE(stats.constant_dim[0]);
        REQUIRE(mlp::apply_normalizer(stats, {2.0})[0] == Approx(1.0));
    }
    SECTION("constant dimension passes through with the flag raised") {
        mlp::LabeledDataset d;
        d.inputs = {{5.0, 1.0}, {5.0, 3.0}, {5.0, 2.0}};
        d.labels = {0, 1, 0};
        const auto stats = mlp::fit_normalizer(d);
        REQUIRE(stats.constant_dim[0]);
        REQUIRE_FALSE(stats.constant_dim[1]);
        REQUIRE(mlp::apply_normalizer(stats, {5.0, 2.0})[0] == Approx(0.0));
    }
    SECTION("normalized training set has mean ~0 and std ~1 per dimension") {
        detail::Rng rng(3);
        mlp::LabeledDataset d;
        for (int i = 0; i < 200; ++i) {
            d.inputs.push_back({detail::uniform(rng, 5.0, 9.0), detail::uniform(rng, -100.0, 0.0)});
            d.labels.push_back(0);
        }
        const auto stats = mlp::fit_normalizer(d);
        for (std::size_t dim = 0; dim < 2; ++dim) {
            double mean = 0.0, var = 0.0;
            for (const auto& x : d.inputs) mean += mlp::apply_normalizer(stats, x)[dim];
            mean /= static_cast<double>(d.inputs.size());
            for (const auto& x : d.inputs) {
                const double v = mlp::apply_normalizer(stats, x)[dim] - mean;
                var += v * v;
            }
            var /= static_cast<double>(d.inputs.size());
            REQUIRE(mean == Approx(0.0).margin(1e-12));
            REQUIRE(var == Approx(1.0).epsilon(1e-9));
        }
    }
    SECTION("empty training set is rejected") {
        REQUIRE_THROWS_AS(mlp::fit_normalizer({}), std::invalid_argument);
    }
}

TEST_CASE("mlp train", "[mlp]") {
    SECTION("XOR reaches 100% training accuracy") {
        const auto data = xor_dataset();
        auto m = mlp::init({2, 10, 10, 2}, 42);
        mlp::TrainConfig cfg;
        cfg.learning_rate = 0.5;
        cfg.epochs = 5000;
        cfg.seed = 42;
        const auto history = mlp::train(m, data, cfg);
        REQUIRE(history.size() == 5000);
        for (double loss : history) REQUIRE(std::isfinite(loss));
        for (std::size_t i = 0; i < data.inputs.size(); ++i)
            REQUIRE(mlp::predict(m, data.inputs[i]) == data.labels[i]);
    }
    SECTION("training twice with one seed is bit-identical") {
        const auto data = xor_dataset();
        mlp::TrainConfig cfg;
        cfg.learning_rate = 0.3;
        cfg.epochs = 50;
        cfg.seed = 7;
        auto m1 = mlp::init({2, 10, 10, 2}, 5);
        auto m2 = mlp::init({2, 10, 10, 2}, 5);
        const auto h1 = mlp::train(m1, data, cfg);
        const auto h2 = mlp::train(m2, data, cfg);
        REQUIRE(h1 == h2);
        REQUIRE(m1.weights == m2.weights);
        REQUIRE(m1.biases == m2.biases);
    }
    SECTION("a small step never increases the same-sample loss") {
        detail::Rng rng(14);
        for (int trial = 0; trial < 100; ++trial) {
            auto m = mlp::init({3, 8, 2}, 50 + static_cast<std::uint64_t>(trial));
            const auto x = random_input(3, rng);
            const std::vector<double> t{1.0, 0.0};
            const double before = mlp::sample_loss(m, x, t);
            const auto g = mlp::gradient(m, x, t);
            for (std::size_t l = 0; l < m.weights.size(); ++l) {
                for (std::size_t j = 0; j < m.weights[l].size(); ++j)
                    m.weights[l][j] -= 1e-4 * g.weights[l][j];
                for (std::size_t j = 0; j < m.biases[l].size(); ++j)
                    m.biases[l][j] -= 1e-4 * g.biases[l][j];
            }
            REQUIRE(mlp::sample_loss(m, x, t) <= before + 1e-12);
        }
    }
    SECTION("full-batch mode also learns a separable problem") {
        mlp::LabeledDataset d;
        for (int i = 0; i < 20; ++i) {
            const double v = (i < 10) ? -1.0 - 0.05 * i : 1.0 + 0.05 * (i - 10);
            d.inputs.push_back({v});
            d.labels.push_back(i < 10 ? 0 : 1);
        }
        auto m = mlp::init({1, 10, 10, 2}, 3);
        mlp::TrainConfig cfg;
        cfg.learning_rate = 2.0;
        cfg.epochs = 2000;
        cfg.full_batch = true;
        mlp::train(m, d, cfg);
        for (std::size_t i = 0; i < d.inputs.size(); ++i)
            REQUIRE(mlp::predict(m, d.inputs[i]) == d.labels[i]);
    }
    SECTION("invalid configs and labels are rejected") {
        auto m = mlp::init({2, 4, 2}, 0);
        const auto data = xor_dataset();
        mlp::TrainConfig cfg;
        cfg.learning_rate = 0.0;
        REQUIRE_THROWS_AS(mlp::train(m, data, cfg), std::invalid_argument);
        cfg.learning_rate = 0.1;
        cfg.epochs = 0;
        REQUIRE_THROWS_AS(mlp::train(m, data, cfg), std::invalid_argument);
        cfg.epochs = 1;
        mlp::LabeledDataset bad = data;
        bad.labels[0] = 2;
        REQUIRE_THROWS_AS(mlp::train(m, bad, cfg), std::invalid_argument);
    }
}

TEST_CASE("mlp predict", "[mlp]") {
    SECTION("argmax with ties toward the lower class") {
        auto m = mlp::init({2, 2}, 1);
        for (auto& layer : m.weights) std::fill(layer.begin(), layer.end(), 0.0);
        // both outputs sigmoid(0) = 0.5: tie -> class 0
        REQUIRE(mlp::predict(m, {1.0, -1.0}) == 0);
    }
    SECTION("predict agrees with the argmax of forward outputs") {
        detail::Rng rng(30);
        const auto m = mlp::init({4, 8, 3}, 17);
        for (int trial = 0; trial < 30; ++trial) {
            const auto x = random_input(4, rng);
            const auto out = mlp::forward(m, x);
            int best = 0;
            for (int c = 1; c < 3; ++c)
                if (out[static_cast<std::size_t>(c)] > out[static_cast<std::size_t>(best)])
                    best = c;
            REQUIRE(mlp::predict(m, x) == best);
        }
    }
}

TEST_CASE("mlp serialization round trip", "[mlp]") {
    auto m = mlp::init({3, 10, 10, 2}, 77);
    mlp::LabeledDataset d;
    detail::Rng rng(1);
    for (int i = 0; i < 30; ++i) {
        d.inputs.push_back(random_input(3, rng));
        d.labels.push_back(i % 2);
    }
    m.norm = mlp::fit_normalizer(d);
    mlp::TrainConfig cfg;
    cfg.epochs = 20;
    mlp::train(m, d, cfg);

    const auto path = std::filesystem::temp_directory_path()
                      / ("vmdeeg_mlp_" + std::to_string(::getpid()) + ".json");
    mlp::save(m, path);
    const auto loaded = mlp::load(path);
    std::filesystem::remove(path);

    REQUIRE(loaded.layer_sizes == m.layer_sizes);
    REQUIRE(loaded.weights == m.weights);
    REQUIRE(loaded.biases == m.biases);
    REQUIRE(loaded.norm.mean == m.norm.mean);
    REQUIRE(loaded.norm.stddev == m.norm.stddev);
    REQUIRE(loaded.init_seed == m.init_seed);
    for (const auto& x : d.inputs) REQUIRE(mlp::predict(loaded, x) == mlp::predict(m, x));
}
