#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "vmdeeg/pipeline.hpp"

using namespace vmdeeg;
using Catch::Approx;
using features::FeatureKind;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path()
               / ("vmdeeg_pipe_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

// Two tone families separable by amplitude: HIGH is the LOW class scaled 4x.
pipeline::Dataset synthetic_dataset(std::size_t per_class, std::size_t n = 256) {
    pipeline::Dataset data;
    for (const bool high : {false, true}) {
        SignalCollection coll;
        coll.set_id = high ? "HIGH" : "LOW";
        for (std::size_t i = 0; i < per_class; ++i) {
            const double f1 = 0.08 + 0.004 * static_cast<double>(i % 5);
            const double f2 = 0.22 + 0.004 * static_cast<double>(i % 3);
            const double scale = high ? 4.0 : 1.0;
            Signal s = io::synth_multitone({f1, f2}, {0.5 * scale, 0.25 * scale}, n, 0.02,
                                           1000 + i + (high ? 500 : 0));
            s.label = coll.set_id;
            s.source_id = coll.set_id + std::to_string(i);
            coll.signals.push_back(std::move(s));
        }
        data.emplace(coll.set_id, std::move(coll));
    }
    return data;
}

pipeline::TaskSpec synthetic_task() {
    return {"synthetic-amplitude", {{"LOW", 0}, {"HIGH", 1}}};
}

vmd::Config fast_vmd() {
    vmd::Config cfg;
    cfg.k = 2;
    cfg.tol = 1e-6;
    return cfg;
}

mlp::TrainConfig fast_train() {
    mlp::TrainConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.epochs = 300;
    cfg.seed = 11;
    return cfg;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("task presets map the Bonn sets to classes", "[pipeline]") {
    using Pair = std::pair<std::string, int>;
    const auto ns = pipeline::TaskSpec::normal_vs_seizure();
    REQUIRE(ns.class_map == std::vector<Pair>{{"Z", 0}, {"O", 0}, {"S", 1}});
    const auto ssf = pipeline::TaskSpec::seizure_vs_seizure_free();
    REQUIRE(ssf.class_map == std::vector<Pair>{{"N", 0}, {"F", 0}, {"S", 1}});
    const auto sns = pipeline::TaskSpec::seizure_vs_non_seizure();
    REQUIRE(sns.class_map
            == std::vector<Pair>{{"Z", 0}, {"O", 0}, {"N", 0}, {"F", 0}, {"S", 1}});

    REQUIRE(pipeline::TaskSpec::by_name("normal-vs-seizure").name == "normal-vs-seizure");
    REQUIRE_THROWS_AS(pipeline::TaskSpec::by_name("unknown-task"), std::invalid_argument);
}

TEST_CASE("majority_vote", "[pipeline]") {
    REQUIRE(pipeline::majority_vote({0, 0, 1}) == 0);
    REQUIRE(pipeline::majority_vote({1, 1, 1}) == 1);
    REQUIRE(pipeline::majority_vote({1, 0, 1}) == 1);
    REQUIRE(pipeline::majority_vote({0, 0, 0}) == 0);

    SECTION("permutation invariant") {
        const std::vector<std::vector<int>> perms{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
        for (const auto& votes : perms) REQUIRE(pipeline::majority_vote(votes) == 1);
    }
    SECTION("vote count must be exactly 3") {
        REQUIRE_THROWS_AS(pipeline::majority_vote({0, 1}), std::invalid_argument);
        REQUIRE_THROWS_AS(pipeline::majority_vote({0, 1, 1, 0}), std::invalid_argument);
    }
}

TEST_CASE("single-feature run separates the synthetic corpus", "[pipeline]") {
    const auto data = synthetic_dataset(10);
    const SplitSpec split{SplitMode::FixedPrefix, 8, 0};
    const auto report = pipeline::run_single_feature(data, synthetic_task(),
                                                     FeatureKind::AvgAmplitude, split,
                                                     fast_vmd(), fast_train());
    REQUIRE(report.rows.size() == 1);
    REQUIRE(report.rows[0].accuracy_pct == Approx(100.0));
    REQUIRE(report.average_accuracy_pct == Approx(100.0));
    REQUIRE(report.task == "synthetic-amplitude");
    REQUIRE(report.feature_kinds == std::vector<FeatureKind>{FeatureKind::AvgAmplitude});
    // 2 sets x 2 test signals: accuracy is always a multiple of 25%
    REQUIRE(std::fmod(report.rows[0].accuracy_pct, 25.0) == Approx(0.0).margin(1e-9));
}

TEST_CASE("ranked run votes across the three features", "[pipeline]") {
    const auto data = synthetic_dataset(10);
    const SplitSpec split{SplitMode::FixedPrefix, 8, 0};
    const auto report =
        pipeline::run_ranked(data, synthetic_task(), split, fast_vmd(), fast_train());
    REQUIRE(report.rows.size() == 1);
    REQUIRE(report.rows[0].accuracy_pct == Approx(100.0));
    REQUIRE(report.feature_kinds.size() == 3);
    REQUIRE(report.rows[0].recall_pct[0] == Approx(100.0));
    REQUIRE(report.rows[0].recall_pct[1] == Approx(100.0));
}

TEST_CASE("randomized trials", "[pipeline]") {
    const auto data = synthetic_dataset(10);

    SECTION("one iteration: average equals the single row") {
        const auto report = pipeline::run_randomized_trials(data, synthetic_task(), 1, 42,
                                                            fast_vmd(), fast_train(), {}, 8);
        REQUIRE(report.rows.size() == 1);
        REQUIRE(report.average_accuracy_pct == Approx(report.rows[0].accuracy_pct));
    }
    SECTION("rows, average, and reruns are deterministic per base seed") {
        const auto a = pipeline::run_randomized_trials(data, synthetic_task(), 3, 42,
                                                       fast_vmd(), fast_train(), {}, 8);
        const auto b = pipeline::run_randomized_trials(data, synthetic_task(), 3, 42,
                                                       fast_vmd(), fast_train(), {}, 8);
        REQUIRE(a.rows.size() == 3);
        double sum = 0.0;
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            REQUIRE(a.rows[i].iteration == static_cast<int>(i) + 1);
            REQUIRE(a.rows[i] == b.rows[i]);
            sum += a.rows[i].accuracy_pct;
        }
        REQUIRE(a.average_accuracy_pct == Approx(sum / 3.0).margin(1e-9));

        TempDir tmp;
        pipeline::export_report_csv(a, tmp.path / "a.csv");
        pipeline::export_report_csv(b, tmp.path / "b.csv");
        REQUIRE(read_file(tmp.path / "a.csv") == read_file(tmp.path / "b.csv"));
        REQUIRE_FALSE(read_file(tmp.path / "a.csv").empty());
    }
    SECTION("missing set in the dataset is reported") {
        pipeline::TaskSpec task{"broken", {{"LOW", 0}, {"MISSING", 1}}};
        REQUIRE_THROWS_WITH(pipeline::run_randomized_trials(data, task, 1, 0, fast_vmd(),
                                                            fast_train(), {}, 8),
                            Catch::Matchers::ContainsSubstring("MISSING"));
    }
}

TEST_CASE("vmd disk cache is transparent", "[pipeline]") {
    TempDir tmp;
    const Signal sig = io::synth_multitone({0.07, 0.19}, {1.0, 0.5}, 300, 0.05, 3);
    const auto cfg = fast_vmd();

    const auto direct = vmd::decompose(sig, cfg);

    pipeline::Options opt;
    opt.cache_dir = tmp.path;
    const auto first = pipeline::decompose_cached(sig, cfg, opt);  // miss: computes + writes
    const auto second = pipeline::decompose_cached(sig, cfg, opt); // hit: reads back

    for (std::size_t m = 0; m < direct.modes.size(); ++m) {
        REQUIRE(first.modes[m].samples == direct.modes[m].samples);
        REQUIRE(second.modes[m].samples == direct.modes[m].samples);
    }
    REQUIRE(first.center_freqs == direct.center_freqs);
    REQUIRE(second.center_freqs == direct.center_freqs);
    REQUIRE(second.iterations_used == direct.iterations_used);
    REQUIRE(second.final_residual == direct.final_residual);

    SECTION("different config misses the cache") {
        vmd::Config other = cfg;
        other.alpha = 500.0;
        const auto changed = pipeline::decompose_cached(sig, other, opt);
        REQUIRE(changed.center_freqs != direct.center_freqs);
    }
}

TEST_CASE("report export and import round trip", "[pipeline]") {
    TempDir tmp;
    const auto data = synthetic_dataset(10);
    const auto report = pipeline::run_randomized_trials(data, synthetic_task(), 2, 9,
                                                        fast_vmd(), fast_train(), {}, 8);

    pipeline::export_report(report, tmp.path / "report.csv");
    REQUIRE(std::filesystem::exists(tmp.path / "report.csv"));
    REQUIRE(std::filesystem::exists(tmp.path / "report.json"));

    const auto loaded = pipeline::report_from_json(tmp.path / "report.json");
    REQUIRE(loaded.task == report.task);
    REQUIRE(loaded.feature_kinds == report.feature_kinds);
    REQUIRE(loaded.rows.size() == report.rows.size());
    for (std::size_t i = 0; i < report.rows.size(); ++i) REQUIRE(loaded.rows[i] == report.rows[i]);
    REQUIRE(loaded.average_accuracy_pct == report.average_accuracy_pct);
    REQUIRE(loaded.base_seed == report.base_seed);
    REQUIRE(loaded.iterations == report.iterations);
    REQUIRE(loaded.vmd_cfg.k == report.vmd_cfg.k);
    REQUIRE(loaded.vmd_cfg.alpha == report.vmd_cfg.alpha);
    REQUIRE(loaded.train_cfg.epochs == report.train_cfg.epochs);
    REQUIRE(loaded.train_cfg.seed == report.train_cfg.seed);

    SECTION("empty report exports a header-only CSV") {
        pipeline::ExperimentReport empty;
        pipeline::export_report_csv(empty, tmp.path / "empty.csv");
        REQUIRE(read_file(tmp.path / "empty.csv")
                == "iteration,accuracy_pct,recall_class0_pct,recall_class1_pct\n");
    }
}

TEST_CASE("figure-style dumps", "[pipeline]") {
    TempDir tmp;
    Signal sig = io::synth_multitone({0.06, 0.18}, {1.0, 0.5}, 256, 0.0, 0);
    sig.source_id = "fixture";
    const auto cfg = fast_vmd();

    SECTION("mode dump: k*N data rows with the documented header") {
        const auto path = pipeline::dump_modes(sig, cfg, tmp.path);
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        REQUIRE(header == "mode,t,value");
        std::size_t rows = 0;
        for (std::string line; std::getline(in, line);) ++rows;
        REQUIRE(rows == 2 * 256);
    }
    SECTION("spectrum dump covers DC..Nyquist per mode") {
        const auto path = pipeline::dump_spectra(sig, cfg, tmp.path);
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        REQUIRE(header == "mode,freq_hz,power");
        std::size_t rows = 0;
        for (std::string line; std::getline(in, line);) ++rows;
        REQUIRE(rows == 2 * (256 / 2 + 1));
    }
    SECTION("sodp dump: (N - 2*lag) points per mode") {
        const auto path = pipeline::dump_sodp(sig, cfg, 1, tmp.path);
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        REQUIRE(header == "mode,n,x,y");
        std::size_t rows = 0;
        for (std::string line; std::getline(in, line);) ++rows;
        REQUIRE(rows == 2 * (256 - 2));
    }
}
