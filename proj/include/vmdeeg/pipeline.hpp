#pragma once

// End-to-end orchestration of the three classification tasks: per-set 80/20
// splits, cached decomposition, per-mode feature extraction, MLP training,
// the three-feature majority vote, randomized trials, and CSV/JSON reports.

#include <array>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vmdeeg/detail/rng.hpp"
#include "vmdeeg/features.hpp"
#include "vmdeeg/mlp.hpp"
#include "vmdeeg/signal.hpp"
#include "vmdeeg/spectral.hpp"
#include "vmdeeg/vmd.hpp"

namespace vmdeeg::pipeline {

struct TaskSpec {
    std::string name;
    std::vector<std::pair<std::string, int>> class_map; // set id -> class index

    static TaskSpec normal_vs_seizure() {
        return {"normal-vs-seizure", {{"Z", 0}, {"O", 0}, {"S", 1}}};
    }
    static TaskSpec seizure_vs_seizure_free() {
        return {"seizure-vs-seizure-free", {{"N", 0}, {"F", 0}, {"S", 1}}};
    }
    static TaskSpec seizure_vs_non_seizure() {
        return {"seizure-vs-non-seizure", {{"Z", 0}, {"O", 0}, {"N", 0}, {"F", 0}, {"S", 1}}};
    }
    static TaskSpec by_name(const std::string& name) {
        if (name == "normal-vs-seizure") return normal_vs_seizure();
        if (name == "seizure-vs-seizure-free") return seizure_vs_seizure_free();
        if (name == "seizure-vs-non-seizure") return seizure_vs_non_seizure();
        throw std::invalid_argument("unknown task: " + name);
    }
};

struct IterationRow {
    int iteration = 1;
    double accuracy_pct = 0.0;
    std::array<double, 2> recall_pct{0.0, 0.0}; // per true class

    friend bool operator==(const IterationRow&, const IterationRow&) = default;
};

struct ExperimentReport {
    std::string task;
    std::vector<features::FeatureKind> feature_kinds;
    std::vector<IterationRow> rows;
    double average_accuracy_pct = 0.0;
    SplitSpec split;
    std::uint64_t base_seed = 0;
    int iterations = 0;
    vmd::Config vmd_cfg;
    mlp::TrainConfig train_cfg;
};

struct Options {
    std::optional<std::filesystem::path> cache_dir; // disk cache for decompositions
    unsigned threads = 0;                           // 0 = hardware concurrency
};

// The class receiving at least 2 of the 3 votes (binary classes, so no tie).
inline int majority_vote(const std::vector<int>& votes) {
    if (votes.size() != 3)
        throw std::invalid_argument("majority_vote: expected exactly 3 votes, got "
                                    + std::to_string(votes.size()));
    int ones = 0;
    for (int v : votes) ones += (v != 0) ? 1 : 0;
    return ones >= 2 ? 1 : 0;
}

namespace detail_pipe {

inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
    unsigned n_threads = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    if (count < 2 || n_threads < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(n_threads, count));
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t cache_key(const Signal& sig, const vmd::Config& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const double nums[] = {static_cast<double>(cfg.k), cfg.alpha, cfg.tau, cfg.tol,
                           static_cast<double>(cfg.max_iters),
                           static_cast<double>(static_cast<int>(cfg.init)),
                           static_cast<double>(cfg.init_seed),
                           cfg.mirror ? 1.0 : 0.0};
    h = fnv1a(nums, sizeof(nums), h);
    const std::uint64_t n = sig.samples.size();
    h = fnv1a(&n, sizeof(n), h);
    h = fnv1a(sig.samples.data(), sig.samples.size() * sizeof(double), h);
    return h;
}

inline std::filesystem::path cache_path(const std::filesystem::path& dir, std::uint64_t key) {
    char name[32];
    std::snprintf(name, sizeof(name), "vmd_%016llx.bin",
                  static_cast<unsigned long long>(key));
    return dir / name;
}

inline bool read_cached_modeset(const std::filesystem::path& file, const Signal& sig,
                                int k, vmd::ModeSet& out) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return false;
    char magic[4];
    std::uint32_t version = 0, stored_k = 0;
    std::uint64_t n = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&stored_k), sizeof(stored_k));
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!in || std::string(magic, 4) != "VMDC" || version != 1
        || stored_k != static_cast<std::uint32_t>(k) || n != sig.samples.size())
        return false;

    std::uint8_t degenerate = 0;
    std::int32_t iterations = 0;
    double residual = 0.0;
    in.read(reinterpret_cast<char*>(&degenerate), sizeof(degenerate));
    in.read(reinterpret_cast<char*>(&iterations), sizeof(iterations));
    in.read(reinterpret_cast<char*>(&residual), sizeof(residual));

    out.center_freqs.assign(static_cast<std::size_t>(k), 0.0);
    in.read(reinterpret_cast<char*>(out.center_freqs.data()),
            static_cast<std::streamsize>(sizeof(double) * out.center_freqs.size()));
    out.modes.clear();
    for (int i = 0; i < k; ++i) {
        Signal mode;
        mode.samples.assign(n, 0.0);
        in.read(reinterpret_cast<char*>(mode.samples.data()),
                static_cast<std::streamsize>(sizeof(double) * n));
        mode.sample_rate_hz = sig.sample_rate_hz;
        mode.label = sig.label;
        mode.source_id = sig.source_id;
        out.modes.push_back(std::move(mode));
    }
    if (!in) return false;
    out.degenerate_input = degenerate != 0;
    out.iterations_used = iterations;
    out.final_residual = residual;
    return true;
}

inline void write_cached_modeset(const std::filesystem::path& file, const vmd::ModeSet& set) {
    const std::filesystem::path tmp =
        file.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("vmd cache: cannot write " + tmp.string());
        const std::uint32_t version = 1;
        const std::uint32_t k = static_cast<std::uint32_t>(set.modes.size());
        const std::uint64_t n = set.modes.empty() ? 0 : set.modes.front().samples.size();
        const std::uint8_t degenerate = set.degenerate_input ? 1 : 0;
        const std::int32_t iterations = set.iterations_used;
        out.write("VMDC", 4);
        out.write(reinterpret_cast<const char*>(&version), sizeof(version));
        out.write(reinterpret_cast<const char*>(&k), sizeof(k));
        out.write(reinterpret_cast<const char*>(&n), sizeof(n));
        out.write(reinterpret_cast<const char*>(&degenerate), sizeof(degenerate));
        out.write(reinterpret_cast<const char*>(&iterations), sizeof(iterations));
        out.write(reinterpret_cast<const char*>(&set.final_residual), sizeof(double));
        out.write(reinterpret_cast<const char*>(set.center_freqs.data()),
                  static_cast<std::streamsize>(sizeof(double) * set.center_freqs.size()));
        for (const Signal& mode : set.modes)
            out.write(reinterpret_cast<const char*>(mode.samples.data()),
                      static_cast<std::streamsize>(sizeof(double) * mode.samples.size()));
    }
    std::filesystem::rename(tmp, file);
}

} // namespace detail_pipe

// decompose with an optional disk cache keyed by (samples, config).
inline vmd::ModeSet decompose_cached(const Signal& sig, const vmd::Config& cfg,
                                     const Options& opt) {
    if (!opt.cache_dir) return vmd::decompose(sig, cfg);
    std::filesystem::create_directories(*opt.cache_dir);
    const auto file = detail_pipe::cache_path(*opt.cache_dir, detail_pipe::cache_key(sig, cfg));
    vmd::ModeSet set;
    if (detail_pipe::read_cached_modeset(file, sig, cfg.k, set)) return set;
    set = vmd::decompose(sig, cfg);
    detail_pipe::write_cached_modeset(file, set);
    return set;
}

using Dataset = std::map<std::string, SignalCollection>;

inline Dataset load_dataset(const std::filesystem::path& root,
                            const std::vector<std::string>& set_ids,
                            std::vector<std::string>* warnings = nullptr) {
    Dataset data;
    for (const std::string& id : set_ids)
        data.emplace(id, io::load_bonn_set(root / id, id, warnings));
    return data;
}

namespace detail_pipe {

// Feature vectors for every signal of every set of the task, decomposing
// each signal exactly once. table[set][signal][feature] aligned with `kinds`.
struct FeatureTable {
    std::vector<std::string> set_ids;
    std::vector<int> set_class;                                        // per set
    std::vector<std::vector<std::vector<std::vector<double>>>> values; // [set][signal][feature] -> K values
};

inline FeatureTable build_feature_table(const Dataset& data, const TaskSpec& task,
                                        const std::vector<features::FeatureKind>& kinds,
                                        const vmd::Config& vmd_cfg, const Options& opt) {
    FeatureTable table;
    for (const auto& [set_id, cls] : task.class_map) {
        const auto it = data.find(set_id);
        if (it == data.end())
            throw std::runtime_error("task " + task.name + ": dataset has no set " + set_id);
        table.set_ids.push_back(set_id);
        table.set_class.push_back(cls);
        const SignalCollection& coll = it->second;

        std::vector<std::vector<std::vector<double>>> per_signal(coll.signals.size());
        parallel_for(coll.signals.size(), opt.threads, [&](std::size_t i) {
            const vmd::ModeSet modes = decompose_cached(coll.signals[i], vmd_cfg, opt);
            std::vector<std::vector<double>> feats;
            feats.reserve(kinds.size());
            for (features::FeatureKind kind : kinds)
                feats.push_back(features::extract(modes, kind).values);
            per_signal[i] = std::move(feats);
        });
        table.values.push_back(std::move(per_signal));
    }
    return table;
}

struct EvalResult {
    double accuracy_pct = 0.0;
    std::array<double, 2> recall_pct{0.0, 0.0};
};

// Splits each set 80/20, trains one MLP per feature kind on the pooled
// training vectors, majority-votes the per-feature predictions (single
// feature: its prediction stands), and scores the pooled test vectors.
inline EvalResult evaluate_split(const FeatureTable& table,
                                 const std::vector<features::FeatureKind>& kinds,
                                 const SplitSpec& split, std::uint64_t split_salt,
                                 const vmd::Config& vmd_cfg, const mlp::TrainConfig& train_cfg) {
    const std::size_t n_feats = kinds.size();

    std::vector<mlp::LabeledDataset> train_sets(n_feats), test_sets(n_feats);
    for (std::size_t s = 0; s < table.set_ids.size(); ++s) {
        SplitSpec per_set = split;
        if (split.mode == SplitMode::Random)
            per_set.seed = vmdeeg::detail::mix_seed(
                split_salt, std::hash<std::string>{}(table.set_ids[s]));
        const auto [train_idx, test_idx] = io::split_indices(table.values[s].size(), per_set);

        // disjointness is asserted per iteration, not assumed
        std::vector<bool> seen(table.values[s].size(), false);
        for (std::size_t i : train_idx) seen[i] = true;
        for (std::size_t i : test_idx) {
            if (seen[i])
                throw std::logic_error("split produced overlapping train/test indices for set "
                                       + table.set_ids[s]);
            seen[i] = true;
        }
        if (train_idx.size() + test_idx.size() != table.values[s].size())
            throw std::logic_error("split did not cover set " + table.set_ids[s]);
        for (std::size_t f = 0; f < n_feats; ++f) {
            for (std::size_t i : train_idx) {
                train_sets[f].inputs.push_back(table.values[s][i][f]);
                train_sets[f].labels.push_back(table.set_class[s]);
            }
            for (std::size_t i : test_idx) {
                test_sets[f].inputs.push_back(table.values[s][i][f]);
                test_sets[f].labels.push_back(table.set_class[s]);
            }
        }
    }

    // per test signal: one vote per feature
    const std::size_t n_test = test_sets[0].inputs.size();
    std::vector<std::vector<int>> votes(n_test);

    for (std::size_t f = 0; f < n_feats; ++f) {
        mlp::Model model = mlp::init(
            {vmd_cfg.k, 10, 10, 2},
            vmdeeg::detail::mix_seed(train_cfg.seed, 0xA11C0000ULL + f));
        model.norm = mlp::fit_normalizer(train_sets[f]);

        mlp::LabeledDataset normalized = train_sets[f];
        for (auto& x : normalized.inputs) x = mlp::apply_normalizer(model.norm, x);

        mlp::TrainConfig cfg = train_cfg;
        cfg.seed = vmdeeg::detail::mix_seed(train_cfg.seed, 0x5C0FF000ULL + f);
        mlp::train(model, normalized, cfg);

        for (std::size_t i = 0; i < n_test; ++i)
            votes[i].push_back(
                mlp::predict(model, mlp::apply_normalizer(model.norm, test_sets[f].inputs[i])));
    }

    EvalResult res;
    std::array<std::size_t, 2> class_total{0, 0}, class_correct{0, 0};
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n_test; ++i) {
        const int predicted = (n_feats == 3) ? majority_vote(votes[i]) : votes[i][0];
        const int truth = test_sets[0].labels[i];
        ++class_total[static_cast<std::size_t>(truth)];
        if (predicted == truth) {
            ++correct;
            ++class_correct[static_cast<std::size_t>(truth)];
        }
    }
    res.accuracy_pct = 100.0 * static_cast<double>(correct) / static_cast<double>(n_test);
    for (std::size_t c = 0; c < 2; ++c)
        res.recall_pct[c] = class_total[c] == 0
                                ? 0.0
                                : 100.0 * static_cast<double>(class_correct[c])
                                      / static_cast<double>(class_total[c]);
    return res;
}

} // namespace detail_pipe

inline ExperimentReport run_single_feature(const Dataset& data, const TaskSpec& task,
                                           features::FeatureKind kind, const SplitSpec& split,
                                           const vmd::Config& vmd_cfg,
                                           const mlp::TrainConfig& train_cfg,
                                           const Options& opt = {}) {
    const std::vector<features::FeatureKind> kinds{kind};
    const auto table = detail_pipe::build_feature_table(data, task, kinds, vmd_cfg, opt);
    const auto res = detail_pipe::evaluate_split(table, kinds, split, split.seed, vmd_cfg, train_cfg);

    ExperimentReport report;
    report.task = task.name;
    report.feature_kinds = kinds;
    report.rows.push_back({1, res.accuracy_pct, res.recall_pct});
    report.average_accuracy_pct = res.accuracy_pct;
    report.split = split;
    report.base_seed = split.seed;
    report.iterations = 1;
    report.vmd_cfg = vmd_cfg;
    report.train_cfg = train_cfg;
    return report;
}

// Three independent MLPs (SODP area, FODP area, average amplitude) on the
// same split; entropy is left out of the vote.
inline const std::vector<features::FeatureKind>& ranked_feature_kinds() {
    static const std::vector<features::FeatureKind> kinds{
        features::FeatureKind::SodpArea, features::FeatureKind::FodpArea,
        features::FeatureKind::AvgAmplitude};
    return kinds;
}

inline ExperimentReport run_ranked(const Dataset& data, const TaskSpec& task,
                                   const SplitSpec& split, const vmd::Config& vmd_cfg,
                                   const mlp::TrainConfig& train_cfg, const Options& opt = {}) {
    const auto& kinds = ranked_feature_kinds();
    const auto table = detail_pipe::build_feature_table(data, task, kinds, vmd_cfg, opt);
    const auto res = detail_pipe::evaluate_split(table, kinds, split, split.seed, vmd_cfg, train_cfg);

    ExperimentReport report;
    report.task = task.name;
    report.feature_kinds = kinds;
    report.rows.push_back({1, res.accuracy_pct, res.recall_pct});
    report.average_accuracy_pct = res.accuracy_pct;
    report.split = split;
    report.base_seed = split.seed;
    report.iterations = 1;
    report.vmd_cfg = vmd_cfg;
    report.train_cfg = train_cfg;
    return report;
}

// Iteration i (1-based row) re-randomizes both the per-set splits and the
// MLP initialization from seed base_seed + i - 1.
inline ExperimentReport run_randomized_trials(const Dataset& data, const TaskSpec& task,
                                              int iterations, std::uint64_t base_seed,
                                              const vmd::Config& vmd_cfg,
                                              const mlp::TrainConfig& train_cfg,
                                              const Options& opt = {},
                                              std::size_t train_count = 80) {
    if (iterations < 1) throw std::invalid_argument("run_randomized_trials: iterations must be >= 1");
    const auto& kinds = ranked_feature_kinds();
    const auto table = detail_pipe::build_feature_table(data, task, kinds, vmd_cfg, opt);

    ExperimentReport report;
    report.task = task.name;
    report.feature_kinds = kinds;
    report.split = SplitSpec{SplitMode::Random, train_count, base_seed};
    report.base_seed = base_seed;
    report.iterations = iterations;
    report.vmd_cfg = vmd_cfg;
    report.train_cfg = train_cfg;

    double acc_sum = 0.0;
    for (int i = 0; i < iterations; ++i) {
        const std::uint64_t iter_seed = base_seed + static_cast<std::uint64_t>(i);
        SplitSpec split{SplitMode::Random, train_count, iter_seed};
        mlp::TrainConfig cfg = train_cfg;
        cfg.seed = vmdeeg::detail::mix_seed(iter_seed, 0x7EA11ULL);
        const auto res = detail_pipe::evaluate_split(table, kinds, split, iter_seed, vmd_cfg, cfg);
        report.rows.push_back({i + 1, res.accuracy_pct, res.recall_pct});
        acc_sum += res.accuracy_pct;
    }
    report.average_accuracy_pct = acc_sum / static_cast<double>(iterations);
    return report;
}

// ---- report serialization ----------------------------------------------

namespace detail_pipe {

inline std::string fmt_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

} // namespace detail_pipe

inline void export_report_csv(const ExperimentReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_report: cannot write " + path.string());
    out << "iteration,accuracy_pct,recall_class0_pct,recall_class1_pct\n";
    for (const IterationRow& row : report.rows)
        out << row.iteration << ',' << detail_pipe::fmt_pct(row.accuracy_pct) << ','
            << detail_pipe::fmt_pct(row.recall_pct[0]) << ','
            << detail_pipe::fmt_pct(row.recall_pct[1]) << '\n';
    if (!report.rows.empty())
        out << "average," << detail_pipe::fmt_pct(report.average_accuracy_pct) << ",,\n";
}

inline nlohmann::json report_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["task"] = report.task;
    std::vector<std::string> kind_names;
    for (auto k : report.feature_kinds) kind_names.push_back(features::to_string(k));
    j["feature_kinds"] = kind_names;
    j["rows"] = nlohmann::json::array();
    for (const IterationRow& row : report.rows)
        j["rows"].push_back({{"iteration", row.iteration},
                             {"accuracy_pct", row.accuracy_pct},
                             {"recall_pct", row.recall_pct}});
    j["average_accuracy_pct"] = report.average_accuracy_pct;
    j["split"] = {{"mode", report.split.mode == SplitMode::Random ? "random" : "fixed-prefix"},
                  {"train_count", report.split.train_count},
                  {"seed", report.split.seed}};
    j["base_seed"] = report.base_seed;
    j["iterations"] = report.iterations;
    j["vmd"] = {{"k", report.vmd_cfg.k},
                {"alpha", report.vmd_cfg.alpha},
                {"tau", report.vmd_cfg.tau},
                {"tol", report.vmd_cfg.tol},
                {"max_iters", report.vmd_cfg.max_iters},
                {"init", static_cast<int>(report.vmd_cfg.init)},
                {"init_seed", report.vmd_cfg.init_seed},
                {"mirror", report.vmd_cfg.mirror}};
    j["train"] = {{"learning_rate", report.train_cfg.learning_rate},
                  {"epochs", report.train_cfg.epochs},
                  {"seed", report.train_cfg.seed},
                  {"full_batch", report.train_cfg.full_batch},
                  {"shuffle", report.train_cfg.shuffle}};
    return j;
}

inline void export_report_json(const ExperimentReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_report: cannot write " + path.string());
    out << report_to_json(report).dump(2) << "\n";
}

// Writes <path> as CSV plus a JSON snapshot alongside it (.json extension).
inline void export_report(const ExperimentReport& report, const std::filesystem::path& path) {
    export_report_csv(report, path);
    std::filesystem::path json_path = path;
    json_path.replace_extension(".json");
    export_report_json(report, json_path);
}

inline ExperimentReport report_from_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("report_from_json: cannot read " + path.string());
    nlohmann::json j;
    in >> j;

    ExperimentReport r;
    r.task = j.at("task").get<std::string>();
    for (const auto& name : j.at("feature_kinds"))
        r.feature_kinds.push_back(features::feature_kind_from_string(name.get<std::string>()));
    for (const auto& row : j.at("rows")) {
        IterationRow ir;
        ir.iteration = row.at("iteration").get<int>();
        ir.accuracy_pct = row.at("accuracy_pct").get<double>();
        ir.recall_pct = row.at("recall_pct").get<std::array<double, 2>>();
        r.rows.push_back(ir);
    }
    r.average_accuracy_pct = j.at("average_accuracy_pct").get<double>();
    r.split.mode = j.at("split").at("mode").get<std::string>() == "random" ? SplitMode::Random
                                                                           : SplitMode::FixedPrefix;
    r.split.train_count = j.at("split").at("train_count").get<std::size_t>();
    r.split.seed = j.at("split").at("seed").get<std::uint64_t>();
    r.base_seed = j.at("base_seed").get<std::uint64_t>();
    r.iterations = j.at("iterations").get<int>();
    r.vmd_cfg.k = j.at("vmd").at("k").get<int>();
    r.vmd_cfg.alpha = j.at("vmd").at("alpha").get<double>();
    r.vmd_cfg.tau = j.at("vmd").at("tau").get<double>();
    r.vmd_cfg.tol = j.at("vmd").at("tol").get<double>();
    r.vmd_cfg.max_iters = j.at("vmd").at("max_iters").get<int>();
    r.vmd_cfg.init = static_cast<vmd::OmegaInit>(j.at("vmd").at("init").get<int>());
    r.vmd_cfg.init_seed = j.at("vmd").at("init_seed").get<std::uint64_t>();
    r.vmd_cfg.mirror = j.at("vmd").at("mirror").get<bool>();
    r.train_cfg.learning_rate = j.at("train").at("learning_rate").get<double>();
    r.train_cfg.epochs = j.at("train").at("epochs").get<int>();
    r.train_cfg.seed = j.at("train").at("seed").get<std::uint64_t>();
    r.train_cfg.full_batch = j.at("train").at("full_batch").get<bool>();
    r.train_cfg.shuffle = j.at("train").at("shuffle").get<bool>();
    return r;
}

// ---- figure-style data dumps ---------------------------------------------

// Time-domain modes: columns mode,t,value.
inline std::filesystem::path dump_modes(const Signal& sig, const vmd::Config& cfg,
                                        const std::filesystem::path& dir,
                                        const Options& opt = {}) {
    std::filesystem::create_directories(dir);
    const vmd::ModeSet set = decompose_cached(sig, cfg, opt);
    const auto path = dir / (sig.source_id + "_modes.csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_modes: cannot write " + path.string());
    out << "mode,t,value\n";
    out.precision(17);
    for (std::size_t m = 0; m < set.modes.size(); ++m)
        for (std::size_t t = 0; t < set.modes[m].samples.size(); ++t)
            out << m << ',' << t << ',' << set.modes[m].samples[t] << '\n';
    return path;
}

// One-sided mode spectra: columns mode,freq_hz,power.
inline std::filesystem::path dump_spectra(const Signal& sig, const vmd::Config& cfg,
                                          const std::filesystem::path& dir,
                                          const Options& opt = {}) {
    std::filesystem::create_directories(dir);
    const vmd::ModeSet set = decompose_cached(sig, cfg, opt);
    const auto spectra = vmd::mode_spectra(set);
    const auto path = dir / (sig.source_id + "_spectra.csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_spectra: cannot write " + path.string());
    out << "mode,freq_hz,power\n";
    out.precision(17);
    for (std::size_t m = 0; m < spectra.size(); ++m)
        for (std::size_t k = 0; k < spectra[m].powers.size(); ++k)
            out << m << ',' << static_cast<double>(k) * spectra[m].bin_spacing_hz << ','
                << spectra[m].powers[k] << '\n';
    return path;
}

// Difference-plot point clouds per mode: columns mode,n,x,y.
inline std::filesystem::path dump_sodp(const Signal& sig, const vmd::Config& cfg, int lag,
                                       const std::filesystem::path& dir,
                                       const Options& opt = {}) {
    std::filesystem::create_directories(dir);
    const vmd::ModeSet set = decompose_cached(sig, cfg, opt);
    const auto path = dir / (sig.source_id + "_sodp_lag" + std::to_string(lag) + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_sodp: cannot write " + path.string());
    out << "mode,n,x,y\n";
    out.precision(17);
    for (std::size_t m = 0; m < set.modes.size(); ++m) {
        const auto pts = features::difference_points(set.modes[m].samples, lag);
        for (std::size_t n = 0; n < pts.xs.size(); ++n)
            out << m << ',' << n << ',' << pts.xs[n] << ',' << pts.ys[n] << '\n';
    }
    return path;
}

} // namespace vmdeeg::pipeline
