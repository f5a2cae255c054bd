// Command-line front end: decompose signals, extract features, run the
// classification experiments, and dump figure-style CSV data.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vmdeeg/vmdeeg.hpp"

namespace {

using namespace vmdeeg;

// JSON config support for CLI11: top-level keys set main options, one nested
// object per subcommand sets that subcommand's flags. Command-line flags
// override config values.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        nlohmann::json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_lnames().empty() && opt->get_configurable()) {
                const std::string name = opt->get_lnames()[0];
                if (opt->get_type_size() != 0) {
                    if (opt->count() == 1) j[name] = opt->results().at(0);
                    else if (opt->count() > 1) j[name] = opt->results();
                    else if (default_also && !opt->get_default_str().empty())
                        j[name] = opt->get_default_str();
                } else if (opt->count() > 0) {
                    j[name] = opt->count() > 1 ? nlohmann::json(opt->count())
                                               : nlohmann::json(true);
                }
            }
        }
        for (const CLI::App* sub : app->get_subcommands({}))
            j[sub->get_name()] = nlohmann::json::parse(to_config(sub, default_also, false, ""));
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        input >> j;
        return from_json(j);
    }

  private:
    std::vector<CLI::ConfigItem> from_json(const nlohmann::json& j, const std::string& name = "",
                                           std::vector<std::string> prefix = {}) const {
        std::vector<CLI::ConfigItem> results;
        if (j.is_object()) {
            for (auto item = j.begin(); item != j.end(); ++item) {
                auto copy = prefix;
                if (!name.empty()) copy.push_back(name);
                auto sub = from_json(*item, item.key(), copy);
                results.insert(results.end(), sub.begin(), sub.end());
            }
        } else if (!name.empty()) {
            results.emplace_back();
            CLI::ConfigItem& res = results.back();
            res.name = name;
            res.parents = std::move(prefix);
            if (j.is_boolean()) {
                res.inputs = {j.get<bool>() ? "true" : "false"};
            } else if (j.is_string()) {
                res.inputs = {j.get<std::string>()};
            } else if (j.is_number() || j.is_array()) {
                if (j.is_array()) {
                    for (const auto& e : j) res.inputs.push_back(e.dump());
                } else {
                    res.inputs = {j.dump()};
                }
            } else {
                throw CLI::ConversionError("unsupported JSON value for key " + name);
            }
        } else {
            throw CLI::ConversionError("top-level JSON config must be an object");
        }
        return results;
    }
};

struct VmdFlags {
    int k = 5;
    double alpha = 2000.0;
    double tau = 0.0;
    double tol = 1e-6;
    int max_iters = 500;
    bool no_mirror = false;
    std::string init = "uniform";
    std::uint64_t init_seed = 0;

    vmd::Config config() const {
        vmd::Config cfg;
        cfg.k = k;
        cfg.alpha = alpha;
        cfg.tau = tau;
        cfg.tol = tol;
        cfg.max_iters = max_iters;
        cfg.mirror = !no_mirror;
        if (init == "uniform") cfg.init = vmd::OmegaInit::Uniform;
        else if (init == "zero") cfg.init = vmd::OmegaInit::Zero;
        else if (init == "random") cfg.init = vmd::OmegaInit::SeededRandom;
        else throw CLI::ValidationError("--init must be uniform, zero or random");
        cfg.init_seed = init_seed;
        return cfg;
    }
};

void add_vmd_flags(CLI::App* cmd, VmdFlags& f) {
    cmd->add_option("--k", f.k, "number of modes")->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "bandwidth penalty")->capture_default_str();
    cmd->add_option("--tau", f.tau, "dual ascent step (0 disables)")->capture_default_str();
    cmd->add_option("--tol", f.tol, "convergence tolerance")->capture_default_str();
    cmd->add_option("--max-iters", f.max_iters, "iteration cap")->capture_default_str();
    cmd->add_flag("--no-mirror", f.no_mirror, "disable mirror boundary extension");
    cmd->add_option("--init", f.init, "center frequency init: uniform|zero|random")
        ->capture_default_str();
    cmd->add_option("--init-seed", f.init_seed, "seed for random init")->capture_default_str();
}

pipeline::Options make_options(const std::string& cache_dir, unsigned threads) {
    pipeline::Options opt;
    if (!cache_dir.empty()) opt.cache_dir = cache_dir;
    opt.threads = threads;
    return opt;
}

void print_modeset_summary(const vmd::ModeSet& set) {
    std::cout << "modes: " << set.modes.size() << ", iterations: " << set.iterations_used
              << ", stopping metric: " << set.final_residual << "\n";
    for (std::size_t i = 0; i < set.center_freqs.size(); ++i) {
        const double hz = set.center_freqs[i] * set.modes[i].sample_rate_hz;
        std::cout << "  mode " << i << ": center " << set.center_freqs[i]
                  << " cycles/sample (" << hz << " Hz)\n";
    }
    if (set.degenerate_input) std::cout << "  note: all-zero input, modes are zero\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"VMD-based EEG signal decomposition and seizure classification"};
    app.require_subcommand(1);
    app.fallthrough(); // lets --config appear after the subcommand
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file (flags override file values)");

    // decompose -------------------------------------------------------------
    auto* cmd_decompose = app.add_subcommand("decompose", "decompose a signal into modes");
    std::string dec_file, dec_out = ".", dec_cache;
    VmdFlags dec_vmd;
    cmd_decompose->add_option("file", dec_file, "signal file, one sample per line")->required();
    add_vmd_flags(cmd_decompose, dec_vmd);
    cmd_decompose->add_option("--out", dec_out, "output directory for the mode CSV")
        ->capture_default_str();
    cmd_decompose->add_option("--cache", dec_cache, "decomposition cache directory");

    // features ---------------------------------------------------------------
    auto* cmd_features = app.add_subcommand("features", "per-mode feature values for a signal");
    std::string feat_file, feat_kind, feat_variant = "standard";
    VmdFlags feat_vmd;
    cmd_features->add_option("file", feat_file, "signal file")->required();
    cmd_features->add_option("--kind", feat_kind, "sodp|fodp|renyi|amp")->required();
    cmd_features
        ->add_option("--ellipse-variant", feat_variant, "standard|paper D formula")
        ->capture_default_str();
    add_vmd_flags(cmd_features, feat_vmd);

    // run ---------------------------------------------------------------------
    auto* cmd_run = app.add_subcommand("run", "run a classification experiment");
    std::string run_task, run_data, run_split = "fixed", run_feature = "ranked";
    std::string run_report, run_cache;
    std::uint64_t run_seed = 42;
    int run_iterations = 24;
    std::size_t run_train_count = 80;
    unsigned run_threads = 0;
    double run_lr = 0.1;
    int run_epochs = 1000;
    VmdFlags run_vmd;
    cmd_run->add_option("--task", run_task,
                        "normal-vs-seizure|seizure-vs-seizure-free|seizure-vs-non-seizure")
        ->required();
    cmd_run->add_option("--data", run_data, "dataset root containing Z/O/N/F/S directories")
        ->required();
    cmd_run->add_option("--split", run_split, "fixed|random")->capture_default_str();
    cmd_run->add_option("--seed", run_seed, "base seed for random splits")->capture_default_str();
    cmd_run->add_option("--iterations", run_iterations, "randomized trial count")
        ->capture_default_str();
    cmd_run->add_option("--report", run_report, "report CSV path (JSON written alongside)")
        ->required();
    cmd_run->add_option("--feature", run_feature, "ranked|sodp|fodp|renyi|amp")
        ->capture_default_str();
    cmd_run->add_option("--train-count", run_train_count, "training signals per set")
        ->capture_default_str();
    cmd_run->add_option("--lr", run_lr, "MLP learning rate")->capture_default_str();
    cmd_run->add_option("--epochs", run_epochs, "MLP training epochs")->capture_default_str();
    cmd_run->add_option("--threads", run_threads, "worker threads (0 = auto)")
        ->capture_default_str();
    cmd_run->add_option("--cache", run_cache, "decomposition cache directory");
    add_vmd_flags(cmd_run, run_vmd);

    // dump-sodp ----------------------------------------------------------------
    auto* cmd_sodp = app.add_subcommand("dump-sodp", "difference-plot point cloud per mode");
    std::string sodp_file, sodp_out = ".", sodp_cache;
    int sodp_lag = 1;
    VmdFlags sodp_vmd;
    cmd_sodp->add_option("file", sodp_file, "signal file")->required();
    cmd_sodp->add_option("--lag", sodp_lag, "1 = SODP, 2 = FODP")->capture_default_str();
    cmd_sodp->add_option("--out", sodp_out, "output directory")->capture_default_str();
    cmd_sodp->add_option("--cache", sodp_cache, "decomposition cache directory");
    add_vmd_flags(cmd_sodp, sodp_vmd);

    // dump-spectra ---------------------------------------------------------------
    auto* cmd_spectra = app.add_subcommand("dump-spectra", "one-sided PSD per mode");
    std::string spec_file, spec_out = ".", spec_cache;
    VmdFlags spec_vmd;
    cmd_spectra->add_option("file", spec_file, "signal file")->required();
    cmd_spectra->add_option("--out", spec_out, "output directory")->capture_default_str();
    cmd_spectra->add_option("--cache", spec_cache, "decomposition cache directory");
    add_vmd_flags(cmd_spectra, spec_vmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_decompose->parsed()) {
            const Signal sig = io::load_signal(dec_file);
            const auto cfg = dec_vmd.config();
            const auto opt = make_options(dec_cache, 0);
            const auto path = pipeline::dump_modes(sig, cfg, dec_out, opt);
            print_modeset_summary(pipeline::decompose_cached(sig, cfg, opt));
            std::cout << "modes written to " << path.string() << "\n";
        } else if (cmd_features->parsed()) {
            const Signal sig = io::load_signal(feat_file);
            const auto kind = features::feature_kind_from_string(feat_kind);
            features::EllipseVariant variant;
            if (feat_variant == "standard") variant = features::EllipseVariant::Standard;
            else if (feat_variant == "paper") variant = features::EllipseVariant::PaperLiteral;
            else throw CLI::ValidationError("--ellipse-variant must be standard or paper");

            const auto set = vmd::decompose(sig, feat_vmd.config());
            const auto fv = features::extract(set, kind, variant);
            std::cout << "mode,value\n";
            std::cout.precision(17);
            for (std::size_t i = 0; i < fv.values.size(); ++i)
                std::cout << i << ',' << fv.values[i] << '\n';
        } else if (cmd_run->parsed()) {
            const auto task = pipeline::TaskSpec::by_name(run_task);
            std::vector<std::string> set_ids;
            for (const auto& [id, cls] : task.class_map) set_ids.push_back(id);
            const auto data = pipeline::load_dataset(run_data, set_ids);
            const auto opt = make_options(run_cache, run_threads);

            mlp::TrainConfig train_cfg;
            train_cfg.learning_rate = run_lr;
            train_cfg.epochs = run_epochs;
            train_cfg.seed = run_seed;

            pipeline::ExperimentReport report;
            if (run_split == "fixed") {
                const SplitSpec split{SplitMode::FixedPrefix, run_train_count, 0};
                if (run_feature == "ranked") {
                    report = pipeline::run_ranked(data, task, split, run_vmd.config(),
                                                  train_cfg, opt);
                } else {
                    report = pipeline::run_single_feature(
                        data, task, features::feature_kind_from_string(run_feature), split,
                        run_vmd.config(), train_cfg, opt);
                }
            } else if (run_split == "random") {
                if (run_feature != "ranked")
                    throw CLI::ValidationError(
                        "randomized trials use the ranked three-feature vote");
                report = pipeline::run_randomized_trials(data, task, run_iterations, run_seed,
                                                         run_vmd.config(), train_cfg, opt,
                                                         run_train_count);
            } else {
                throw CLI::ValidationError("--split must be fixed or random");
            }

            for (const auto& row : report.rows)
                std::cout << "iteration " << row.iteration << ": " << row.accuracy_pct
                          << "% (recall " << row.recall_pct[0] << "% / " << row.recall_pct[1]
                          << "%)\n";
            std::cout << "average: " << report.average_accuracy_pct << "%\n";
            pipeline::export_report(report, run_report);
            std::cout << "report written to " << run_report << " (+ .json)\n";
        } else if (cmd_sodp->parsed()) {
            const Signal sig = io::load_signal(sodp_file);
            const auto path = pipeline::dump_sodp(sig, sodp_vmd.config(), sodp_lag, sodp_out,
                                                  make_options(sodp_cache, 0));
            std::cout << "points written to " << path.string() << "\n";
        } else if (cmd_spectra->parsed()) {
            const Signal sig = io::load_signal(spec_file);
            const auto path = pipeline::dump_spectra(sig, spec_vmd.config(), spec_out,
                                                     make_options(spec_cache, 0));
            std::cout << "spectra written to " << path.string() << "\n";
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
