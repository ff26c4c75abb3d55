// tschsleep: simulate a TSCH sensor network, learn per-link slot usage, and
// quantify the idle-listening energy a sleep predictor removes.
//
// Subcommands: simulate, train, evaluate, pipeline. Exit codes: 0 success,
// 1 runtime failure, 2 usage/configuration error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tsch/errors.hpp"
#include "tsch/pipeline.hpp"

namespace {

std::string default_out_root() {
    if (const char* env = std::getenv("TSCHSLEEP_OUT")) return env;
    return "runs";
}

std::optional<tsch::Edge> parse_link(const std::string& text) {
    const auto dash = text.find('-');
    if (dash == std::string::npos) return std::nullopt;
    try {
        const int from = std::stoi(text.substr(0, dash));
        const int to = std::stoi(text.substr(dash + 1));
        if (from < 0 || from > 0xffff || to < 0 || to > 0xffff) return std::nullopt;
        return tsch::Edge{static_cast<tsch::NodeId>(from), static_cast<tsch::NodeId>(to)};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"TSCH slot-usage prediction and idle-listening energy analysis"};
    app.require_subcommand(1);

    // --- simulate ---
    auto* sim = app.add_subcommand("simulate", "Run the network simulation and write traces");
    std::string sim_config;
    std::optional<double> sim_days;
    std::optional<std::uint64_t> sim_slots, sim_seed;
    std::string sim_out = default_out_root() + "/simulate";
    sim->add_option("--config", sim_config, "Network configuration (JSON)")->required();
    sim->add_option("--duration-days", sim_days, "Simulated span in 86400 s days");
    sim->add_option("--duration-slots", sim_slots, "Simulated span in slots");
    sim->add_option("--seed", sim_seed, "Override the config seed");
    sim->add_option("--out", sim_out, "Output directory");

    // --- train ---
    auto* tr = app.add_subcommand("train", "Train a slot-usage predictor from a trace");
    std::string tr_trace, tr_out;
    int tr_np = 890, tr_epochs = 20, tr_batch = 32, tr_hidden = 8;
    double tr_lr = 0.01, tr_decay = 0.5;
    std::uint64_t tr_seed = 1;
    std::optional<std::uint64_t> tr_train_samples;
    std::optional<double> tr_train_fraction;
    bool tr_log_mse = false;
    tr->add_option("--trace", tr_trace, "Input trace file")->required();
    tr->add_option("--out", tr_out, "Checkpoint path")->required();
    tr->add_option("--np", tr_np, "Window length (samples)")->check(CLI::PositiveNumber);
    tr->add_option("--epochs", tr_epochs, "Training epochs")->check(CLI::PositiveNumber);
    tr->add_option("--batch-size", tr_batch, "Batch size")->check(CLI::PositiveNumber);
    tr->add_option("--lr", tr_lr, "Initial learning rate");
    tr->add_option("--lr-decay", tr_decay, "Per-epoch learning-rate factor");
    tr->add_option("--hidden", tr_hidden, "Hidden layer width")->check(CLI::PositiveNumber);
    tr->add_option("--seed", tr_seed, "Training seed");
    tr->add_option("--train-samples", tr_train_samples, "Training split length (samples)");
    tr->add_option("--train-fraction", tr_train_fraction, "Training split fraction (default 0.8)");
    tr->add_flag("--log-mse", tr_log_mse, "Record full training MSE each epoch");

    // --- evaluate ---
    auto* ev = app.add_subcommand("evaluate", "Evaluate a checkpoint on a test segment");
    std::string ev_trace, ev_ckpt;
    std::string ev_out = default_out_root() + "/evaluate";
    std::optional<int> ev_np;
    std::optional<std::uint64_t> ev_train_samples, ev_test_samples;
    std::optional<double> ev_train_fraction;
    double ev_threshold = 0.5;
    std::string ev_profile = "openmote-b";
    std::optional<std::uint64_t> ev_max_lag;
    ev->add_option("--trace", ev_trace, "Input trace file")->required();
    ev->add_option("--checkpoint", ev_ckpt, "Model checkpoint")->required();
    ev->add_option("--out", ev_out, "Output directory");
    ev->add_option("--np", ev_np, "Window length; must match the checkpoint");
    ev->add_option("--train-samples", ev_train_samples, "Samples to skip (the train split)");
    ev->add_option("--train-fraction", ev_train_fraction, "Train split fraction (default 0.8)");
    ev->add_option("--test-samples", ev_test_samples, "Test segment length (default: the rest)");
    ev->add_option("--threshold", ev_threshold, "Classification threshold");
    ev->add_option("--profile", ev_profile, "openmote-b | openmote-stm | custom:<path>");
    ev->add_option("--max-lag", ev_max_lag, "Autocorrelation lag cap (default: full range)");

    // --- pipeline ---
    auto* pl = app.add_subcommand("pipeline", "simulate + train + evaluate per link");
    std::string pl_config;
    std::vector<std::string> pl_links;
    std::optional<double> pl_days;
    std::optional<std::uint64_t> pl_slots, pl_seed;
    double pl_fraction = 0.8, pl_threshold = 0.5, pl_lr = 0.01, pl_decay = 0.5;
    int pl_np = 890, pl_epochs = 20, pl_batch = 32, pl_hidden = 8, pl_jobs = 0;
    std::string pl_profile = "openmote-b";
    std::optional<std::uint64_t> pl_max_lag;
    std::string pl_out = default_out_root() + "/pipeline";
    pl->add_option("--config", pl_config, "Network configuration (JSON)")->required();
    pl->add_option("--links", pl_links,
                   "Links to analyze as from-to (default: 16-24 24-28 28-30 30-31) or 'all'")
        ->delimiter(',');
    pl->add_option("--duration-days", pl_days, "Simulated span in days");
    pl->add_option("--duration-slots", pl_slots, "Simulated span in slots");
    pl->add_option("--seed", pl_seed, "Seed for simulation and training");
    pl->add_option("--train-fraction", pl_fraction, "Contiguous train split fraction");
    pl->add_option("--np", pl_np, "Window length")->check(CLI::PositiveNumber);
    pl->add_option("--epochs", pl_epochs, "Training epochs")->check(CLI::PositiveNumber);
    pl->add_option("--batch-size", pl_batch, "Batch size")->check(CLI::PositiveNumber);
    pl->add_option("--lr", pl_lr, "Initial learning rate");
    pl->add_option("--lr-decay", pl_decay, "Per-epoch learning-rate factor");
    pl->add_option("--hidden", pl_hidden, "Hidden layer width")->check(CLI::PositiveNumber);
    pl->add_option("--threshold", pl_threshold, "Classification threshold");
    pl->add_option("--profile", pl_profile, "openmote-b | openmote-stm | custom:<path>");
    pl->add_option("--max-lag", pl_max_lag, "Autocorrelation lag cap");
    pl->add_option("--jobs", pl_jobs, "Concurrent link stages (0 = hardware)");
    pl->add_option("--out", pl_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sim) {
            tsch::SimulateOptions opts;
            opts.config_path = sim_config;
            opts.duration_days = sim_days;
            opts.duration_slots = sim_slots;
            opts.seed = sim_seed;
            opts.out_dir = sim_out;
            const tsch::SimulateResult r = tsch::run_simulate(opts);
            std::cout << "wrote " << r.trace_files.size() << " trace files and "
                      << r.manifest_file << " (" << r.duration_slots << " slots)\n";
        } else if (*tr) {
            tsch::TrainOptions opts;
            opts.trace_path = tr_trace;
            opts.window_len = tr_np;
            opts.train.epochs = tr_epochs;
            opts.train.batch_size = tr_batch;
            opts.train.learning_rate = tr_lr;
            opts.train.lr_decay = tr_decay;
            opts.train.hidden = tr_hidden;
            opts.train.seed = tr_seed;
            opts.train.log_train_mse = tr_log_mse;
            opts.train_samples = tr_train_samples;
            opts.train_fraction = tr_train_fraction;
            opts.out_checkpoint = tr_out;
            const tsch::TrainResult r = tsch::run_train(opts);
            std::cout << "wrote " << r.checkpoint_file << " (" << r.log.window_count
                      << " training windows); log: " << r.log_file << "\n";
        } else if (*ev) {
            tsch::EvaluateOptions opts;
            opts.trace_path = ev_trace;
            opts.checkpoint_path = ev_ckpt;
            opts.window_len = ev_np;
            opts.train_samples = ev_train_samples;
            opts.train_fraction = ev_train_fraction;
            opts.test_samples = ev_test_samples;
            opts.threshold = ev_threshold;
            opts.profile = tsch::parse_profile(ev_profile, &opts.profile_name);
            if (ev_max_lag) opts.max_lag = *ev_max_lag;
            opts.out_dir = ev_out;
            const tsch::EvaluateResult r = tsch::run_evaluate(opts);
            std::cout << "wrote " << r.report_file << "\n";
        } else if (*pl) {
            tsch::PipelineOptions opts;
            opts.config_path = pl_config;
            for (const std::string& text : pl_links) {
                if (text == "all") {
                    opts.all_links = true;
                    continue;
                }
                const auto edge = parse_link(text);
                if (!edge) throw tsch::ConfigError("bad link '" + text + "' (expected from-to)");
                opts.links.push_back(*edge);
            }
            opts.duration_days = pl_days;
            opts.duration_slots = pl_slots;
            opts.seed = pl_seed;
            opts.train_fraction = pl_fraction;
            opts.window_len = pl_np;
            opts.train.epochs = pl_epochs;
            opts.train.batch_size = pl_batch;
            opts.train.learning_rate = pl_lr;
            opts.train.lr_decay = pl_decay;
            opts.train.hidden = pl_hidden;
            opts.threshold = pl_threshold;
            opts.profile = tsch::parse_profile(pl_profile, &opts.profile_name);
            if (pl_max_lag) opts.max_lag = *pl_max_lag;
            opts.jobs = pl_jobs;
            opts.out_dir = pl_out;
            const tsch::PipelineResult r = tsch::run_pipeline(opts);
            std::cout << "analyzed " << r.reports.size() << " links; summary: "
                      << r.summary_json << "\n";
            for (const tsch::LinkReport& rep : r.reports)
                std::cout << "  " << rep.link.name() << " level " << rep.level << " rho_max "
                          << rep.rho_max << "\n";
        }
    } catch (const tsch::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
