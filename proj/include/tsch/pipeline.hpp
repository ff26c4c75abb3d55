#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsch/autocorr.hpp"
#include "tsch/config.hpp"
#include "tsch/energy.hpp"
#include "tsch/mlp.hpp"
#include "tsch/report.hpp"
#include "tsch/sim.hpp"

namespace tsch {

// Stages exchange data through files only, so any stage can be rerun from
// its recorded inputs and reproduce its artifacts byte for byte.

struct SimulateOptions {
    std::string config_path;
    std::optional<std::uint64_t> duration_slots;
    std::optional<double> duration_days; // 86400-second days, 365-day years
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

struct SimulateResult {
    std::vector<std::string> trace_files;
    std::string manifest_file;
    std::uint64_t duration_slots = 0;
};

SimulateResult run_simulate(const SimulateOptions& opts);

struct TrainOptions {
    std::string trace_path;
    int window_len = 890;
    TrainConfig train;
    std::optional<std::uint64_t> train_samples;
    std::optional<double> train_fraction; // default 0.8 when neither is given
    std::string out_checkpoint;
};

struct TrainResult {
    std::string checkpoint_file;
    std::string log_file;
    TrainLog log;
};

TrainResult run_train(const TrainOptions& opts);

struct EvaluateOptions {
    std::string trace_path;
    std::string checkpoint_path;
    std::optional<int> window_len;               // must match the checkpoint when given
    std::optional<std::uint64_t> train_samples;  // split boundary
    std::optional<double> train_fraction;
    std::optional<std::uint64_t> test_samples;   // cap; default: rest of the trace
    double threshold = 0.5;
    EnergyProfile profile = kOpenMoteB;
    std::string profile_name = "openmote-b";
    std::size_t max_lag = kFullLagRange;
    int level = 0; // annotation for the report
    std::string out_dir;
};

struct EvaluateResult {
    LinkReport report;
    std::string report_file;
};

EvaluateResult run_evaluate(const EvaluateOptions& opts);

struct PipelineOptions {
    std::string config_path;
    std::vector<Edge> links; // empty = the default analyzed path
    bool all_links = false;
    std::optional<std::uint64_t> duration_slots;
    std::optional<double> duration_days;
    std::optional<std::uint64_t> seed;
    double train_fraction = 0.8;
    int window_len = 890;
    TrainConfig train;
    double threshold = 0.5;
    EnergyProfile profile = kOpenMoteB;
    std::string profile_name = "openmote-b";
    std::size_t max_lag = kFullLagRange;
    int jobs = 0; // 0 = hardware concurrency
    std::string out_dir;
};

struct PipelineResult {
    std::vector<LinkReport> reports; // in link order
    std::string summary_json;
    std::string metrics_csv_file;
    std::string energy_csv_file;
    std::string manifest_file;
};

// simulate -> per-link (train -> evaluate) -> combined level tables. Links
// default to the analyzed path 16-24, 24-28, 28-30, 30-31 when present.
PipelineResult run_pipeline(const PipelineOptions& opts);

// The four-link path the shipped network highlights, filtered to links that
// exist in the given schedule.
std::vector<Edge> default_links(const NetworkConfig& config);

EnergyProfile parse_profile(const std::string& spec, std::string* name_out);

} // namespace tsch
