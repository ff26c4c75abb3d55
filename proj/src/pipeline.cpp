#include "tsch/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "tsch/errors.hpp"
#include "tsch/manifest.hpp"
#include "tsch/window.hpp"

namespace tsch {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

std::string trace_filename(const Edge& e) {
    return "trace_" + std::to_string(e.from) + "_" + std::to_string(e.to) + ".tslt";
}

std::uint64_t days_to_slots(double days, const SimParams& params) {
    const double slots = days * 86400.0 * 1000.0 / params.t_slot_ms;
    return static_cast<std::uint64_t>(std::llround(slots));
}

// Split boundary for a trace of n samples: an explicit sample count wins,
// otherwise floor(fraction * n); the default fraction is 0.8.
std::uint64_t train_split(std::uint64_t n, const std::optional<std::uint64_t>& samples,
                          const std::optional<double>& fraction) {
    if (samples && fraction) throw ConfigError("give train samples or a fraction, not both");
    if (samples) {
        if (*samples > n)
            throw ConfigError("train split of " + std::to_string(*samples) +
                              " samples exceeds the trace length " + std::to_string(n));
        return *samples;
    }
    const double f = fraction.value_or(0.8);
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("train fraction must be in [0,1]");
    return static_cast<std::uint64_t>(std::floor(f * static_cast<double>(n)));
}

} // namespace

EnergyProfile parse_profile(const std::string& spec, std::string* name_out) {
    if (spec == "openmote-b") {
        if (name_out) *name_out = spec;
        return kOpenMoteB;
    }
    if (spec == "openmote-stm") {
        if (name_out) *name_out = spec;
        return kOpenMoteStm;
    }
    if (spec.rfind("custom:", 0) == 0) {
        const std::string path = spec.substr(7);
        json j;
        try {
            j = json::parse(read_file(path));
        } catch (const json::exception& e) {
            throw ConfigError("bad profile file " + path + ": " + e.what());
        }
        EnergyProfile p;
        p.e_tx = j.at("e_tx_uj").get<double>() * 1e-6;
        p.e_rx = j.at("e_rx_uj").get<double>() * 1e-6;
        p.e_listen = j.at("e_listen_uj").get<double>() * 1e-6;
        if (!(p.e_tx > 0 && p.e_rx > 0 && p.e_listen > 0))
            throw ConfigError("profile energies must be positive: " + path);
        if (name_out) *name_out = "custom:" + fs::path(path).filename().string();
        return p;
    }
    throw ConfigError("unknown profile '" + spec +
                      "' (expected openmote-b, openmote-stm, or custom:<path>)");
}

SimulateResult run_simulate(const SimulateOptions& opts) {
    if (!fs::exists(opts.config_path))
        throw ConfigError("config not found: " + opts.config_path);
    const std::string config_text = read_file(opts.config_path);
    NetworkConfig config = parse_config(config_text);
    if (opts.seed) config.params.seed = *opts.seed;
    if (opts.duration_slots && opts.duration_days)
        throw ConfigError("give a duration in slots or days, not both");
    if (opts.duration_slots) config.params.duration_slots = *opts.duration_slots;
    if (opts.duration_days) config.params.duration_slots = days_to_slots(*opts.duration_days, config.params);

    const SimOutput output = run(config); // ConfigError on diagnostics

    const fs::path out_dir(opts.out_dir);
    const fs::path trace_dir = out_dir / "traces";
    fs::create_directories(trace_dir);

    SimulateResult result;
    result.duration_slots = output.duration_slots;
    std::vector<ArtifactRef> artifacts;
    json jtraces = json::array();
    for (const auto& [edge, trace] : output.traces) {
        const std::string rel = "traces/" + trace_filename(edge);
        const std::string full = (out_dir / rel).string();
        write_trace(trace, full);
        result.trace_files.push_back(full);
        artifacts.push_back({rel, hash_file(full)});
        jtraces.push_back({{"path", rel},
                           {"from", edge.from},
                           {"to", edge.to},
                           {"samples", trace.size()},
                           {"ones", trace.ones()}});
    }

    json manifest;
    manifest["kind"] = "simulate";
    manifest["created"] = utc_timestamp();
    manifest["config"] = {{"path", opts.config_path},
                          {"hash", hash_bytes({reinterpret_cast<const std::uint8_t*>(config_text.data()),
                                               config_text.size()})}};
    manifest["params"] = {{"n_slot", config.params.n_slot},
                          {"t_slot_ms", config.params.t_slot_ms},
                          {"n_try", config.params.n_try},
                          {"eps_frame", config.params.eps_frame},
                          {"eps_ack", config.params.eps_ack},
                          {"duration_slots", config.params.duration_slots},
                          {"seed", config.params.seed}};
    json jflows = json::array();
    for (std::size_t i = 0; i < output.flows.size(); ++i) {
        const FlowCounts& c = output.flows[i];
        jflows.push_back({{"flow", i},
                          {"generated", c.generated},
                          {"delivered", c.delivered},
                          {"dropped", c.dropped},
                          {"in_flight", c.in_flight}});
    }
    manifest["flows"] = jflows;
    json jnodes = json::object();
    for (const auto& [node, counts] : output.nodes) {
        const EnergyTally t = tally(counts, kOpenMoteB);
        jnodes[std::to_string(node)] = {{"tx_slots", counts.tx_slots},
                                        {"rx_slots", counts.rx_slots},
                                        {"idle_slots", counts.idle_slots},
                                        {"tx_j", t.tx_j},
                                        {"rx_j", t.rx_j},
                                        {"idle_j", t.idle_j}};
    }
    manifest["node_energy_openmote_b"] = jnodes;
    json jqueues = json::object();
    for (const auto& [edge, hw] : output.queue_high_water) jqueues[edge.name()] = hw;
    manifest["queue_high_water"] = jqueues;
    manifest["traces"] = jtraces;
    manifest["artifacts"] = to_json(artifacts);

    result.manifest_file = (out_dir / "manifest.json").string();
    write_json_file(result.manifest_file, manifest);
    return result;
}

TrainResult run_train(const TrainOptions& opts) {
    const LinkTrace trace = read_trace(opts.trace_path);
    if (opts.window_len < 1) throw ConfigError("--np must be >= 1");
    const auto need = static_cast<std::uint64_t>(opts.window_len) + 1;

    const std::uint64_t train_len =
        train_split(trace.size(), opts.train_samples, opts.train_fraction);
    if (train_len < need)
        throw ConfigError("training split has " + std::to_string(train_len) +
                          " samples; training needs at least n_p + 1 = " + std::to_string(need));

    const auto [train_trace, _] = split(trace, train_len, 0);
    const WindowDataset data(train_trace, WindowSpec{opts.window_len});

    TrainConfig cfg = opts.train;
    TrainLog log;
    const MlpModel model = train(data, cfg, &log);

    const fs::path ckpt(opts.out_checkpoint);
    if (ckpt.has_parent_path()) fs::create_directories(ckpt.parent_path());
    save_checkpoint(model, cfg, ckpt.string());

    // Paths inside artifacts stay relative so reruns into a different root
    // are byte-identical.
    const fs::path log_dir = ckpt.has_parent_path() ? ckpt.parent_path() : fs::path(".");
    json jlog;
    jlog["kind"] = "train";
    jlog["trace"] = fs::proximate(opts.trace_path, log_dir).generic_string();
    jlog["link"] = {{"from", trace.edge().from}, {"to", trace.edge().to}};
    jlog["window_len"] = opts.window_len;
    jlog["train_samples"] = train_len;
    jlog["window_count"] = log.window_count;
    jlog["seed"] = cfg.seed;
    json jepochs = json::array();
    for (const EpochStats& e : log.epochs) {
        json je = {{"epoch", e.epoch},
                   {"learning_rate", e.learning_rate},
                   {"mean_batch_loss", e.mean_batch_loss}};
        if (std::isfinite(e.train_mse)) je["train_mse"] = e.train_mse;
        jepochs.push_back(je);
    }
    jlog["epochs"] = jepochs;

    TrainResult result;
    result.checkpoint_file = ckpt.string();
    result.log_file = ckpt.string() + ".train.json";
    result.log = log;
    write_json_file(result.log_file, jlog);
    return result;
}

EvaluateResult run_evaluate(const EvaluateOptions& opts) {
    const LinkTrace trace = read_trace(opts.trace_path);
    const Checkpoint ckpt = load_checkpoint(opts.checkpoint_path);
    const auto n_p = static_cast<std::uint64_t>(ckpt.model.input_size());
    if (opts.window_len && static_cast<std::uint64_t>(*opts.window_len) != n_p)
        throw ConfigError("--np " + std::to_string(*opts.window_len) +
                          " does not match the checkpoint input size " + std::to_string(n_p));

    const std::uint64_t train_len =
        train_split(trace.size(), opts.train_samples, opts.train_fraction);
    std::uint64_t test_len = trace.size() - train_len;
    if (opts.test_samples) {
        if (*opts.test_samples > test_len)
            throw ConfigError("test split of " + std::to_string(*opts.test_samples) +
                              " samples exceeds the " + std::to_string(test_len) +
                              " samples after the train split");
        test_len = *opts.test_samples;
    }
    if (test_len < n_p + 1)
        throw ConfigError("test segment has " + std::to_string(test_len) +
                          " samples; evaluation needs at least n_p + 1 = " +
                          std::to_string(n_p + 1));

    const LinkTrace test_trace = trace.slice(train_len, test_len);
    const WindowDataset data(test_trace, WindowSpec{static_cast<int>(n_p)});

    const Eigen::VectorXd score_vec = scores(ckpt.model, data);
    Eigen::VectorXd targets(score_vec.size());
    for (Eigen::Index i = 0; i < targets.size(); ++i)
        targets[i] = data.target(static_cast<std::size_t>(i)) ? 1.0 : 0.0;

    LinkReport report;
    report.link = trace.edge();
    report.level = opts.level;
    report.test_samples = test_len;
    report.window_count = data.count();
    report.window_len = static_cast<int>(n_p);
    report.threshold = opts.threshold;
    report.t_matrix_s = trace.t_matrix_s();
    report.cm = confusion(score_vec, targets, opts.threshold);
    report.metric = metrics(report.cm);
    const bool both_classes = report.cm.positives() > 0 && report.cm.fp + report.cm.tn > 0;
    report.auc = both_classes ? std::optional<double>(auc(score_vec, targets)) : std::nullopt;
    const AutocorrelationResult ac = autocorrelation(test_trace, opts.max_lag);
    report.rho_max = ac.rho_max;
    report.rho_max_lag = ac.rho_max_lag;
    report.energy = energy(report.cm, opts.profile, test_len, trace.t_matrix_s());
    report.profile_name = opts.profile_name;

    EvaluateResult result;
    result.report = report;
    if (!opts.out_dir.empty()) {
        fs::create_directories(opts.out_dir);
        const std::string stem = "link_" + std::to_string(trace.edge().from) + "_" +
                                 std::to_string(trace.edge().to);
        json j = to_json(report);
        j["trace"] = fs::proximate(opts.trace_path, opts.out_dir).generic_string();
        j["checkpoint"] = fs::proximate(opts.checkpoint_path, opts.out_dir).generic_string();
        result.report_file = (fs::path(opts.out_dir) / (stem + ".json")).string();
        write_json_file(result.report_file, j);
        write_text_file((fs::path(opts.out_dir) / (stem + "_metrics.csv")).string(),
                        metrics_csv({report}));
        write_text_file((fs::path(opts.out_dir) / (stem + "_energy.csv")).string(),
                        energy_csv({report}));
    }
    return result;
}

std::vector<Edge> default_links(const NetworkConfig& config) {
    const std::vector<Edge> path = {{16, 24}, {24, 28}, {28, 30}, {30, 31}};
    std::vector<Edge> out;
    for (const Edge& e : path)
        if (config.schedule.schedules(e)) out.push_back(e);
    return out;
}

PipelineResult run_pipeline(const PipelineOptions& opts) {
    const NetworkConfig config = load_config(opts.config_path);

    // Resolve the link list against the schedule before any heavy work.
    std::vector<Edge> links;
    if (opts.all_links) {
        for (const ScheduledCell& c : config.schedule.cells_by_slot())
            if (std::find(links.begin(), links.end(), c.link) == links.end())
                links.push_back(c.link);
    } else if (!opts.links.empty()) {
        for (const Edge& e : opts.links) {
            if (!config.schedule.schedules(e)) {
                std::ostringstream oss;
                oss << "link " << e.name() << " has no scheduled cell; valid links:";
                for (const ScheduledCell& c : config.schedule.cells_by_slot())
                    oss << ' ' << c.link.name();
                throw ConfigError(oss.str());
            }
            links.push_back(e);
        }
    } else {
        links = default_links(config);
        if (links.empty())
            throw ConfigError("the default analyzed path is not in this schedule; use --links");
    }

    const fs::path out_dir(opts.out_dir);
    fs::create_directories(out_dir);

    SimulateOptions sim_opts;
    sim_opts.config_path = opts.config_path;
    sim_opts.duration_slots = opts.duration_slots;
    sim_opts.duration_days = opts.duration_days;
    sim_opts.seed = opts.seed;
    sim_opts.out_dir = opts.out_dir;
    const SimulateResult sim_result = run_simulate(sim_opts);

    const std::uint64_t seed = opts.seed.value_or(config.params.seed);

    struct LinkJob {
        Edge edge;
        int level = 0;
        std::string trace_file;
        TrainResult train;
        EvaluateResult eval;
        std::exception_ptr error;
    };
    std::vector<LinkJob> jobs(links.size());
    for (std::size_t i = 0; i < links.size(); ++i) {
        jobs[i].edge = links[i];
        jobs[i].level = config.topology.edge_level(links[i]);
        jobs[i].trace_file = (out_dir / "traces" / trace_filename(links[i])).string();
    }

    auto run_link = [&](LinkJob& job) {
        try {
            TrainOptions t;
            t.trace_path = job.trace_file;
            t.window_len = opts.window_len;
            t.train = opts.train;
            t.train.seed = seed;
            t.train_fraction = opts.train_fraction;
            t.out_checkpoint =
                (out_dir / "checkpoints" / ("link_" + std::to_string(job.edge.from) + "_" +
                                            std::to_string(job.edge.to) + ".mlp"))
                    .string();
            job.train = run_train(t);

            EvaluateOptions ev;
            ev.trace_path = job.trace_file;
            ev.checkpoint_path = job.train.checkpoint_file;
            ev.train_fraction = opts.train_fraction;
            ev.threshold = opts.threshold;
            ev.profile = opts.profile;
            ev.profile_name = opts.profile_name;
            ev.max_lag = opts.max_lag;
            ev.level = job.level;
            ev.out_dir = (out_dir / "reports").string();
            job.eval = run_evaluate(ev);
        } catch (...) {
            job.error = std::current_exception();
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        std::min<std::size_t>(jobs.size(), opts.jobs > 0 ? static_cast<unsigned>(opts.jobs) : hw);
    if (workers <= 1) {
        for (LinkJob& job : jobs) run_link(job);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1))
                    run_link(jobs[i]);
            });
        for (std::thread& th : pool) th.join();
    }
    for (const LinkJob& job : jobs)
        if (job.error) std::rethrow_exception(job.error);

    PipelineResult result;
    for (const LinkJob& job : jobs) result.reports.push_back(job.eval.report);

    // Level-vs-indices tables; one row per analyzed link.
    json summary;
    summary["kind"] = "pipeline-summary";
    summary["config"] = opts.config_path;
    summary["seed"] = seed;
    summary["duration_slots"] = sim_result.duration_slots;
    summary["train_fraction"] = opts.train_fraction;
    summary["threshold"] = opts.threshold;
    summary["window_len"] = opts.window_len;
    json rows = json::array();
    for (const LinkReport& r : result.reports) rows.push_back(to_json(r));
    summary["links"] = rows;

    result.summary_json = (out_dir / "summary.json").string();
    write_json_file(result.summary_json, summary);
    result.metrics_csv_file = (out_dir / "summary_metrics.csv").string();
    write_text_file(result.metrics_csv_file, metrics_csv(result.reports));
    result.energy_csv_file = (out_dir / "summary_energy.csv").string();
    write_text_file(result.energy_csv_file, energy_csv(result.reports));

    std::vector<ArtifactRef> artifacts;
    auto add_artifact = [&](const std::string& full) {
        artifacts.push_back({fs::relative(full, out_dir).string(), hash_file(full)});
    };
    for (const std::string& f : sim_result.trace_files) add_artifact(f);
    for (const LinkJob& job : jobs) {
        add_artifact(job.train.checkpoint_file);
        add_artifact(job.train.log_file);
        add_artifact(job.eval.report_file);
    }
    add_artifact(result.summary_json);
    add_artifact(result.metrics_csv_file);
    add_artifact(result.energy_csv_file);

    json manifest;
    manifest["kind"] = "pipeline";
    manifest["created"] = utc_timestamp();
    manifest["config"] = {{"path", opts.config_path}, {"hash", hash_file(opts.config_path)}};
    manifest["seed"] = seed;
    manifest["stages"] = {{"simulate", {{"manifest", "manifest.json"}}},
                          {"links", json::array()}};
    for (const LinkJob& job : jobs)
        manifest["stages"]["links"].push_back(
            {{"link", job.edge.name()},
             {"level", job.level},
             {"trace", fs::relative(job.trace_file, out_dir).string()},
             {"checkpoint", fs::relative(job.train.checkpoint_file, out_dir).string()},
             {"report", fs::relative(job.eval.report_file, out_dir).string()}});
    manifest["artifacts"] = to_json(artifacts);
    result.manifest_file = (out_dir / "pipeline_manifest.json").string();
    write_json_file(result.manifest_file, manifest);
    return result;
}

} // namespace tsch
