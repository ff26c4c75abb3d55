#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "helpers.hpp"
#include "tsch/errors.hpp"
#include "tsch/manifest.hpp"
#include "tsch/pipeline.hpp"
#include "tsch/report.hpp"

using namespace tsch;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string write_single_link_config(const testutil::TempDir& tmp, std::uint64_t duration,
                                     std::uint64_t period = 1313, std::uint64_t seed = 5) {
    json j;
    j["params"] = {{"n_slot", 101}, {"t_slot_ms", 20.0}, {"n_try", 16},
                   {"eps_frame", 0.874}, {"eps_ack", 0.92},
                   {"duration_slots", duration}, {"seed", seed}};
    j["topology"] = {{"root", 2}, {"edges", json::array({json::array({1, 2})})}};
    j["schedule"] = {{"cells", json::array({json{{"slot", 9}, {"channel", 0}, {"from", 1}, {"to", 2}}})}};
    j["flows"] = json::array({json{{"source", 1}, {"destination", 2}, {"period_slots", period}}});
    const std::string path = tmp.file("net.json");
    write_json_file(path, j);
    return path;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    json j;
    in >> j;
    return j;
}

} // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("simulate stage writes traces and a verifiable manifest") {
    testutil::TempDir tmp("pl_sim");
    SimulateOptions opts;
    opts.config_path = testutil::data_file("paper_fig3.json");
    opts.duration_slots = 101 * 50;
    opts.out_dir = tmp.file("run");
    const SimulateResult r = run_simulate(opts);
    CHECK(r.trace_files.size() == 30);
    for (const std::string& f : r.trace_files) CHECK(fs::exists(f));
    CHECK(verify_artifacts(r.manifest_file).empty());

    SUBCASE("tampering shows up in verification") {
        std::ofstream(r.trace_files[0], std::ios::app) << "x";
        CHECK_FALSE(verify_artifacts(r.manifest_file).empty());
    }
    SUBCASE("rerunning reproduces every byte") {
        std::map<std::string, std::string> before;
        for (const std::string& f : r.trace_files) before[f] = hash_file(f);
        const SimulateResult again = run_simulate(opts);
        for (const std::string& f : again.trace_files) CHECK(hash_file(f) == before.at(f));
    }
}

TEST_CASE("simulate honors day-based durations and zero spans") {
    testutil::TempDir tmp("pl_days");
    SimulateOptions opts;
    opts.config_path = write_single_link_config(tmp, 0);
    opts.out_dir = tmp.file("out");

    SUBCASE("zero-day run is empty but valid") {
        opts.duration_days = 0.0;
        const SimulateResult r = run_simulate(opts);
        REQUIRE(r.trace_files.size() == 1);
        CHECK(read_trace(r.trace_files[0]).size() == 0);
    }
    SUBCASE("a day is 86400 seconds of 20 ms slots") {
        opts.duration_days = 1.0;
        const SimulateResult r = run_simulate(opts);
        CHECK(r.duration_slots == 4320000);
    }
    SUBCASE("slots and days are mutually exclusive") {
        opts.duration_days = 1.0;
        opts.duration_slots = 5;
        CHECK_THROWS_AS(run_simulate(opts), ConfigError);
    }
}

TEST_CASE("train stage writes a checkpoint and a log") {
    testutil::TempDir tmp("pl_train");
    LinkTrace trace({1, 2}, 2020000, testutil::random_bits(2000, 3, 0.2));
    const std::string trace_path = tmp.file("t.tslt");
    write_trace(trace, trace_path);

    TrainOptions opts;
    opts.trace_path = trace_path;
    opts.window_len = 890;
    opts.train.epochs = 2;
    opts.train.seed = 9;
    opts.train_fraction = 1.0;
    opts.out_checkpoint = tmp.file("m.mlp");
    const TrainResult r = run_train(opts);

    const Checkpoint ck = load_checkpoint(r.checkpoint_file);
    CHECK(ck.model.parameter_count() == 7137); // 890*8 + 8 + 8 + 1
    const json log = read_json(r.log_file);
    CHECK(log.at("epochs").size() == 2);
    CHECK(log.at("window_count").get<std::size_t>() == 2000 - 890);

    SUBCASE("tiny window on a tiny trace still trains") {
        LinkTrace small({1, 2}, 2020000, testutil::random_bits(12, 4, 0.5));
        const std::string small_path = tmp.file("small.tslt");
        write_trace(small, small_path);
        TrainOptions o2 = opts;
        o2.trace_path = small_path;
        o2.window_len = 10;
        o2.out_checkpoint = tmp.file("small.mlp");
        const TrainResult r2 = run_train(o2);
        CHECK(read_json(r2.log_file).at("window_count").get<std::size_t>() == 2);
    }
    SUBCASE("short traces name the required minimum") {
        TrainOptions bad = opts;
        bad.train_fraction = 0.1; // 200 samples < 891
        try {
            run_train(bad);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("891") != std::string::npos);
        }
    }
}

TEST_CASE("evaluate stage checks dimensions and split bounds") {
    testutil::TempDir tmp("pl_eval");
    LinkTrace trace({1, 2}, 2020000, testutil::random_bits(4000, 8, 0.15));
    const std::string trace_path = tmp.file("t.tslt");
    write_trace(trace, trace_path);

    TrainOptions topts;
    topts.trace_path = trace_path;
    topts.window_len = 100;
    topts.train.epochs = 2;
    topts.train_fraction = 0.8;
    topts.out_checkpoint = tmp.file("m.mlp");
    run_train(topts);

    EvaluateOptions eopts;
    eopts.trace_path = trace_path;
    eopts.checkpoint_path = tmp.file("m.mlp");
    eopts.train_fraction = 0.8;
    eopts.out_dir = tmp.file("reports");
    const EvaluateResult r = run_evaluate(eopts);
    CHECK(r.report.test_samples == 800);
    CHECK(r.report.window_count == 700);
    CHECK(r.report.cm.total() == 700);
    CHECK(fs::exists(r.report_file));

    const json j = read_json(r.report_file);
    CHECK(j.at("confusion").at("tp").get<std::uint64_t>() == r.report.cm.tp);
    CHECK(j.at("energy").at("profile") == "openmote-b");

    SUBCASE("window-length mismatch") {
        EvaluateOptions bad = eopts;
        bad.window_len = 890;
        CHECK_THROWS_AS(run_evaluate(bad), ConfigError);
    }
    SUBCASE("test segment shorter than a window") {
        EvaluateOptions bad = eopts;
        bad.test_samples = 100;
        CHECK_THROWS_AS(run_evaluate(bad), ConfigError);
    }
    SUBCASE("alternate profile changes only the energy scale") {
        EvaluateOptions stm = eopts;
        stm.profile = kOpenMoteStm;
        stm.profile_name = "openmote-stm";
        stm.out_dir.clear();
        const EvaluateResult r2 = run_evaluate(stm);
        CHECK(r2.report.cm == r.report.cm);
        CHECK(r2.report.energy.p_tx / r.report.energy.p_tx ==
              doctest::Approx(485.7 / 266.0));
    }
}

TEST_CASE("profiles parse and reject unknowns") {
    std::string name;
    parse_profile("openmote-b", &name);
    CHECK(name == "openmote-b");
    CHECK_THROWS_AS(parse_profile("laptop", &name), ConfigError);

    testutil::TempDir tmp("prof");
    write_json_file(tmp.file("p.json"),
                    json{{"e_tx_uj", 100.0}, {"e_rx_uj", 120.0}, {"e_listen_uj", 50.0}});
    const EnergyProfile p = parse_profile("custom:" + tmp.file("p.json"), &name);
    CHECK(p.e_listen == doctest::Approx(50e-6));
    CHECK(name.rfind("custom:", 0) == 0);
}

TEST_CASE("end-to-end pipeline on a small network") {
    testutil::TempDir tmp("pl_e2e");
    PipelineOptions opts;
    opts.config_path = write_single_link_config(tmp, 101 * 4000, 707);
    opts.links = {{1, 2}};
    opts.window_len = 100;
    opts.train.epochs = 3;
    opts.train_fraction = 0.8;
    opts.out_dir = tmp.file("run");
    const PipelineResult r = run_pipeline(opts);
    REQUIRE(r.reports.size() == 1);
    CHECK(r.reports[0].level == 1);
    CHECK(fs::exists(r.summary_json));
    CHECK(fs::exists(r.metrics_csv_file));
    CHECK(fs::exists(r.energy_csv_file));
    CHECK(verify_artifacts(r.manifest_file).empty());

    // The summary CSV carries one header and one row.
    std::ifstream csv(r.metrics_csv_file);
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) lines++;
    CHECK(lines == 2);

    SUBCASE("unknown links are rejected with the valid set") {
        PipelineOptions bad = opts;
        bad.links = {{3, 4}};
        try {
            run_pipeline(bad);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("1-2") != std::string::npos);
        }
    }
    SUBCASE("reruns are byte-identical, including after deleting intermediates") {
        std::map<std::string, std::string> hashes;
        for (const auto& d : {"traces", "checkpoints", "reports"})
            for (const auto& entry : fs::recursive_directory_iterator(fs::path(opts.out_dir) / d))
                if (entry.is_regular_file())
                    hashes[entry.path().string()] = hash_file(entry.path().string());
        fs::remove_all(fs::path(opts.out_dir) / "traces");
        fs::remove_all(fs::path(opts.out_dir) / "checkpoints");
        fs::remove_all(fs::path(opts.out_dir) / "reports");
        run_pipeline(opts);
        for (const auto& [path, hash] : hashes) CHECK(hash_file(path) == hash);
    }
}

TEST_CASE("default links follow the highlighted path") {
    const NetworkConfig config = load_config(testutil::data_file("paper_fig3.json"));
    const std::vector<Edge> links = default_links(config);
    REQUIRE(links.size() == 4);
    CHECK(links[0] == Edge{16, 24});
    CHECK(links[3] == Edge{30, 31});
}

TEST_SUITE_END();
