// Black-box checks of the command-line tool: exit codes, artifact counts,
// and error-stream messages. The binary path arrives via TSCHSLEEP_BIN.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "tsch/trace.hpp"

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

#define CLI_CHECK(cond)                                                          \
    do {                                                                         \
        if (!(cond)) {                                                           \
            std::cerr << "FAILED at " << __LINE__ << ": " #cond "\n";            \
            g_failures++;                                                        \
        }                                                                        \
    } while (0)

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args, const testutil::TempDir& tmp) {
    const char* bin = std::getenv("TSCHSLEEP_BIN");
    if (!bin) {
        std::cerr << "TSCHSLEEP_BIN not set\n";
        std::exit(1);
    }
    const std::string out_file = tmp.file("stdout.txt");
    const std::string err_file = tmp.file("stderr.txt");
    const std::string cmd =
        std::string(bin) + " " + args + " >" + out_file + " 2>" + err_file;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p);
        std::ostringstream oss;
        oss << in.rdbuf();
        return oss.str();
    };
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::size_t count_files(const fs::path& dir) {
    if (!fs::exists(dir)) return 0;
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file()) n++;
    return n;
}

} // namespace

int main() {
    const std::string config = testutil::data_file("paper_fig3.json");

    { // missing config -> usage error with a clear message
        testutil::TempDir tmp("cli_missing");
        const RunResult r = run_cli("simulate --config nope.json --out " + tmp.file("o"), tmp);
        CLI_CHECK(r.exit_code == 2);
        CLI_CHECK(r.err.find("config not found") != std::string::npos);
    }
    { // short simulate run: 30 traces, one per Table II link
        testutil::TempDir tmp("cli_sim");
        const RunResult r = run_cli("simulate --config " + config +
                                        " --duration-slots 5050 --seed 1 --out " + tmp.file("o"),
                                    tmp);
        CLI_CHECK(r.exit_code == 0);
        CLI_CHECK(count_files(tmp.path() / "o" / "traces") == 30);
        CLI_CHECK(fs::exists(tmp.path() / "o" / "manifest.json"));
    }
    { // zero-duration run still succeeds with empty traces
        testutil::TempDir tmp("cli_zero");
        const RunResult r = run_cli("simulate --config " + config +
                                        " --duration-days 0 --out " + tmp.file("o"),
                                    tmp);
        CLI_CHECK(r.exit_code == 0);
        CLI_CHECK(count_files(tmp.path() / "o" / "traces") == 30);
        const tsch::LinkTrace t =
            tsch::read_trace((tmp.path() / "o" / "traces" / "trace_16_24.tslt").string());
        CLI_CHECK(t.size() == 0);
    }
    { // --epochs 0 is rejected as a usage error
        testutil::TempDir tmp("cli_epochs");
        tsch::write_trace(tsch::LinkTrace({1, 2}, 2020000, testutil::random_bits(100, 1, 0.3)),
                          tmp.file("t.tslt"));
        const RunResult r = run_cli("train --trace " + tmp.file("t.tslt") + " --out " +
                                        tmp.file("m.mlp") + " --epochs 0",
                                    tmp);
        CLI_CHECK(r.exit_code == 2);
    }
    { // tiny train: --np 10 over 12 samples with the whole trace as train split
        testutil::TempDir tmp("cli_tiny");
        tsch::write_trace(tsch::LinkTrace({1, 2}, 2020000, testutil::random_bits(12, 2, 0.5)),
                          tmp.file("t.tslt"));
        const RunResult r = run_cli("train --trace " + tmp.file("t.tslt") + " --out " +
                                        tmp.file("m.mlp") +
                                        " --np 10 --train-fraction 1.0 --epochs 2",
                                    tmp);
        CLI_CHECK(r.exit_code == 0);
        CLI_CHECK(fs::exists(tmp.file("m.mlp")));
        CLI_CHECK(fs::exists(tmp.file("m.mlp.train.json")));
    }
    { // train + evaluate round trip, including the stm profile and a bad one
        testutil::TempDir tmp("cli_eval");
        tsch::write_trace(tsch::LinkTrace({1, 2}, 2020000, testutil::random_bits(3000, 3, 0.2)),
                          tmp.file("t.tslt"));
        RunResult r = run_cli("train --trace " + tmp.file("t.tslt") + " --out " +
                                  tmp.file("m.mlp") + " --np 100 --epochs 2",
                              tmp);
        CLI_CHECK(r.exit_code == 0);
        r = run_cli("evaluate --trace " + tmp.file("t.tslt") + " --checkpoint " +
                        tmp.file("m.mlp") + " --out " + tmp.file("rep") +
                        " --profile openmote-stm",
                    tmp);
        CLI_CHECK(r.exit_code == 0);
        CLI_CHECK(fs::exists(tmp.path() / "rep" / "link_1_2.json"));
        r = run_cli("evaluate --trace " + tmp.file("t.tslt") + " --checkpoint " +
                        tmp.file("m.mlp") + " --out " + tmp.file("rep2") + " --profile toaster",
                    tmp);
        CLI_CHECK(r.exit_code == 2);
        r = run_cli("evaluate --trace " + tmp.file("t.tslt") + " --checkpoint " +
                        tmp.file("m.mlp") + " --out " + tmp.file("rep3") + " --np 890",
                    tmp);
        CLI_CHECK(r.exit_code == 2); // checkpoint was trained with np=100
    }
    { // unknown pipeline link lists the valid ones
        testutil::TempDir tmp("cli_links");
        const RunResult r = run_cli("pipeline --config " + config +
                                        " --links 99-100 --duration-slots 5050 --out " +
                                        tmp.file("o"),
                                    tmp);
        CLI_CHECK(r.exit_code == 2);
        CLI_CHECK(r.err.find("16-24") != std::string::npos);
    }
    { // no subcommand is a usage error
        testutil::TempDir tmp("cli_none");
        const RunResult r = run_cli("", tmp);
        CLI_CHECK(r.exit_code == 2);
    }

    if (g_failures == 0) {
        std::cout << "cli tests passed\n";
        return 0;
    }
    std::cout << g_failures << " cli checks failed\n";
    return 1;
}
