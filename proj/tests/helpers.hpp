#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tsch/bitvec.hpp"
#include "tsch/config.hpp"

namespace testutil {

// Scratch directory under the build tree, wiped per construction.
class TempDir {
public:
    explicit TempDir(const std::string& name)
        : path_(std::filesystem::temp_directory_path() / ("tschsleep_" + name)) {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline tsch::BitVec random_bits(std::size_t n, std::uint64_t seed, double p_one = 0.5) {
    std::mt19937_64 gen(seed);
    std::bernoulli_distribution coin(p_one);
    tsch::BitVec out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(coin(gen));
    return out;
}

inline std::vector<int> unpack(const tsch::BitVec& b) {
    std::vector<int> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i] ? 1 : 0;
    return out;
}

// Two-node network: one flow A->B with a single cell. Handy for the
// hand-checkable simulation cases.
inline tsch::NetworkConfig single_link_config(std::uint64_t period, std::uint64_t phase,
                                              int cell_slot, double eps_frame, double eps_ack,
                                              std::uint64_t duration, std::uint64_t seed) {
    tsch::NetworkConfig c;
    c.params.n_slot = 101;
    c.params.t_slot_ms = 20.0;
    c.params.n_try = 16;
    c.params.eps_frame = eps_frame;
    c.params.eps_ack = eps_ack;
    c.params.duration_slots = duration;
    c.params.seed = seed;
    c.topology = tsch::Topology(2, {{1, 2}});
    c.schedule.n_slot = c.params.n_slot;
    c.schedule.cells = {tsch::ScheduledCell{cell_slot, 0, {1, 2}}};
    c.flows = {tsch::FlowSpec{1, 2, period, phase}};
    return c;
}

// The shipped network; tests locate it via a path passed down from CMake or
// relative to the working directory.
inline std::string data_file(const std::string& name) {
    if (const char* env = std::getenv("TSCHSLEEP_DATA"))
        return (std::filesystem::path(env) / name).string();
    for (const char* prefix : {"data", "../data", "../../data"}) {
        const auto candidate = std::filesystem::path(prefix) / name;
        if (std::filesystem::exists(candidate)) return candidate.string();
    }
    return name;
}

} // namespace testutil
