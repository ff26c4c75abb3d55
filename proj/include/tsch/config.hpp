#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsch/flow.hpp"
#include "tsch/hop_sequence.hpp"
#include "tsch/schedule.hpp"
#include "tsch/topology.hpp"

namespace tsch {

// Flow as written in the config: the phase may be a literal slot count or
// "random", resolved from the run seed; the route is derived from the tree.
struct FlowSpec {
    NodeId source = 0;
    NodeId destination = 0;
    std::uint64_t period_slots = 1;
    std::optional<std::uint64_t> phase_slots; // nullopt = seeded random
};

struct NetworkConfig {
    SimParams params;
    Topology topology;
    SlotframeSchedule schedule;
    std::vector<FlowSpec> flows;
    HopSequence hop;
};

struct Diagnostic {
    enum class Code {
        not_a_tree,
        bad_cell,
        cell_collision,
        unscheduled_routed_edge,
        invalid_route,
        bad_flow,
        bad_params,
        bad_hop_sequence,
    };
    Code code;
    std::string message;
};

const char* to_string(Diagnostic::Code code);

// Empty iff the configuration is self-consistent: the topology is a tree,
// cells sit inside the matrix on real edges without (slot, channel)
// collisions, every flow route is a valid tree path, and every routed edge
// has at least one cell.
std::vector<Diagnostic> validate(const NetworkConfig& config);

// Routes and phases resolved; ConfigError when validate() is non-empty.
std::vector<Flow> resolve_flows(const NetworkConfig& config);

NetworkConfig load_config(const std::string& path);
NetworkConfig parse_config(const std::string& json_text);

} // namespace tsch
