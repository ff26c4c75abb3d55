#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tsch/config.hpp"
#include "tsch/trace.hpp"

namespace tsch {

struct FlowCounts {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t in_flight = 0;
};

// Slot-event counts per node; multiply by an EnergyProfile to get joules.
struct NodeActivity {
    std::uint64_t tx_slots = 0;   // transmitted a frame (and received its ACK slot)
    std::uint64_t rx_slots = 0;   // received a frame (and sent its ACK)
    std::uint64_t idle_slots = 0; // listened on a scheduled cell nobody used
};

struct SimOutput {
    std::uint64_t duration_slots = 0;
    std::uint64_t t_matrix_us = 0;
    std::map<Edge, LinkTrace> traces;
    std::vector<FlowCounts> flows;
    std::map<NodeId, NodeActivity> nodes;
    std::map<Edge, std::size_t> queue_high_water;
};

// Slot-by-slot deterministic simulation of `params.duration_slots` slots.
// Randomness is drawn from counter streams keyed by (seed, edge, occurrence),
// so results are bit-identical for a given configuration regardless of how
// the loop is organized. ConfigError when validate() reports diagnostics.
SimOutput run(const NetworkConfig& config, const SimParams& params);

inline SimOutput run(const NetworkConfig& config) { return run(config, config.params); }

// DomainError if the edge has no scheduled cell.
const LinkTrace& trace_of(const SimOutput& output, const Edge& edge);

} // namespace tsch
