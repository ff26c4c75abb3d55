#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tsch/errors.hpp"
#include "tsch/types.hpp"

namespace tsch {

// Periodic traffic source with its resolved route through the tree.
struct Flow {
    NodeId source = 0;
    NodeId destination = 0;
    std::uint64_t period_slots = 1;
    std::uint64_t phase_slots = 0;
    std::vector<NodeId> route; // source ... destination

    std::size_t hop_count() const { return route.empty() ? 0 : route.size() - 1; }
    Edge hop(std::size_t i) const { return Edge{route[i], route[i + 1]}; }
};

// 1-based position of `edge` along the flow's route: the hop out of the
// source is level 1.
inline int link_level(const Edge& edge, const Flow& flow) {
    for (std::size_t i = 0; i + 1 < flow.route.size(); ++i)
        if (flow.hop(i) == edge) return static_cast<int>(i) + 1;
    throw DomainError("edge " + edge.name() + " is not on the flow route");
}

struct SimParams {
    int n_slot = 101;
    double t_slot_ms = 20.0;
    int n_try = 16;
    double eps_frame = 0.874;
    double eps_ack = 0.92;
    std::uint64_t duration_slots = 0;
    std::uint64_t seed = 1;

    std::uint64_t t_matrix_us() const {
        return static_cast<std::uint64_t>(std::llround(n_slot * t_slot_ms * 1000.0));
    }
    double t_matrix_s() const { return n_slot * t_slot_ms / 1000.0; }
};

} // namespace tsch
