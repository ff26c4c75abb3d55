#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace tsch {

using NodeId = std::uint16_t;

// Directed link sender -> receiver.
struct Edge {
    NodeId from = 0;
    NodeId to = 0;

    auto operator<=>(const Edge&) const = default;

    std::uint32_t key() const {
        return (static_cast<std::uint32_t>(from) << 16) | to;
    }
    std::string name() const {
        return std::to_string(from) + "-" + std::to_string(to);
    }
};

} // namespace tsch
