#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "tsch/types.hpp"

namespace tsch {

// One reserved transmission opportunity in the slotframe matrix.
struct ScheduledCell {
    int slot_offset = 0;
    int channel_offset = 0;
    Edge link;

    auto operator<=>(const ScheduledCell&) const = default;
};

// The repeating schedule grid: n_slot columns by n_channel rows. Cells are
// kept in load order; collisions are a validation diagnostic, not a
// construction failure.
struct SlotframeSchedule {
    int n_slot = 101;
    int n_channel = 16;
    std::vector<ScheduledCell> cells;

    std::vector<ScheduledCell> cells_by_slot() const {
        std::vector<ScheduledCell> out = cells;
        std::sort(out.begin(), out.end(), [](const ScheduledCell& a, const ScheduledCell& b) {
            if (a.slot_offset != b.slot_offset) return a.slot_offset < b.slot_offset;
            return a.channel_offset < b.channel_offset;
        });
        return out;
    }

    bool schedules(const Edge& e) const {
        return std::any_of(cells.begin(), cells.end(),
                           [&](const ScheduledCell& c) { return c.link == e; });
    }
};

} // namespace tsch
