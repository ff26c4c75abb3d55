#include "tsch/sim.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "tsch/errors.hpp"
#include "tsch/rng.hpp"

namespace tsch {

namespace {

struct QueueEntry {
    std::uint32_t flow = 0;
    std::int64_t seq = 0;
    std::uint64_t eligible_asn = 0;
    std::uint16_t hop = 0;  // index into the flow's route edges
    std::uint16_t tries = 0;
    // A frame carrying this entry was received at the next hop; the local
    // copy only persists because its ACK was lost, so discarding it later is
    // not a packet loss.
    bool accepted = false;
};

struct EdgeState {
    Edge edge;
    LinkTrace trace;
    std::deque<QueueEntry> queue;
    std::size_t high_water = 0;
};

struct FlowState {
    Flow flow;
    std::uint64_t next_gen = 0;
    std::int64_t next_seq = 0;
    std::vector<int> hop_edge;               // hop index -> edge table index
    std::vector<std::int64_t> last_accepted; // per hop receiver dedup, -1 = none
};

struct CellRef {
    int slot_offset = 0;
    int edge_idx = 0;
};

} // namespace

SimOutput run(const NetworkConfig& config, const SimParams& params) {
    NetworkConfig effective = config;
    effective.params = params;
    const std::vector<Flow> flows = resolve_flows(effective); // throws on diagnostics

    const int n_slot = params.n_slot;
    const std::uint64_t duration = params.duration_slots;
    const std::uint64_t seed = params.seed;
    const std::uint64_t t_matrix_us = params.t_matrix_us();

    // Edge table over scheduled edges; validation guarantees every flow hop
    // is scheduled, so each hop maps into it.
    std::vector<EdgeState> edges;
    std::map<Edge, int> edge_index;
    for (const ScheduledCell& c : effective.schedule.cells_by_slot()) {
        if (!edge_index.contains(c.link)) {
            edge_index[c.link] = static_cast<int>(edges.size());
            edges.push_back(EdgeState{c.link, LinkTrace(c.link, t_matrix_us), {}, 0});
        }
    }
    std::vector<CellRef> cells;
    for (const ScheduledCell& c : effective.schedule.cells_by_slot())
        cells.push_back(CellRef{c.slot_offset, edge_index.at(c.link)});

    std::vector<FlowState> fstates;
    fstates.reserve(flows.size());
    for (const Flow& f : flows) {
        FlowState fs;
        fs.flow = f;
        fs.next_gen = f.phase_slots;
        fs.last_accepted.assign(f.hop_count(), -1);
        for (std::size_t h = 0; h < f.hop_count(); ++h)
            fs.hop_edge.push_back(edge_index.at(f.hop(h)));
        fstates.push_back(std::move(fs));
    }

    SimOutput out;
    out.duration_slots = duration;
    out.t_matrix_us = t_matrix_us;
    out.flows.assign(flows.size(), FlowCounts{});

    std::map<NodeId, NodeActivity> activity;
    for (const EdgeState& es : edges) {
        activity[es.edge.from];
        activity[es.edge.to];
    }

    auto enqueue = [&](int edge_idx, QueueEntry entry) {
        EdgeState& es = edges[static_cast<std::size_t>(edge_idx)];
        es.queue.push_back(entry);
        es.high_water = std::max(es.high_water, es.queue.size());
    };

    std::uint64_t min_next_gen = std::numeric_limits<std::uint64_t>::max();
    auto refresh_min_gen = [&] {
        min_next_gen = std::numeric_limits<std::uint64_t>::max();
        for (const FlowState& fs : fstates) min_next_gen = std::min(min_next_gen, fs.next_gen);
    };
    refresh_min_gen();

    // Generate every packet due at or before `asn`; a packet is eligible for
    // the cells of its generation slot.
    auto generate_up_to = [&](std::uint64_t asn) {
        if (asn < min_next_gen) return;
        for (std::size_t i = 0; i < fstates.size(); ++i) {
            FlowState& fs = fstates[i];
            while (fs.next_gen <= asn) {
                out.flows[i].generated++;
                enqueue(fs.hop_edge[0], QueueEntry{static_cast<std::uint32_t>(i), fs.next_seq++,
                                                   fs.next_gen, 0, 0, false});
                fs.next_gen += fs.flow.period_slots;
            }
        }
        refresh_min_gen();
    };

    const std::uint64_t frames = (duration + static_cast<std::uint64_t>(n_slot) - 1) /
                                 static_cast<std::uint64_t>(n_slot);
    for (std::uint64_t frame = 0; frame < frames; ++frame) {
        const std::uint64_t base = frame * static_cast<std::uint64_t>(n_slot);
        for (const CellRef& cell : cells) {
            const std::uint64_t asn = base + static_cast<std::uint64_t>(cell.slot_offset);
            if (asn >= duration) break;
            generate_up_to(asn);

            EdgeState& es = edges[static_cast<std::size_t>(cell.edge_idx)];
            const std::uint64_t occurrence = es.trace.size();
            const bool ready = !es.queue.empty() && es.queue.front().eligible_asn <= asn;
            if (!ready) {
                es.trace.append(false);
                activity[es.edge.to].idle_slots++;
                continue;
            }

            es.trace.append(true);
            activity[es.edge.from].tx_slots++;
            activity[es.edge.to].rx_slots++;

            QueueEntry& entry = es.queue.front();
            FlowState& fs = fstates[entry.flow];
            const std::uint64_t stream = rng::kStreamLink | es.edge.key();
            const bool frame_ok =
                rng::draw_unit(seed, stream, occurrence, 0) < params.eps_frame;
            bool ack_ok = false;
            if (frame_ok) {
                // Receiver got the frame: deliver or forward unless it is a
                // retransmission it already accepted (ACK was lost earlier).
                if (entry.seq > fs.last_accepted[entry.hop]) {
                    fs.last_accepted[entry.hop] = entry.seq;
                    if (entry.hop + 1 == fs.flow.hop_count()) {
                        out.flows[entry.flow].delivered++;
                    } else {
                        enqueue(fs.hop_edge[entry.hop + 1],
                                QueueEntry{entry.flow, entry.seq, asn + 1,
                                           static_cast<std::uint16_t>(entry.hop + 1), 0, false});
                    }
                }
                entry.accepted = true;
                ack_ok = rng::draw_unit(seed, stream, occurrence, 1) < params.eps_ack;
            }
            if (frame_ok && ack_ok) {
                es.queue.pop_front();
            } else {
                entry.tries++;
                if (entry.tries >= params.n_try) {
                    if (!entry.accepted) out.flows[entry.flow].dropped++;
                    es.queue.pop_front();
                }
            }
        }
    }
    if (duration > 0) generate_up_to(duration - 1);

    for (const EdgeState& es : edges)
        for (const QueueEntry& entry : es.queue)
            if (!entry.accepted) out.flows[entry.flow].in_flight++;

    for (EdgeState& es : edges) {
        out.queue_high_water[es.edge] = es.high_water;
        out.traces.emplace(es.edge, std::move(es.trace));
    }
    out.nodes = std::move(activity);
    return out;
}

const LinkTrace& trace_of(const SimOutput& output, const Edge& edge) {
    auto it = output.traces.find(edge);
    if (it == output.traces.end())
        throw DomainError("edge " + edge.name() + " has no scheduled cell");
    return it->second;
}

} // namespace tsch
