#include "tsch/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tsch/errors.hpp"
#include "tsch/rng.hpp"

namespace tsch {

using nlohmann::json;

const char* to_string(Diagnostic::Code code) {
    switch (code) {
        case Diagnostic::Code::not_a_tree: return "not a tree";
        case Diagnostic::Code::bad_cell: return "bad cell";
        case Diagnostic::Code::cell_collision: return "cell collision";
        case Diagnostic::Code::unscheduled_routed_edge: return "unscheduled routed edge";
        case Diagnostic::Code::invalid_route: return "invalid route";
        case Diagnostic::Code::bad_flow: return "bad flow";
        case Diagnostic::Code::bad_params: return "bad params";
        case Diagnostic::Code::bad_hop_sequence: return "bad hop sequence";
    }
    return "unknown";
}

std::vector<std::string> HopSequence::problems() const {
    std::vector<std::string> out;
    if (channels_.empty()) {
        out.push_back("hop sequence is empty");
        return out;
    }
    for (int ch : channels_)
        if (ch < kFirstChannel || ch > kLastChannel)
            out.push_back("channel " + std::to_string(ch) + " outside [11,26]");
    if (channels_.size() == 16) {
        std::set<int> seen(channels_.begin(), channels_.end());
        if (seen.size() != 16)
            out.push_back("a 16-entry hop sequence must be a permutation of channels 11..26");
    }
    return out;
}

std::vector<Diagnostic> validate(const NetworkConfig& config) {
    std::vector<Diagnostic> diags;
    auto add = [&](Diagnostic::Code code, std::string msg) {
        diags.push_back({code, std::move(msg)});
    };

    const SimParams& p = config.params;
    if (p.n_slot < 1) add(Diagnostic::Code::bad_params, "n_slot must be >= 1");
    if (p.t_slot_ms <= 0) add(Diagnostic::Code::bad_params, "t_slot_ms must be > 0");
    if (p.n_try < 1) add(Diagnostic::Code::bad_params, "n_try must be >= 1");
    if (!(p.eps_frame > 0.0 && p.eps_frame <= 1.0))
        add(Diagnostic::Code::bad_params, "eps_frame must be in (0,1]");
    if (!(p.eps_ack > 0.0 && p.eps_ack <= 1.0))
        add(Diagnostic::Code::bad_params, "eps_ack must be in (0,1]");

    for (const std::string& msg : config.hop.problems())
        add(Diagnostic::Code::bad_hop_sequence, msg);

    std::string why;
    const bool tree = config.topology.is_tree(&why);
    if (!tree) add(Diagnostic::Code::not_a_tree, why);

    const SlotframeSchedule& sched = config.schedule;
    std::map<std::pair<int, int>, int> occupancy;
    for (const ScheduledCell& c : sched.cells) {
        if (c.slot_offset < 0 || c.slot_offset >= sched.n_slot ||
            c.channel_offset < 0 || c.channel_offset >= sched.n_channel) {
            add(Diagnostic::Code::bad_cell,
                "cell at slot " + std::to_string(c.slot_offset) + " channel " +
                    std::to_string(c.channel_offset) + " outside the " +
                    std::to_string(sched.n_slot) + "x" + std::to_string(sched.n_channel) + " matrix");
        }
        if (c.link.from == c.link.to)
            add(Diagnostic::Code::bad_cell, "cell links node " + std::to_string(c.link.from) + " to itself");
        else if (!config.topology.has_edge(c.link))
            add(Diagnostic::Code::bad_cell, "cell links " + c.link.name() + " which is not a topology edge");
        if (++occupancy[{c.slot_offset, c.channel_offset}] == 2)
            add(Diagnostic::Code::cell_collision,
                "more than one cell at slot " + std::to_string(c.slot_offset) + " channel " +
                    std::to_string(c.channel_offset));
    }

    std::set<Edge> routed;
    for (std::size_t i = 0; i < config.flows.size(); ++i) {
        const FlowSpec& f = config.flows[i];
        const std::string tag = "flow " + std::to_string(i) + " (" + std::to_string(f.source) +
                                "->" + std::to_string(f.destination) + ")";
        if (f.period_slots < 1) add(Diagnostic::Code::bad_flow, tag + ": period_slots must be >= 1");
        if (f.phase_slots && *f.phase_slots >= f.period_slots && f.period_slots >= 1)
            add(Diagnostic::Code::bad_flow, tag + ": phase_slots must be < period_slots");
        if (!tree) continue; // routes are meaningless without a tree
        auto route = config.topology.route(f.source, f.destination);
        if (!route || route->size() < 2) {
            add(Diagnostic::Code::invalid_route, tag + ": no tree path from source to destination");
            continue;
        }
        for (std::size_t h = 0; h + 1 < route->size(); ++h)
            routed.insert(Edge{(*route)[h], (*route)[h + 1]});
    }
    for (const Edge& e : routed)
        if (!sched.schedules(e))
            add(Diagnostic::Code::unscheduled_routed_edge,
                "routed edge " + e.name() + " has no scheduled cell");

    return diags;
}

std::vector<Flow> resolve_flows(const NetworkConfig& config) {
    auto diags = validate(config);
    if (!diags.empty()) {
        std::ostringstream oss;
        oss << "invalid configuration:";
        for (const Diagnostic& d : diags) oss << "\n  [" << to_string(d.code) << "] " << d.message;
        throw ConfigError(oss.str());
    }
    std::vector<Flow> flows;
    flows.reserve(config.flows.size());
    for (std::size_t i = 0; i < config.flows.size(); ++i) {
        const FlowSpec& spec = config.flows[i];
        Flow f;
        f.source = spec.source;
        f.destination = spec.destination;
        f.period_slots = spec.period_slots;
        f.phase_slots = spec.phase_slots
                            ? *spec.phase_slots
                            : rng::draw_below(config.params.seed, rng::kStreamPhase, i, 0,
                                              spec.period_slots);
        f.route = *config.topology.route(spec.source, spec.destination);
        flows.push_back(std::move(f));
    }
    return flows;
}

namespace {

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing config key: ") + key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value for '") + key + "': " + e.what());
    }
}

} // namespace

NetworkConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    NetworkConfig config;

    const json jp = require<json>(j, "params");
    config.params.n_slot = require<int>(jp, "n_slot");
    config.params.t_slot_ms = require<double>(jp, "t_slot_ms");
    config.params.n_try = require<int>(jp, "n_try");
    config.params.eps_frame = require<double>(jp, "eps_frame");
    config.params.eps_ack = require<double>(jp, "eps_ack");
    config.params.duration_slots = require<std::uint64_t>(jp, "duration_slots");
    config.params.seed = require<std::uint64_t>(jp, "seed");

    const json jt = require<json>(j, "topology");
    const NodeId root = require<NodeId>(jt, "root");
    std::vector<Edge> edges;
    for (const json& je : require<json>(jt, "edges")) {
        if (!je.is_array() || je.size() != 2)
            throw ConfigError("topology edges must be [child, parent] pairs");
        edges.push_back(Edge{je.at(0).get<NodeId>(), je.at(1).get<NodeId>()});
    }
    config.topology = Topology(root, std::move(edges));

    if (j.contains("hop_sequence"))
        config.hop = HopSequence(j.at("hop_sequence").get<std::vector<int>>());

    const json js = require<json>(j, "schedule");
    config.schedule.n_slot = config.params.n_slot;
    config.schedule.n_channel = js.contains("n_channel") ? js.at("n_channel").get<int>()
                                                         : config.hop.size();
    for (const json& jc : require<json>(js, "cells")) {
        ScheduledCell cell;
        cell.slot_offset = require<int>(jc, "slot");
        cell.channel_offset = jc.contains("channel") ? jc.at("channel").get<int>() : 0;
        cell.link.from = require<NodeId>(jc, "from");
        cell.link.to = require<NodeId>(jc, "to");
        config.schedule.cells.push_back(cell);
    }

    for (const json& jf : require<json>(j, "flows")) {
        FlowSpec f;
        f.source = require<NodeId>(jf, "source");
        f.destination = require<NodeId>(jf, "destination");
        f.period_slots = require<std::uint64_t>(jf, "period_slots");
        if (!jf.contains("phase_slots")) {
            f.phase_slots = 0;
        } else if (jf.at("phase_slots").is_string()) {
            if (jf.at("phase_slots").get<std::string>() != "random")
                throw ConfigError("flow phase_slots must be an integer or \"random\"");
            f.phase_slots = std::nullopt;
        } else {
            f.phase_slots = jf.at("phase_slots").get<std::uint64_t>();
        }
        config.flows.push_back(f);
    }

    return config;
}

NetworkConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config not found: " + path);
    std::ostringstream oss;
    oss << in.rdbuf();
    return parse_config(oss.str());
}

} // namespace tsch
