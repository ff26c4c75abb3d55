#include "tsch/topology.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "tsch/errors.hpp"

namespace tsch {

Topology::Topology(NodeId root, std::vector<Edge> edges)
    : root_(root), edges_(std::move(edges)) {
    adjacency_[root_] = true;
    for (const Edge& e : edges_) {
        parents_[e.from].push_back(e.to);
        children_[e.to].push_back(e.from);
        adjacency_[e.from] = true;
        adjacency_[e.to] = true;
    }
    for (auto& [node, kids] : children_) std::sort(kids.begin(), kids.end());
}

std::vector<NodeId> Topology::nodes() const {
    std::vector<NodeId> out;
    out.reserve(adjacency_.size());
    for (const auto& [n, _] : adjacency_) out.push_back(n);
    return out;
}

bool Topology::has_edge(const Edge& e) const {
    auto it = parents_.find(e.from);
    if (it == parents_.end()) return false;
    return std::find(it->second.begin(), it->second.end(), e.to) != it->second.end();
}

std::optional<NodeId> Topology::parent(NodeId child) const {
    auto it = parents_.find(child);
    if (it == parents_.end() || it->second.size() != 1) return std::nullopt;
    return it->second.front();
}

bool Topology::is_tree(std::string* why) const {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!adjacency_.contains(root_)) return fail("root node missing");
    if (parents_.contains(root_)) return fail("root node " + std::to_string(root_) + " has a parent");
    for (const auto& [node, _] : adjacency_) {
        if (node == root_) continue;
        auto it = parents_.find(node);
        if (it == parents_.end() || it->second.empty())
            return fail("node " + std::to_string(node) + " has no parent");
        if (it->second.size() > 1)
            return fail("node " + std::to_string(node) + " has multiple parents");
    }
    // Parent uniqueness holds; a cycle would now show up as a node that never
    // reaches the root.
    for (const auto& [node, _] : adjacency_) {
        NodeId cur = node;
        std::size_t hops = 0;
        while (cur != root_) {
            cur = *parent(cur);
            if (++hops > adjacency_.size())
                return fail("node " + std::to_string(node) + " does not reach the root");
        }
    }
    if (edges_.size() + 1 != adjacency_.size()) return fail("edge count is not node count minus one");
    return true;
}

std::optional<std::vector<NodeId>> Topology::route(NodeId source, NodeId dest) const {
    if (!has_node(source) || !has_node(dest)) return std::nullopt;
    std::vector<NodeId> path{source};
    NodeId cur = source;
    while (cur != dest) {
        auto up = parent(cur);
        if (!up || path.size() > adjacency_.size()) return std::nullopt;
        cur = *up;
        path.push_back(cur);
    }
    return path;
}

int Topology::edge_level(const Edge& e) const {
    if (!has_edge(e)) throw DomainError("edge " + e.name() + " is not in the topology");
    std::string why;
    if (!is_tree(&why)) throw DomainError("edge_level requires a tree: " + why);
    std::function<int(NodeId)> height = [&](NodeId n) -> int {
        auto it = children_.find(n);
        if (it == children_.end()) return 0;
        int h = 0;
        for (NodeId c : it->second) h = std::max(h, 1 + height(c));
        return h;
    };
    return 1 + height(e.from);
}

} // namespace tsch
