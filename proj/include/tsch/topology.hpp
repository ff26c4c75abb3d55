#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsch/types.hpp"

namespace tsch {

// Directed child->parent edges plus a designated root. Construction accepts
// arbitrary edge lists; tree-ness is a queryable property so that validation
// can report violations as diagnostics instead of exceptions.
class Topology {
public:
    Topology() = default;
    Topology(NodeId root, std::vector<Edge> edges);

    NodeId root() const { return root_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::vector<NodeId> nodes() const;

    bool has_node(NodeId n) const { return adjacency_.contains(n); }
    bool has_edge(const Edge& e) const;
    std::optional<NodeId> parent(NodeId child) const;

    // True when every non-root node has exactly one parent and reaches root.
    // On failure `why` (if given) describes the first violation found.
    bool is_tree(std::string* why = nullptr) const;

    // Unique upward path source -> ... -> dest following parent pointers;
    // nullopt when dest is not an ancestor of source.
    std::optional<std::vector<NodeId>> route(NodeId source, NodeId dest) const;

    // 1 + length of the longest leafward path below the edge's child, i.e. a
    // leaf uplink is level 1. Requires a tree; DomainError otherwise.
    int edge_level(const Edge& e) const;

private:
    NodeId root_ = 0;
    std::vector<Edge> edges_;
    std::map<NodeId, std::vector<NodeId>> parents_;  // child -> parents (1 in a tree)
    std::map<NodeId, std::vector<NodeId>> children_; // parent -> children
    std::map<NodeId, bool> adjacency_;               // node presence
};

} // namespace tsch
