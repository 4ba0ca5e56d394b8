#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "loopminer/eventlog.hpp"

namespace loopminer {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

inline constexpr NodeId kStart = 0;
inline constexpr NodeId kEnd = 1;

/// Frequency-weighted directly-follows graph.
///
/// Node 0 is the artificial START, node 1 the artificial END; activities get
/// ids 2.. in lexicographic label order, so comparing ids of two activities
/// compares their labels.
class Dfg {
public:
    Dfg() : labels_{"▶", "■"}, node_freq_{0, 0} {}
    explicit Dfg(const std::set<Activity>& alphabet);

    std::size_t node_count() const noexcept { return labels_.size(); }
    const std::string& label(NodeId n) const { return labels_.at(n); }
    /// Throws InvalidArgument for unknown labels.
    NodeId id(const Activity& label) const;
    bool has_activity(const Activity& label) const { return ids_.count(label) != 0; }
    std::vector<NodeId> activities() const;

    const std::map<Edge, std::uint64_t>& edges() const noexcept { return edges_; }
    bool has_edge(NodeId s, NodeId t) const { return edges_.count({s, t}) != 0; }
    /// Zero when the edge is absent.
    std::uint64_t frequency(NodeId s, NodeId t) const;
    std::uint64_t node_frequency(NodeId n) const { return node_freq_.at(n); }

    void add_edge(NodeId s, NodeId t, std::uint64_t frequency);
    void remove_edge(NodeId s, NodeId t) { edges_.erase({s, t}); }
    void set_node_frequency(NodeId n, std::uint64_t f) { node_freq_.at(n) = f; }

    std::vector<NodeId> successors(NodeId n) const;
    std::vector<NodeId> predecessors(NodeId n) const;

    /// Label helpers for diagnostics and tests: "a->b".
    std::string edge_name(const Edge& e) const { return label(e.first) + "->" + label(e.second); }

    bool operator==(const Dfg& o) const {
        return labels_ == o.labels_ && edges_ == o.edges_ && node_freq_ == o.node_freq_;
    }

private:
    std::vector<std::string> labels_;
    std::map<Activity, NodeId> ids_;
    std::map<Edge, std::uint64_t> edges_;
    std::vector<std::uint64_t> node_freq_;
};

Dfg build_dfg(const EventLog& log);

/// Drops edges that are weak relative to the strongest outgoing edge of their
/// source or the strongest incoming edge of their target, then restores
/// removed edges until every node again lies on a START->END path.
Dfg filter_dfg(const Dfg& dfg, double noise);

/// Restores edges from `removed` (highest frequency first, ties by (source,
/// target)) until every node of `g` is reachable from START and reaches END.
/// Returns the restored edges.
std::vector<Edge> repair_connectivity(Dfg& g, const std::map<Edge, std::uint64_t>& removed);

/// Nodes reachable from START / nodes from which END is reachable.
std::vector<bool> forward_reachable(const Dfg& g, NodeId from = kStart);
std::vector<bool> backward_reachable(const Dfg& g, NodeId to = kEnd);

/// True when every node is on some START->END path.
bool is_connected(const Dfg& g);

/// Graphviz rendering with edge frequencies.
std::string dfg_to_dot(const Dfg& g);

}  // namespace loopminer
