#pragma once

#include <map>
#include <string>
#include <vector>

#include "loopminer/concurrency.hpp"
#include "loopminer/dfg.hpp"
#include "loopminer/eventlog.hpp"

namespace loopminer {

enum class GatewayType { Xor, And };
enum class Direction { Split, Join };

/// Nested gateway typing for one decision point. Leaves are DFG nodes;
/// inner nodes alternate between XOR and AND and have at least two children.
struct GatewayTree {
    bool is_leaf = true;
    NodeId leaf = 0;
    GatewayType type = GatewayType::Xor;
    Direction direction = Direction::Split;
    std::vector<GatewayTree> children;

    static GatewayTree make_leaf(NodeId n, Direction d) { return {true, n, GatewayType::Xor, d, {}}; }

    /// Leaves in left-to-right order.
    std::vector<NodeId> leaves() const;
    bool operator==(const GatewayTree&) const = default;
};

/// Compact rendering such as "XOR(AND(b,c),e)".
std::string to_string(const GatewayTree& tree, const Dfg& dfg);

/// Decomposes a node set along the concurrency relation: components of the
/// concurrency graph become XOR alternatives, components of its complement
/// become AND branches. Prime remainders fall back to greedy largest-clique
/// grouping (size desc, then lowest ids).
GatewayTree partition_nodes(const std::vector<NodeId>& nodes, const ConcurrencyRelation& rel,
                            Direction direction);

/// Split tree over the successors of `node` in an acyclic forward DFG.
/// Requires at least two successors.
GatewayTree partition_successors(NodeId node, const Dfg& forward, const ConcurrencyRelation& rel);

/// Join tree over the predecessors of `node`; mirror of partition_successors.
GatewayTree partition_predecessors(NodeId node, const Dfg& forward, const ConcurrencyRelation& rel);

/// Deletes edges a->c that only exist as interleaving artifacts of a gateway
/// region: some other successor b of a reaches c, and every a,c adjacency in
/// the log has a b concurrent with c occurring after it. Edges whose removal
/// would cut a node off from START or END are kept.
Dfg remove_transitive_successors(const Dfg& forward, const ConcurrencyRelation& rel,
                                 const EventLog& log);

}  // namespace loopminer
