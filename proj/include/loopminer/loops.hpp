#pragma once

#include <set>
#include <string>
#include <vector>

#include "loopminer/concurrency.hpp"
#include "loopminer/dfg.hpp"

namespace loopminer {

enum class LoopKind {
    Single,
    MultiSourceMultiTarget,
    MultiSourceSingleTarget,
    XorBodyThenSplit,
    AndBodyThenSplit,
};

const char* to_string(LoopKind kind);

struct LoopBlock {
    std::set<Edge> back_edges;
    std::set<NodeId> entries;  // targets of back edges
    std::set<NodeId> exits;    // sources of back edges
    std::set<NodeId> body;
    LoopKind kind = LoopKind::Single;
};

/// Strongly connected components of the graph, each sorted, listed in order
/// of their smallest member.
std::vector<std::vector<NodeId>> strongly_connected_components(const Dfg& g);

/// Breadth-first hop distance from START; unreachable nodes get node_count().
std::vector<std::size_t> bfs_distance(const Dfg& g);

/// Back edges of the (concurrency-pruned) DFG.
///
/// Inside every strongly connected component the nodes are linearly ordered
/// so that the total frequency of edges pointing backwards is minimal
/// (exact subset DP up to 16 nodes, greedy beyond), subject to every node
/// keeping a forward incoming edge. Ties prefer back edges whose target is
/// closer to START, then lower ids. Self-loops are always back edges.
/// Throws CyclicResidue if removing the result leaves a cycle.
std::set<Edge> detect_loop_edges(const Dfg& dfg);

/// `dfg` without the given edges.
Dfg remove_edges(const Dfg& dfg, const std::set<Edge>& edges);

/// Merges back edges with overlapping forward bodies into blocks and
/// classifies each block.
std::vector<LoopBlock> group_loop_blocks(const Dfg& dfg, const std::set<Edge>& back_edges,
                                         const ConcurrencyRelation& rel);

std::string loops_to_text(const std::vector<LoopBlock>& blocks, const Dfg& dfg);

}  // namespace loopminer
