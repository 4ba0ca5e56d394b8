#pragma once

#include <set>
#include <string>

#include "loopminer/dfg.hpp"
#include "loopminer/eventlog.hpp"

namespace loopminer {

/// Symmetric, irreflexive set of activity pairs judged parallel.
class ConcurrencyRelation {
public:
    /// Inserting {a,a} is rejected with InvalidArgument.
    void insert(NodeId a, NodeId b);
    bool contains(NodeId a, NodeId b) const;
    bool empty() const noexcept { return pairs_.empty(); }
    std::size_t size() const noexcept { return pairs_.size(); }
    /// Normalized pairs (first < second).
    const std::set<Edge>& pairs() const noexcept { return pairs_; }

    bool operator==(const ConcurrencyRelation&) const = default;

private:
    std::set<Edge> pairs_;
};

/// a || b iff both a->b and b->a exist, their frequencies are balanced within
/// `epsilon`, and no trace holds the adjacent triple a,b,a or b,a,b.
ConcurrencyRelation discover_concurrency(const Dfg& dfg, const EventLog& log, double epsilon = 0.3);

/// Removes both directions of every concurrent pair, then restores what is
/// needed to keep every node on a START->END path.
Dfg prune_concurrent_edges(const Dfg& dfg, const ConcurrencyRelation& rel);

/// One "a || b" line per pair, sorted.
std::string relation_to_text(const ConcurrencyRelation& rel, const Dfg& dfg);

}  // namespace loopminer
