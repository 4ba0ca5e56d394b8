#include "loopminer/concurrency.hpp"

#include <cmath>
#include <sstream>

#include "loopminer/error.hpp"

namespace loopminer {

void ConcurrencyRelation::insert(NodeId a, NodeId b) {
    if (a == b) throw Error(ErrorCode::InvalidArgument, "concurrency relation is irreflexive");
    pairs_.insert(a < b ? Edge{a, b} : Edge{b, a});
}

bool ConcurrencyRelation::contains(NodeId a, NodeId b) const {
    return pairs_.count(a < b ? Edge{a, b} : Edge{b, a}) != 0;
}

ConcurrencyRelation discover_concurrency(const Dfg& dfg, const EventLog& log, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must lie in [0,1]");
    }
    // Pairs with short-loop evidence: some trace holds x,y,x adjacently.
    std::set<Edge> loop_witness;
    for (const auto& v : log.variants()) {
        const auto& ev = v.events;
        for (std::size_t i = 0; i + 2 < ev.size(); ++i) {
            if (ev[i] == ev[i + 2] && ev[i] != ev[i + 1] && dfg.has_activity(ev[i]) &&
                dfg.has_activity(ev[i + 1])) {
                NodeId a = dfg.id(ev[i]), b = dfg.id(ev[i + 1]);
                loop_witness.insert(a < b ? Edge{a, b} : Edge{b, a});
            }
        }
    }
    ConcurrencyRelation rel;
    for (const auto& [e, fab] : dfg.edges()) {
        const auto [a, b] = e;
        if (a >= b || a < 2) continue;  // each unordered activity pair once
        const std::uint64_t fba = dfg.frequency(b, a);
        if (fba == 0) continue;
        const double imbalance = std::fabs(static_cast<double>(fab) - static_cast<double>(fba)) /
                                 static_cast<double>(fab + fba);
        if (imbalance > epsilon) continue;
        if (loop_witness.count({a, b}) != 0) continue;
        rel.insert(a, b);
    }
    return rel;
}

Dfg prune_concurrent_edges(const Dfg& dfg, const ConcurrencyRelation& rel) {
    Dfg out = dfg;
    std::map<Edge, std::uint64_t> removed;
    for (const auto& [a, b] : rel.pairs()) {
        for (const Edge& e : {Edge{a, b}, Edge{b, a}}) {
            if (const auto f = dfg.frequency(e.first, e.second); f != 0) {
                removed.emplace(e, f);
                out.remove_edge(e.first, e.second);
            }
        }
    }
    repair_connectivity(out, removed);
    return out;
}

std::string relation_to_text(const ConcurrencyRelation& rel, const Dfg& dfg) {
    std::ostringstream os;
    for (const auto& [a, b] : rel.pairs()) os << dfg.label(a) << " || " << dfg.label(b) << "\n";
    return os.str();
}

}  // namespace loopminer
