#include "loopminer/synthesis.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "loopminer/error.hpp"

namespace loopminer {

std::vector<NodeId> GatewayTree::leaves() const {
    if (is_leaf) return {leaf};
    std::vector<NodeId> out;
    for (const auto& c : children) {
        auto sub = c.leaves();
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

std::string to_string(const GatewayTree& tree, const Dfg& dfg) {
    if (tree.is_leaf) return dfg.label(tree.leaf);
    std::string out = tree.type == GatewayType::Xor ? "XOR(" : "AND(";
    for (std::size_t i = 0; i < tree.children.size(); ++i) {
        if (i != 0) out += ",";
        out += to_string(tree.children[i], dfg);
    }
    return out + ")";
}

namespace {

// Components of `nodes` where i~j iff linked(i,j). Each component sorted,
// components ordered by their smallest member.
std::vector<std::vector<NodeId>> components(const std::vector<NodeId>& nodes,
                                            const std::function<bool(NodeId, NodeId)>& linked) {
    std::vector<std::size_t> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            if (linked(nodes[i], nodes[j])) parent[find(i)] = find(j);
        }
    }
    std::map<std::size_t, std::vector<NodeId>> groups;
    for (std::size_t i = 0; i < nodes.size(); ++i) groups[find(i)].push_back(nodes[i]);
    std::vector<std::vector<NodeId>> out;
    for (auto& [r, g] : groups) {
        std::sort(g.begin(), g.end());
        out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end());
    return out;
}

GatewayTree make_inner(GatewayType type, Direction d, std::vector<GatewayTree> children) {
    GatewayTree t;
    t.is_leaf = false;
    t.type = type;
    t.direction = d;
    t.children = std::move(children);
    return t;
}

// Largest clique first, ties broken by the lexicographically smallest member list.
std::vector<std::vector<NodeId>> greedy_cliques(std::vector<NodeId> nodes,
                                                const ConcurrencyRelation& rel) {
    std::vector<std::vector<NodeId>> out;
    while (!nodes.empty()) {
        std::vector<NodeId> best;
        // Enumerate maximal cliques by simple backtracking; partitions are small.
        std::function<void(std::vector<NodeId>&, std::size_t)> grow = [&](std::vector<NodeId>& cur,
                                                                           std::size_t from) {
            if (cur.size() > best.size() || (cur.size() == best.size() && cur < best)) best = cur;
            for (std::size_t i = from; i < nodes.size(); ++i) {
                bool ok = std::all_of(cur.begin(), cur.end(),
                                      [&](NodeId m) { return rel.contains(m, nodes[i]); });
                if (!ok) continue;
                cur.push_back(nodes[i]);
                grow(cur, i + 1);
                cur.pop_back();
            }
        };
        std::vector<NodeId> cur;
        grow(cur, 0);
        if (best.empty()) throw Error(ErrorCode::AmbiguousPartition, "clique cover left a node uncovered");
        for (NodeId n : best) nodes.erase(std::find(nodes.begin(), nodes.end(), n));
        out.push_back(std::move(best));
    }
    return out;
}

}  // namespace

GatewayTree partition_nodes(const std::vector<NodeId>& input, const ConcurrencyRelation& rel,
                            Direction direction) {
    std::vector<NodeId> nodes = input;
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    if (nodes.empty()) throw Error(ErrorCode::InvalidArgument, "cannot partition an empty set");
    if (nodes.size() == 1) return GatewayTree::make_leaf(nodes.front(), direction);

    auto concurrent = [&](NodeId a, NodeId b) { return rel.contains(a, b); };
    auto exclusive = [&](NodeId a, NodeId b) { return !rel.contains(a, b); };

    auto recurse = [&](const std::vector<std::vector<NodeId>>& parts, GatewayType type) {
        std::vector<GatewayTree> children;
        for (const auto& p : parts) children.push_back(partition_nodes(p, rel, direction));
        return make_inner(type, direction, std::move(children));
    };

    if (auto parts = components(nodes, concurrent); parts.size() > 1) {
        return recurse(parts, GatewayType::Xor);
    }
    if (auto parts = components(nodes, exclusive); parts.size() > 1) {
        return recurse(parts, GatewayType::And);
    }
    // Neither the relation nor its complement separates the set.
    std::vector<GatewayTree> alternatives;
    for (const auto& clique : greedy_cliques(nodes, rel)) {
        if (clique.size() == 1) {
            alternatives.push_back(GatewayTree::make_leaf(clique.front(), direction));
        } else {
            std::vector<GatewayTree> branches;
            for (NodeId n : clique) branches.push_back(GatewayTree::make_leaf(n, direction));
            alternatives.push_back(make_inner(GatewayType::And, direction, std::move(branches)));
        }
    }
    return make_inner(GatewayType::Xor, direction, std::move(alternatives));
}

GatewayTree partition_successors(NodeId node, const Dfg& forward, const ConcurrencyRelation& rel) {
    auto succ = forward.successors(node);
    if (succ.size() < 2) throw Error(ErrorCode::InvalidArgument, "split needs at least two successors");
    return partition_nodes(succ, rel, Direction::Split);
}

GatewayTree partition_predecessors(NodeId node, const Dfg& forward, const ConcurrencyRelation& rel) {
    auto pred = forward.predecessors(node);
    if (pred.size() < 2) throw Error(ErrorCode::InvalidArgument, "join needs at least two predecessors");
    return partition_nodes(pred, rel, Direction::Join);
}

Dfg remove_transitive_successors(const Dfg& forward, const ConcurrencyRelation& rel,
                                 const EventLog& log) {
    constexpr NodeId kUnknown = std::numeric_limits<NodeId>::max();
    Dfg out = forward;
    const auto edges = forward.edges();
    for (const auto& [e, f] : edges) {
        const auto [a, c] = e;
        if (a == c) continue;
        std::vector<NodeId> via;
        for (NodeId b : out.successors(a)) {
            if (b == c || b == kEnd) continue;
            if (forward_reachable(out, b)[c]) via.push_back(b);
        }
        if (via.empty()) continue;

        // Every a,c adjacency must be explained by a concurrent b firing later.
        bool genuine = false;
        for (const auto& v : log.variants()) {
            const auto& ev = v.events;
            std::vector<NodeId> ids;
            ids.push_back(kStart);
            for (const auto& x : ev) ids.push_back(forward.has_activity(x) ? forward.id(x) : kUnknown);
            ids.push_back(kEnd);
            for (std::size_t i = 0; i + 1 < ids.size() && !genuine; ++i) {
                if (ids[i] != a || ids[i + 1] != c) continue;
                bool explained = false;
                for (std::size_t j = i + 2; j < ids.size() && ids[j] != a && !explained; ++j) {
                    explained = std::find(via.begin(), via.end(), ids[j]) != via.end() &&
                                rel.contains(ids[j], c);
                }
                genuine = !explained;
            }
            if (genuine) break;
        }
        if (genuine) continue;

        const auto fw_before = forward_reachable(out);
        const auto bw_before = backward_reachable(out);
        out.remove_edge(a, c);
        const auto fw = forward_reachable(out);
        const auto bw = backward_reachable(out);
        bool keeps = true;
        for (NodeId n = 0; n < out.node_count(); ++n) {
            keeps = keeps && (fw[n] || !fw_before[n]) && (bw[n] || !bw_before[n]);
        }
        if (!keeps) out.add_edge(a, c, f);
    }
    return out;
}

}  // namespace loopminer
