#include "loopminer/loops.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "loopminer/error.hpp"

namespace loopminer {

const char* to_string(LoopKind kind) {
    switch (kind) {
        case LoopKind::Single: return "single";
        case LoopKind::MultiSourceMultiTarget: return "multi_source_multi_target";
        case LoopKind::MultiSourceSingleTarget: return "multi_source_single_target";
        case LoopKind::XorBodyThenSplit: return "xor_body_then_split";
        case LoopKind::AndBodyThenSplit: return "and_body_then_split";
    }
    return "unknown";
}

std::vector<std::vector<NodeId>> strongly_connected_components(const Dfg& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<NodeId>> adj(n);
    for (const auto& [e, f] : g.edges()) adj[e.first].push_back(e.second);

    // Tarjan, recursive; graphs here have at most a few hundred nodes.
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeId> stack;
    std::vector<std::vector<NodeId>> out;
    int counter = 0;
    std::function<void(NodeId)> visit = [&](NodeId v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (NodeId w : adj[v]) {
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<NodeId> comp;
            NodeId w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    };
    for (NodeId v = 0; v < n; ++v) {
        if (index[v] < 0) visit(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> bfs_distance(const Dfg& g) {
    std::vector<std::size_t> dist(g.node_count(), g.node_count());
    std::vector<std::vector<NodeId>> adj(g.node_count());
    for (const auto& [e, f] : g.edges()) adj[e.first].push_back(e.second);
    std::deque<NodeId> queue{kStart};
    dist[kStart] = 0;
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        for (NodeId w : adj[v]) {
            if (dist[w] == g.node_count()) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

Dfg remove_edges(const Dfg& dfg, const std::set<Edge>& edges) {
    Dfg out = dfg;
    for (const auto& e : edges) out.remove_edge(e.first, e.second);
    return out;
}

namespace {

struct Cost {
    std::uint64_t weight = 0;
    std::uint64_t penalty = 0;
    auto operator<=>(const Cost&) const = default;
};

constexpr std::size_t kExactLimit = 16;

// Orders the members of one SCC; returns local indices in forward order.
std::vector<std::size_t> order_component(const std::vector<std::vector<std::uint64_t>>& w,
                                         const std::vector<std::vector<std::uint8_t>>& pen,
                                         const std::vector<bool>& entered_from_outside) {
    const std::size_t n = w.size();
    auto placeable = [&](std::size_t v, auto&& placed) {
        if (entered_from_outside[v]) return true;
        for (std::size_t u = 0; u < n; ++u) {
            if (placed(u) && w[u][v] > 0) return true;
        }
        return false;
    };

    if (n <= kExactLimit) {
        const std::size_t states = std::size_t{1} << n;
        constexpr Cost kInf{std::numeric_limits<std::uint64_t>::max(), 0};
        std::vector<Cost> best(states, kInf);
        std::vector<std::int8_t> last(states, -1);
        best[0] = Cost{};
        for (std::size_t mask = 0; mask < states; ++mask) {
            if (best[mask] == kInf) continue;
            auto in_mask = [mask](std::size_t u) { return (mask >> u) & 1U; };
            for (std::size_t v = 0; v < n; ++v) {
                if (in_mask(v) || !placeable(v, in_mask)) continue;
                // Edges from v to nodes already placed point backwards.
                Cost c = best[mask];
                for (std::size_t u = 0; u < n; ++u) {
                    if (in_mask(u) && w[v][u] > 0) {
                        c.weight += w[v][u];
                        c.penalty += pen[v][u];
                    }
                }
                const std::size_t next = mask | (std::size_t{1} << v);
                if (c < best[next]) {
                    best[next] = c;
                    last[next] = static_cast<std::int8_t>(v);
                }
            }
        }
        std::vector<std::size_t> order;
        for (std::size_t mask = states - 1; mask != 0;) {
            const auto v = static_cast<std::size_t>(last[mask]);
            order.push_back(v);
            mask &= ~(std::size_t{1} << v);
        }
        std::reverse(order.begin(), order.end());
        return order;
    }

    // Greedy: place the node that turns the least weight into back edges now.
    std::vector<bool> placed(n, false);
    std::vector<std::size_t> order;
    while (order.size() < n) {
        std::size_t pick = n;
        Cost pick_cost{};
        for (std::size_t v = 0; v < n; ++v) {
            if (placed[v] || !placeable(v, [&](std::size_t u) { return placed[u]; })) continue;
            Cost c;
            for (std::size_t u = 0; u < n; ++u) {
                if (u == v) continue;
                if (placed[u]) {
                    c.weight += w[v][u];
                    c.penalty += w[v][u] > 0 ? pen[v][u] : 0;
                } else {
                    c.weight += w[u][v];
                    c.penalty += w[u][v] > 0 ? pen[u][v] : 0;
                }
            }
            if (pick == n || c < pick_cost) {
                pick = v;
                pick_cost = c;
            }
        }
        placed[pick] = true;
        order.push_back(pick);
    }
    return order;
}

bool is_acyclic(const Dfg& g) {
    std::vector<std::size_t> indeg(g.node_count(), 0);
    for (const auto& [e, f] : g.edges()) ++indeg[e.second];
    std::vector<NodeId> ready;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (indeg[v] == 0) ready.push_back(v);
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        NodeId v = ready.back();
        ready.pop_back();
        ++seen;
        for (NodeId w : g.successors(v)) {
            if (--indeg[w] == 0) ready.push_back(w);
        }
    }
    return seen == g.node_count();
}

}  // namespace

std::set<Edge> detect_loop_edges(const Dfg& dfg) {
    std::set<Edge> back;
    for (const auto& [e, f] : dfg.edges()) {
        if (e.first == e.second) back.insert(e);
    }
    const auto dist = bfs_distance(dfg);
    for (const auto& comp : strongly_connected_components(dfg)) {
        if (comp.size() < 2) continue;
        const std::size_t n = comp.size();
        std::vector<std::vector<std::uint64_t>> w(n, std::vector<std::uint64_t>(n, 0));
        std::vector<std::vector<std::uint8_t>> pen(n, std::vector<std::uint8_t>(n, 0));
        std::vector<bool> from_outside(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                w[i][j] = dfg.frequency(comp[i], comp[j]);
                pen[i][j] = dist[comp[j]] >= dist[comp[i]] ? 1 : 0;
            }
            for (NodeId p : dfg.predecessors(comp[i])) {
                if (!std::binary_search(comp.begin(), comp.end(), p)) from_outside[i] = true;
            }
        }
        const auto order = order_component(w, pen, from_outside);
        std::vector<std::size_t> pos(n);
        for (std::size_t k = 0; k < n; ++k) pos[order[k]] = k;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && w[i][j] > 0 && pos[j] < pos[i]) back.insert({comp[i], comp[j]});
            }
        }
    }
    if (!is_acyclic(remove_edges(dfg, back))) {
        throw Error(ErrorCode::CyclicResidue, "removing detected back edges leaves a cycle");
    }
    return back;
}

namespace {

std::size_t count_groups(const std::set<NodeId>& nodes, const ConcurrencyRelation& rel) {
    // Connected components of `nodes` under the concurrency relation.
    std::vector<NodeId> v(nodes.begin(), nodes.end());
    std::vector<std::size_t> parent(v.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            if (rel.contains(v[i], v[j])) parent[find(i)] = find(j);
        }
    }
    std::size_t groups = 0;
    for (std::size_t i = 0; i < v.size(); ++i) groups += find(i) == i ? 1 : 0;
    return groups;
}

}  // namespace

std::vector<LoopBlock> group_loop_blocks(const Dfg& dfg, const std::set<Edge>& back_edges,
                                         const ConcurrencyRelation& rel) {
    const Dfg forward = remove_edges(dfg, back_edges);
    const std::vector<Edge> edges(back_edges.begin(), back_edges.end());
    std::vector<std::set<NodeId>> bodies;
    for (const auto& [s, t] : edges) {
        auto from_t = forward_reachable(forward, t);
        auto to_s = backward_reachable(forward, s);
        std::set<NodeId> body{s, t};
        for (NodeId n = 0; n < dfg.node_count(); ++n) {
            if (from_t[n] && to_s[n]) body.insert(n);
        }
        bodies.push_back(std::move(body));
    }

    std::vector<std::size_t> parent(edges.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const bool overlap = std::any_of(bodies[i].begin(), bodies[i].end(),
                                             [&](NodeId n) { return bodies[j].count(n) != 0; });
            if (overlap) parent[find(i)] = find(j);
        }
    }

    std::map<std::size_t, LoopBlock> by_root;
    std::vector<std::size_t> roots_in_order;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::size_t r = find(i);
        auto [it, inserted] = by_root.try_emplace(r);
        if (inserted) roots_in_order.push_back(r);
        LoopBlock& b = it->second;
        b.back_edges.insert(edges[i]);
        b.exits.insert(edges[i].first);
        b.entries.insert(edges[i].second);
        b.body.insert(bodies[i].begin(), bodies[i].end());
    }

    std::vector<LoopBlock> blocks;
    for (std::size_t r : roots_in_order) {
        LoopBlock b = std::move(by_root[r]);
        const std::size_t exit_groups = count_groups(b.exits, rel);
        const std::size_t entry_groups = count_groups(b.entries, rel);
        bool concurrent_body = false;
        for (const auto& [x, y] : rel.pairs()) {
            concurrent_body = concurrent_body || (b.body.count(x) != 0 && b.body.count(y) != 0);
        }
        const bool split_after_exit = std::any_of(b.exits.begin(), b.exits.end(), [&](NodeId x) {
            return forward.successors(x).size() >= 2;
        });
        if (exit_groups > 1 && entry_groups > 1) {
            b.kind = LoopKind::MultiSourceMultiTarget;
        } else if (exit_groups > 1) {
            b.kind = LoopKind::MultiSourceSingleTarget;
        } else if (concurrent_body) {
            b.kind = LoopKind::AndBodyThenSplit;
        } else if (split_after_exit) {
            b.kind = LoopKind::XorBodyThenSplit;
        } else {
            b.kind = LoopKind::Single;
        }
        blocks.push_back(std::move(b));
    }
    return blocks;
}

std::string loops_to_text(const std::vector<LoopBlock>& blocks, const Dfg& dfg) {
    std::ostringstream os;
    auto list = [&](const std::set<NodeId>& s) {
        std::string out;
        for (NodeId n : s) out += (out.empty() ? "" : ",") + dfg.label(n);
        return out;
    };
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        os << "block " << i << " kind=" << to_string(b.kind) << " entries={" << list(b.entries)
           << "} exits={" << list(b.exits) << "} body={" << list(b.body) << "} back={";
        bool first = true;
        for (const auto& e : b.back_edges) {
            os << (first ? "" : ",") << dfg.edge_name(e);
            first = false;
        }
        os << "}\n";
    }
    return os.str();
}

}  // namespace loopminer
