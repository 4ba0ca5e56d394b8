#include "loopminer/dfg.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "loopminer/error.hpp"

namespace loopminer {

Dfg::Dfg(const std::set<Activity>& alphabet) : Dfg() {
    for (const auto& a : alphabet) {
        ids_.emplace(a, static_cast<NodeId>(labels_.size()));
        labels_.push_back(a);
        node_freq_.push_back(0);
    }
}

NodeId Dfg::id(const Activity& label) const {
    auto it = ids_.find(label);
    if (it == ids_.end()) throw Error(ErrorCode::InvalidArgument, "unknown activity '" + label + "'");
    return it->second;
}

std::vector<NodeId> Dfg::activities() const {
    std::vector<NodeId> out;
    for (NodeId n = 2; n < labels_.size(); ++n) out.push_back(n);
    return out;
}

std::uint64_t Dfg::frequency(NodeId s, NodeId t) const {
    auto it = edges_.find({s, t});
    return it == edges_.end() ? 0 : it->second;
}

void Dfg::add_edge(NodeId s, NodeId t, std::uint64_t frequency) {
    if (s >= labels_.size() || t >= labels_.size()) {
        throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    }
    if (t == kStart || s == kEnd) {
        throw Error(ErrorCode::InvariantViolation, "START takes no incoming and END no outgoing edges");
    }
    if (frequency == 0) throw Error(ErrorCode::InvalidArgument, "edge frequency must be positive");
    edges_[{s, t}] += frequency;
}

std::vector<NodeId> Dfg::successors(NodeId n) const {
    std::vector<NodeId> out;
    for (auto it = edges_.lower_bound({n, 0}); it != edges_.end() && it->first.first == n; ++it) {
        out.push_back(it->first.second);
    }
    return out;
}

std::vector<NodeId> Dfg::predecessors(NodeId n) const {
    std::vector<NodeId> out;
    for (const auto& [e, f] : edges_) {
        if (e.second == n) out.push_back(e.first);
    }
    return out;
}

Dfg build_dfg(const EventLog& log) {
    Dfg g(log.alphabet());
    std::vector<std::uint64_t> freq(g.node_count(), 0);
    for (const auto& v : log.variants()) {
        NodeId prev = kStart;
        for (const auto& a : v.events) {
            const NodeId cur = g.id(a);
            g.add_edge(prev, cur, v.multiplicity);
            freq[cur] += v.multiplicity;
            prev = cur;
        }
        g.add_edge(prev, kEnd, v.multiplicity);
        freq[kStart] += v.multiplicity;
        freq[kEnd] += v.multiplicity;
    }
    for (NodeId n = 0; n < g.node_count(); ++n) g.set_node_frequency(n, freq[n]);
    return g;
}

namespace {

std::vector<bool> reach(const Dfg& g, NodeId from, bool forward) {
    std::vector<std::vector<NodeId>> adj(g.node_count());
    for (const auto& [e, f] : g.edges()) {
        if (forward) adj[e.first].push_back(e.second);
        else adj[e.second].push_back(e.first);
    }
    std::vector<bool> seen(g.node_count(), false);
    std::deque<NodeId> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        NodeId n = queue.front();
        queue.pop_front();
        for (NodeId m : adj[n]) {
            if (!seen[m]) {
                seen[m] = true;
                queue.push_back(m);
            }
        }
    }
    return seen;
}

}  // namespace

std::vector<bool> forward_reachable(const Dfg& g, NodeId from) { return reach(g, from, true); }
std::vector<bool> backward_reachable(const Dfg& g, NodeId to) { return reach(g, to, false); }

bool is_connected(const Dfg& g) {
    auto fw = forward_reachable(g);
    auto bw = backward_reachable(g);
    for (NodeId n = 0; n < g.node_count(); ++n) {
        if (!fw[n] || !bw[n]) return false;
    }
    return true;
}

std::vector<Edge> repair_connectivity(Dfg& g, const std::map<Edge, std::uint64_t>& removed) {
    std::vector<std::pair<Edge, std::uint64_t>> pool(removed.begin(), removed.end());
    std::stable_sort(pool.begin(), pool.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<Edge> restored;
    std::vector<bool> used(pool.size(), false);
    while (true) {
        auto fw = forward_reachable(g);
        auto bw = backward_reachable(g);
        bool ok = true;
        for (NodeId n = 0; n < g.node_count(); ++n) ok = ok && fw[n] && bw[n];
        if (ok) break;
        bool progressed = false;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            const auto& [e, f] = pool[i];
            // Restoring this edge extends START-reachability or END-coreachability.
            if ((fw[e.first] && !fw[e.second]) || (bw[e.second] && !bw[e.first])) {
                g.add_edge(e.first, e.second, f);
                used[i] = true;
                restored.push_back(e);
                progressed = true;
                break;
            }
        }
        if (!progressed) break;  // the removed pool cannot help; caller's graph was disconnected
    }
    return restored;
}

Dfg filter_dfg(const Dfg& dfg, double noise) {
    if (!(noise >= 0.0 && noise <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "noise threshold must lie in [0,1]");
    }
    std::vector<std::uint64_t> max_out(dfg.node_count(), 0), max_in(dfg.node_count(), 0);
    for (const auto& [e, f] : dfg.edges()) {
        max_out[e.first] = std::max(max_out[e.first], f);
        max_in[e.second] = std::max(max_in[e.second], f);
    }
    Dfg out = dfg;
    std::map<Edge, std::uint64_t> removed;
    for (const auto& [e, f] : dfg.edges()) {
        const double fd = static_cast<double>(f);
        if (fd < noise * static_cast<double>(max_out[e.first]) ||
            fd < noise * static_cast<double>(max_in[e.second])) {
            removed.emplace(e, f);
            out.remove_edge(e.first, e.second);
        }
    }
    repair_connectivity(out, removed);
    return out;
}

std::string dfg_to_dot(const Dfg& g) {
    std::ostringstream os;
    os << "digraph dfg {\n  rankdir=LR;\n";
    for (NodeId n = 0; n < g.node_count(); ++n) {
        const char* shape = n < 2 ? "circle" : "box";
        std::string label = g.label(n);
        std::string escaped;
        for (char c : label) {
            if (c == '"' || c == '\\') escaped += '\\';
            escaped += c;
        }
        os << "  n" << n << " [shape=" << shape << ", label=\"" << escaped;
        if (n >= 2) os << "\\n" << g.node_frequency(n);
        os << "\"];\n";
    }
    for (const auto& [e, f] : g.edges()) {
        os << "  n" << e.first << " -> n" << e.second << " [label=\"" << f << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace loopminer
