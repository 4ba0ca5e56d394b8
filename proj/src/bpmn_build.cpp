#include <algorithm>
#include <functional>
#include <set>

#include "loopminer/bpmn.hpp"
#include "loopminer/error.hpp"

namespace loopminer {

namespace {

NodeKind gateway_kind(GatewayType t) {
    return t == GatewayType::Xor ? NodeKind::ExclusiveGateway : NodeKind::ParallelGateway;
}

std::string labels_of(const std::vector<NodeId>& nodes, const Dfg& dfg) {
    std::string out;
    for (NodeId n : nodes) out += (out.empty() ? "" : ",") + dfg.label(n);
    return out;
}

// Creates one gateway per inner tree node. `leaf_parent` receives the gateway
// each leaf hangs off. Split trees flow parent->child, join trees child->parent.
std::size_t build_tree(BpmnModel& model, const GatewayTree& tree, const Dfg& dfg,
                       const std::string& key, std::map<NodeId, std::size_t>& leaf_parent) {
    const bool split = tree.direction == Direction::Split;
    const std::size_t g = model.add_gateway(
        gateway_kind(tree.type), split ? GatewayDirection::Diverging : GatewayDirection::Converging,
        key + "/" + to_string(tree, dfg));
    for (const auto& child : tree.children) {
        if (child.is_leaf) {
            leaf_parent[child.leaf] = g;
            continue;
        }
        const std::size_t c = build_tree(model, child, dfg, key, leaf_parent);
        if (split) model.add_flow(g, c);
        else model.add_flow(c, g);
    }
    return g;
}

}  // namespace

BpmnModel instantiate_gateways(const Dfg& forward, const std::map<NodeId, GatewayTree>& split_trees,
                               const std::map<NodeId, GatewayTree>& join_trees) {
    BpmnModel model;
    std::vector<std::size_t> index(forward.node_count());
    index[kStart] = model.add_node(NodeKind::StartEvent, "start");
    index[kEnd] = model.add_node(NodeKind::EndEvent, "end");
    for (NodeId a : forward.activities()) index[a] = model.add_task(forward.label(a));

    std::vector<std::vector<NodeId>> succ(forward.node_count()), pred(forward.node_count());
    for (NodeId n = 0; n < forward.node_count(); ++n) {
        succ[n] = forward.successors(n);
        pred[n] = forward.predecessors(n);
    }
    auto tree_for = [](const std::map<NodeId, GatewayTree>& trees, NodeId n, const char* what) {
        auto it = trees.find(n);
        if (it == trees.end()) {
            throw Error(ErrorCode::InvalidArgument, std::string("missing ") + what + " tree");
        }
        return it->second;
    };

    // Sources grouped by identical successor sets.
    std::map<std::vector<NodeId>, std::vector<NodeId>> groups;
    for (NodeId n = 0; n < forward.node_count(); ++n) {
        if (!succ[n].empty()) groups[succ[n]].push_back(n);
    }
    std::set<NodeId> connected_sources;
    for (const auto& [targets, sources] : groups) {
        const bool complete = std::all_of(targets.begin(), targets.end(),
                                          [&](NodeId t) { return pred[t] == sources; });
        if (!complete) continue;
        const std::string key = labels_of(sources, forward) + ">" + labels_of(targets, forward);

        std::size_t out_port = index[sources.front()];
        if (sources.size() > 1) {
            std::map<NodeId, std::size_t> leaf_parent;
            out_port = build_tree(model, tree_for(join_trees, targets.front(), "join"), forward,
                                  "connector-join:" + key, leaf_parent);
            for (NodeId s : sources) model.add_flow(index[s], leaf_parent.at(s));
        }
        std::size_t in_port = index[targets.front()];
        if (targets.size() > 1) {
            std::map<NodeId, std::size_t> leaf_parent;
            in_port = build_tree(model, tree_for(split_trees, sources.front(), "split"), forward,
                                 "connector-split:" + key, leaf_parent);
            for (NodeId t : targets) model.add_flow(leaf_parent.at(t), index[t]);
        }
        model.add_flow(out_port, in_port);
        connected_sources.insert(sources.begin(), sources.end());
    }

    // Remaining edges: split-tree leaf of the source to join-tree leaf of the target.
    std::map<NodeId, std::map<NodeId, std::size_t>> split_port, join_port;
    for (NodeId u = 0; u < forward.node_count(); ++u) {
        if (connected_sources.count(u) != 0 || succ[u].size() < 2) continue;
        std::map<NodeId, std::size_t> leaf_parent;
        const std::size_t root = build_tree(model, tree_for(split_trees, u, "split"), forward,
                                            "split:" + forward.label(u), leaf_parent);
        model.add_flow(index[u], root);
        split_port[u] = std::move(leaf_parent);
    }
    for (NodeId v = 0; v < forward.node_count(); ++v) {
        if (pred[v].size() < 2) continue;
        if (std::all_of(pred[v].begin(), pred[v].end(),
                        [&](NodeId u) { return connected_sources.count(u) != 0; })) {
            continue;
        }
        std::map<NodeId, std::size_t> leaf_parent;
        const std::size_t root = build_tree(model, tree_for(join_trees, v, "join"), forward,
                                            "join:" + forward.label(v), leaf_parent);
        model.add_flow(root, index[v]);
        join_port[v] = std::move(leaf_parent);
    }
    for (const auto& [e, f] : forward.edges()) {
        const auto [u, v] = e;
        if (connected_sources.count(u) != 0) continue;
        const std::size_t from = succ[u].size() >= 2 ? split_port.at(u).at(v) : index[u];
        const std::size_t to = pred[v].size() >= 2 ? join_port.at(v).at(u) : index[v];
        model.add_flow(from, to);
    }

    std::vector<std::size_t> open;
    for (NodeId a : forward.activities()) {
        if (succ[a].empty()) open.push_back(index[a]);
    }
    if (auto p = model.problems(open); !p.empty()) {
        std::string msg = "gateway instantiation produced an invalid skeleton:";
        for (const auto& s : p) msg += "\n  " + s;
        throw Error(ErrorCode::InvariantViolation, msg);
    }
    return model;
}

BpmnModel weave_loops(const BpmnModel& skeleton, const std::vector<LoopBlock>& blocks, const Dfg& dfg) {
    BpmnModel model = skeleton;
    std::map<NodeId, std::size_t> loop_join;  // entry activity -> its loop join

    auto task_of = [&](NodeId n) {
        auto t = model.find_task(dfg.label(n));
        if (!t) throw Error(ErrorCode::EntryNotFound, "loop activity '" + dfg.label(n) + "' not in model");
        return *t;
    };
    auto single = [](const std::vector<std::size_t>& v) -> std::optional<std::size_t> {
        if (v.size() != 1) return std::nullopt;
        return v.front();
    };

    for (const auto& block : blocks) {
        std::set<std::size_t> entry_tasks, exit_tasks;
        for (NodeId n : block.entries) entry_tasks.insert(task_of(n));
        for (NodeId n : block.exits) exit_tasks.insert(task_of(n));

        // A parallel split counts as entry side when all its branches do.
        std::function<bool(std::size_t)> entry_side = [&](std::size_t n) {
            if (entry_tasks.count(n) != 0) return true;
            const auto& node = model.node(n);
            if (node.kind != NodeKind::ParallelGateway || !node.is_split()) return false;
            for (std::size_t f : model.outgoing(n)) {
                if (!entry_side(model.flows()[f].target)) return false;
            }
            return true;
        };
        std::function<bool(std::size_t)> exit_side = [&](std::size_t n) {
            if (exit_tasks.count(n) != 0) return true;
            const auto& node = model.node(n);
            if (node.kind != NodeKind::ParallelGateway || !node.is_join()) return false;
            for (std::size_t f : model.incoming(n)) {
                if (!exit_side(model.flows()[f].source)) return false;
            }
            return true;
        };

        for (NodeId entry : block.entries) {
            if (loop_join.count(entry) != 0) continue;
            std::size_t node = task_of(entry);
            auto flow = single(model.incoming(node));
            if (!flow) throw Error(ErrorCode::InvariantViolation, "entry task without single inflow");
            while (true) {
                const std::size_t src = model.flows()[*flow].source;
                if (!(model.node(src).kind == NodeKind::ParallelGateway && model.node(src).is_split() &&
                      entry_side(src))) {
                    break;
                }
                auto up = single(model.incoming(src));
                if (!up) break;
                flow = up;
            }
            // Entries meeting at the same flow share one join.
            const std::size_t source = model.flows()[*flow].source;
            const std::size_t target = model.flows()[*flow].target;
            std::optional<std::size_t> shared;
            for (const auto& [n, lj] : loop_join) {
                if (lj == source) shared = lj;
            }
            if (shared) {
                loop_join[entry] = *shared;
                continue;
            }
            const std::size_t lj =
                model.add_gateway(NodeKind::ExclusiveGateway, GatewayDirection::Converging,
                                  "loop-join:" + model.node(target).id);
            model.insert_on_flow(*flow, lj);
            loop_join[entry] = lj;
        }

        // Exit insertion points: flow index, or the task itself when it has no outflow.
        std::map<std::size_t, std::set<std::size_t>> flow_targets;
        std::map<std::size_t, std::set<std::size_t>> open_targets;
        for (NodeId exit : block.exits) {
            std::set<std::size_t> joins;
            for (const auto& [s, t] : block.back_edges) {
                if (s == exit) joins.insert(loop_join.at(t));
            }
            const std::size_t node = task_of(exit);
            auto flow = single(model.outgoing(node));
            if (!flow) {
                open_targets[node].insert(joins.begin(), joins.end());
                continue;
            }
            while (true) {
                const std::size_t tgt = model.flows()[*flow].target;
                if (!(model.node(tgt).kind == NodeKind::ParallelGateway && model.node(tgt).is_join() &&
                      exit_side(tgt))) {
                    break;
                }
                auto down = single(model.outgoing(tgt));
                if (!down) break;
                flow = down;
            }
            flow_targets[*flow].insert(joins.begin(), joins.end());
        }
        for (const auto& [flow, joins] : flow_targets) {
            const auto& f = model.flows()[flow];
            const std::size_t ls = model.add_gateway(
                NodeKind::ExclusiveGateway, GatewayDirection::Diverging,
                "loop-split:" + model.node(f.source).id + ">" + model.node(f.target).id);
            model.insert_on_flow(flow, ls);
            for (std::size_t lj : joins) model.add_flow(ls, lj);
        }
        for (const auto& [task, joins] : open_targets) {
            if (joins.size() == 1) {
                model.add_flow(task, *joins.begin());
                continue;
            }
            const std::size_t ls = model.add_gateway(NodeKind::ExclusiveGateway,
                                                     GatewayDirection::Diverging,
                                                     "loop-split:" + model.node(task).id);
            model.add_flow(task, ls);
            for (std::size_t lj : joins) model.add_flow(ls, lj);
        }
    }
    model.validate();
    return model;
}

}  // namespace loopminer
