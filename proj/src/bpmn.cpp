#include "loopminer/bpmn.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <tuple>

#include "loopminer/error.hpp"
#include "xml_util.hpp"

namespace loopminer {

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::StartEvent: return "startEvent";
        case NodeKind::EndEvent: return "endEvent";
        case NodeKind::Task: return "task";
        case NodeKind::ExclusiveGateway: return "exclusiveGateway";
        case NodeKind::ParallelGateway: return "parallelGateway";
    }
    return "unknown";
}

namespace {

const char* id_prefix(NodeKind kind) {
    switch (kind) {
        case NodeKind::StartEvent: return "StartEvent_";
        case NodeKind::EndEvent: return "EndEvent_";
        case NodeKind::Task: return "Task_";
        case NodeKind::ExclusiveGateway:
        case NodeKind::ParallelGateway: return "Gateway_";
    }
    return "Node_";
}

std::string hex16(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::size_t BpmnModel::add_node(NodeKind kind, const std::string& key, std::string name,
                                GatewayDirection direction) {
    std::string id = id_prefix(kind) + hex16(detail::fnv1a64(key));
    if (by_id_.count(id) != 0) throw Error(ErrorCode::InvariantViolation, "duplicate BPMN node key " + key);
    return add_node_with_id(kind, std::move(id), std::move(name), direction);
}

std::size_t BpmnModel::add_node_with_id(NodeKind kind, std::string id, std::string name,
                                        GatewayDirection direction) {
    if (by_id_.count(id) != 0) {
        throw Error(ErrorCode::InvariantViolation, "duplicate BPMN node id " + id);
    }
    by_id_.emplace(id, nodes_.size());
    nodes_.push_back(BpmnNode{std::move(id), kind, std::move(name), direction});
    return nodes_.size() - 1;
}

std::size_t BpmnModel::add_task(const std::string& label) {
    return add_node(NodeKind::Task, "task:" + label, label);
}

std::size_t BpmnModel::add_gateway(NodeKind kind, GatewayDirection direction, const std::string& key) {
    return add_node(kind, key, {}, direction);
}

std::size_t BpmnModel::add_flow(std::size_t source, std::size_t target) {
    if (source >= nodes_.size() || target >= nodes_.size()) {
        throw Error(ErrorCode::InvalidArgument, "flow endpoint out of range");
    }
    flows_.push_back({source, target});
    return flows_.size() - 1;
}

void BpmnModel::insert_on_flow(std::size_t flow, std::size_t node) {
    const std::size_t target = flows_.at(flow).target;
    flows_[flow].target = node;
    add_flow(node, target);
}

std::vector<std::size_t> BpmnModel::outgoing(std::size_t node) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < flows_.size(); ++f) {
        if (flows_[f].source == node) out.push_back(f);
    }
    return out;
}

std::vector<std::size_t> BpmnModel::incoming(std::size_t node) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < flows_.size(); ++f) {
        if (flows_[f].target == node) out.push_back(f);
    }
    return out;
}

std::optional<std::size_t> BpmnModel::find_task(const std::string& label) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].kind == NodeKind::Task && nodes_[i].name == label) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> BpmnModel::find_id(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> BpmnModel::start_event() const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].kind == NodeKind::StartEvent) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> BpmnModel::end_event() const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].kind == NodeKind::EndEvent) return i;
    }
    return std::nullopt;
}

std::size_t BpmnModel::count(NodeKind kind) const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                  [kind](const BpmnNode& n) { return n.kind == kind; }));
}

std::vector<std::string> BpmnModel::problems(const std::vector<std::size_t>& open_tasks) const {
    std::vector<std::string> out;
    if (count(NodeKind::StartEvent) != 1) out.push_back("model needs exactly one start event");
    if (count(NodeKind::EndEvent) != 1) out.push_back("model needs exactly one end event");
    std::vector<std::size_t> in(nodes_.size(), 0), outd(nodes_.size(), 0);
    for (const auto& f : flows_) {
        ++outd[f.source];
        ++in[f.target];
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        auto bad = [&](const std::string& what) {
            out.push_back(std::string(to_string(n.kind)) + " " + (n.name.empty() ? n.id : n.name) +
                          ": " + what + " (in=" + std::to_string(in[i]) +
                          ", out=" + std::to_string(outd[i]) + ")");
        };
        switch (n.kind) {
            case NodeKind::StartEvent:
                if (in[i] != 0 || outd[i] != 1) bad("start event needs 0 in / 1 out");
                break;
            case NodeKind::EndEvent:
                if (in[i] != 1 || outd[i] != 0) bad("end event needs 1 in / 0 out");
                break;
            case NodeKind::Task: {
                const bool open =
                    std::find(open_tasks.begin(), open_tasks.end(), i) != open_tasks.end();
                if (in[i] != 1 || !(outd[i] == 1 || (open && outd[i] == 0))) {
                    bad("task needs 1 in / 1 out");
                }
                break;
            }
            case NodeKind::ExclusiveGateway:
            case NodeKind::ParallelGateway:
                if (n.direction == GatewayDirection::Diverging && !(in[i] == 1 && outd[i] >= 2)) {
                    bad("split gateway needs 1 in / >=2 out");
                } else if (n.direction == GatewayDirection::Converging &&
                           !(in[i] >= 2 && outd[i] == 1)) {
                    bad("join gateway needs >=2 in / 1 out");
                } else if (n.direction == GatewayDirection::Unspecified) {
                    bad("gateway direction unspecified");
                }
                break;
        }
    }
    if (!open_tasks.empty() || !out.empty()) return out;

    // Every node on a start->end path.
    auto walk = [&](std::size_t from, bool forward) {
        std::vector<bool> seen(nodes_.size(), false);
        std::deque<std::size_t> queue{from};
        seen[from] = true;
        while (!queue.empty()) {
            std::size_t v = queue.front();
            queue.pop_front();
            for (const auto& f : flows_) {
                const std::size_t a = forward ? f.source : f.target;
                const std::size_t b = forward ? f.target : f.source;
                if (a == v && !seen[b]) {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        return seen;
    };
    const auto fw = walk(*start_event(), true);
    const auto bw = walk(*end_event(), false);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!fw[i] || !bw[i]) {
            out.push_back(std::string(to_string(nodes_[i].kind)) + " " +
                          (nodes_[i].name.empty() ? nodes_[i].id : nodes_[i].name) +
                          ": not on a start-to-end path");
        }
    }
    return out;
}

void BpmnModel::validate() const {
    const auto p = problems();
    if (p.empty()) return;
    std::string msg = "BPMN model violates structural invariants:";
    for (const auto& s : p) msg += "\n  " + s;
    throw Error(ErrorCode::InvariantViolation, msg);
}

bool BpmnModel::same_structure(const BpmnModel& other) const {
    auto canon_nodes = [](const BpmnModel& m) {
        std::vector<std::tuple<std::string, int, std::string, int>> v;
        for (const auto& n : m.nodes_) {
            v.emplace_back(n.id, static_cast<int>(n.kind), n.name, static_cast<int>(n.direction));
        }
        std::sort(v.begin(), v.end());
        return v;
    };
    auto canon_flows = [](const BpmnModel& m) {
        std::vector<std::pair<std::string, std::string>> v;
        for (const auto& f : m.flows_) v.emplace_back(m.nodes_[f.source].id, m.nodes_[f.target].id);
        std::sort(v.begin(), v.end());
        return v;
    };
    return canon_nodes(*this) == canon_nodes(other) && canon_flows(*this) == canon_flows(other);
}

}  // namespace loopminer
