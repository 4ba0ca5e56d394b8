#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopminer/concurrency.hpp"
#include "loopminer/dfg.hpp"
#include "loopminer/loops.hpp"
#include "loopminer/synthesis.hpp"

namespace loopminer {

enum class NodeKind { StartEvent, EndEvent, Task, ExclusiveGateway, ParallelGateway };
enum class GatewayDirection { Unspecified, Diverging, Converging };

struct BpmnNode {
    std::string id;
    NodeKind kind = NodeKind::Task;
    std::string name;  // task label; empty otherwise
    GatewayDirection direction = GatewayDirection::Unspecified;

    bool is_gateway() const {
        return kind == NodeKind::ExclusiveGateway || kind == NodeKind::ParallelGateway;
    }
    bool is_split() const { return is_gateway() && direction == GatewayDirection::Diverging; }
    bool is_join() const { return is_gateway() && direction == GatewayDirection::Converging; }
};

struct SequenceFlow {
    std::size_t source = 0;
    std::size_t target = 0;
};

/// BPMN process graph: one start event, one end event, tasks, XOR/AND
/// gateways and sequence flows. Node indices are stable; ids are derived
/// from a content key so that equal construction yields equal ids.
class BpmnModel {
public:
    /// Adds a node whose id is a hash of `key` (unique within the model).
    std::size_t add_node(NodeKind kind, const std::string& key, std::string name = {},
                         GatewayDirection direction = GatewayDirection::Unspecified);
    /// Adds a node with an explicit id, as read from a file.
    std::size_t add_node_with_id(NodeKind kind, std::string id, std::string name = {},
                                 GatewayDirection direction = GatewayDirection::Unspecified);
    std::size_t add_task(const std::string& label);
    std::size_t add_gateway(NodeKind kind, GatewayDirection direction, const std::string& key);

    std::size_t add_flow(std::size_t source, std::size_t target);
    void retarget_flow(std::size_t flow, std::size_t new_target) { flows_.at(flow).target = new_target; }
    /// Replaces flow s->t by s->node->t.
    void insert_on_flow(std::size_t flow, std::size_t node);

    const std::vector<BpmnNode>& nodes() const noexcept { return nodes_; }
    const std::vector<SequenceFlow>& flows() const noexcept { return flows_; }
    const BpmnNode& node(std::size_t i) const { return nodes_.at(i); }
    void set_direction(std::size_t i, GatewayDirection d) { nodes_.at(i).direction = d; }

    std::vector<std::size_t> outgoing(std::size_t node) const;  // flow indices
    std::vector<std::size_t> incoming(std::size_t node) const;

    std::optional<std::size_t> find_task(const std::string& label) const;
    std::optional<std::size_t> find_id(const std::string& id) const;
    std::optional<std::size_t> start_event() const;
    std::optional<std::size_t> end_event() const;

    std::size_t count(NodeKind kind) const;

    /// Structural problems; empty when the model satisfies every invariant.
    /// `open_tasks` lists task indices allowed to lack an outgoing flow.
    std::vector<std::string> problems(const std::vector<std::size_t>& open_tasks = {}) const;
    /// Throws InvariantViolation listing the problems.
    void validate() const;

    /// Structural equality on ids, kinds, names, directions and flow multiset.
    bool same_structure(const BpmnModel& other) const;

private:
    std::vector<BpmnNode> nodes_;
    std::vector<SequenceFlow> flows_;
    std::map<std::string, std::size_t> by_id_;
};

const char* to_string(NodeKind kind);

/// Loop-free skeleton from an acyclic forward DFG. Nodes with at least two
/// forward successors need an entry in `split_trees`, nodes with at least two
/// predecessors one in `join_trees`. Groups of sources sharing one successor
/// set whose members have exactly that source set as predecessors are wired
/// as join-then-split; all other edges connect split-tree leaves to
/// join-tree leaves. Tasks without forward successors are left open for
/// weave_loops.
BpmnModel instantiate_gateways(const Dfg& forward, const std::map<NodeId, GatewayTree>& split_trees,
                               const std::map<NodeId, GatewayTree>& join_trees);

/// Adds loop joins before entries and loop splits after exits.
///
/// The join lands on the entry's incoming flow, moved in front of a parallel
/// split when every branch of that split is an entry. The split lands on the
/// exit's outgoing flow, moved behind a parallel join when every input of
/// that join is an exit. Back flows connect each split to the joins of its
/// targets. Throws EntryNotFound for activities missing from the model.
BpmnModel weave_loops(const BpmnModel& skeleton, const std::vector<LoopBlock>& blocks, const Dfg& dfg);

std::string serialize_bpmn_xml(const BpmnModel& model);
/// Throws MalformedXml.
BpmnModel parse_bpmn_xml(std::string_view document);
std::string serialize_dot(const BpmnModel& model);

}  // namespace loopminer
