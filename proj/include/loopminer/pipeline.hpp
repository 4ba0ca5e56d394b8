#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "loopminer/bpmn.hpp"
#include "loopminer/concurrency.hpp"
#include "loopminer/dfg.hpp"
#include "loopminer/eventlog.hpp"
#include "loopminer/loops.hpp"
#include "loopminer/synthesis.hpp"

namespace loopminer {

struct DiscoveryConfig {
    double noise = 0.0;
    double trace_filter = 0.05;
    double epsilon = 0.3;
};

/// Every intermediate of one discovery run, for inspection and emission.
struct DiscoveryResult {
    EventLog filtered_log;
    Dfg dfg;          // filtered
    Dfg pruned;       // concurrent edges removed
    ConcurrencyRelation relation;
    std::set<Edge> back_edges;
    std::vector<LoopBlock> blocks;
    Dfg forward;      // acyclic, transitive edges removed
    std::map<NodeId, GatewayTree> split_trees;
    std::map<NodeId, GatewayTree> join_trees;
    BpmnModel model;
    std::string bpmn_xml;
    double seconds = 0.0;  // DFG construction through serialization
};

DiscoveryResult discover(const EventLog& log, const DiscoveryConfig& config = {});

}  // namespace loopminer
