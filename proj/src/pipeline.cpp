#include "loopminer/pipeline.hpp"

#include <chrono>

#include "loopminer/error.hpp"

namespace loopminer {

namespace {

void check_fraction(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must lie in [0,1]");
}

}  // namespace

DiscoveryResult discover(const EventLog& log, const DiscoveryConfig& config) {
    check_fraction(config.noise, "noise");
    check_fraction(config.trace_filter, "trace filter");
    check_fraction(config.epsilon, "epsilon");
    if (log.empty()) throw Error(ErrorCode::EmptyLog, "log has no traces");

    DiscoveryResult r;
    r.filtered_log = config.trace_filter > 0.0 ? filter_infrequent_traces(log, config.trace_filter) : log;

    const auto t0 = std::chrono::steady_clock::now();
    r.dfg = filter_dfg(build_dfg(r.filtered_log), config.noise);
    r.relation = discover_concurrency(r.dfg, r.filtered_log, config.epsilon);
    r.pruned = prune_concurrent_edges(r.dfg, r.relation);
    r.back_edges = detect_loop_edges(r.pruned);
    r.blocks = group_loop_blocks(r.pruned, r.back_edges, r.relation);
    r.forward = remove_transitive_successors(remove_edges(r.pruned, r.back_edges), r.relation, r.filtered_log);

    for (NodeId n = 0; n < r.forward.node_count(); ++n) {
        if (r.forward.successors(n).size() >= 2) r.split_trees.emplace(n, partition_successors(n, r.forward, r.relation));
        if (r.forward.predecessors(n).size() >= 2) r.join_trees.emplace(n, partition_predecessors(n, r.forward, r.relation));
    }
    const BpmnModel skeleton = instantiate_gateways(r.forward, r.split_trees, r.join_trees);
    r.model = weave_loops(skeleton, r.blocks, r.pruned);
    r.bpmn_xml = serialize_bpmn_xml(r.model);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace loopminer
