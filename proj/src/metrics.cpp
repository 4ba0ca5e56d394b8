#include "loopminer/metrics.hpp"

#include <algorithm>
#include <set>

#include "loopminer/error.hpp"
#include "loopminer/petri.hpp"
#include "loopminer/replay.hpp"

namespace loopminer {

double f_score(double fitness, double precision) {
    if (fitness == 0.0 && precision == 0.0) {
        throw Error(ErrorCode::BothZero, "f-score undefined for fitness = precision = 0");
    }
    return 2.0 * fitness * precision / (fitness + precision);
}

std::uint64_t size(const BpmnModel& model) { return model.nodes().size() + model.flows().size(); }

std::uint64_t cfc(const BpmnModel& model, bool include_joins) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < model.nodes().size(); ++i) {
        const auto& n = model.node(i);
        if (!n.is_gateway()) continue;
        const bool xor_gw = n.kind == NodeKind::ExclusiveGateway;
        if (n.is_split()) {
            total += xor_gw ? model.outgoing(i).size() : 1;
        } else if (include_joins && n.is_join()) {
            total += xor_gw ? model.incoming(i).size() : 1;
        }
    }
    return total;
}

namespace {

struct Reducer {
    const BpmnModel& model;
    std::multiset<std::pair<std::size_t, std::size_t>> edges;
    std::vector<bool> alive;
    std::set<std::size_t> matched;

    explicit Reducer(const BpmnModel& m) : model(m), alive(m.nodes().size(), true) {
        for (const auto& f : m.flows()) edges.insert({f.source, f.target});
    }

    std::size_t out_degree(std::size_t v) const {
        std::size_t d = 0;
        for (const auto& e : edges) d += e.first == v ? 1 : 0;
        return d;
    }
    std::size_t in_degree(std::size_t v) const {
        std::size_t d = 0;
        for (const auto& e : edges) d += e.second == v ? 1 : 0;
        return d;
    }
    std::size_t parallel(std::size_t s, std::size_t t) const { return edges.count({s, t}); }
    void erase_one(std::size_t s, std::size_t t) { edges.erase(edges.find({s, t})); }

    bool contract_serial() {
        for (std::size_t v = 0; v < alive.size(); ++v) {
            if (!alive[v]) continue;
            const auto kind = model.node(v).kind;
            if (kind == NodeKind::StartEvent || kind == NodeKind::EndEvent) continue;
            if (in_degree(v) != 1 || out_degree(v) != 1) continue;
            std::size_t pred = 0, succ = 0;
            for (const auto& e : edges) {
                if (e.second == v) pred = e.first;
                if (e.first == v) succ = e.second;
            }
            if (pred == v) continue;  // self loop
            erase_one(pred, v);
            erase_one(v, succ);
            edges.insert({pred, succ});
            alive[v] = false;
            return true;
        }
        return false;
    }

    bool same_type(std::size_t a, std::size_t b) const {
        return model.node(a).is_gateway() && model.node(a).kind == model.node(b).kind;
    }

    bool merge_parallel() {
        std::set<std::pair<std::size_t, std::size_t>> distinct(edges.begin(), edges.end());
        for (const auto& [s, t] : distinct) {
            if (s == t || parallel(s, t) < 2 || !same_type(s, t)) continue;
            while (parallel(s, t) > 1) erase_one(s, t);
            matched.insert(s);
            matched.insert(t);
            return true;
        }
        return false;
    }

    bool unroll_loop() {
        std::set<std::pair<std::size_t, std::size_t>> distinct(edges.begin(), edges.end());
        for (const auto& [j, s] : distinct) {
            if (j == s || model.node(j).kind != NodeKind::ExclusiveGateway || !same_type(j, s)) continue;
            if (parallel(s, j) == 0 || in_degree(j) < 2 || out_degree(s) < 2) continue;
            erase_one(s, j);
            matched.insert(j);
            matched.insert(s);
            return true;
        }
        return false;
    }

    void run() {
        while (contract_serial() || merge_parallel() || unroll_loop()) {
        }
    }
};

}  // namespace

double structuredness(const BpmnModel& model) {
    std::size_t gateways = 0;
    for (const auto& n : model.nodes()) gateways += n.is_gateway() ? 1 : 0;
    if (gateways == 0) return 1.0;
    Reducer r(model);
    r.run();
    return static_cast<double>(r.matched.size()) / static_cast<double>(gateways);
}

MetricsReport evaluate(const BpmnModel& model, const EventLog& log, bool cfc_include_joins) {
    MetricsReport report;
    report.size = size(model);
    report.cfc = cfc(model, cfc_include_joins);
    report.structuredness = structuredness(model);

    const PetriNet net = bpmn_to_petri(model);
    const ReplayResult replay = replay_log(net, log);
    report.fitness = fitness_from_counts(replay.totals);
    report.generalization = generalization_from_executions(replay.executions);
    report.precision = precision(net, log);
    report.f_score = (report.fitness == 0.0 && report.precision == 0.0) ? 0.0
                                                                         : f_score(report.fitness, report.precision);
    return report;
}

}  // namespace loopminer
