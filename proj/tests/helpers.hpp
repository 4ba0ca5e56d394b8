#pragma once

#include <initializer_list>
#include <string>
#include <utility>

#include "loopminer/bpmn.hpp"
#include "loopminer/eventlog.hpp"

namespace testutil {

// Log from compact variants: each character is one activity.
inline loopminer::EventLog log_of(std::initializer_list<std::pair<const char*, std::uint64_t>> variants) {
    loopminer::EventLog log;
    for (const auto& [word, n] : variants) {
        loopminer::Sequence s;
        for (const char* c = word; *c != '\0'; ++c) s.emplace_back(1, *c);
        log.add(s, n);
    }
    return log;
}

inline loopminer::Sequence seq(const char* word) {
    loopminer::Sequence s;
    for (const char* c = word; *c != '\0'; ++c) s.emplace_back(1, *c);
    return s;
}

// Hand-built models. Gateway keys only need to be unique.
struct ModelBuilder {
    loopminer::BpmnModel m;
    std::size_t start = m.add_node(loopminer::NodeKind::StartEvent, "start");
    std::size_t end = m.add_node(loopminer::NodeKind::EndEvent, "end");

    std::size_t task(const std::string& l) { return m.add_task(l); }
    std::size_t xsplit(const std::string& k) {
        return m.add_gateway(loopminer::NodeKind::ExclusiveGateway, loopminer::GatewayDirection::Diverging, k);
    }
    std::size_t xjoin(const std::string& k) {
        return m.add_gateway(loopminer::NodeKind::ExclusiveGateway, loopminer::GatewayDirection::Converging, k);
    }
    std::size_t asplit(const std::string& k) {
        return m.add_gateway(loopminer::NodeKind::ParallelGateway, loopminer::GatewayDirection::Diverging, k);
    }
    std::size_t ajoin(const std::string& k) {
        return m.add_gateway(loopminer::NodeKind::ParallelGateway, loopminer::GatewayDirection::Converging, k);
    }
    void chain(std::initializer_list<std::size_t> nodes) {
        for (auto it = nodes.begin(); std::next(it) != nodes.end(); ++it) m.add_flow(*it, *std::next(it));
    }
};

// start a XOR( AND(b,c) , e ) d end
inline loopminer::BpmnModel running_example() {
    ModelBuilder b;
    const auto a = b.task("a"), d = b.task("d");
    const auto xs = b.xsplit("xs"), xj = b.xjoin("xj"), as = b.asplit("as"), aj = b.ajoin("aj");
    b.chain({b.start, a, xs, as, b.task("b"), aj, xj, d, b.end});
    b.chain({as, b.task("c"), aj});
    b.chain({xs, b.task("e"), xj});
    return std::move(b.m);
}

inline loopminer::BpmnModel sequence_model(std::initializer_list<const char*> labels) {
    ModelBuilder b;
    std::size_t prev = b.start;
    for (const char* l : labels) {
        const auto t = b.task(l);
        b.m.add_flow(prev, t);
        prev = t;
    }
    b.m.add_flow(prev, b.end);
    return std::move(b.m);
}

// start a GW(b,c) d end with XOR or AND gateways
inline loopminer::BpmnModel block_model(bool parallel) {
    ModelBuilder b;
    const auto a = b.task("a"), d = b.task("d");
    const auto s = parallel ? b.asplit("s") : b.xsplit("s");
    const auto j = parallel ? b.ajoin("j") : b.xjoin("j");
    b.chain({b.start, a, s, b.task("b"), j, d, b.end});
    b.chain({s, b.task("c"), j});
    return std::move(b.m);
}

}  // namespace testutil
