#include "loopminer/loggen.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <random>

#include "loopminer/error.hpp"

namespace loopminer {

LoopPattern parse_loop_pattern(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
    if (t == "L1") return LoopPattern::L1;
    if (t == "L2") return LoopPattern::L2;
    if (t == "L3") return LoopPattern::L3;
    if (t == "L4") return LoopPattern::L4;
    throw Error(ErrorCode::InvalidArgument, "unknown loop pattern: " + text);
}

const char* to_string(LoopPattern pattern) {
    switch (pattern) {
        case LoopPattern::L1: return "L1";
        case LoopPattern::L2: return "L2";
        case LoopPattern::L3: return "L3";
        case LoopPattern::L4: return "L4";
    }
    return "?";
}

namespace {

struct Builder {
    BpmnModel m;

    std::size_t start() { return m.add_node(NodeKind::StartEvent, "start"); }
    std::size_t end() { return m.add_node(NodeKind::EndEvent, "end"); }
    std::size_t task(const std::string& l) { return m.add_task(l); }
    std::size_t gw(NodeKind k, GatewayDirection d, const std::string& key) { return m.add_gateway(k, d, key); }
    std::size_t xsplit(const std::string& key) { return gw(NodeKind::ExclusiveGateway, GatewayDirection::Diverging, key); }
    std::size_t xjoin(const std::string& key) { return gw(NodeKind::ExclusiveGateway, GatewayDirection::Converging, key); }
    std::size_t asplit(const std::string& key) { return gw(NodeKind::ParallelGateway, GatewayDirection::Diverging, key); }
    std::size_t ajoin(const std::string& key) { return gw(NodeKind::ParallelGateway, GatewayDirection::Converging, key); }

    void chain(std::initializer_list<std::size_t> nodes) {
        for (auto it = nodes.begin(); std::next(it) != nodes.end(); ++it) m.add_flow(*it, *std::next(it));
    }
};

BpmnModel build_l1() {
    Builder b;
    const auto s = b.start(), e = b.end();
    const auto lj = b.xjoin("loop-join"), ls = b.xsplit("loop-split");
    const auto xs = b.xsplit("split"), xj = b.xjoin("join");
    const auto as = b.asplit("and-split"), aj = b.ajoin("and-join");
    b.chain({s, b.task("a"), lj, xs});
    b.chain({xs, b.task("b"), as});
    b.chain({as, b.task("c"), aj});
    b.chain({as, b.task("d"), aj});
    b.chain({aj, b.task("e"), xj});
    b.chain({xs, b.task("f"), b.task("g"), b.task("h"), xj});
    b.chain({xj, ls, lj});
    b.chain({ls, b.task("i"), e});
    return std::move(b.m);
}

BpmnModel build_l2() {
    Builder b;
    const auto s = b.start(), e = b.end();
    const auto lj = b.xjoin("loop-join");
    const auto ls1 = b.xsplit("loop-split-1"), ls2 = b.xsplit("loop-split-2");
    const auto xs = b.xsplit("split"), xj = b.xjoin("join");
    const auto as = b.asplit("and-split"), aj = b.ajoin("and-join");
    b.chain({s, b.task("a"), lj, b.task("b"), xs, as});
    b.chain({as, b.task("c"), aj});
    b.chain({as, b.task("d"), aj});
    b.chain({aj, b.task("e"), ls1});
    b.chain({xs, b.task("f"), b.task("g"), ls2});
    b.chain({ls1, lj});
    b.chain({ls2, lj});
    b.chain({ls1, xj});
    b.chain({ls2, xj});
    b.chain({xj, b.task("h"), e});
    return std::move(b.m);
}

BpmnModel build_l3() {
    Builder b;
    const auto s = b.start(), e = b.end();
    const auto lj = b.xjoin("loop-join"), ls = b.xsplit("loop-split");
    const auto xs = b.xsplit("split"), xj = b.xjoin("join");
    const auto as = b.asplit("and-split"), aj = b.ajoin("and-join");
    b.chain({s, b.task("a"), lj, b.task("b"), xs});
    b.chain({xs, b.task("c"), xj});
    b.chain({xs, b.task("d"), xj});
    b.chain({xj, b.task("e"), ls, lj});
    b.chain({ls, as});
    b.chain({as, b.task("f"), aj});
    b.chain({as, b.task("g"), aj});
    b.chain({aj, b.task("h"), e});
    return std::move(b.m);
}

BpmnModel build_l4() {
    Builder b;
    const auto s = b.start(), e = b.end();
    const auto lj = b.xjoin("loop-join"), ls = b.xsplit("loop-split");
    const auto xs = b.xsplit("split"), xj = b.xjoin("join");
    const auto as = b.asplit("and-split"), aj = b.ajoin("and-join");
    b.chain({s, b.task("a"), lj, b.task("b"), as});
    b.chain({as, b.task("c"), aj});
    b.chain({as, b.task("d"), aj});
    b.chain({aj, ls, lj});
    b.chain({ls, xs});
    b.chain({xs, b.task("e"), xj});
    b.chain({xs, b.task("f"), xj});
    b.chain({xj, b.task("g"), e});
    return std::move(b.m);
}

// Flows closing a cycle in a depth-first walk from the start event.
std::vector<bool> back_flows(const BpmnModel& model) {
    const std::size_t n = model.nodes().size();
    std::vector<bool> back(model.flows().size(), false);
    std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
    const auto start = model.start_event();
    if (!start) return back;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{*start, 0}};
    state[*start] = 1;
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        const auto out = model.outgoing(v);
        if (next == out.size()) {
            state[v] = 2;
            stack.pop_back();
            continue;
        }
        const std::size_t f = out[next++];
        const std::size_t w = model.flows()[f].target;
        if (state[w] == 1) {
            back[f] = true;
        } else if (state[w] == 0) {
            state[w] = 1;
            stack.push_back({w, 0});
        }
    }
    return back;
}

class Simulator {
public:
    Simulator(const BpmnModel& model, const SimulationConfig& config)
        : model_(model), config_(config), rng_(config.seed), back_(back_flows(model)) {
        for (std::size_t v = 0; v < model.nodes().size(); ++v) {
            in_.push_back(model.incoming(v));
            out_.push_back(model.outgoing(v));
        }
    }

    // Empty when the run was aborted.
    std::optional<Sequence> run() {
        std::vector<std::uint32_t> tokens(model_.flows().size(), 0);
        std::vector<std::uint32_t> reentries(model_.nodes().size(), 0);
        Sequence trace;
        const std::size_t limit = 10 * model_.nodes().size();
        const std::size_t start = *model_.start_event();
        for (std::size_t f : out_[start]) ++tokens[f];

        while (true) {
            std::vector<std::size_t> enabled;
            for (std::size_t v = 0; v < model_.nodes().size(); ++v) {
                if (is_enabled(v, tokens)) enabled.push_back(v);
            }
            if (enabled.empty()) return std::nullopt;
            const std::size_t v = enabled[pick(enabled.size())];
            const auto& node = model_.node(v);

            if (node.kind == NodeKind::EndEvent) {
                consume_one(v, tokens);
                if (std::any_of(tokens.begin(), tokens.end(), [](std::uint32_t t) { return t != 0; })) {
                    return std::nullopt;
                }
                return trace;
            }

            if (node.kind == NodeKind::ParallelGateway && in_[v].size() > 1) {
                for (std::size_t f : in_[v]) --tokens[f];
            } else {
                consume_one(v, tokens);
            }

            if (node.kind == NodeKind::Task) {
                trace.push_back(node.name);
                if (trace.size() > limit) return std::nullopt;
            }

            if (node.kind == NodeKind::ExclusiveGateway && out_[v].size() > 1) {
                ++tokens[choose(v, reentries)];
            } else {
                for (std::size_t f : out_[v]) ++tokens[f];
            }
        }
    }

private:
    bool is_enabled(std::size_t v, const std::vector<std::uint32_t>& tokens) const {
        const auto& in = in_[v];
        if (in.empty()) return false;
        if (model_.node(v).kind == NodeKind::ParallelGateway) {
            return std::all_of(in.begin(), in.end(), [&](std::size_t f) { return tokens[f] > 0; });
        }
        return std::any_of(in.begin(), in.end(), [&](std::size_t f) { return tokens[f] > 0; });
    }

    void consume_one(std::size_t v, std::vector<std::uint32_t>& tokens) {
        std::vector<std::size_t> marked;
        for (std::size_t f : in_[v]) {
            if (tokens[f] > 0) marked.push_back(f);
        }
        --tokens[marked[marked.size() == 1 ? 0 : pick(marked.size())]];
    }

    std::size_t choose(std::size_t v, std::vector<std::uint32_t>& reentries) {
        std::vector<std::size_t> forward, loop;
        for (std::size_t f : out_[v]) {
            const std::size_t target = model_.flows()[f].target;
            if (!back_[f]) forward.push_back(f);
            else if (reentries[target] < config_.max_loop_iterations) loop.push_back(f);
        }
        if (!loop.empty() && (forward.empty() || unit() < config_.loop_continue_probability)) {
            const std::size_t f = loop[pick(loop.size())];
            ++reentries[model_.flows()[f].target];
            return f;
        }
        if (forward.empty()) return out_[v][pick(out_[v].size())];
        return forward[pick(forward.size())];
    }

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    const BpmnModel& model_;
    const SimulationConfig& config_;
    std::mt19937_64 rng_;
    std::vector<bool> back_;
    std::vector<std::vector<std::size_t>> in_, out_;
};

}  // namespace

BpmnModel canonical_pattern(LoopPattern pattern) {
    BpmnModel m;
    switch (pattern) {
        case LoopPattern::L1: m = build_l1(); break;
        case LoopPattern::L2: m = build_l2(); break;
        case LoopPattern::L3: m = build_l3(); break;
        case LoopPattern::L4: m = build_l4(); break;
    }
    m.validate();
    return m;
}

EventLog simulate(const BpmnModel& model, const SimulationConfig& config) {
    if (config.traces == 0) throw Error(ErrorCode::InvalidArgument, "traces must be at least 1");
    if (config.loop_continue_probability < 0.0 || config.loop_continue_probability >= 1.0) {
        throw Error(ErrorCode::InvalidArgument, "loop continue probability must lie in [0,1)");
    }
    if (!model.start_event() || !model.end_event()) {
        throw Error(ErrorCode::InvariantViolation, "model needs a start and an end event");
    }
    Simulator sim(model, config);
    EventLog log;
    constexpr std::size_t kMaxAttempts = 1000;
    for (std::uint64_t i = 0; i < config.traces; ++i) {
        std::optional<Sequence> trace;
        for (std::size_t attempt = 0; attempt < kMaxAttempts && !trace; ++attempt) trace = sim.run();
        if (!trace) throw Error(ErrorCode::InvariantViolation, "model does not terminate under simulation");
        log.add(*trace);
    }
    return log;
}

}  // namespace loopminer
