#include <doctest.h>

#include "helpers.hpp"
#include "loopminer/concurrency.hpp"
#include "loopminer/dfg.hpp"
#include "loopminer/error.hpp"
#include "loopminer/loops.hpp"
#include "oracles.hpp"

using namespace loopminer;
using testutil::log_of;

namespace {

struct Stages {
    Dfg dfg;
    ConcurrencyRelation rel;
    Dfg pruned;
    std::set<Edge> back;
};

Stages stages(const EventLog& log) {
    Stages s;
    s.dfg = build_dfg(log);
    s.rel = discover_concurrency(s.dfg, log);
    s.pruned = prune_concurrent_edges(s.dfg, s.rel);
    s.back = detect_loop_edges(s.pruned);
    return s;
}

std::set<std::string> names(const Dfg& g, const std::set<Edge>& edges) {
    std::set<std::string> out;
    for (const auto& e : edges) out.insert(g.edge_name(e));
    return out;
}

// The detected set must be one of the minimum-weight feedback arc sets.
void check_minimum(const Dfg& g, const std::set<Edge>& got) {
    std::map<std::pair<int, int>, std::uint64_t> w;
    for (const auto& [e, f] : g.edges()) w[{int(e.first), int(e.second)}] = f;
    std::set<std::pair<int, int>> as_int;
    for (const auto& e : got) as_int.insert({int(e.first), int(e.second)});
    const auto best = oracle::minimum_feedback_arc_sets(w);
    CHECK(std::find(best.begin(), best.end(), as_int) != best.end());
}

}  // namespace

TEST_SUITE("loops") {

TEST_CASE("short loop back edge") {
    const auto s = stages(log_of({{"abd", 5}, {"abcbd", 3}}));
    CHECK(names(s.pruned, s.back) == std::set<std::string>{"c->b"});
    check_minimum(s.pruned, s.back);
}

TEST_CASE("acyclic graph has no back edges") {
    const auto s = stages(log_of({{"abcd", 5}, {"aed", 2}}));
    CHECK(s.back.empty());
}

TEST_CASE("two independent cycles get one back edge each") {
    const auto s = stages(log_of({{"abcbdefeg", 2}, {"abdeg", 4}}));
    CHECK(names(s.pruned, s.back) == std::set<std::string>{"c->b", "f->e"});
    check_minimum(s.pruned, s.back);
}

TEST_CASE("self loops are back edges") {
    const auto s = stages(log_of({{"abbc", 2}, {"abc", 1}}));
    CHECK(names(s.pruned, s.back) == std::set<std::string>{"b->b"});
}

TEST_CASE("uneven branches inside a loop keep their forward edges") {
    // a ( b | c d ) e, repeated: the long branch must not be cut.
    const auto s = stages(log_of({{"abe", 3}, {"acde", 3}, {"abeacde", 2}, {"acdeabe", 2}}));
    CHECK(names(s.pruned, s.back) == std::set<std::string>{"e->a"});
    check_minimum(s.pruned, s.back);
}

TEST_CASE("removing back edges leaves an acyclic graph") {
    const auto s = stages(log_of({{"abcbcd", 2}, {"abd", 1}, {"abcbd", 1}}));
    const auto f = remove_edges(s.pruned, s.back);
    for (const auto& scc : strongly_connected_components(f)) CHECK(scc.size() == 1);
    for (const auto& [e, w] : f.edges()) CHECK(e.first != e.second);
}

TEST_CASE("single block around a short loop") {
    const auto s = stages(log_of({{"abd", 5}, {"abcbd", 3}}));
    const auto blocks = group_loop_blocks(s.pruned, s.back, s.rel);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].kind == LoopKind::Single);
    CHECK(blocks[0].body == std::set<NodeId>{s.pruned.id("b"), s.pruned.id("c")});
    CHECK(blocks[0].entries == std::set<NodeId>{s.pruned.id("b")});
    CHECK(blocks[0].exits == std::set<NodeId>{s.pruned.id("c")});
}

TEST_CASE("several sources returning to one target") {
    const auto s = stages(log_of({{"abxc", 5}, {"abyc", 5}, {"abxbyc", 2}, {"abybxc", 2}}));
    CHECK(names(s.pruned, s.back) == std::set<std::string>{"x->b", "y->b"});
    const auto blocks = group_loop_blocks(s.pruned, s.back, s.rel);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].kind == LoopKind::MultiSourceSingleTarget);
    CHECK(blocks[0].entries.size() == 1);
    CHECK(blocks[0].exits.size() == 2);
}

TEST_CASE("loop around a parallel body") {
    const auto s = stages(log_of({{"abpqc", 4}, {"abqpc", 4}, {"abpqbqpc", 2}, {"abqpbpqc", 2}}));
    REQUIRE(s.rel.contains(s.dfg.id("p"), s.dfg.id("q")));
    const auto blocks = group_loop_blocks(s.pruned, s.back, s.rel);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].kind == LoopKind::AndBodyThenSplit);
}

TEST_CASE("loop around an exclusive body") {
    // a LJ b XOR(x,y) e LS XOR(c,d)
    const auto s = stages(log_of({{"abxec", 4}, {"abyed", 4}, {"abxebyec", 2}, {"abyebxed", 2}}));
    CHECK(names(s.pruned, s.back) == std::set<std::string>{"e->b"});
    const auto blocks = group_loop_blocks(s.pruned, s.back, s.rel);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].kind == LoopKind::XorBodyThenSplit);
    CHECK(blocks[0].body.count(s.pruned.id("x")) == 1);
    CHECK(blocks[0].body.count(s.pruned.id("y")) == 1);
}

TEST_CASE("loops_to_text names the kind") {
    const auto s = stages(log_of({{"abd", 5}, {"abcbd", 3}}));
    const auto text = loops_to_text(group_loop_blocks(s.pruned, s.back, s.rel), s.pruned);
    CHECK(text.find("kind=single") != std::string::npos);
    CHECK(text.find("c->b") != std::string::npos);
}

}  // TEST_SUITE
