// Acceptance gates: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "loopminer/concurrency.hpp"
#include "loopminer/dfg.hpp"
#include "loopminer/error.hpp"
#include "loopminer/loggen.hpp"
#include "loopminer/metrics.hpp"
#include "loopminer/petri.hpp"
#include "loopminer/pipeline.hpp"
#include "loopminer/replay.hpp"
#include "oracles.hpp"

using namespace loopminer;

namespace {

constexpr double kFitnessTolerance = 1e-9;
constexpr double kFormulaTolerance = 1e-9;
constexpr double kSuiteSeconds = 10.0;
constexpr int kRandomLogs = 200;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void gate(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [ok, detail] = body();
        report(name, ok, detail);
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

struct SuiteRun {
    EventLog log;
    DiscoveryResult result;
};

std::vector<SuiteRun> run_suite() {
    SimulationConfig sim;
    sim.traces = 500;
    sim.seed = 42;
    sim.loop_continue_probability = 0.3;
    sim.max_loop_iterations = 3;
    DiscoveryConfig cfg;
    cfg.noise = 0.0;
    cfg.trace_filter = 0.0;
    std::vector<SuiteRun> runs;
    for (auto p : {LoopPattern::L1, LoopPattern::L2, LoopPattern::L3, LoopPattern::L4}) {
        SuiteRun run;
        run.log = simulate(canonical_pattern(p), sim);
        run.result = discover(run.log, cfg);
        runs.push_back(std::move(run));
    }
    return runs;
}

// 693 traces, 30 variants, 1569 events over {a,b,c}, lengths 1..9.
EventLog table_fixture() {
    EventLog log;
    const std::string letters = "abc";
    std::vector<Sequence> len1, len2, len3;
    for (char x : letters) {
        len1.push_back({std::string(1, x)});
        for (char y : letters) {
            len2.push_back({std::string(1, x), std::string(1, y)});
            for (char z : letters) len3.push_back({std::string(1, x), std::string(1, y), std::string(1, z)});
        }
    }
    for (std::size_t i = 0; i < len1.size(); ++i) log.add(len1[i], i == 0 ? 139 : 1);
    for (std::size_t i = 0; i < len2.size(); ++i) log.add(len2[i], i == 0 ? 226 : 1);
    for (std::size_t i = 0; i < 17; ++i) log.add(len3[i], i == 0 ? 301 : 1);
    log.add(testutil::seq("abcabcabc"), 1);
    return log;
}

std::string stats_row(const LogStats& s) {
    std::ostringstream os;
    os << "(" << s.total_traces << ", " << s.distinct_traces << ", " << s.total_events << ", " << s.distinct_events
       << ", " << s.min_len << ", " << s.avg_len << ", " << s.max_len << ")";
    return os.str();
}

}  // namespace

int main() {
    std::vector<SuiteRun> suite;
    double suite_seconds = 0.0;

    gate("loop-suite fitness", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        suite = run_suite();
        std::string detail;
        bool ok = true;
        const char* names[] = {"L1", "L2", "L3", "L4"};
        for (std::size_t i = 0; i < suite.size(); ++i) {
            const double f = replay_fitness(bpmn_to_petri(suite[i].result.model), suite[i].log);
            ok = ok && std::fabs(f - 1.0) <= kFitnessTolerance;
            detail += std::string(names[i]) + "=" + fmt(f) + " ";
        }
        suite_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && suite_seconds < kSuiteSeconds;
        return std::make_pair(ok, detail + "(" + fmt(suite_seconds) + " s)");
    });

    gate("precision vs flower", [&] {
        if (suite.empty()) return std::make_pair(false, std::string("loop suite unavailable"));
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; i < suite.size(); ++i) {
            const double p = precision(bpmn_to_petri(suite[i].result.model), suite[i].log);
            const double flower = oracle::flower_precision(suite[i].log);
            ok = ok && p > flower;
            detail += "L" + std::to_string(i + 1) + "=" + fmt(p) + ">" + fmt(flower) + " ";
        }
        return std::make_pair(ok, detail);
    });

    gate("oracle equivalence", [] {
        std::mt19937 rng(20240601);
        int dfg_mismatch = 0, rel_mismatch = 0;
        for (int i = 0; i < kRandomLogs; ++i) {
            const auto log = oracle::random_log(rng, 6, 50, 8);
            const auto g = build_dfg(log);
            oracle::PairCounts got;
            for (const auto& [e, f] : g.edges()) {
                auto name = [&](NodeId n) {
                    return n == kStart ? oracle::kBegin : n == kEnd ? oracle::kFinish : g.label(n);
                };
                got[{name(e.first), name(e.second)}] = f;
            }
            dfg_mismatch += got != oracle::adjacent_pairs(log);
            const auto found = discover_concurrency(g, log, 0.3);
            std::set<std::pair<std::string, std::string>> rel;
            for (const auto& [a, b] : found.pairs()) rel.insert({g.label(a), g.label(b)});
            rel_mismatch += rel != oracle::concurrent_pairs(log, 0.3);
        }
        return std::make_pair(dfg_mismatch == 0 && rel_mismatch == 0,
                              std::to_string(kRandomLogs) + " logs, dfg mismatches " + std::to_string(dfg_mismatch) +
                                  ", relation mismatches " + std::to_string(rel_mismatch));
    });

    gate("petri semantics", [] {
        using testutil::seq;
        const bool s = oracle::language(bpmn_to_petri(testutil::sequence_model({"a", "b", "c"}))) ==
                       std::set<Sequence>{seq("abc")};
        const bool x = oracle::language(bpmn_to_petri(testutil::block_model(false))) ==
                       std::set<Sequence>{seq("abd"), seq("acd")};
        const bool a = oracle::language(bpmn_to_petri(testutil::block_model(true))) ==
                       std::set<Sequence>{seq("abcd"), seq("acbd")};
        return std::make_pair(s && x && a, std::string("sequence ") + (s ? "ok" : "bad") + ", xor " +
                                               (x ? "ok" : "bad") + ", and " + (a ? "ok" : "bad"));
    });

    gate("metric formulas", [] {
        const double g = generalization_from_executions(std::vector<std::uint64_t>(12, 10000));
        const double f = f_score(1.0, 1.0);
        const auto model = testutil::running_example();
        const auto c = cfc(model);
        const auto n = size(model);
        const double st = structuredness(model);
        const bool ok = std::fabs(g - 0.99) <= kFormulaTolerance && std::fabs(f - 1.0) <= kFormulaTolerance &&
                        c == 3 && n == 23 && std::fabs(st - 1.0) <= kFormulaTolerance;
        return std::make_pair(ok, "generalization " + fmt(g) + ", f " + fmt(f) + ", cfc " + std::to_string(c) +
                                      ", size " + std::to_string(n) + ", structuredness " + fmt(st));
    });

    gate("log statistics", [] {
        const LogStats expected{693, 30, 1569, 3, 1, 2, 9};
        const LogStats crafted = log_stats(parse_xes(write_xes(table_fixture())));
        bool ok = crafted == expected;
        std::string detail = "fixture " + stats_row(crafted);
        const char* env = std::getenv("LOOPMINER_BPIC2013_OPF");
        if (env != nullptr && std::filesystem::exists(env)) {
            const LogStats real = log_stats(read_xes_file(env));
            ok = ok && real == expected;
            detail += ", BPIC 2013 op " + stats_row(real);
        } else {
            detail += ", public BPIC 2013 op file not supplied";
        }
        return std::make_pair(ok, detail);
    });

    gate("determinism", [] {
        SimulationConfig sim;
        sim.traces = 500;
        sim.seed = 42;
        bool ok = true;
        for (auto p : {LoopPattern::L1, LoopPattern::L2, LoopPattern::L3, LoopPattern::L4}) {
            const auto log = simulate(canonical_pattern(p), sim);
            const auto xes = write_xes(log);
            ok = ok && xes == write_xes(simulate(canonical_pattern(p), sim));
            const auto parsed = parse_xes(xes);
            ok = ok && parsed.sorted_variants() == log.sorted_variants();
            DiscoveryConfig cfg;
            cfg.trace_filter = 0.0;
            ok = ok && discover(parsed, cfg).bpmn_xml == discover(parse_xes(xes), cfg).bpmn_xml;
        }
        return std::make_pair(ok, std::string("identical BPMN XML across runs, XES round-trip preserves variants"));
    });

    std::printf("%d failed\n", failures);
    return failures == 0 ? 0 : 1;
}
