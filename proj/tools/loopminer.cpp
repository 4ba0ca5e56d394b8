// loopminer: discover, evaluate, genlog, bench.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "loopminer/commands.hpp"
#include "loopminer/error.hpp"

using namespace loopminer;

namespace {

void add_discovery_flags(CLI::App* app, DiscoveryConfig& config) {
    app->add_option("--noise", config.noise, "DFG edge filter threshold")->check(CLI::Range(0.0, 1.0));
    app->add_option("--trace-filter", config.trace_filter, "drop variants below this share of traces")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--epsilon", config.epsilon, "concurrency balance tolerance")->check(CLI::Range(0.0, 1.0));
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) std::cout << text;
    else write_text_file(path, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loop-aware process discovery from XES event logs to BPMN"};
    app.require_subcommand(1);

    DiscoverOptions dopt;
    std::string input, output, emit_dfg, emit_loops, emit_relations, emit_pnml, emit_dot;
    auto* discover = app.add_subcommand("discover", "discover a BPMN model from an XES log");
    discover->add_option("log", input, "XES or XES.gz file")->required();
    discover->add_option("-o,--output", output, "BPMN XML output")->required();
    add_discovery_flags(discover, dopt.config);
    discover->add_option("--emit-dfg", emit_dfg, "write the filtered DFG as DOT");
    discover->add_option("--emit-loops", emit_loops, "write loop blocks");
    discover->add_option("--emit-relations", emit_relations, "write the concurrency relation");
    discover->add_option("--emit-pnml", emit_pnml, "write the Petri net as PNML");
    discover->add_option("--emit-dot", emit_dot, "write the BPMN model as DOT");

    std::string bpmn, format = "csv", report_out;
    bool include_joins = false;
    auto* evaluate = app.add_subcommand("evaluate", "score a BPMN model against a log");
    evaluate->add_option("model", bpmn, "BPMN XML file")->required();
    evaluate->add_option("log", input, "XES or XES.gz file")->required();
    evaluate->add_option("--format", format, "csv, markdown or json");
    evaluate->add_option("-o,--output", report_out, "report file (default stdout)");
    evaluate->add_flag("--cfc-include-joins", include_joins, "count join gateways in CFC");

    std::string pattern;
    SimulationConfig sim;
    auto* genlog = app.add_subcommand("genlog", "simulate a loop pattern or BPMN model into an XES log");
    genlog->add_option("pattern", pattern, "L1, L2, L3, L4 or a BPMN file")->required();
    genlog->add_option("-o,--output", output, "XES output (default stdout)");
    genlog->add_option("-n,--traces", sim.traces, "number of traces")->check(CLI::PositiveNumber);
    genlog->add_option("--max-iterations", sim.max_loop_iterations, "re-entries per loop");
    genlog->add_option("--continue-probability", sim.loop_continue_probability, "chance of taking a back flow")
        ->check(CLI::Range(0.0, 0.999999));
    genlog->add_option("--seed", sim.seed, "random seed");

    std::string directory;
    DiscoveryConfig bench_config;
    auto* bench = app.add_subcommand("bench", "discover and score every log in a directory");
    bench->add_option("directory", directory, "directory of .xes/.xes.gz logs")->required();
    add_discovery_flags(bench, bench_config);
    bench->add_option("--format", format, "csv, markdown or json");
    bench->add_option("-o,--output", report_out, "report file (default stdout)");
    bench->add_flag("--cfc-include-joins", include_joins, "count join gateways in CFC");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*discover) {
            dopt.input = input;
            dopt.output = output;
            if (!emit_dfg.empty()) dopt.emit_dfg = emit_dfg;
            if (!emit_loops.empty()) dopt.emit_loops = emit_loops;
            if (!emit_relations.empty()) dopt.emit_relations = emit_relations;
            if (!emit_pnml.empty()) dopt.emit_pnml = emit_pnml;
            if (!emit_dot.empty()) dopt.emit_dot = emit_dot;
            const auto result = cmd_discover(dopt);
            std::fprintf(stderr, "discovery time: %.3f s\n", result.seconds);
        } else if (*evaluate) {
            const auto fmt = parse_report_format(format);
            emit(format_metrics(cmd_evaluate(bpmn, input, include_joins), fmt), report_out);
        } else if (*genlog) {
            emit(write_xes(cmd_genlog(pattern, sim)), output);
        } else if (*bench) {
            const auto fmt = parse_report_format(format);
            emit(format_bench(cmd_bench(directory, bench_config, include_joins), fmt), report_out);
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
