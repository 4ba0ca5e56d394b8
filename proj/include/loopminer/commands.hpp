#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "loopminer/eventlog.hpp"
#include "loopminer/loggen.hpp"
#include "loopminer/metrics.hpp"
#include "loopminer/pipeline.hpp"

namespace loopminer {

enum class ReportFormat { Csv, Markdown, Json };

/// "csv", "markdown"/"md" or "json"; throws InvalidArgument otherwise.
ReportFormat parse_report_format(const std::string& text);

/// Throws Io on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

struct DiscoverOptions {
    std::filesystem::path input;
    std::filesystem::path output;  // BPMN XML
    DiscoveryConfig config;
    std::optional<std::filesystem::path> emit_dfg;        // DOT
    std::optional<std::filesystem::path> emit_loops;      // text
    std::optional<std::filesystem::path> emit_relations;  // text
    std::optional<std::filesystem::path> emit_pnml;
    std::optional<std::filesystem::path> emit_dot;        // BPMN as DOT
};

/// Parses, discovers and writes the model plus requested side outputs.
/// Returns the discovery result (its `seconds` excludes parsing).
DiscoveryResult cmd_discover(const DiscoverOptions& options);

MetricsReport cmd_evaluate(const std::filesystem::path& bpmn, const std::filesystem::path& xes,
                           bool cfc_include_joins = false);

std::string format_metrics(const MetricsReport& report, ReportFormat format);

/// `pattern` is L1..L4 or a path to a BPMN file.
EventLog cmd_genlog(const std::string& pattern, const SimulationConfig& config);

struct BenchRow {
    std::string file;
    std::optional<LogStats> stats;
    std::optional<MetricsReport> metrics;
    std::string error;  // empty on success
};

/// One row per .xes / .xes.gz file in `directory`, sorted by file name. The
/// discovered model is scored against the unfiltered log. Failures become
/// error rows.
std::vector<BenchRow> cmd_bench(const std::filesystem::path& directory, const DiscoveryConfig& config,
                                bool cfc_include_joins = false);

std::string format_bench(const std::vector<BenchRow>& rows, ReportFormat format);

}  // namespace loopminer
