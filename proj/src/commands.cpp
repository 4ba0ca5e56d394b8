#include "loopminer/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "loopminer/bpmn.hpp"
#include "loopminer/error.hpp"
#include "loopminer/petri.hpp"

namespace loopminer {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string md_field(std::string s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out;
}

bool has_log_extension(const fs::path& p) {
    const std::string name = p.filename().string();
    auto ends_with = [&](const std::string& suffix) {
        return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return ends_with(".xes") || ends_with(".xes.gz");
}

const std::vector<std::string> kMetricColumns = {"fitness",        "precision", "f_score",        "generalization",
                                                 "size",           "cfc",       "structuredness", "time_s"};
const std::vector<std::string> kStatColumns = {"traces",     "distinct_traces", "events", "distinct_events",
                                               "min_len",    "avg_len",         "max_len"};

std::vector<std::string> metric_cells(const MetricsReport& m) {
    return {fixed(m.fitness),        fixed(m.precision), fixed(m.f_score),        fixed(m.generalization),
            std::to_string(m.size),  std::to_string(m.cfc), fixed(m.structuredness), fixed(m.discovery_time_seconds)};
}

std::vector<std::string> stat_cells(const LogStats& s) {
    return {std::to_string(s.total_traces), std::to_string(s.distinct_traces), std::to_string(s.total_events),
            std::to_string(s.distinct_events), std::to_string(s.min_len), std::to_string(s.avg_len),
            std::to_string(s.max_len)};
}

nlohmann::ordered_json metrics_json(const MetricsReport& m) {
    nlohmann::ordered_json j;
    j["fitness"] = m.fitness;
    j["precision"] = m.precision;
    j["f_score"] = m.f_score;
    j["generalization"] = m.generalization;
    j["size"] = m.size;
    j["cfc"] = m.cfc;
    j["structuredness"] = m.structuredness;
    j["time_s"] = m.discovery_time_seconds;
    return j;
}

std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                  ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
            out << '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
    } else {
        auto line = [&](const std::vector<std::string>& cells) {
            out << '|';
            for (const auto& c : cells) out << ' ' << md_field(c) << " |";
            out << '\n';
        };
        line(header);
        out << '|';
        for (std::size_t i = 0; i < header.size(); ++i) out << " --- |";
        out << '\n';
        for (const auto& r : rows) line(r);
    }
    return out.str();
}

}  // namespace

ReportFormat parse_report_format(const std::string& text) {
    if (text == "csv") return ReportFormat::Csv;
    if (text == "markdown" || text == "md") return ReportFormat::Markdown;
    if (text == "json") return ReportFormat::Json;
    throw Error(ErrorCode::InvalidArgument, "unknown report format: " + text);
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

DiscoveryResult cmd_discover(const DiscoverOptions& options) {
    const EventLog log = read_xes_file(options.input);
    DiscoveryResult r = discover(log, options.config);
    write_text_file(options.output, r.bpmn_xml);
    if (options.emit_dfg) write_text_file(*options.emit_dfg, dfg_to_dot(r.dfg));
    if (options.emit_loops) write_text_file(*options.emit_loops, loops_to_text(r.blocks, r.pruned));
    if (options.emit_relations) write_text_file(*options.emit_relations, relation_to_text(r.relation, r.dfg));
    if (options.emit_pnml) write_text_file(*options.emit_pnml, to_pnml(bpmn_to_petri(r.model)));
    if (options.emit_dot) write_text_file(*options.emit_dot, serialize_dot(r.model));
    return r;
}

MetricsReport cmd_evaluate(const fs::path& bpmn, const fs::path& xes, bool cfc_include_joins) {
    const BpmnModel model = parse_bpmn_xml(read_file_maybe_gz(bpmn));
    model.validate();
    const EventLog log = read_xes_file(xes);
    return evaluate(model, log, cfc_include_joins);
}

std::string format_metrics(const MetricsReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) return metrics_json(report).dump(2) + "\n";
    return table(kMetricColumns, {metric_cells(report)}, format);
}

EventLog cmd_genlog(const std::string& pattern, const SimulationConfig& config) {
    BpmnModel model;
    if (fs::exists(pattern)) {
        model = parse_bpmn_xml(read_file_maybe_gz(pattern));
        model.validate();
    } else {
        model = canonical_pattern(parse_loop_pattern(pattern));
    }
    return simulate(model, config);
}

std::vector<BenchRow> cmd_bench(const fs::path& directory, const DiscoveryConfig& config, bool cfc_include_joins) {
    if (!fs::is_directory(directory)) throw Error(ErrorCode::Io, "not a directory: " + directory.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (entry.is_regular_file() && has_log_extension(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

    std::vector<BenchRow> rows;
    for (const auto& file : files) {
        BenchRow row;
        row.file = file.filename().string();
        try {
            const EventLog log = read_xes_file(file);
            row.stats = log_stats(log);
            const DiscoveryResult r = discover(log, config);
            MetricsReport m = evaluate(r.model, log, cfc_include_joins);
            m.discovery_time_seconds = r.seconds;
            row.metrics = m;
        } catch (const Error& e) {
            row.error = std::string(to_string(e.code())) + ": " + e.what();
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_bench(const std::vector<BenchRow>& rows, ReportFormat format) {
    if (format == ReportFormat::Json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json j;
            j["file"] = r.file;
            if (r.stats) {
                const auto cells = stat_cells(*r.stats);
                for (std::size_t i = 0; i < cells.size(); ++i) j[kStatColumns[i]] = std::stoull(cells[i]);
            }
            if (r.metrics) {
                const auto m = metrics_json(*r.metrics);
                for (const auto& [k, v] : m.items()) j[k] = v;
            }
            if (!r.error.empty()) j["error"] = r.error;
            arr.push_back(std::move(j));
        }
        return arr.dump(2) + "\n";
    }
    std::vector<std::string> header{"file"};
    header.insert(header.end(), kStatColumns.begin(), kStatColumns.end());
    header.insert(header.end(), kMetricColumns.begin(), kMetricColumns.end());
    header.push_back("error");
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        std::vector<std::string> line{r.file};
        const auto stats = r.stats ? stat_cells(*r.stats) : std::vector<std::string>(kStatColumns.size());
        const auto metrics = r.metrics ? metric_cells(*r.metrics) : std::vector<std::string>(kMetricColumns.size());
        line.insert(line.end(), stats.begin(), stats.end());
        line.insert(line.end(), metrics.begin(), metrics.end());
        line.push_back(r.error);
        cells.push_back(std::move(line));
    }
    return table(header, cells, format);
}

}  // namespace loopminer
