#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace loopminer {

using Activity = std::string;
using Sequence = std::vector<Activity>;

/// One trace variant: an activity sequence together with how many cases followed it.
struct Trace {
    Sequence events;
    std::uint64_t multiplicity = 1;

    bool operator==(const Trace&) const = default;
};

/// A multiset of traces stored as distinct variants.
///
/// Variants keep the order in which they were first seen; identical
/// sequences are always merged, so no two variants share an event sequence.
class EventLog {
public:
    EventLog() = default;

    /// Adds `multiplicity` copies of `events`. Empty sequences and zero
    /// multiplicities are rejected with InvalidArgument.
    void add(const Sequence& events, std::uint64_t multiplicity = 1);

    const std::vector<Trace>& variants() const noexcept { return variants_; }
    const std::set<Activity>& alphabet() const noexcept { return alphabet_; }

    std::uint64_t total_traces() const noexcept;
    std::uint64_t total_events() const noexcept;
    bool empty() const noexcept { return variants_.empty(); }

    /// Multiplicity of a sequence, zero when absent.
    std::uint64_t count(const Sequence& events) const;

    /// Variant multiset as a sorted list, handy for comparisons.
    std::vector<Trace> sorted_variants() const;

private:
    std::vector<Trace> variants_;
    std::map<Sequence, std::size_t> index_;
    std::set<Activity> alphabet_;
};

struct LogStats {
    std::uint64_t total_traces = 0;
    std::uint64_t distinct_traces = 0;
    std::uint64_t total_events = 0;
    std::uint64_t distinct_events = 0;
    std::uint64_t min_len = 0;
    std::uint64_t avg_len = 0;  // rounded half-up
    std::uint64_t max_len = 0;

    bool operator==(const LogStats&) const = default;
};

struct XesParseReport {
    std::uint64_t skipped_events = 0;  // events without concept:name
    std::uint64_t skipped_traces = 0;  // traces left empty
};

/// Parses an XES document. Throws MalformedXml or EmptyLog.
EventLog parse_xes(std::string_view document, XesParseReport* report = nullptr);

/// Reads a .xes or .xes.gz file and parses it.
EventLog read_xes_file(const std::filesystem::path& path, XesParseReport* report = nullptr);

/// Serializes every case as its own <trace>; deterministic for a given log.
std::string write_xes(const EventLog& log);

/// Keeps the variants whose share of all cases is at least `threshold`.
EventLog filter_infrequent_traces(const EventLog& log, double threshold = 0.05);

LogStats log_stats(const EventLog& log);

/// Reads a whole file, gunzipping transparently when it is gzip-compressed.
std::string read_file_maybe_gz(const std::filesystem::path& path);

}  // namespace loopminer
