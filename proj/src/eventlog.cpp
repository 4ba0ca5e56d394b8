#include "loopminer/eventlog.hpp"

#include <algorithm>
#include <limits>

#include "loopminer/error.hpp"

namespace loopminer {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io: return "Io";
        case ErrorCode::MalformedXml: return "MalformedXml";
        case ErrorCode::EmptyLog: return "EmptyLog";
        case ErrorCode::AllTracesFiltered: return "AllTracesFiltered";
        case ErrorCode::CyclicResidue: return "CyclicResidue";
        case ErrorCode::AmbiguousPartition: return "AmbiguousPartition";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::EntryNotFound: return "EntryNotFound";
        case ErrorCode::BothZero: return "BothZero";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io:
        case ErrorCode::MalformedXml:
            return 2;
        case ErrorCode::EmptyLog:
        case ErrorCode::AllTracesFiltered:
            return 3;
        case ErrorCode::CyclicResidue:
        case ErrorCode::AmbiguousPartition:
        case ErrorCode::InvariantViolation:
        case ErrorCode::EntryNotFound:
            return 4;
        case ErrorCode::BothZero:
        case ErrorCode::InvalidArgument:
            return 1;
    }
    return 1;
}

void EventLog::add(const Sequence& events, std::uint64_t multiplicity) {
    if (events.empty()) {
        throw Error(ErrorCode::InvalidArgument, "trace must contain at least one event");
    }
    if (multiplicity == 0) {
        throw Error(ErrorCode::InvalidArgument, "trace multiplicity must be positive");
    }
    for (const auto& a : events) {
        if (a.empty()) {
            throw Error(ErrorCode::InvalidArgument, "activity label must be non-empty");
        }
    }
    auto [it, inserted] = index_.try_emplace(events, variants_.size());
    if (inserted) {
        variants_.push_back(Trace{events, multiplicity});
        alphabet_.insert(events.begin(), events.end());
    } else {
        variants_[it->second].multiplicity += multiplicity;
    }
}

std::uint64_t EventLog::total_traces() const noexcept {
    std::uint64_t n = 0;
    for (const auto& v : variants_) n += v.multiplicity;
    return n;
}

std::uint64_t EventLog::total_events() const noexcept {
    std::uint64_t n = 0;
    for (const auto& v : variants_) n += v.multiplicity * v.events.size();
    return n;
}

std::uint64_t EventLog::count(const Sequence& events) const {
    auto it = index_.find(events);
    return it == index_.end() ? 0 : variants_[it->second].multiplicity;
}

std::vector<Trace> EventLog::sorted_variants() const {
    auto out = variants_;
    std::sort(out.begin(), out.end(),
              [](const Trace& a, const Trace& b) { return a.events < b.events; });
    return out;
}

EventLog filter_infrequent_traces(const EventLog& log, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "trace filter threshold must lie in [0,1]");
    }
    const double total = static_cast<double>(log.total_traces());
    EventLog out;
    for (const auto& v : log.variants()) {
        // Small slack so that e.g. 5/100 is not lost to 0.05 having no exact binary form.
        if (static_cast<double>(v.multiplicity) / total + 1e-12 >= threshold) {
            out.add(v.events, v.multiplicity);
        }
    }
    if (out.empty()) {
        throw Error(ErrorCode::AllTracesFiltered, "trace filter removed every variant");
    }
    return out;
}

LogStats log_stats(const EventLog& log) {
    if (log.empty()) throw Error(ErrorCode::EmptyLog, "log has no traces");
    LogStats s;
    s.total_traces = log.total_traces();
    s.distinct_traces = log.variants().size();
    s.total_events = log.total_events();
    s.distinct_events = log.alphabet().size();
    s.min_len = std::numeric_limits<std::uint64_t>::max();
    for (const auto& v : log.variants()) {
        s.min_len = std::min<std::uint64_t>(s.min_len, v.events.size());
        s.max_len = std::max<std::uint64_t>(s.max_len, v.events.size());
    }
    s.avg_len = (2 * s.total_events + s.total_traces) / (2 * s.total_traces);
    return s;
}

}  // namespace loopminer
