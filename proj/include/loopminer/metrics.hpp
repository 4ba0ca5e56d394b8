#pragma once

#include <cstdint>
#include <string>

#include "loopminer/bpmn.hpp"
#include "loopminer/eventlog.hpp"

namespace loopminer {

struct MetricsReport {
    double fitness = 0.0;
    double precision = 0.0;
    double f_score = 0.0;
    double generalization = 0.0;
    std::uint64_t size = 0;
    std::uint64_t cfc = 0;
    double structuredness = 0.0;
    double discovery_time_seconds = 0.0;
};

/// Harmonic mean; throws BothZero when both inputs are 0.
double f_score(double fitness, double precision);

/// Nodes plus sequence flows.
std::uint64_t size(const BpmnModel& model);

/// XOR split adds its fan-out, AND split adds 1. With `include_joins` joins
/// are scored the same way on their fan-in.
std::uint64_t cfc(const BpmnModel& model, bool include_joins = false);

/// Share of gateways removed as matched split/join pairs while reducing the
/// model: 1-in/1-out nodes are contracted, parallel flows between a split and
/// a join of the same type are merged, and an XOR join/split pair closed by
/// a back flow is unrolled. 1.0 when the model has no gateways.
double structuredness(const BpmnModel& model);

/// Size, CFC and structuredness on the model; fitness, precision and
/// generalization on its Petri net translation. Timing is left at 0.
MetricsReport evaluate(const BpmnModel& model, const EventLog& log, bool cfc_include_joins = false);

}  // namespace loopminer
