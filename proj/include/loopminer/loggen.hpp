#pragma once

#include <cstdint>
#include <string>

#include "loopminer/bpmn.hpp"
#include "loopminer/eventlog.hpp"

namespace loopminer {

enum class LoopPattern { L1, L2, L3, L4 };

/// Accepts "L1".."L4" (case-insensitive); throws InvalidArgument otherwise.
LoopPattern parse_loop_pattern(const std::string& text);
const char* to_string(LoopPattern pattern);

struct SimulationConfig {
    std::uint64_t traces = 500;
    std::uint32_t max_loop_iterations = 3;
    double loop_continue_probability = 0.3;
    std::uint64_t seed = 42;
};

/// Reference models for the four loop patterns. LJ is the loop XOR join,
/// LS a loop XOR split.
///
///   L1  a LJ XOR( b AND(c,d) e , f g h ) LS i
///       nested XOR/AND body, two back sources (e, h) and two targets (b, f)
///   L2  a LJ b XOR( AND(c,d) e LS1 , f g LS2 ) h
///       each branch leaves the loop on its own split, both return to b
///   L3  a LJ b XOR(c,d) e LS AND(f,g) h
///   L4  a LJ b AND(c,d) LS XOR(e,f) g
BpmnModel canonical_pattern(LoopPattern pattern);

/// Plays the token game on `model`. Any enabled node may fire next, picked
/// uniformly; XOR splits choose uniformly among forward branches; back flows
/// (closing a cycle in a depth-first walk from the start) are taken with
/// the configured probability until their target join has been re-entered
/// max_loop_iterations times. Traces running past 10 x |nodes| events are
/// discarded and drawn again.
EventLog simulate(const BpmnModel& model, const SimulationConfig& config);

}  // namespace loopminer
