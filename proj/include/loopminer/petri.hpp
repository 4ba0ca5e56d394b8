#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loopminer/bpmn.hpp"

namespace loopminer {

using Marking = std::vector<std::uint32_t>;  // tokens per place

struct PetriTransition {
    std::string name;
    std::optional<std::string> label;  // nullopt for silent (tau) transitions
    std::vector<std::size_t> inputs;   // place indices
    std::vector<std::size_t> outputs;

    bool silent() const { return !label.has_value(); }
};

/// Place/transition net with initial and final markings.
class PetriNet {
public:
    std::size_t add_place(std::string name);
    std::size_t add_transition(std::string name, std::optional<std::string> label,
                               std::vector<std::size_t> inputs, std::vector<std::size_t> outputs);

    const std::vector<std::string>& places() const noexcept { return places_; }
    const std::vector<PetriTransition>& transitions() const noexcept { return transitions_; }

    Marking& initial_marking() { return initial_; }
    Marking& final_marking() { return final_; }
    const Marking& initial_marking() const { return initial_; }
    const Marking& final_marking() const { return final_; }

    bool enabled(const Marking& m, std::size_t t) const;
    /// Fires without checking enablement; callers add missing tokens first.
    void fire(Marking& m, std::size_t t) const;

    /// Throws InvariantViolation when markings are empty or indices dangle.
    void validate() const;

private:
    std::vector<std::string> places_;
    std::vector<PetriTransition> transitions_;
    Marking initial_;
    Marking final_;
};

/// Flow-to-place translation: every sequence flow is a place, XOR joins merge
/// their surrounding places into one, XOR splits get one silent transition
/// per branch, AND gateways become one silent transition, tasks become
/// visible transitions. Start and end events mark the first and last places.
PetriNet bpmn_to_petri(const BpmnModel& model);

/// PNML (place/transition net type) rendering.
std::string to_pnml(const PetriNet& net);

}  // namespace loopminer
