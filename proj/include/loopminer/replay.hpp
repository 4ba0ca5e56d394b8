#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "loopminer/eventlog.hpp"
#include "loopminer/petri.hpp"

namespace loopminer {

struct TokenCounts {
    std::uint64_t produced = 0;
    std::uint64_t consumed = 0;
    std::uint64_t missing = 0;
    std::uint64_t remaining = 0;

    TokenCounts& operator+=(const TokenCounts& o);
    TokenCounts scaled(std::uint64_t k) const { return {produced * k, consumed * k, missing * k, remaining * k}; }
};

/// Token-based replay on one net.
///
/// Before a visible transition that is not enabled, the replayer searches
/// breadth-first for the shortest sequence of silent transitions that enables
/// it (at most 2 x |transitions| firings); if none exists the missing tokens
/// are created. An activity with no transition in the net counts as one
/// missing and one remaining token.
class TokenReplayer {
public:
    explicit TokenReplayer(const PetriNet& net);

    Marking start(TokenCounts& counts) const;
    void step(Marking& m, const Activity& activity, TokenCounts& counts,
              std::vector<std::uint64_t>* fired = nullptr) const;
    void finish(Marking& m, TokenCounts& counts, std::vector<std::uint64_t>* fired = nullptr) const;

    /// Labels of visible transitions enabled in `m` or after silent moves.
    std::set<Activity> enabled_labels(const Marking& m) const;

    /// Replays a whole sequence; counts for one case.
    TokenCounts replay(const Sequence& trace, std::vector<std::uint64_t>* fired = nullptr) const;

    const PetriNet& net() const { return net_; }

private:
    struct LabelMoves {
        std::vector<std::size_t> transitions;  // visible transitions carrying the label
        std::vector<std::size_t> silent;       // silent transitions that can feed their inputs
    };

    // Shortest sequence over `moves` from `m` to a marking accepted by `goal`;
    // nullopt when none exists within the search bounds.
    std::optional<std::vector<std::size_t>> silent_path(
        const Marking& m, const std::vector<std::size_t>& moves, const std::function<bool(const Marking&)>& goal,
        const std::function<void(const Marking&, const std::vector<std::size_t>&)>& visit = {}) const;
    // Cheap necessary condition: every empty input place of `t` has a marked feeder.
    bool may_enable(const Marking& m, std::size_t t) const;
    bool enabled_after_silent(const Marking& m, const LabelMoves& lm,
                              std::vector<std::size_t>* path) const;
    void fire_counted(Marking& m, std::size_t t, TokenCounts& counts,
                      std::vector<std::uint64_t>* fired) const;

    const PetriNet& net_;
    std::map<Activity, LabelMoves> by_label_;
    std::vector<std::size_t> silent_;
    std::vector<std::vector<std::size_t>> feeders_;  // per place: places reaching it via silent moves
    std::size_t max_depth_;
    // Search results per marking; replaying many variants revisits the same states.
    mutable std::map<std::pair<Marking, Activity>, std::optional<std::vector<std::size_t>>> enable_cache_;
    mutable std::map<Marking, std::set<Activity>> label_cache_;
    mutable std::map<Marking, std::optional<std::vector<std::size_t>>> finish_cache_;
};

struct ReplayResult {
    TokenCounts totals;
    std::vector<std::uint64_t> executions;  // per transition, weighted by multiplicity
    std::uint64_t perfectly_fitting_traces = 0;
};

ReplayResult replay_log(const PetriNet& net, const EventLog& log);

/// 1/2 (1 - missing/consumed) + 1/2 (1 - remaining/produced).
double fitness_from_counts(const TokenCounts& c);

double replay_fitness(const PetriNet& net, const EventLog& log);

/// Escaping-edges precision over all log prefixes, weighted by how often
/// each prefix is visited.
double precision(const PetriNet& net, const EventLog& log);

/// 1 - mean over transitions of 1/sqrt(executions); unexecuted ones count 1.
double generalization(const PetriNet& net, const EventLog& log);
double generalization_from_executions(const std::vector<std::uint64_t>& executions);

}  // namespace loopminer
