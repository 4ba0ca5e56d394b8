#include "loopminer/replay.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace loopminer {

namespace {

constexpr std::size_t kMaxSilentStates = 4096;

}  // namespace

TokenCounts& TokenCounts::operator+=(const TokenCounts& o) {
    produced += o.produced;
    consumed += o.consumed;
    missing += o.missing;
    remaining += o.remaining;
    return *this;
}

TokenReplayer::TokenReplayer(const PetriNet& net)
    : net_(net), feeders_(net.places().size()), max_depth_(2 * net.transitions().size()) {
    const auto& ts = net.transitions();
    for (std::size_t t = 0; t < ts.size(); ++t) {
        if (ts[t].silent()) silent_.push_back(t);
        else by_label_[*ts[t].label].transitions.push_back(t);
    }
    // Backward closure over silent transitions, per place.
    std::vector<std::vector<std::size_t>> producers(net.places().size());
    for (std::size_t t : silent_) {
        for (std::size_t p : ts[t].outputs) producers[p].push_back(t);
    }
    auto closure = [&](const std::vector<std::size_t>& places, std::vector<bool>& place_seen,
                       std::vector<bool>& move_seen) {
        std::vector<std::size_t> stack = places;
        for (std::size_t p : places) place_seen[p] = true;
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            for (std::size_t t : producers[p]) {
                if (move_seen[t]) continue;
                move_seen[t] = true;
                for (std::size_t q : ts[t].inputs) {
                    if (!place_seen[q]) {
                        place_seen[q] = true;
                        stack.push_back(q);
                    }
                }
            }
        }
    };
    for (std::size_t p = 0; p < net.places().size(); ++p) {
        std::vector<bool> place_seen(net.places().size(), false), move_seen(ts.size(), false);
        closure({p}, place_seen, move_seen);
        for (std::size_t q = 0; q < place_seen.size(); ++q) {
            if (place_seen[q] && q != p) feeders_[p].push_back(q);
        }
    }
    for (auto& [label, lm] : by_label_) {
        std::vector<std::size_t> inputs;
        for (std::size_t t : lm.transitions) inputs.insert(inputs.end(), ts[t].inputs.begin(), ts[t].inputs.end());
        std::vector<bool> place_seen(net.places().size(), false), move_seen(ts.size(), false);
        closure(inputs, place_seen, move_seen);
        for (std::size_t t : silent_) {
            if (move_seen[t]) lm.silent.push_back(t);
        }
    }
}

std::optional<std::vector<std::size_t>> TokenReplayer::silent_path(
    const Marking& m, const std::vector<std::size_t>& moves, const std::function<bool(const Marking&)>& goal,
    const std::function<void(const Marking&, const std::vector<std::size_t>&)>& visit) const {
    struct State {
        Marking marking;
        std::size_t parent;
        std::size_t via;
        std::size_t depth;
    };
    std::vector<State> states{{m, SIZE_MAX, SIZE_MAX, 0}};
    std::set<Marking> seen{m};
    auto path_to = [&](std::size_t i) {
        std::vector<std::size_t> path;
        for (std::size_t k = i; states[k].parent != SIZE_MAX; k = states[k].parent) path.push_back(states[k].via);
        return std::vector<std::size_t>(path.rbegin(), path.rend());
    };
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (goal(states[i].marking)) return path_to(i);
        if (visit) visit(states[i].marking, path_to(i));
        if (states[i].depth >= max_depth_ || states.size() >= kMaxSilentStates) continue;
        for (std::size_t t : moves) {
            if (!net_.enabled(states[i].marking, t)) continue;
            Marking next = states[i].marking;
            net_.fire(next, t);
            if (seen.insert(next).second) states.push_back({std::move(next), i, t, states[i].depth + 1});
        }
    }
    return std::nullopt;
}

bool TokenReplayer::may_enable(const Marking& m, std::size_t t) const {
    for (std::size_t p : net_.transitions()[t].inputs) {
        if (m[p] > 0) continue;
        const auto& f = feeders_[p];
        if (std::none_of(f.begin(), f.end(), [&](std::size_t q) { return m[q] > 0; })) return false;
    }
    return true;
}

bool TokenReplayer::enabled_after_silent(const Marking& m, const LabelMoves& lm,
                                         std::vector<std::size_t>* path) const {
    for (std::size_t t : lm.transitions) {
        if (net_.enabled(m, t)) {
            if (path != nullptr) path->clear();
            return true;
        }
    }
    if (std::none_of(lm.transitions.begin(), lm.transitions.end(),
                     [&](std::size_t t) { return may_enable(m, t); })) {
        return false;
    }
    auto found = silent_path(m, lm.silent, [&](const Marking& x) {
        return std::any_of(lm.transitions.begin(), lm.transitions.end(),
                           [&](std::size_t t) { return net_.enabled(x, t); });
    });
    if (!found) return false;
    if (path != nullptr) *path = std::move(*found);
    return true;
}

void TokenReplayer::fire_counted(Marking& m, std::size_t t, TokenCounts& counts,
                                 std::vector<std::uint64_t>* fired) const {
    net_.fire(m, t);
    counts.consumed += net_.transitions()[t].inputs.size();
    counts.produced += net_.transitions()[t].outputs.size();
    if (fired != nullptr) ++(*fired)[t];
}

Marking TokenReplayer::start(TokenCounts& counts) const {
    const Marking& m = net_.initial_marking();
    counts.produced += std::accumulate(m.begin(), m.end(), std::uint64_t{0});
    return m;
}

void TokenReplayer::step(Marking& m, const Activity& activity, TokenCounts& counts,
                         std::vector<std::uint64_t>* fired) const {
    auto it = by_label_.find(activity);
    if (it == by_label_.end()) {
        counts.missing += 1;
        counts.consumed += 1;
        counts.produced += 1;
        counts.remaining += 1;
        return;
    }
    const LabelMoves& lm = it->second;

    auto key = std::make_pair(m, activity);
    auto cached = enable_cache_.find(key);
    if (cached == enable_cache_.end()) {
        std::vector<std::size_t> path;
        std::optional<std::vector<std::size_t>> entry;
        if (enabled_after_silent(m, lm, &path)) entry = std::move(path);
        cached = enable_cache_.emplace(std::move(key), std::move(entry)).first;
    }
    if (cached->second) {
        for (std::size_t t : *cached->second) fire_counted(m, t, counts, fired);
        for (std::size_t t : lm.transitions) {
            if (net_.enabled(m, t)) {
                fire_counted(m, t, counts, fired);
                return;
            }
        }
    }

    // Force the candidate lacking the fewest tokens.
    std::size_t best = lm.transitions.front();
    std::uint64_t best_missing = UINT64_MAX;
    for (std::size_t t : lm.transitions) {
        Marking probe = m;
        std::uint64_t lack = 0;
        for (std::size_t p : net_.transitions()[t].inputs) {
            if (probe[p] == 0) ++lack;
            else --probe[p];
        }
        if (lack < best_missing) {
            best_missing = lack;
            best = t;
        }
    }
    Marking probe = m;
    for (std::size_t p : net_.transitions()[best].inputs) {
        if (probe[p] == 0) {
            ++m[p];
            ++counts.missing;
        } else {
            --probe[p];
        }
    }
    fire_counted(m, best, counts, fired);
}

void TokenReplayer::finish(Marking& m, TokenCounts& counts, std::vector<std::uint64_t>* fired) const {
    const Marking& fin = net_.final_marking();
    auto covers = [&](const Marking& x) {
        for (std::size_t p = 0; p < x.size(); ++p) {
            if (x[p] < fin[p]) return false;
        }
        return true;
    };
    if (m != fin) {
        auto cached = finish_cache_.find(m);
        if (cached == finish_cache_.end()) {
            // Prefer reaching the final marking exactly; otherwise settle for the
            // first marking seen that covers it.
            std::optional<std::vector<std::size_t>> cover;
            auto path = silent_path(m, silent_, [&](const Marking& x) { return x == fin; },
                                    [&](const Marking& x, const std::vector<std::size_t>& p) {
                                        if (!cover && covers(x)) cover = p;
                                    });
            if (!path && !covers(m)) path = std::move(cover);
            cached = finish_cache_.emplace(m, std::move(path)).first;
        }
        if (cached->second) {
            for (std::size_t t : *cached->second) fire_counted(m, t, counts, fired);
        }
    }
    for (std::size_t p = 0; p < m.size(); ++p) {
        counts.consumed += fin[p];
        if (m[p] < fin[p]) {
            counts.missing += fin[p] - m[p];
        } else {
            counts.remaining += m[p] - fin[p];
        }
    }
}

TokenCounts TokenReplayer::replay(const Sequence& trace, std::vector<std::uint64_t>* fired) const {
    TokenCounts counts;
    Marking m = start(counts);
    for (const auto& a : trace) step(m, a, counts, fired);
    finish(m, counts, fired);
    return counts;
}

std::set<Activity> TokenReplayer::enabled_labels(const Marking& m) const {
    if (auto it = label_cache_.find(m); it != label_cache_.end()) return it->second;
    std::set<Activity> out;
    for (const auto& [label, lm] : by_label_) {
        if (enabled_after_silent(m, lm, nullptr)) out.insert(label);
    }
    label_cache_.emplace(m, out);
    return out;
}

ReplayResult replay_log(const PetriNet& net, const EventLog& log) {
    TokenReplayer replayer(net);
    ReplayResult result;
    result.executions.assign(net.transitions().size(), 0);
    for (const auto& v : log.variants()) {
        std::vector<std::uint64_t> fired(net.transitions().size(), 0);
        const TokenCounts c = replayer.replay(v.events, &fired);
        result.totals += c.scaled(v.multiplicity);
        for (std::size_t t = 0; t < fired.size(); ++t) result.executions[t] += fired[t] * v.multiplicity;
        if (c.missing == 0 && c.remaining == 0) result.perfectly_fitting_traces += v.multiplicity;
    }
    return result;
}

double fitness_from_counts(const TokenCounts& c) {
    const double missing = c.consumed == 0 ? 0.0 : static_cast<double>(c.missing) / static_cast<double>(c.consumed);
    const double remaining =
        c.produced == 0 ? 0.0 : static_cast<double>(c.remaining) / static_cast<double>(c.produced);
    return 0.5 * (1.0 - missing) + 0.5 * (1.0 - remaining);
}

double replay_fitness(const PetriNet& net, const EventLog& log) {
    return fitness_from_counts(replay_log(net, log).totals);
}

double precision(const PetriNet& net, const EventLog& log) {
    // Prefix trie: each node knows how often it is left and by which activities.
    struct Node {
        std::map<Activity, std::size_t> children;
        std::uint64_t visits = 0;  // prefix occurrences followed by another event
    };
    std::vector<Node> trie(1);
    for (const auto& v : log.variants()) {
        std::size_t cur = 0;
        for (const auto& a : v.events) {
            trie[cur].visits += v.multiplicity;
            auto it = trie[cur].children.find(a);
            if (it == trie[cur].children.end()) {
                trie.push_back({});
                it = trie[cur].children.emplace(a, trie.size() - 1).first;
            }
            cur = it->second;
        }
    }

    TokenReplayer replayer(net);
    double escaping = 0.0, allowed = 0.0;
    std::function<void(std::size_t, const Marking&)> walk = [&](std::size_t n, const Marking& m) {
        const Node& node = trie[n];
        if (node.visits != 0) {
            const auto enabled = replayer.enabled_labels(m);
            std::size_t esc = 0;
            for (const auto& a : enabled) esc += node.children.count(a) == 0 ? 1 : 0;
            escaping += static_cast<double>(node.visits) * static_cast<double>(esc);
            allowed += static_cast<double>(node.visits) * static_cast<double>(enabled.size());
        }
        for (const auto& [a, child] : node.children) {
            Marking next = m;
            TokenCounts scratch;
            replayer.step(next, a, scratch);
            walk(child, next);
        }
    };
    TokenCounts scratch;
    walk(0, replayer.start(scratch));
    return allowed == 0.0 ? 1.0 : 1.0 - escaping / allowed;
}

double generalization_from_executions(const std::vector<std::uint64_t>& executions) {
    if (executions.empty()) return 1.0;
    double sum = 0.0;
    for (std::uint64_t n : executions) sum += n == 0 ? 1.0 : 1.0 / std::sqrt(static_cast<double>(n));
    return 1.0 - sum / static_cast<double>(executions.size());
}

double generalization(const PetriNet& net, const EventLog& log) {
    return generalization_from_executions(replay_log(net, log).executions);
}

}  // namespace loopminer
