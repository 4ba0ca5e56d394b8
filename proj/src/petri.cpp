#include "loopminer/petri.hpp"

#include <functional>
#include <numeric>
#include <sstream>

#include "loopminer/error.hpp"
#include "xml_util.hpp"

namespace loopminer {

std::size_t PetriNet::add_place(std::string name) {
    places_.push_back(std::move(name));
    initial_.push_back(0);
    final_.push_back(0);
    return places_.size() - 1;
}

std::size_t PetriNet::add_transition(std::string name, std::optional<std::string> label,
                                     std::vector<std::size_t> inputs, std::vector<std::size_t> outputs) {
    transitions_.push_back({std::move(name), std::move(label), std::move(inputs), std::move(outputs)});
    return transitions_.size() - 1;
}

bool PetriNet::enabled(const Marking& m, std::size_t t) const {
    const auto& in = transitions_[t].inputs;
    for (std::size_t i = 0; i < in.size(); ++i) {
        // Repeated input places need one token per arc.
        std::uint32_t need = 0;
        for (std::size_t p : in) need += p == in[i] ? 1 : 0;
        if (m[in[i]] < need) return false;
    }
    return true;
}

void PetriNet::fire(Marking& m, std::size_t t) const {
    for (std::size_t p : transitions_[t].inputs) --m[p];
    for (std::size_t p : transitions_[t].outputs) ++m[p];
}

void PetriNet::validate() const {
    auto total = [](const Marking& m) { return std::accumulate(m.begin(), m.end(), std::uint64_t{0}); };
    if (total(initial_) == 0 || total(final_) == 0) {
        throw Error(ErrorCode::InvariantViolation, "Petri net needs non-empty initial and final markings");
    }
    for (const auto& t : transitions_) {
        for (std::size_t p : t.inputs) {
            if (p >= places_.size()) throw Error(ErrorCode::InvariantViolation, "arc to unknown place");
        }
        for (std::size_t p : t.outputs) {
            if (p >= places_.size()) throw Error(ErrorCode::InvariantViolation, "arc to unknown place");
        }
    }
}

PetriNet bpmn_to_petri(const BpmnModel& model) {
    const auto& flows = model.flows();
    std::vector<std::size_t> parent(flows.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i < model.nodes().size(); ++i) {
        const auto& n = model.node(i);
        if (n.kind != NodeKind::ExclusiveGateway || !n.is_join()) continue;
        const auto out = model.outgoing(i);
        for (std::size_t f : model.incoming(i)) {
            for (std::size_t g : out) parent[find(f)] = find(g);
        }
    }

    PetriNet net;
    std::vector<std::size_t> place_of_root(flows.size(), SIZE_MAX);
    auto place = [&](std::size_t flow) {
        const std::size_t r = find(flow);
        if (place_of_root[r] == SIZE_MAX) {
            place_of_root[r] = net.add_place("p" + std::to_string(net.places().size()));
        }
        return place_of_root[r];
    };
    // Deterministic place numbering: by flow index.
    for (std::size_t f = 0; f < flows.size(); ++f) place(f);

    for (std::size_t i = 0; i < model.nodes().size(); ++i) {
        const auto& n = model.node(i);
        const auto in = model.incoming(i);
        const auto out = model.outgoing(i);
        std::vector<std::size_t> in_places, out_places;
        for (std::size_t f : in) in_places.push_back(place(f));
        for (std::size_t f : out) out_places.push_back(place(f));
        switch (n.kind) {
            case NodeKind::StartEvent:
                for (std::size_t p : out_places) net.initial_marking()[p] += 1;
                break;
            case NodeKind::EndEvent:
                for (std::size_t p : in_places) net.final_marking()[p] += 1;
                break;
            case NodeKind::Task:
                net.add_transition(n.name, n.name, in_places, out_places);
                break;
            case NodeKind::ExclusiveGateway:
                if (n.is_split()) {
                    for (std::size_t k = 0; k < out_places.size(); ++k) {
                        net.add_transition("tau_" + n.id + "_" + std::to_string(k), std::nullopt,
                                           in_places, {out_places[k]});
                    }
                }
                break;  // joins are merged places
            case NodeKind::ParallelGateway:
                net.add_transition("tau_" + n.id, std::nullopt, in_places, out_places);
                break;
        }
    }
    net.validate();
    return net;
}

std::string to_pnml(const PetriNet& net) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n"
       << "  <net id=\"net\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n"
       << "    <page id=\"page\">\n";
    for (std::size_t p = 0; p < net.places().size(); ++p) {
        os << "      <place id=\"" << detail::xml_escape(net.places()[p]) << "\">";
        if (net.initial_marking()[p] != 0) {
            os << "<initialMarking><text>" << net.initial_marking()[p] << "</text></initialMarking>";
        }
        os << "</place>\n";
    }
    for (std::size_t t = 0; t < net.transitions().size(); ++t) {
        const auto& tr = net.transitions()[t];
        os << "      <transition id=\"t" << t << "\"><name><text>"
           << detail::xml_escape(tr.label ? *tr.label : tr.name) << "</text></name>";
        if (tr.silent()) os << "<toolspecific tool=\"loopminer\" version=\"1\" activity=\"$invisible$\"/>";
        os << "</transition>\n";
    }
    std::size_t arc = 0;
    for (std::size_t t = 0; t < net.transitions().size(); ++t) {
        const auto& tr = net.transitions()[t];
        for (std::size_t p : tr.inputs) {
            os << "      <arc id=\"a" << arc++ << "\" source=\"" << detail::xml_escape(net.places()[p])
               << "\" target=\"t" << t << "\"/>\n";
        }
        for (std::size_t p : tr.outputs) {
            os << "      <arc id=\"a" << arc++ << "\" source=\"t" << t << "\" target=\""
               << detail::xml_escape(net.places()[p]) << "\"/>\n";
        }
    }
    os << "    </page>\n    <finalmarkings><marking>\n";
    for (std::size_t p = 0; p < net.places().size(); ++p) {
        if (net.final_marking()[p] != 0) {
            os << "      <place idref=\"" << detail::xml_escape(net.places()[p]) << "\"><text>"
               << net.final_marking()[p] << "</text></place>\n";
        }
    }
    os << "    </marking></finalmarkings>\n  </net>\n</pnml>\n";
    return os.str();
}

}  // namespace loopminer
