#include <expat.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <optional>
#include <tuple>
#include <sstream>

#include "loopminer/bpmn.hpp"
#include "loopminer/error.hpp"
#include "xml_util.hpp"

namespace loopminer {

namespace {

constexpr const char* kBpmnNs = "http://www.omg.org/spec/BPMN/20100524/MODEL";

const char* direction_name(GatewayDirection d) {
    switch (d) {
        case GatewayDirection::Diverging: return "Diverging";
        case GatewayDirection::Converging: return "Converging";
        case GatewayDirection::Unspecified: return "Unspecified";
    }
    return "Unspecified";
}

std::vector<std::size_t> nodes_by_id(const BpmnModel& m) {
    std::vector<std::size_t> order(m.nodes().size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return m.node(a).id < m.node(b).id; });
    return order;
}

// (source id, target id, flow id) sorted; parallel flows get an occurrence suffix.
std::vector<std::tuple<std::string, std::string, std::string>> flows_sorted(const BpmnModel& m) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& f : m.flows()) pairs.emplace_back(m.node(f.source).id, m.node(f.target).id);
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::size_t occurrence = 0;
        while (i >= occurrence + 1 && pairs[i - occurrence - 1] == pairs[i]) ++occurrence;
        std::string key = pairs[i].first + "->" + pairs[i].second;
        if (occurrence != 0) key += "#" + std::to_string(occurrence);
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(detail::fnv1a64(key)));
        out.emplace_back(pairs[i].first, pairs[i].second, std::string("Flow_") + buf);
    }
    return out;
}

}  // namespace

std::string serialize_bpmn_xml(const BpmnModel& model) {
    std::ostringstream body;
    for (std::size_t i : nodes_by_id(model)) {
        const auto& n = model.node(i);
        body << "    <" << to_string(n.kind) << " id=\"" << detail::xml_escape(n.id) << "\"";
        if (n.kind == NodeKind::Task) body << " name=\"" << detail::xml_escape(n.name) << "\"";
        if (n.is_gateway()) body << " gatewayDirection=\"" << direction_name(n.direction) << "\"";
        body << "/>\n";
    }
    for (const auto& [src, tgt, id] : flows_sorted(model)) {
        body << "    <sequenceFlow id=\"" << id << "\" sourceRef=\"" << detail::xml_escape(src)
             << "\" targetRef=\"" << detail::xml_escape(tgt) << "\"/>\n";
    }
    const std::string content = body.str();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(content)));
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<definitions xmlns=\"" << kBpmnNs << "\" id=\"Definitions_" << buf
       << "\" targetNamespace=\"http://loopminer.local/bpmn\">\n"
       << "  <process id=\"Process_" << buf << "\" isExecutable=\"false\">\n"
       << content << "  </process>\n</definitions>\n";
    return os.str();
}

namespace {

struct BpmnHandler {
    BpmnModel model;
    std::vector<std::pair<std::string, std::string>> flows;
    std::string error;
};

const char* attr(const XML_Char** attrs, const char* name) {
    for (int i = 0; attrs[i] != nullptr; i += 2) {
        if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
    }
    return nullptr;
}

void XMLCALL bpmn_start(void* data, const XML_Char* qname, const XML_Char** attrs) {
    auto& h = *static_cast<BpmnHandler*>(data);
    if (!h.error.empty()) return;
    const std::string_view name = detail::local_name(qname);
    const char* id = attr(attrs, "id");
    std::optional<NodeKind> kind;
    if (name == "startEvent") kind = NodeKind::StartEvent;
    else if (name == "endEvent") kind = NodeKind::EndEvent;
    else if (name == "task") kind = NodeKind::Task;
    else if (name == "exclusiveGateway") kind = NodeKind::ExclusiveGateway;
    else if (name == "parallelGateway") kind = NodeKind::ParallelGateway;

    if (kind) {
        if (id == nullptr) {
            h.error = std::string(name) + " without id";
            return;
        }
        const char* label = attr(attrs, "name");
        GatewayDirection dir = GatewayDirection::Unspecified;
        if (const char* d = attr(attrs, "gatewayDirection")) {
            if (std::strcmp(d, "Diverging") == 0) dir = GatewayDirection::Diverging;
            else if (std::strcmp(d, "Converging") == 0) dir = GatewayDirection::Converging;
        }
        try {
            h.model.add_node_with_id(*kind, id, *kind == NodeKind::Task && label ? label : "", dir);
        } catch (const Error& e) {
            h.error = e.what();
        }
    } else if (name == "sequenceFlow") {
        const char* s = attr(attrs, "sourceRef");
        const char* t = attr(attrs, "targetRef");
        if (s == nullptr || t == nullptr) {
            h.error = "sequenceFlow without sourceRef/targetRef";
            return;
        }
        h.flows.emplace_back(s, t);
    }
}

void XMLCALL bpmn_end(void*, const XML_Char*) {}

}  // namespace

BpmnModel parse_bpmn_xml(std::string_view document) {
    BpmnHandler h;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate(nullptr), &XML_ParserFree);
    XML_SetUserData(parser.get(), &h);
    XML_SetElementHandler(parser.get(), bpmn_start, bpmn_end);
    if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), 1) ==
        XML_STATUS_ERROR) {
        throw Error(ErrorCode::MalformedXml,
                    std::string("malformed BPMN XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
    if (!h.error.empty()) throw Error(ErrorCode::MalformedXml, "invalid BPMN: " + h.error);
    for (const auto& [s, t] : h.flows) {
        auto si = h.model.find_id(s);
        auto ti = h.model.find_id(t);
        if (!si || !ti) throw Error(ErrorCode::MalformedXml, "sequenceFlow references unknown node");
        h.model.add_flow(*si, *ti);
    }
    // Infer missing gateway directions from degree.
    for (std::size_t i = 0; i < h.model.nodes().size(); ++i) {
        const auto& n = h.model.node(i);
        if (n.is_gateway() && n.direction == GatewayDirection::Unspecified) {
            h.model.set_direction(i, h.model.incoming(i).size() >= 2 ? GatewayDirection::Converging
                                                                     : GatewayDirection::Diverging);
        }
    }
    return std::move(h.model);
}

std::string serialize_dot(const BpmnModel& model) {
    std::ostringstream os;
    os << "digraph bpmn {\n  rankdir=LR;\n";
    for (std::size_t i : nodes_by_id(model)) {
        const auto& n = model.node(i);
        os << "  \"" << n.id << "\" [";
        switch (n.kind) {
            case NodeKind::StartEvent: os << "shape=circle, label=\"\""; break;
            case NodeKind::EndEvent: os << "shape=doublecircle, label=\"\""; break;
            case NodeKind::Task: {
                std::string escaped;
                for (char c : n.name) {
                    if (c == '"' || c == '\\') escaped += '\\';
                    escaped += c;
                }
                os << "shape=box, style=rounded, label=\"" << escaped << "\"";
                break;
            }
            case NodeKind::ExclusiveGateway: os << "shape=diamond, label=\"×\""; break;
            case NodeKind::ParallelGateway: os << "shape=diamond, label=\"+\""; break;
        }
        os << "];\n";
    }
    for (const auto& [src, tgt, id] : flows_sorted(model)) {
        os << "  \"" << src << "\" -> \"" << tgt << "\";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace loopminer
