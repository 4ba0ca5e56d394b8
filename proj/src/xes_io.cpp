#include <expat.h>
#include <zlib.h>

#include <cstring>
#include <memory>
#include <sstream>

#include "loopminer/error.hpp"
#include "loopminer/eventlog.hpp"
#include "xml_util.hpp"

namespace loopminer {

namespace {

struct XesHandler {
    EventLog log;
    XesParseReport report;
    std::vector<std::string> stack;
    bool in_trace = false;
    bool in_event = false;
    Sequence current;
    std::string label;
    bool has_label = false;
};

const char* find_attr(const XML_Char** attrs, const char* name) {
    for (int i = 0; attrs[i] != nullptr; i += 2) {
        if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
    }
    return nullptr;
}

void XMLCALL on_start(void* data, const XML_Char* qname, const XML_Char** attrs) {
    auto& h = *static_cast<XesHandler*>(data);
    std::string name(detail::local_name(qname));
    if (name == "trace" && !h.in_trace) {
        h.in_trace = true;
        h.current.clear();
    } else if (name == "event" && h.in_trace && !h.in_event) {
        h.in_event = true;
        h.has_label = false;
    } else if (h.in_event && !h.stack.empty() && h.stack.back() == "event") {
        const char* key = find_attr(attrs, "key");
        const char* value = find_attr(attrs, "value");
        if (key != nullptr && value != nullptr && std::strcmp(key, "concept:name") == 0 &&
            value[0] != '\0') {
            h.label = value;
            h.has_label = true;
        }
    }
    h.stack.push_back(std::move(name));
}

void XMLCALL on_end(void* data, const XML_Char* /*qname*/) {
    auto& h = *static_cast<XesHandler*>(data);
    const std::string name = std::move(h.stack.back());
    h.stack.pop_back();
    if (name == "event" && h.in_event && (h.stack.empty() || h.stack.back() != "event")) {
        h.in_event = false;
        if (h.has_label) {
            h.current.push_back(h.label);
        } else {
            ++h.report.skipped_events;
        }
    } else if (name == "trace" && h.in_trace && !h.in_event) {
        h.in_trace = false;
        if (h.current.empty()) {
            ++h.report.skipped_traces;
        } else {
            h.log.add(h.current);
        }
    }
}

}  // namespace

EventLog parse_xes(std::string_view document, XesParseReport* report) {
    XesHandler handler;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate(nullptr), &XML_ParserFree);
    if (!parser) throw Error(ErrorCode::Io, "cannot allocate XML parser");
    XML_SetUserData(parser.get(), &handler);
    XML_SetElementHandler(parser.get(), on_start, on_end);

    // Feed in chunks; XML_Parse takes an int length.
    constexpr std::size_t kChunk = 1 << 24;
    std::size_t offset = 0;
    do {
        const std::size_t n = std::min(kChunk, document.size() - offset);
        const bool last = offset + n == document.size();
        if (XML_Parse(parser.get(), document.data() + offset, static_cast<int>(n), last) ==
            XML_STATUS_ERROR) {
            std::ostringstream msg;
            msg << "malformed XES at line " << XML_GetCurrentLineNumber(parser.get()) << ": "
                << XML_ErrorString(XML_GetErrorCode(parser.get()));
            throw Error(ErrorCode::MalformedXml, msg.str());
        }
        offset += n;
    } while (offset < document.size());

    if (handler.log.empty()) throw Error(ErrorCode::EmptyLog, "XES document contains no traces");
    if (report != nullptr) *report = handler.report;
    return std::move(handler.log);
}

std::string read_file_maybe_gz(const std::filesystem::path& path) {
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (f == nullptr) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::string out;
    char buf[1 << 16];
    int n = 0;
    while ((n = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
    const bool failed = n < 0;
    gzclose(f);
    if (failed) throw Error(ErrorCode::MalformedXml, "cannot decompress " + path.string());
    return out;
}

EventLog read_xes_file(const std::filesystem::path& path, XesParseReport* report) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw Error(ErrorCode::Io, "not a readable file: " + path.string());
    }
    return parse_xes(read_file_maybe_gz(path), report);
}

std::string write_xes(const EventLog& log) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<log xes.version=\"1.0\" xes.features=\"\" xmlns=\"http://www.xes-standard.org/\">\n"
       << "  <extension name=\"Concept\" prefix=\"concept\" "
          "uri=\"http://www.xes-standard.org/concept.xesext\"/>\n";
    std::uint64_t case_id = 0;
    for (const auto& v : log.variants()) {
        for (std::uint64_t k = 0; k < v.multiplicity; ++k) {
            os << "  <trace>\n    <string key=\"concept:name\" value=\"case_" << ++case_id
               << "\"/>\n";
            for (const auto& a : v.events) {
                os << "    <event><string key=\"concept:name\" value=\"" << detail::xml_escape(a)
                   << "\"/></event>\n";
            }
            os << "  </trace>\n";
        }
    }
    os << "</log>\n";
    return os.str();
}

}  // namespace loopminer
