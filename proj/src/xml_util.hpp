#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace loopminer::detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

// Element name without any namespace prefix ("bpmn:task" -> "task").
inline std::string_view local_name(std::string_view qname) {
    auto pos = qname.rfind(':');
    return pos == std::string_view::npos ? qname : qname.substr(pos + 1);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace loopminer::detail
