#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <zlib.h>

#include "helpers.hpp"
#include "loopminer/error.hpp"
#include "loopminer/eventlog.hpp"

using namespace loopminer;
using testutil::log_of;
using testutil::seq;

namespace {

std::string xes_with(const std::string& body) {
    return "<?xml version=\"1.0\"?>\n<log xes.version=\"1.0\">" + body + "</log>";
}

std::string trace_xml(std::initializer_list<const char*> events) {
    std::string s = "<trace><string key=\"concept:name\" value=\"t\"/>";
    for (const char* e : events) s += std::string("<event><string key=\"concept:name\" value=\"") + e + "\"/></event>";
    return s + "</trace>";
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("eventlog") {

TEST_CASE("parse_xes merges identical traces into variants") {
    const auto log = parse_xes(xes_with(trace_xml({"a", "b"}) + trace_xml({"a", "b"}) + trace_xml({"a", "c"})));
    REQUIRE(log.variants().size() == 2);
    CHECK(log.count(seq("ab")) == 2);
    CHECK(log.count(seq("ac")) == 1);
    CHECK(log.total_traces() == 3);
}

TEST_CASE("parse_xes singleton") {
    const auto log = parse_xes(xes_with(trace_xml({"a"})));
    CHECK(log.variants().size() == 1);
    CHECK(log.alphabet() == std::set<Activity>{"a"});
}

TEST_CASE("parse_xes rejects empty logs and broken XML") {
    CHECK(code_of([] { parse_xes(xes_with("")); }) == ErrorCode::EmptyLog);
    CHECK(code_of([] { parse_xes("<log><trace>"); }) == ErrorCode::MalformedXml);
    CHECK(code_of([] { parse_xes("not xml at all"); }) == ErrorCode::MalformedXml);
}

TEST_CASE("events without a name are skipped and reported") {
    const std::string doc = xes_with(
        "<trace><event><string key=\"org:resource\" value=\"x\"/></event>"
        "<event><string key=\"concept:name\" value=\"a\"/></event></trace>"
        "<trace><event><date key=\"time:timestamp\" value=\"2020-01-01T00:00:00\"/></event></trace>");
    XesParseReport report;
    const auto log = parse_xes(doc, &report);
    CHECK(report.skipped_events == 2);
    CHECK(report.skipped_traces == 1);
    CHECK(log.count(seq("a")) == 1);
}

TEST_CASE("nested attributes do not override the event name") {
    const std::string doc = xes_with(
        "<trace><event><string key=\"concept:name\" value=\"a\"/>"
        "<list key=\"meta\"><string key=\"concept:name\" value=\"zzz\"/></list></event></trace>");
    CHECK(parse_xes(doc).count(seq("a")) == 1);
}

TEST_CASE("prefixed element names are accepted") {
    const std::string doc =
        "<x:log xmlns:x=\"http://www.xes-standard.org/\"><x:trace><x:event>"
        "<x:string key=\"concept:name\" value=\"a\"/></x:event></x:trace></x:log>";
    CHECK(parse_xes(doc).count(seq("a")) == 1);
}

TEST_CASE("write_xes round-trips the variant multiset") {
    const auto log = log_of({{"abc", 3}, {"a&<b", 1}, {"d", 2}});
    const auto back = parse_xes(write_xes(log));
    CHECK(back.sorted_variants() == log.sorted_variants());
}

TEST_CASE("gzip and plain files read the same") {
    const auto dir = std::filesystem::temp_directory_path() / "loopminer_eventlog_test";
    std::filesystem::create_directories(dir);
    const std::string doc = write_xes(log_of({{"ab", 2}, {"ba", 1}}));
    {
        std::ofstream(dir / "plain.xes") << doc;
        gzFile gz = gzopen((dir / "packed.xes.gz").c_str(), "wb");
        REQUIRE(gz != nullptr);
        gzwrite(gz, doc.data(), static_cast<unsigned>(doc.size()));
        gzclose(gz);
    }
    const auto a = read_xes_file(dir / "plain.xes");
    const auto b = read_xes_file(dir / "packed.xes.gz");
    CHECK(a.sorted_variants() == b.sorted_variants());
    CHECK(code_of([&] { read_xes_file(dir / "missing.xes"); }) == ErrorCode::Io);
    std::filesystem::remove_all(dir);
}

TEST_CASE("filter_infrequent_traces boundary is inclusive") {
    const auto log = log_of({{"a", 60}, {"b", 35}, {"c", 5}});
    CHECK(filter_infrequent_traces(log, 0.05).variants().size() == 3);
    const auto two = log_of({{"a", 96}, {"b", 4}});
    const auto kept = filter_infrequent_traces(two, 0.05);
    REQUIRE(kept.variants().size() == 1);
    CHECK(kept.count(seq("a")) == 96);
    CHECK(filter_infrequent_traces(log, 0.0).sorted_variants() == log.sorted_variants());
}

TEST_CASE("filter_infrequent_traces fails when nothing survives") {
    const auto log = log_of({{"a", 1}, {"b", 1}, {"c", 1}});
    CHECK(code_of([&] { filter_infrequent_traces(log, 0.5); }) == ErrorCode::AllTracesFiltered);
    CHECK(code_of([&] { filter_infrequent_traces(log, 1.5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("log_stats on small fixtures") {
    const LogStats s = log_stats(log_of({{"abc", 2}, {"a", 1}}));
    CHECK(s == LogStats{3, 2, 7, 3, 1, 2, 3});
    CHECK(log_stats(log_of({{"a", 1}})) == LogStats{1, 1, 1, 1, 1, 1, 1});
}

TEST_CASE("log_stats rounds the mean half up") {
    // lengths 1 and 2: mean 1.5 -> 2
    CHECK(log_stats(log_of({{"a", 1}, {"ab", 1}})).avg_len == 2);
    // 1493 events over 693 traces: mean 2.15 -> 2
    EventLog log;
    log.add(seq("a"), 593);
    log.add(seq("abcdefghi"), 100);
    CHECK(log_stats(log).avg_len == 2);
}

TEST_CASE("add rejects empty traces and zero multiplicity") {
    EventLog log;
    CHECK(code_of([&] { log.add({}, 1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { log.add(seq("a"), 0); }) == ErrorCode::InvalidArgument);
}

}  // TEST_SUITE
