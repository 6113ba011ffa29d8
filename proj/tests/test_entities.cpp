#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ctigraph/entities.hpp"
#include "ctigraph/lexicon.hpp"

using namespace ctigraph;

namespace {

SeeBattery battery() {
    auto lex = load_lexicon(CTIGRAPH_DEFAULT_LEXICON_DIR);
    return SeeBattery(lex.nouns.canonical_tokens(), words::known_processes());
}

std::string first_text(const SeeBattery& b, std::string_view phrase) {
    auto m = b.first(phrase);
    return m ? m->text : std::string();
}

std::string first_class(const SeeBattery& b, std::string_view phrase) {
    auto m = b.first(phrase);
    return m ? m->pattern_class : std::string();
}

} // namespace

TEST_CASE("indicator patterns pick out the core entity") {
    auto b = battery();
    CHECK(first_text(b, "a copy of itself in %TEMP%\\svchost.exe") == "%TEMP%\\svchost.exe");
    CHECK(first_class(b, "connects to 10.13.13.1") == "ipv4");
    CHECK(first_text(b, "connects to 10.13.13.1:8080 for commands") == "10.13.13.1:8080");
    CHECK(first_class(b, "the file mscno.exe was dropped") == "filename");
    CHECK(first_text(b, "the file mscno.exe was dropped") == "mscno.exe");
    CHECK(first_class(b, "beacons to evil.example.com daily") == "domain");
    CHECK(first_class(b, "writes to C:\\Windows\\System32\\drivers\\etc\\hosts") ==
          "windows_path");
    CHECK(first_class(b, "reads /etc/passwd today") == "unix_path");
    CHECK(first_class(b, "the key HKLM\\Software\\Microsoft\\Windows\\CurrentVersion\\Run") ==
          "registry_path");
    CHECK(first_class(b, "fetches hxxp://bad.example.com/payload.bin") == "url");
    CHECK(first_class(b, "mails stolen data to drop@evil.example.com") == "email");
    CHECK(first_class(b, "hash 9e107d9d372bb6826bd81d3542a419d623dde2f2") == "sha1");
    CHECK(first_class(b, "exploits CVE-2017-0144 to spread") == "cve");
}

TEST_CASE("ipv4 octets above 255 are not addresses") {
    auto b = battery();
    CHECK(first_class(b, "version 300.300.300.300 shipped") != "ipv4");
    CHECK(first_class(b, "at 192.168.1.77 tonight") == "ipv4");
}

TEST_CASE("defanged indicators are refanged before matching") {
    CHECK(SeeBattery::refang("hxxp://evil[.]example[.]com/p") == "http://evil.example.com/p");
    CHECK(SeeBattery::refang("hxxps://x[.]y") == "https://x.y");
    CHECK(SeeBattery::refang("10[.]13[.]13[.]1") == "10.13.13.1");
    CHECK(SeeBattery::refang("bad(.)example(.)com") == "bad.example.com");
    CHECK(SeeBattery::refang("user[at]host[dot]com") == "user@host.com");
    auto b = battery();
    CHECK(first_class(b, "connects to 10[.]13[.]13[.]1") == "ipv4");
    CHECK(first_text(b, "connects to 10[.]13[.]13[.]1") == "10.13.13.1");
}

TEST_CASE("canonical tokens and known processes match as whole words") {
    auto b = battery();
    CHECK(first_class(b, "stores the copy in TEMP now") == "canonical_token");
    CHECK(first_text(b, "stores the copy in TEMP now") == "TEMP");
    // No match inside a longer word.
    CHECK(first_text(b, "the TEMPX marker") != "TEMP");
    CHECK(first_class(b, "injects into svchost.exe remotely") == "filename");
    CHECK(b.is_known_process("svchost.exe"));
    CHECK(b.is_canonical_token("TEMP"));
    CHECK(b.is_canonical_token("IP:.*"));
    CHECK_FALSE(b.is_canonical_token("server"));
}

TEST_CASE("full_match accepts whole-token indicators only") {
    auto b = battery();
    CHECK(b.full_match("mscno.exe"));
    CHECK(b.full_match("10.13.13.1"));
    CHECK(b.full_match("TEMP"));
    CHECK(b.full_match("IP:.*"));
    CHECK(b.full_match("%TEMP%\\svchost.exe"));
    CHECK_FALSE(b.full_match("machine"));
    CHECK_FALSE(b.full_match("downloads"));
    CHECK_FALSE(b.full_match("the"));
}

TEST_CASE("extract returns non-overlapping matches left to right") {
    auto b = battery();
    auto ms = b.extract("copies mscno.exe to %TEMP%\\mscno.exe then pings 10.13.13.1");
    REQUIRE(ms.size() == 3);
    CHECK(ms[0].text == "mscno.exe");
    CHECK(ms[1].text == "%TEMP%\\mscno.exe");
    CHECK(ms[2].text == "10.13.13.1");
    for (std::size_t i = 1; i < ms.size(); ++i) CHECK(ms[i - 1].end <= ms[i].begin);
}

TEST_CASE("every extract hit is a substring at its reported span") {
    auto b = battery();
    const char* phrases[] = {
        "drops %TEMP%\\a.exe and deletes C:\\Users\\Public\\b.dll",
        "talks to 1.2.3.4 and evil.example.com over hxxp://evil.example.com/x",
        "sets HKCU\\Software\\Run\\svc and spawns cmd.exe",
    };
    for (const char* p : phrases) {
        std::string refanged = SeeBattery::refang(p);
        for (const auto& m : b.extract(p)) {
            REQUIRE(m.end <= refanged.size());
            CHECK(refanged.substr(m.begin, m.end - m.begin) == m.text);
        }
    }
}

TEST_CASE("prune_to_entity keeps the first indicator and drops the rest") {
    auto b = battery();
    // Phrases reach this stage already homogenized, so the canonical token
    // form is what normally appears.
    auto e = prune_to_entity("a copy of itself in the TEMP folder", b);
    CHECK_FALSE(e.wildcard);
    CHECK(e.name == "TEMP");

    // Raw surface forms are kept verbatim; canonicalizing is homogenize's
    // job, and skipping it is meant to be visible in the output names.
    auto raw = prune_to_entity("a copy of itself in the %TEMP% folder", b);
    CHECK(raw.name == "%TEMP%");

    auto none = prune_to_entity("many documents about the victims", b);
    CHECK(none.wildcard);
    CHECK(none.name == "*");
}

TEST_CASE("typing rules: hives, sockets, processes, files") {
    auto b = battery();
    TypingContext ctx;
    ctx.battery = &b;
    ctx.agent_names = {"authorization.exe"};
    ctx.exec_fork_patients = {"payload.bin"};

    CHECK(type_entity("HKLM\\Software\\Run", NodeKind::File, ctx) == NodeKind::Registry);
    CHECK(type_entity("IP:.*", NodeKind::File, ctx) == NodeKind::Socket);
    CHECK(type_entity("10.13.13.1", NodeKind::Socket, ctx) == NodeKind::Socket);
    // Document context promotes names seen acting or being executed.
    CHECK(type_entity("Authorization.exe", NodeKind::File, ctx) == NodeKind::Process);
    CHECK(type_entity("payload.bin", NodeKind::File, ctx) == NodeKind::Process);
    CHECK(type_entity("svchost.exe", NodeKind::File, ctx) == NodeKind::Process);
    CHECK(type_entity("report.docx", NodeKind::File, ctx) == NodeKind::File);
}

TEST_CASE("node kind names round-trip") {
    for (NodeKind k :
         {NodeKind::File, NodeKind::Process, NodeKind::Registry, NodeKind::Socket}) {
        auto back = node_kind_from_string(to_string(k));
        REQUIRE(back.has_value());
        CHECK(*back == k);
    }
    CHECK_FALSE(node_kind_from_string("pipe").has_value());
}
