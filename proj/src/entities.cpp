#include "ctigraph/entities.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace ctigraph {

const char* to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::File: return "file";
    case NodeKind::Process: return "process";
    case NodeKind::Registry: return "registry";
    case NodeKind::Socket: return "socket";
    }
    return "file";
}

std::optional<NodeKind> node_kind_from_string(std::string_view s) {
    if (s == "file") return NodeKind::File;
    if (s == "process") return NodeKind::Process;
    if (s == "registry") return NodeKind::Registry;
    if (s == "socket") return NodeKind::Socket;
    return std::nullopt;
}

std::string regex_escape(std::string_view s) {
    static const std::string meta = R"(\^$.|?*+()[]{})";
    std::string out;
    out.reserve(s.size() * 2);
    for (char c : s) {
        if (meta.find(c) != std::string::npos) out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

bool has_hive_prefix(std::string_view name) {
    static const char* hives[] = {"HKEY", "HKLM", "HKCU", "HKCR", "HKU"};
    for (const char* h : hives) {
        std::string_view hv(h);
        if (name.size() >= hv.size() &&
            std::equal(hv.begin(), hv.end(), name.begin(),
                       [](char a, char b) { return a == std::toupper(static_cast<unsigned char>(b)); }))
            return true;
    }
    return false;
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

// Quick reject before running the regex battery on a token.
bool looks_indicator_like(std::string_view t) {
    for (char c : t) {
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
        switch (c) {
        case '.': case '\\': case '/': case '%': case '<': case ':':
        case '@': case '[': case '_': case '-':
            return true;
        default: break;
        }
    }
    return false;
}

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

} // namespace

std::string SeeBattery::refang(std::string_view text) {
    static const std::pair<const char*, const char*> subs[] = {
        {"hxxps://", "https://"}, {"hxxp://", "http://"},
        {"[.]", "."}, {"(.)", "."}, {"[:]", ":"},
        {"[at]", "@"}, {"[@]", "@"}, {"[dot]", "."},
    };
    std::string out(text);
    for (auto [from, to] : subs) {
        std::string f(from);
        std::string fl = lower(f);
        for (std::size_t pos = 0;;) {
            std::string hay = lower(out);
            std::size_t hit = hay.find(fl, pos);
            if (hit == std::string::npos) break;
            out.replace(hit, f.size(), to);
            pos = hit + std::string(to).size();
        }
    }
    return out;
}

const std::vector<SeeBattery::PatternDef>& SeeBattery::default_patterns() {
    static const std::vector<PatternDef> defs = {
        {"url", R"((?:https?|ftp)://[^\s"'<>,;]+)", NodeKind::Socket, true},
        {"email", R"([A-Za-z0-9._%+\-]+@[A-Za-z0-9.\-]+\.[A-Za-z]{2,})", NodeKind::Socket, false},
        {"ipv4_port", R"((?:\d{1,3}\.){3}\d{1,3}:\d{1,5})", NodeKind::Socket, false},
        {"ipv4", R"((?:\d{1,3}\.){3}\d{1,3})", NodeKind::Socket, false},
        {"ipv6", R"((?:[0-9A-Fa-f]{1,4}:){3,7}[0-9A-Fa-f]{1,4})", NodeKind::Socket, false},
        {"registry_path",
         R"((?:HKEY[_A-Za-z0-9]*|HKLM|HKCU|HKCR|HKU)(?:\\[^\\\s,;]+)+)", NodeKind::Registry, false},
        {"registry_value",
         R"("?[A-Za-z0-9_.\- ]+"?\s*=\s*(?:dword:[0-9a-fA-F]+|hex:[0-9a-fA-F,]+|"[^"]*"))",
         NodeKind::Registry, false},
        {"env_path",
         R"((?:%[A-Za-z_][^%]*%|<[A-Za-z_][^<>]*>)(?:\\[^\\\s,;]+)*)", NodeKind::File, false},
        {"windows_path",
         R"([A-Za-z]:\\(?:[^\\\s/:*?"<>|,;]+\\)*[^\\\s/:*?"<>|,;]+)", NodeKind::File, false},
        {"unix_path", R"((?:/[A-Za-z0-9._+\-]+){2,}/?)", NodeKind::File, false},
        {"filename",
         R"([A-Za-z0-9_%~$@!{}().+\-]*[A-Za-z0-9_%~$@!{}()+\-]\.(?:exe|dll|bat|ps1|vbs|scr|ocx|tlb|pf|sys|jar|js)\b)",
         NodeKind::File, true},
        {"domain",
         R"((?:[A-Za-z0-9](?:[A-Za-z0-9\-]{0,61}[A-Za-z0-9])?\.)+(?:com|net|org|info|biz|ru|cn|io|co|uk|de|fr|jp|kr|br|in|it|nl|se|no|es|me|cc|tv|top|xyz|site|online|club|pw|su|onion)\b)",
         NodeKind::Socket, true},
        {"sha256", R"(\b[a-fA-F0-9]{64}\b)", NodeKind::File, false},
        {"sha1", R"(\b[a-fA-F0-9]{40}\b)", NodeKind::File, false},
        {"md5", R"(\b[a-fA-F0-9]{32}\b)", NodeKind::File, false},
        {"cve", R"(CVE-\d{4}-\d{4,7})", NodeKind::File, true},
        {"mutex",
         R"((?:Global|Local)\\[A-Za-z0-9_\-{}]+|\b[A-Za-z0-9]*(?:Mutex|MTX)[A-Za-z0-9_\-]*\b)",
         NodeKind::File, false},
    };
    return defs;
}

SeeBattery::SeeBattery(std::vector<std::string> canonical_tokens,
                       std::vector<std::string> known_processes)
    : defs_(default_patterns()), canonical_tokens_(std::move(canonical_tokens)) {
    for (const auto& t : canonical_tokens_) canonical_lower_.insert(lower(t));
    for (const auto& p : known_processes) process_lower_.insert(lower(p));
    compile();
}

void SeeBattery::override_pattern(const std::string& cls, const std::string& expr) {
    for (auto& d : defs_) {
        if (d.cls == cls) {
            d.expr = expr;
            compile();
            return;
        }
    }
    throw std::runtime_error("patterns.lex: unknown pattern class '" + cls + "'");
}

void SeeBattery::compile() {
    compiled_.clear();
    int prio = 0;
    for (const auto& d : defs_) {
        auto flags = std::regex::ECMAScript | std::regex::optimize;
        if (d.icase) flags |= std::regex::icase;
        compiled_.push_back({d.cls, std::regex(d.expr, flags), d.kind, prio++});
    }
    // Known processes and canonical noun tokens participate as two synthetic
    // classes ranked between the path patterns and the generic filename one.
    if (!process_lower_.empty()) {
        std::string alt;
        for (const auto& p : process_lower_) {
            if (!alt.empty()) alt += "|";
            alt += regex_escape(p);
        }
        compiled_.push_back({"known_process",
                             std::regex("(?:" + alt + ")", std::regex::icase | std::regex::optimize),
                             NodeKind::Process, 15});
    }
    if (!canonical_tokens_.empty()) {
        std::string alt;
        for (const auto& t : canonical_tokens_) {
            if (!alt.empty()) alt += "|";
            alt += regex_escape(t);
        }
        compiled_.push_back({"canonical_token",
                             std::regex("(?:" + alt + ")", std::regex::icase | std::regex::optimize),
                             NodeKind::File, 40});
    }
    std::stable_sort(compiled_.begin(), compiled_.end(),
                     [](const Compiled& a, const Compiled& b) { return a.priority < b.priority; });
}

bool SeeBattery::is_known_process(std::string_view name) const {
    return process_lower_.count(lower(name)) > 0;
}

bool SeeBattery::is_canonical_token(std::string_view name) const {
    return canonical_lower_.count(lower(name)) > 0;
}

namespace {

// Canonical socket-class tokens ("IP:.*") carry their kind in the prefix.
NodeKind canonical_token_kind(std::string_view tok) {
    if (tok.size() >= 3 && (tok.substr(0, 3) == "IP:" || tok.substr(0, 3) == "ip:"))
        return NodeKind::Socket;
    return NodeKind::File;
}

bool valid_ipv4(std::string_view text) {
    int octet = 0, digits = 0, parts = 1;
    for (char c : text) {
        if (c == ':') break;
        if (c == '.') {
            if (digits == 0 || octet > 255) return false;
            octet = 0;
            digits = 0;
            ++parts;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        octet = octet * 10 + (c - '0');
        ++digits;
    }
    return parts == 4 && digits > 0 && octet <= 255;
}

} // namespace

std::vector<SeeMatch> SeeBattery::extract(std::string_view phrase) const {
    std::string text = refang(phrase);
    std::vector<SeeMatch> all;
    for (const auto& c : compiled_) {
        auto begin = std::sregex_iterator(text.begin(), text.end(), c.re);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            std::size_t b = static_cast<std::size_t>(it->position());
            std::size_t e = b + static_cast<std::size_t>(it->length());
            if (e == b) continue;
            // Poor man's word boundary for classes whose expression can start
            // or end mid-word (no lookbehind in std::regex).
            if (c.cls == "ipv4" || c.cls == "ipv4_port" || c.cls == "domain" ||
                c.cls == "known_process" || c.cls == "canonical_token" || c.cls == "filename") {
                if (b > 0 && (word_char(text[b - 1]) || text[b - 1] == '.' || text[b - 1] == '\\'))
                    continue;
                if (e < text.size() && (word_char(text[e]) || text[e] == '.') && c.cls != "filename")
                    continue;
            }
            if ((c.cls == "ipv4" || c.cls == "ipv4_port") && !valid_ipv4(it->str())) continue;
            if (c.cls == "unix_path" && b > 0 && word_char(text[b - 1])) continue;
            SeeMatch m;
            m.begin = b;
            m.end = e;
            m.text = it->str();
            m.pattern_class = c.cls;
            m.kind = c.cls == "canonical_token" ? canonical_token_kind(m.text) : c.kind;
            all.push_back(std::move(m));
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const SeeMatch& a, const SeeMatch& b) {
        if (a.begin != b.begin) return a.begin < b.begin;
        return a.end > b.end;
    });
    std::vector<SeeMatch> out;
    std::size_t covered = 0;
    for (auto& m : all) {
        if (!out.empty() && m.begin < covered) continue;
        covered = m.end;
        out.push_back(std::move(m));
    }
    return out;
}

std::optional<SeeMatch> SeeBattery::first(std::string_view phrase) const {
    auto all = extract(phrase);
    if (all.empty()) return std::nullopt;
    return all.front();
}

bool SeeBattery::full_match(std::string_view token) const {
    if (token.empty()) return false;
    if (canonical_lower_.count(lower(token))) return true;
    if (process_lower_.count(lower(token))) return true;
    if (!looks_indicator_like(token)) return false;
    std::string text = refang(token);
    for (const auto& c : compiled_) {
        if (c.cls == "canonical_token" || c.cls == "known_process") continue;
        if (std::regex_match(text, c.re)) {
            if ((c.cls == "ipv4" || c.cls == "ipv4_port") && !valid_ipv4(text)) continue;
            return true;
        }
    }
    return false;
}

Entity prune_to_entity(std::string_view phrase, const SeeBattery& battery) {
    auto m = battery.first(phrase);
    if (!m) return Entity{"*", NodeKind::File, true};
    return Entity{m->text, m->kind, false};
}

NodeKind type_entity(const std::string& name, NodeKind hint, const TypingContext& ctx) {
    if (has_hive_prefix(name)) return NodeKind::Registry;
    if (hint == NodeKind::Registry) return NodeKind::Registry;
    if (hint == NodeKind::Socket) return NodeKind::Socket;
    if (name.rfind("IP:", 0) == 0) return NodeKind::Socket;
    // Context sets hold lowercase names; matching ignores case.
    std::string folded = lower(name);
    if (ctx.agent_names.count(folded)) return NodeKind::Process;
    if (ctx.battery && ctx.battery->is_known_process(name)) return NodeKind::Process;
    if (ctx.exec_fork_patients.count(folded)) return NodeKind::Process;
    if (hint == NodeKind::Process) return NodeKind::Process;
    return NodeKind::File;
}

} // namespace ctigraph
