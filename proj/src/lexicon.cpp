#include "ctigraph/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ctigraph {

const char* to_string(Syscall v) {
    switch (v) {
    case Syscall::Write: return "write";
    case Syscall::Read: return "read";
    case Syscall::Unlink: return "unlink";
    case Syscall::Send: return "send";
    case Syscall::Receive: return "receive";
    case Syscall::Connect: return "connect";
    case Syscall::Fork: return "fork";
    case Syscall::Exec: return "exec";
    case Syscall::Exit: return "exit";
    case Syscall::Mmap: return "mmap";
    }
    return "write";
}

std::optional<Syscall> syscall_from_string(std::string_view name) {
    for (Syscall v : kAllSyscalls)
        if (name == to_string(v)) return v;
    return std::nullopt;
}

std::string lower_copy(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim_copy(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

namespace {

struct LexLine {
    int number = 0;
    std::string canonical;
    std::vector<std::string> values;
};

// canonical<TAB>v1,v2,...  '#' starts a comment line; trailing commas are a
// format error, not noise to forgive.
std::vector<LexLine> parse_lex_lines(const std::string& text, const std::string& filename) {
    std::vector<LexLine> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw LexiconError(filename + ":" + std::to_string(lineno) +
                               ": expected canonical<TAB>values");
        LexLine row;
        row.number = lineno;
        row.canonical = trim_copy(line.substr(0, tab));
        std::string rest = trim_copy(line.substr(tab + 1));
        if (row.canonical.empty())
            throw LexiconError(filename + ":" + std::to_string(lineno) + ": empty canonical");
        if (rest.empty())
            throw LexiconError(filename + ":" + std::to_string(lineno) + ": empty value list");
        if (rest.back() == ',')
            throw LexiconError(filename + ":" + std::to_string(lineno) + ": trailing comma");
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            std::size_t comma = rest.find(',', pos);
            std::string item = trim_copy(rest.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (item.empty())
                throw LexiconError(filename + ":" + std::to_string(lineno) + ": empty list item");
            row.values.push_back(item);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        out.push_back(std::move(row));
    }
    return out;
}

// Fixed dedup priority when one lemma shows up under several canonical verbs
// in user-supplied files (write beats read beats receive, then file order).
int dedup_rank(Syscall v) {
    switch (v) {
    case Syscall::Write: return 0;
    case Syscall::Read: return 1;
    case Syscall::Receive: return 2;
    default: return 3 + static_cast<int>(v);
    }
}

} // namespace

SyscallDictionary SyscallDictionary::parse(const std::string& text, const std::string& filename) {
    SyscallDictionary d;
    for (const auto& row : parse_lex_lines(text, filename)) {
        auto v = syscall_from_string(lower_copy(row.canonical));
        if (!v)
            throw LexiconError(filename + ":" + std::to_string(row.number) +
                               ": unknown canonical verb '" + row.canonical + "'");
        for (const auto& s : row.values) d.synonyms_[static_cast<int>(*v)].insert(lower_copy(s));
    }
    for (Syscall v : kAllSyscalls) d.synonyms_[static_cast<int>(v)].insert(to_string(v));
    for (Syscall v : kAllSyscalls) {
        for (const auto& s : d.synonyms_[static_cast<int>(v)]) {
            auto it = d.index_.find(s);
            if (it == d.index_.end() || dedup_rank(v) < dedup_rank(it->second))
                d.index_[s] = v;
        }
    }
    return d;
}

std::optional<Syscall> SyscallDictionary::canonical(std::string_view lemma) const {
    auto it = index_.find(lower_copy(lemma));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool SyscallDictionary::contains(std::string_view lemma) const {
    return index_.count(lower_copy(lemma)) > 0;
}

const std::set<std::string>& SyscallDictionary::synonyms(Syscall v) const {
    return synonyms_[static_cast<int>(v)];
}

std::string SyscallDictionary::serialize() const {
    std::string out;
    for (Syscall v : kAllSyscalls) {
        out += to_string(v);
        out += '\t';
        bool first = true;
        for (const auto& s : synonyms_[static_cast<int>(v)]) {
            if (index_.at(s) != v) continue; // lost a dedup tie
            if (!first) out += ',';
            out += s;
            first = false;
        }
        out += '\n';
    }
    return out;
}

std::string NounDictionary::normalize_word(std::string_view word) {
    std::string out;
    for (char c : word) {
        if (c == '&')
            out += "and";
        else
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

namespace {

std::string normalize_phrase(std::string_view phrase) {
    std::istringstream in{std::string(phrase)};
    std::string w, out;
    while (in >> w) {
        if (!out.empty()) out += ' ';
        out += NounDictionary::normalize_word(w);
    }
    return out;
}

std::size_t phrase_token_count(std::string_view phrase) {
    std::istringstream in{std::string(phrase)};
    std::string w;
    std::size_t n = 0;
    while (in >> w) ++n;
    return n;
}

} // namespace

NounDictionary NounDictionary::parse(const std::string& text, const std::string& filename) {
    NounDictionary d;
    std::unordered_map<std::string, std::pair<std::string, int>> seen; // norm -> (canonical, line)
    for (const auto& row : parse_lex_lines(text, filename)) {
        for (const auto& surface : row.values) {
            std::string norm = normalize_phrase(surface);
            auto it = seen.find(norm);
            if (it != seen.end() && it->second.first != row.canonical)
                throw LexiconError(filename + ": surface phrase '" + surface +
                                   "' appears under '" + it->second.first + "' (line " +
                                   std::to_string(it->second.second) + ") and '" + row.canonical +
                                   "' (line " + std::to_string(row.number) + ")");
            seen.emplace(norm, std::make_pair(row.canonical, row.number));
            d.surfaces_[row.canonical].insert(surface);
            d.index_[norm] = row.canonical;
            d.max_phrase_tokens_ = std::max(d.max_phrase_tokens_, phrase_token_count(surface));
        }
    }
    // Canonical tokens match themselves, which also makes rewriting idempotent.
    for (const auto& [canon, _] : d.surfaces_) {
        std::string norm = normalize_phrase(canon);
        if (!d.index_.count(norm)) {
            d.index_[norm] = canon;
            d.max_phrase_tokens_ = std::max(d.max_phrase_tokens_, phrase_token_count(canon));
        }
    }
    return d;
}

std::optional<NounDictionary::Match> NounDictionary::match_at(
    const std::vector<std::string>& norm_tokens, std::size_t pos) const {
    std::string key;
    std::optional<Match> best;
    for (std::size_t len = 1; len <= max_phrase_tokens_ && pos + len <= norm_tokens.size(); ++len) {
        if (len > 1) key += ' ';
        key += norm_tokens[pos + len - 1];
        auto it = index_.find(key);
        if (it != index_.end()) best = Match{it->second, len};
    }
    return best;
}

std::optional<std::string> NounDictionary::canonical_for(std::string_view phrase) const {
    auto it = index_.find(normalize_phrase(phrase));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool NounDictionary::is_canonical_token(std::string_view token) const {
    auto canon = canonical_for(token);
    return canon && normalize_phrase(*canon) == normalize_phrase(token);
}

std::vector<std::string> NounDictionary::canonical_tokens() const {
    std::vector<std::string> out;
    for (const auto& [canon, _] : surfaces_) out.push_back(canon);
    return out;
}

std::string NounDictionary::serialize() const {
    std::string out;
    for (const auto& [canon, phrases] : surfaces_) {
        out += canon;
        out += '\t';
        bool first = true;
        for (const auto& p : phrases) {
            if (!first) out += ',';
            out += p;
            first = false;
        }
        out += '\n';
    }
    return out;
}

DirectionMap DirectionMap::parse(const std::string& text, const std::string& filename) {
    DirectionMap m;
    std::array<bool, kSyscallCount> seen{};
    for (const auto& row : parse_lex_lines(text, filename)) {
        auto v = syscall_from_string(lower_copy(row.canonical));
        if (!v)
            throw LexiconError(filename + ":" + std::to_string(row.number) +
                               ": unknown canonical verb '" + row.canonical + "'");
        if (row.values.size() != 1)
            throw LexiconError(filename + ":" + std::to_string(row.number) +
                               ": expected exactly one direction");
        if (seen[static_cast<int>(*v)])
            throw LexiconError(filename + ":" + std::to_string(row.number) +
                               ": duplicate entry for '" + row.canonical + "'");
        seen[static_cast<int>(*v)] = true;
        const std::string& d = row.values[0];
        if (d == "S2O")
            m.dir_[static_cast<int>(*v)] = FlowDirection::SubjectToObject;
        else if (d == "O2S")
            m.dir_[static_cast<int>(*v)] = FlowDirection::ObjectToSubject;
        else
            throw LexiconError(filename + ":" + std::to_string(row.number) +
                               ": direction must be S2O or O2S, got '" + d + "'");
    }
    for (Syscall v : kAllSyscalls)
        if (!seen[static_cast<int>(v)])
            throw LexiconError(filename + ": missing direction for '" +
                               std::string(to_string(v)) + "'");
    return m;
}

FlowDirection DirectionMap::direction(Syscall v) const { return dir_[static_cast<int>(v)]; }

std::string DirectionMap::serialize() const {
    std::string out;
    for (Syscall v : kAllSyscalls) {
        out += to_string(v);
        out += '\t';
        out += dir_[static_cast<int>(v)] == FlowDirection::SubjectToObject ? "S2O" : "O2S";
        out += '\n';
    }
    return out;
}

NominalMap NominalMap::parse(const std::string& text, const std::string& filename) {
    NominalMap m;
    for (const auto& row : parse_lex_lines(text, filename)) {
        std::string verb = lower_copy(row.canonical);
        for (const auto& n : row.values) {
            std::string noun = lower_copy(n);
            auto it = m.index_.find(noun);
            if (it != m.index_.end() && it->second != verb)
                throw LexiconError(filename + ":" + std::to_string(row.number) + ": noun '" + n +
                                   "' already mapped to '" + it->second + "'");
            m.index_[noun] = verb;
            m.nouns_[verb].insert(noun);
        }
    }
    return m;
}

std::optional<std::string> NominalMap::verb_for(std::string_view noun) const {
    auto it = index_.find(lower_copy(noun));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool NominalMap::contains(std::string_view noun) const {
    return index_.count(lower_copy(noun)) > 0;
}

std::string NominalMap::serialize() const {
    std::string out;
    for (const auto& [verb, nouns] : nouns_) {
        out += verb;
        out += '\t';
        bool first = true;
        for (const auto& n : nouns) {
            if (!first) out += ',';
            out += n;
            first = false;
        }
        out += '\n';
    }
    return out;
}

AntonymMap AntonymMap::parse(const std::string& text, const std::string& filename) {
    AntonymMap m;
    for (const auto& row : parse_lex_lines(text, filename)) {
        auto v = syscall_from_string(lower_copy(row.canonical));
        if (!v)
            throw LexiconError(filename + ":" + std::to_string(row.number) +
                               ": unknown canonical verb '" + row.canonical + "'");
        if (row.values.size() != 1)
            throw LexiconError(filename + ":" + std::to_string(row.number) +
                               ": expected exactly one antonym");
        auto a = syscall_from_string(lower_copy(row.values[0]));
        if (!a)
            throw LexiconError(filename + ":" + std::to_string(row.number) +
                               ": unknown canonical verb '" + row.values[0] + "'");
        m.map_[static_cast<int>(*v)] = *a;
    }
    return m;
}

Syscall AntonymMap::invert(Syscall v) const {
    auto a = map_[static_cast<int>(v)];
    return a ? *a : v;
}

std::string AntonymMap::serialize() const {
    std::string out;
    for (Syscall v : kAllSyscalls) {
        if (!map_[static_cast<int>(v)]) continue;
        out += to_string(v);
        out += '\t';
        out += to_string(*map_[static_cast<int>(v)]);
        out += '\n';
    }
    return out;
}

namespace words {

const std::set<std::string>& pronouns() {
    // Possessives (its, their, his, her) are determiners, not listed here:
    // replacing them with an antecedent name would corrupt the noun phrase
    // they introduce.
    static const std::set<std::string> s = {
        "it",   "itself", "they",  "them", "themselves", "he",  "him",
        "himself", "she", "herself", "this", "these",    "that", "those",
        "which", "who",   "whom",
    };
    return s;
}

const std::set<std::string>& reflexives() {
    static const std::set<std::string> s = {"itself", "themselves", "himself", "herself"};
    return s;
}

const std::set<std::string>& be_forms() {
    static const std::set<std::string> s = {"is", "are", "was", "were", "be", "been", "being",
                                            "am"};
    return s;
}

const std::set<std::string>& modals() {
    static const std::set<std::string> s = {"can",   "could",  "may",   "might", "must",
                                            "shall", "should", "will",  "would", "does",
                                            "do",    "did",    "has",   "have",  "had"};
    return s;
}

const std::set<std::string>& determiners() {
    static const std::set<std::string> s = {"the",  "a",   "an", "each", "every",
                                            "any",  "some", "all", "both", "no",
                                            "its",  "their", "his", "her"};
    return s;
}

const std::set<std::string>& prepositions() {
    static const std::set<std::string> s = {"in",   "into", "to",   "under", "from", "on",
                                            "onto", "at",   "by",   "of",    "with", "for",
                                            "via",  "within", "about", "over", "through",
                                            "against", "toward", "towards", "without"};
    return s;
}

const std::set<std::string>& conjunctions() {
    static const std::set<std::string> s = {"and", "or", "then", "but", "nor"};
    return s;
}

const std::set<std::string>& subordinators() {
    static const std::set<std::string> s = {"when", "if", "after", "before", "while",
                                            "unless", "once", "whenever", "until"};
    return s;
}

const std::set<std::string>& negators() {
    static const std::set<std::string> s = {"not", "never", "n't", "no"};
    return s;
}

const std::set<std::string>& discourse_markers() {
    static const std::set<std::string> s = {"however",   "moreover",  "furthermore", "also",
                                            "additionally", "finally", "then",       "thus",
                                            "therefore", "besides",   "meanwhile",   "subsequently",
                                            "typically", "usually",   "generally",   "specifically",
                                            "interestingly", "notably"};
    return s;
}

const std::set<std::string>& light_verbs() {
    static const std::set<std::string> s = {"make", "do", "perform", "conduct",
                                            "carry", "establish", "check", "open"};
    return s;
}

const std::set<std::string>& common_verbs() {
    static const std::set<std::string> s = {
        "start",   "proceed",  "wait",    "begin",    "continue", "occur",   "appear",
        "contain", "include",  "operate", "arrive",   "spread",   "persist", "listen",
        "sleep",   "hide",     "monitor", "log",      "evade",    "attempt", "try",
        "fail",    "become",   "remain",  "need",     "want",     "manage",  "restart",
        "reboot",  "infect",   "compromise", "encrypt", "decrypt", "propagate",
        "register", "disable", "enable",  "bypass",   "beacon",   "exploit",
    };
    return s;
}

const std::vector<std::string>& infinitive_markers() {
    static const std::vector<std::string> v = {
        "tries to",    "try to",      "tried to",    "attempts to", "attempt to",
        "attempted to", "starts to",  "start to",    "started to",  "begins to",
        "begin to",    "began to",    "continues to", "continue to", "continued to",
        "wants to",    "manages to",  "managed to",  "proceeds to", "proceeded to",
        "is able to",  "was able to", "is designed to",
    };
    return v;
}

const std::vector<std::string>& anaphora_cues() {
    static const std::vector<std::string> v = {
        "the following files",   "the following file",     "the following locations",
        "the following location", "the following paths",   "the following folders",
        "the following directories", "the following registry keys", "the following domains",
        "the following addresses", "these files",          "these locations",
        "the files below",       "the files listed below",
    };
    return v;
}

const std::vector<std::string>& known_processes() {
    static const std::vector<std::string> v = {
        "svchost.exe",  "explorer.exe", "cmd.exe",      "powershell.exe", "rundll32.exe",
        "lsass.exe",    "services.exe", "winlogon.exe", "iexplore.exe",   "firefox.exe",
        "chrome.exe",   "outlook.exe",  "notepad.exe",  "regsvr32.exe",   "wscript.exe",
        "cscript.exe",  "mshta.exe",    "conhost.exe",  "smss.exe",       "csrss.exe",
        "wininit.exe",  "spoolsv.exe",  "dllhost.exe",  "msiexec.exe",    "wmiprvse.exe",
        "bash",         "sshd",         "systemd",      "crond",
    };
    return v;
}

} // namespace words

namespace {

// Irregular inflections for verbs that show up in report prose.
const std::unordered_map<std::string, std::string>& irregulars() {
    static const std::unordered_map<std::string, std::string> m = {
        {"wrote", "write"},   {"written", "write"}, {"sent", "send"},     {"took", "take"},
        {"taken", "take"},    {"got", "get"},       {"gotten", "get"},    {"ran", "run"},
        {"made", "make"},     {"did", "do"},        {"done", "do"},       {"hid", "hide"},
        {"hidden", "hide"},   {"broke", "break"},   {"broken", "break"},  {"began", "begin"},
        {"begun", "begin"},   {"went", "go"},       {"gone", "go"},       {"found", "find"},
        {"left", "leave"},    {"kept", "keep"},     {"set", "set"},       {"put", "put"},
        {"read", "read"},     {"chose", "choose"},  {"chosen", "choose"}, {"is", "be"},
        {"are", "be"},        {"was", "be"},        {"were", "be"},       {"been", "be"},
        {"being", "be"},      {"has", "have"},      {"had", "have"},      {"drew", "draw"},
        {"drawn", "draw"},    {"gave", "give"},     {"given", "give"},    {"held", "hold"},
        {"sought", "seek"},   {"brought", "bring"}, {"caught", "catch"},  {"spread", "spread"},
    };
    return m;
}

bool double_consonant_end(const std::string& s) {
    if (s.size() < 2) return false;
    char a = s[s.size() - 2], b = s[s.size() - 1];
    return a == b && std::string("bdfgklmnprstvz").find(a) != std::string::npos;
}

} // namespace

std::string Lexicon::lemma(std::string_view word) const {
    std::string w = lower_copy(word);
    if (w.empty()) return w;
    auto irr = irregulars().find(w);
    if (irr != irregulars().end()) return irr->second;
    // Nominals are not checked here: that table lists plural forms as keys,
    // which are exactly the words that still need stripping.
    if (syscalls.contains(w)) return w;

    auto known = [&](const std::string& cand) {
        return syscalls.contains(cand) || nominals.contains(cand) ||
               irregulars().count(cand) > 0;
    };
    std::vector<std::string> candidates;
    auto add = [&](std::string c) {
        if (!c.empty()) candidates.push_back(std::move(c));
    };
    std::size_t n = w.size();
    if (n > 3 && w.ends_with("ies")) add(w.substr(0, n - 3) + "y");
    if (n > 2 && w.ends_with("es")) add(w.substr(0, n - 2));
    if (n > 1 && w.ends_with("s") && !w.ends_with("ss")) add(w.substr(0, n - 1));
    if (n > 3 && w.ends_with("ied")) add(w.substr(0, n - 3) + "y");
    if (n > 2 && w.ends_with("ed")) {
        std::string stem = w.substr(0, n - 2);
        add(stem + "e");
        if (double_consonant_end(stem)) add(stem.substr(0, stem.size() - 1));
        add(stem);
    }
    if (n > 4 && w.ends_with("ing")) {
        std::string stem = w.substr(0, n - 3);
        add(stem + "e");
        if (double_consonant_end(stem)) add(stem.substr(0, stem.size() - 1));
        add(stem);
    }
    if (n > 2 && w.ends_with("en")) {
        std::string stem = w.substr(0, n - 2);
        add(stem + "e");
        if (double_consonant_end(stem)) add(stem.substr(0, stem.size() - 1));
    }
    for (const auto& c : candidates)
        if (known(c)) return irregulars().count(c) ? irregulars().at(c) : c;
    // Nothing matched the closed vocabulary; fall back to the plain strip.
    if (n > 3 && w.ends_with("ies")) return w.substr(0, n - 3) + "y";
    if (n > 1 && w.ends_with("s") && !w.ends_with("ss") && !w.ends_with("us") &&
        !w.ends_with("is"))
        return w.substr(0, n - 1);
    if (n > 2 && w.ends_with("ed")) return w.substr(0, n - 2);
    if (n > 4 && w.ends_with("ing")) return w.substr(0, n - 3);
    return w;
}

std::optional<Syscall> Lexicon::canonical_verb(std::string_view lemma_in) const {
    return syscalls.canonical(lemma_in);
}

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw LexiconError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

Lexicon load_lexicon(const std::filesystem::path& dir) {
    Lexicon lex;
    lex.syscalls = SyscallDictionary::parse(read_file(dir / "syscalls.lex"), "syscalls.lex");
    lex.nouns = NounDictionary::parse(read_file(dir / "nouns.lex"), "nouns.lex");
    lex.directions = DirectionMap::parse(read_file(dir / "directions.lex"), "directions.lex");
    lex.nominals = NominalMap::parse(read_file(dir / "nominals.lex"), "nominals.lex");
    lex.antonyms = AntonymMap::parse(read_file(dir / "antonyms.lex"), "antonyms.lex");

    auto battery = std::make_shared<SeeBattery>(lex.nouns.canonical_tokens(),
                                                words::known_processes());
    auto patterns = dir / "patterns.lex";
    if (std::filesystem::exists(patterns)) {
        std::istringstream in(read_file(patterns));
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string t = trim_copy(line);
            if (t.empty() || t[0] == '#') continue;
            std::size_t tab = line.find('\t');
            if (tab == std::string::npos)
                throw LexiconError("patterns.lex:" + std::to_string(lineno) +
                                   ": expected class<TAB>expression");
            battery->override_pattern(trim_copy(line.substr(0, tab)),
                                      trim_copy(line.substr(tab + 1)));
        }
    }
    lex.battery = std::move(battery);
    return lex;
}

} // namespace ctigraph
