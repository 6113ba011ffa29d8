#pragma once

#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ctigraph {

enum class NodeKind { File, Process, Registry, Socket };

const char* to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view s);

// One indicator found inside a phrase.  Offsets refer to the refanged phrase
// (defanged indicators like hxxp:// or 10[.]13[.]13[.]1 are restored first).
struct SeeMatch {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string text;
    std::string pattern_class;
    NodeKind kind = NodeKind::File;
};

// Syntax-based entity extractor: a fixed battery of compiled patterns plus the
// canonical noun tokens and a known-process list.  Individual pattern
// expressions can be overridden from patterns.lex.
class SeeBattery {
public:
    struct PatternDef {
        std::string cls;
        std::string expr;
        NodeKind kind;
        bool icase;
    };

    SeeBattery(std::vector<std::string> canonical_tokens,
               std::vector<std::string> known_processes);

    static const std::vector<PatternDef>& default_patterns();

    // Replaces the expression of a known class; throws std::runtime_error on an
    // unknown class name.
    void override_pattern(const std::string& cls, const std::string& expr);

    // All non-overlapping matches, leftmost-longest, over the refanged phrase.
    std::vector<SeeMatch> extract(std::string_view phrase) const;
    std::optional<SeeMatch> first(std::string_view phrase) const;

    // Whole-token test used by the POS tagger's SYM rule.
    bool full_match(std::string_view token) const;

    bool is_known_process(std::string_view name) const;
    bool is_canonical_token(std::string_view name) const;

    static std::string refang(std::string_view text);

private:
    struct Compiled {
        std::string cls;
        std::regex re;
        NodeKind kind;
        int priority;
    };

    void compile();

    std::vector<PatternDef> defs_;
    std::vector<Compiled> compiled_;
    std::vector<std::string> canonical_tokens_;
    std::set<std::string> canonical_lower_;
    std::set<std::string> process_lower_;
};

// Result of collapsing a frame slot onto a single entity.
struct Entity {
    std::string name = "*";
    NodeKind kind = NodeKind::File;
    bool wildcard = true;
};

// First SEE match in the phrase wins; text outside the match is discarded.
// No match yields the wildcard entity (caller assigns the role-based kind).
Entity prune_to_entity(std::string_view phrase, const SeeBattery& battery);

// Document-level naming context consulted by the typing rules.  Both name
// sets hold lowercase strings; lookups fold case.
struct TypingContext {
    std::set<std::string> agent_names;
    std::set<std::string> exec_fork_patients;
    const SeeBattery* battery = nullptr;
};

NodeKind type_entity(const std::string& name, NodeKind hint, const TypingContext& ctx);

bool has_hive_prefix(std::string_view name);

std::string regex_escape(std::string_view s);

} // namespace ctigraph
