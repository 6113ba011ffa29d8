#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctigraph/entities.hpp"

namespace ctigraph {

// The ten canonical system calls every report verb collapses onto.
enum class Syscall { Write, Read, Unlink, Send, Receive, Connect, Fork, Exec, Exit, Mmap };

inline constexpr int kSyscallCount = 10;
inline constexpr std::array<Syscall, kSyscallCount> kAllSyscalls = {
    Syscall::Write, Syscall::Read,    Syscall::Unlink, Syscall::Send, Syscall::Receive,
    Syscall::Connect, Syscall::Fork, Syscall::Exec,   Syscall::Exit, Syscall::Mmap,
};

const char* to_string(Syscall v);
std::optional<Syscall> syscall_from_string(std::string_view name);

enum class FlowDirection { SubjectToObject, ObjectToSubject };

struct LexiconError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// verb synonym table: lowercase lemma -> canonical syscall.
class SyscallDictionary {
public:
    static SyscallDictionary parse(const std::string& text, const std::string& filename);

    std::optional<Syscall> canonical(std::string_view lemma) const;
    bool contains(std::string_view lemma) const;
    const std::set<std::string>& synonyms(Syscall v) const;
    std::string serialize() const;

private:
    std::array<std::set<std::string>, kSyscallCount> synonyms_;
    std::unordered_map<std::string, Syscall> index_;
};

// entity phrase table: surface phrases -> canonical token ("%TEMP%" -> TEMP).
class NounDictionary {
public:
    static NounDictionary parse(const std::string& text, const std::string& filename);

    struct Match {
        std::string canonical;
        std::size_t token_count = 0;
    };

    // Longest dictionary phrase starting at tokens[pos]; tokens must already be
    // normalized with normalize_word().
    std::optional<Match> match_at(const std::vector<std::string>& norm_tokens,
                                  std::size_t pos) const;
    std::optional<std::string> canonical_for(std::string_view phrase) const;
    bool is_canonical_token(std::string_view token) const;
    std::vector<std::string> canonical_tokens() const;
    std::string serialize() const;

    // lowercase + '&' spelled out as "and", the key form used for lookups.
    static std::string normalize_word(std::string_view word);

private:
    std::map<std::string, std::set<std::string>> surfaces_; // canonical -> original phrases
    std::unordered_map<std::string, std::string> index_;    // normalized phrase -> canonical
    std::size_t max_phrase_tokens_ = 1;
};

// Total map canonical verb -> information-flow direction.
class DirectionMap {
public:
    static DirectionMap parse(const std::string& text, const std::string& filename);
    FlowDirection direction(Syscall v) const;
    std::string serialize() const;

private:
    std::array<FlowDirection, kSyscallCount> dir_{};
};

// Event nouns standing in for verbs ("modification" -> modify).
class NominalMap {
public:
    static NominalMap parse(const std::string& text, const std::string& filename);
    std::optional<std::string> verb_for(std::string_view noun) const;
    bool contains(std::string_view noun) const;
    std::string serialize() const;

private:
    std::map<std::string, std::set<std::string>> nouns_;   // verb -> nouns
    std::unordered_map<std::string, std::string> index_;   // noun -> verb
};

// Verb inversion for remediation text; verbs absent from the map pass through.
class AntonymMap {
public:
    static AntonymMap parse(const std::string& text, const std::string& filename);
    Syscall invert(Syscall v) const;
    std::string serialize() const;

private:
    std::array<std::optional<Syscall>, kSyscallCount> map_{};
};

// Closed-class word lists; fixed, code-owned vocabulary.
namespace words {
const std::set<std::string>& pronouns();
const std::set<std::string>& reflexives();
const std::set<std::string>& be_forms();
const std::set<std::string>& modals();
const std::set<std::string>& determiners();
const std::set<std::string>& prepositions();
const std::set<std::string>& conjunctions();
const std::set<std::string>& subordinators();
const std::set<std::string>& negators();
const std::set<std::string>& discourse_markers();
const std::set<std::string>& light_verbs();
// Frequent report verbs outside the syscall dictionary; tagged as verbs so
// they do not get absorbed into neighboring noun phrases.
const std::set<std::string>& common_verbs();
const std::vector<std::string>& infinitive_markers(); // multi-word, lowercase
const std::vector<std::string>& anaphora_cues();      // multi-word, lowercase
const std::vector<std::string>& known_processes();
} // namespace words

struct Lexicon {
    SyscallDictionary syscalls;
    NounDictionary nouns;
    DirectionMap directions;
    NominalMap nominals;
    AntonymMap antonyms;
    std::shared_ptr<const SeeBattery> battery;

    // Suffix-stripping lemmatizer with an irregular-form table; candidates are
    // validated against the closed verb vocabulary.
    std::string lemma(std::string_view word) const;

    // lemma must already be a single lowercase lemma.
    std::optional<Syscall> canonical_verb(std::string_view lemma) const;
};

// Loads syscalls.lex, nouns.lex, directions.lex, nominals.lex, antonyms.lex and
// an optional patterns.lex override from one directory.
Lexicon load_lexicon(const std::filesystem::path& dir);

std::string lower_copy(std::string_view s);
std::string trim_copy(std::string_view s);

} // namespace ctigraph
