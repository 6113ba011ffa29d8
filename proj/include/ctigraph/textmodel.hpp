#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ctigraph/lexicon.hpp"

namespace ctigraph {

enum class Pos { Verb, Noun, Pron, Adj, Adv, Aux, Prep, Det, Neg, Punct, Num, Sym, Other };

const char* to_string(Pos pos);

// How a sentence came to be: classic delimiters, promoted from a structural
// split, or merged/kept whole because promotion failed.
enum class Provenance { Original, PromotedCase1, PromotedCase2, Unbreakable };

const char* to_string(Provenance p);

// Marker standing in for the missing agent of an agentless passive until
// ellipsis resolution fills it; never escapes into serialized output.
inline constexpr const char* kImplicitMarker = "<IMPLICIT>";

struct Token {
    std::string surface;
    std::string lemma;
    Pos pos = Pos::Noun;
    std::size_t begin = 0; // char span into Document::raw at tokenization time
    std::size_t end = 0;
    bool participle = false;  // sticky; survives verb rewriting
    bool attributive = false; // participle used inside a noun phrase
    bool tagged = false;      // participle shape already decided from the raw surface
    std::string orig_lemma;   // lemma before homogenization rewrote the token
};

struct Sentence {
    std::vector<Token> tokens;
    int index = 0;
    Provenance provenance = Provenance::Original;
    bool has_explicit_subject = false;
    bool is_passive = false;
    bool is_productive = false;
    bool list_introducer = false; // colon lead-in
    bool list_item = false;       // bare indicator line under a lead-in
    int list_parent = -1;         // sentence index of the owning lead-in
};

struct Document {
    std::string source_id;
    std::string raw;
    std::vector<Sentence> sentences;
};

// Rule tagger over the closed-class lists, the verb dictionary and suffix
// heuristics; unknown words default to NOUN.
void pos_tag(Sentence& sentence, const Lexicon& lex);

Token make_token(std::string surface, const Lexicon& lex, std::size_t begin = 0,
                 std::size_t end = 0);

struct PassiveAnalysis {
    bool is_passive = false;
    int aux = -1;
    int verb = -1;
    std::pair<int, int> patient{-1, -1}; // token range [begin, end)
    std::pair<int, int> agent{-1, -1};   // by-phrase nominal, if present
};

// Main-clause passive detection: AUX be-form immediately before a past
// participle.  A leading subordinate clause is outside the analyzed region.
PassiveAnalysis detect_passive(const Sentence& sentence, const Lexicon& lex);

// Token index one past the leading subordinate clause ("When X is executed,");
// 0 when the sentence has none.
int leading_clause_end(const Sentence& sentence, const Lexicon& lex);

// Subject noun phrase of the main clause as a token range; (-1,-1) if absent.
std::pair<int, int> find_subject(const Sentence& sentence, const Lexicon& lex);

// Maximal noun phrase starting at or after `from`: determiners/adjectives/
// nominals plus trailing "of" complements.  Returns (-1,-1) when none starts
// there.
std::pair<int, int> noun_phrase_at(const Sentence& sentence, int from);

bool is_nominal(Pos pos);

std::string join_tokens(const Sentence& sentence, int begin, int end);

} // namespace ctigraph
