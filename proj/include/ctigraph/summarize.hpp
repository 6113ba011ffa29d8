#pragma once

#include <map>

#include "ctigraph/textmodel.hpp"

namespace ctigraph {

enum class Verdict { Productive, NonProductive };

struct SummarizeOptions {
    // Manual per-sentence overrides keyed by sentence index, applied after
    // the rule classification.
    std::map<int, Verdict> overrides;
};

// A sentence is productive when it carries a syscall dictionary verb and
// talks about a concrete system object (or has a wildcard subject already).
Verdict classify_sentence(const Sentence& sentence, const Lexicon& lex);

// Removes words that cannot contribute to a frame: discourse adverbs, modal
// auxiliaries, unguarded trailing modifiers.  Sentences without any frame
// material are left untouched.
void trim_words(Sentence& sentence, const Lexicon& lex);

// Filters non-productive sentences out (keeping original indices) and trims
// the survivors.
void summarize_document(Document& doc, const Lexicon& lex, const SummarizeOptions& opts = {});

} // namespace ctigraph
