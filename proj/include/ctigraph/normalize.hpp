#pragma once

#include <string>

#include "ctigraph/textmodel.hpp"

namespace ctigraph {

struct TokenizeOptions {
    // Structural delimiters (newlines, bullets, enumerators, headers, colon
    // lead-ins) + promotion; off means classic .!? splitting only.
    bool structural_promotion = true;
};

// Splits raw report text into sentences, promoting bullet/line fragments that
// form complete actions and merging back the ones that do not.
Document tokenize(std::string raw, std::string source_id, const Lexicon& lex,
                  const TokenizeOptions& opts = {});

// Rewrites dictionary verbs to their canonical base form and collapses noun
// dictionary phrases onto canonical tokens.  Idempotent; single left-to-right
// longest-match pass per sentence.
void homogenize(Document& doc, const Lexicon& lex);

// Passive-to-active conversion on the main clause; agentless passives receive
// the implicit-agent marker for ellipsis resolution to fill in.
void to_active(Document& doc, const Lexicon& lex);

void refresh_sentence_flags(Document& doc, const Lexicon& lex);

} // namespace ctigraph
