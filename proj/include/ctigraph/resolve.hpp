#pragma once

#include "ctigraph/textmodel.hpp"

namespace ctigraph {

struct EllipsisOptions {
    // How many sentences back a subjectless sentence may borrow its subject
    // from; list items prefer their lead-in sentence regardless of distance.
    int window = 5;
};

// Fills in missing subjects (and implicit passive agents) from prior context;
// falls back to a "*" subject when nothing usable is in range.
void resolve_ellipsis(Document& doc, const Lexicon& lex, const EllipsisOptions& opts = {});

// Replaces pronouns with their antecedents: reflexives bind to the own
// sentence's subject, others to the nearest preceding nominal or subject.
void resolve_pronouns(Document& doc, const Lexicon& lex);

// Entity-level rewrites that need cross-sentence context: anaphoric list
// expansion ("the following files:" + bare indicator lines), light-verb
// nominalizations ("makes a connection" -> connect), and auxiliary collapse
// ("tries to download" -> download).
void resolve_entities(Document& doc, const Lexicon& lex);

} // namespace ctigraph
