#include "ctigraph/resolve.hpp"

#include <algorithm>

#include "ctigraph/normalize.hpp"

namespace ctigraph {

namespace {

bool has_predicate(const Sentence& s) {
    for (const auto& t : s.tokens)
        if (t.pos == Pos::Verb && !t.attributive) return true;
    return false;
}

int implicit_marker_at(const Sentence& s) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i)
        if (s.tokens[i].surface == kImplicitMarker) return static_cast<int>(i);
    return -1;
}

Token wildcard_token() {
    Token t;
    t.surface = "*";
    t.lemma = "*";
    t.orig_lemma = "*";
    t.pos = Pos::Sym;
    return t;
}

std::vector<Token> subject_tokens(const Sentence& s, const Lexicon& lex) {
    auto [b, e] = find_subject(s, lex);
    if (b < 0) return {};
    return {s.tokens.begin() + b, s.tokens.begin() + e};
}

void retag(Sentence& s, const Lexicon& lex) { pos_tag(s, lex); }

} // namespace

void resolve_ellipsis(Document& doc, const Lexicon& lex, const EllipsisOptions& opts) {
    auto& sents = doc.sentences;
    for (std::size_t i = 0; i < sents.size(); ++i) {
        Sentence& s = sents[i];
        if (s.list_item) continue; // bare indicator lines are handled later
        int marker = implicit_marker_at(s);
        bool needs_subject = !s.has_explicit_subject && has_predicate(s);
        if (marker < 0 && !needs_subject) continue;

        // Donor search: the owning lead-in first, then the nearest earlier
        // sentence with a subject inside the window.
        std::vector<Token> donor;
        if (s.list_parent >= 0 && s.list_parent < static_cast<int>(i))
            donor = subject_tokens(sents[s.list_parent], lex);
        if (donor.empty()) {
            for (int back = static_cast<int>(i) - 1;
                 back >= 0 && back >= static_cast<int>(i) - opts.window; --back) {
                // Only full clauses donate; headers and bare indicator lines
                // read as noun phrases but name nothing that acts.
                if (sents[back].list_item || !has_predicate(sents[back])) continue;
                donor = subject_tokens(sents[back], lex);
                if (!donor.empty()) break;
            }
        }
        if (donor.empty()) donor.push_back(wildcard_token());

        if (marker >= 0) {
            s.tokens.erase(s.tokens.begin() + marker);
            s.tokens.insert(s.tokens.begin() + marker, donor.begin(), donor.end());
        } else {
            s.tokens.insert(s.tokens.begin(), donor.begin(), donor.end());
        }
        retag(s, lex);
        s.has_explicit_subject = find_subject(s, lex).first >= 0;
    }
}

void resolve_pronouns(Document& doc, const Lexicon& lex) {
    auto& sents = doc.sentences;
    for (std::size_t si = 0; si < sents.size(); ++si) {
        Sentence& s = sents[si];
        for (std::size_t ti = 0; ti < s.tokens.size(); ++ti) {
            if (s.tokens[ti].pos != Pos::Pron) continue;
            std::string low = lower_copy(s.tokens[ti].surface);

            std::vector<Token> repl;
            if (words::reflexives().count(low)) {
                // Reflexives bind to their own clause's subject.
                repl = subject_tokens(s, lex);
            } else {
                // Nearest preceding non-pronoun nominal in the same sentence.
                for (int j = static_cast<int>(ti) - 1; j >= 0; --j) {
                    const Token& c = s.tokens[j];
                    if (!is_nominal(c.pos) || c.pos == Pos::Pron) continue;
                    int begin = j;
                    while (begin > 0 && is_nominal(s.tokens[begin - 1].pos) &&
                           s.tokens[begin - 1].pos != Pos::Pron)
                        --begin;
                    repl.assign(s.tokens.begin() + begin, s.tokens.begin() + j + 1);
                    break;
                }
                // Otherwise the most recent sentence with a resolved subject.
                if (repl.empty()) {
                    for (int back = static_cast<int>(si) - 1; back >= 0; --back) {
                        if (sents[back].list_item) continue;
                        auto sub = subject_tokens(sents[back], lex);
                        if (sub.empty()) continue;
                        bool pronominal = sub.size() == 1 && sub[0].pos == Pos::Pron;
                        if (pronominal) continue;
                        repl = std::move(sub);
                        break;
                    }
                }
            }
            if (repl.empty()) continue;

            s.tokens.erase(s.tokens.begin() + ti);
            s.tokens.insert(s.tokens.begin() + ti, repl.begin(), repl.end());
            retag(s, lex);
            ti += repl.size() - 1;
        }
        s.has_explicit_subject = find_subject(s, lex).first >= 0;
    }
}

namespace {

// Matches a lowercase multi-word marker against token surfaces at `pos`.
// Returns the number of tokens covered, 0 when it does not match.
std::size_t marker_span(const Sentence& s, std::size_t pos, const std::string& marker) {
    std::size_t covered = 0, at = pos;
    std::size_t mi = 0;
    while (mi < marker.size()) {
        std::size_t space = marker.find(' ', mi);
        std::string word = marker.substr(mi, space == std::string::npos ? space : space - mi);
        if (at >= s.tokens.size() || lower_copy(s.tokens[at].surface) != word) return 0;
        ++at;
        ++covered;
        if (space == std::string::npos) break;
        mi = space + 1;
    }
    return covered;
}

void collapse_auxiliaries(Sentence& s, const Lexicon& lex) {
    for (std::size_t i = 0; i < s.tokens.size();) {
        std::size_t best = 0;
        for (const auto& m : words::infinitive_markers())
            best = std::max(best, marker_span(s, i, m));
        if (best == 0 || i + best >= s.tokens.size()) {
            ++i;
            continue;
        }
        const Token& next = s.tokens[i + best];
        bool verb_after = lex.canonical_verb(next.lemma).has_value() ||
                          lex.canonical_verb(lex.lemma(next.surface)).has_value();
        if (!verb_after) {
            ++i;
            continue;
        }
        s.tokens.erase(s.tokens.begin() + i, s.tokens.begin() + i + best);
        pos_tag(s, lex);
    }
}

void collapse_nominalizations(Sentence& s, const Lexicon& lex) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const Token& v = s.tokens[i];
        if (v.pos != Pos::Verb || v.attributive) continue;
        if (!words::light_verbs().count(v.orig_lemma)) continue;

        // The event noun must follow within a short, simple span.
        std::size_t limit = std::min(s.tokens.size(), i + 1 + 4 + 1);
        int found = -1;
        for (std::size_t j = i + 1; j < limit; ++j) {
            const Token& t = s.tokens[j];
            if (lex.nominals.contains(lower_copy(t.surface))) {
                found = static_cast<int>(j);
                break;
            }
            bool simple = t.pos == Pos::Det || t.pos == Pos::Adj || t.pos == Pos::Prep ||
                          t.pos == Pos::Adv || t.pos == Pos::Noun ||
                          (t.pos == Pos::Verb && t.attributive);
            if (!simple) break;
        }
        if (found < 0) continue;

        std::string verb = *lex.nominals.verb_for(lower_copy(s.tokens[found].surface));
        Token collapsed;
        collapsed.surface = verb;
        collapsed.lemma = verb;
        collapsed.orig_lemma = verb;
        collapsed.pos = Pos::Verb;
        collapsed.tagged = true; // canonical surface, not a participle
        collapsed.begin = v.begin;
        collapsed.end = s.tokens[found].end;
        s.tokens.erase(s.tokens.begin() + i, s.tokens.begin() + found + 1);
        s.tokens.insert(s.tokens.begin() + i, collapsed);
        pos_tag(s, lex);
    }
}

// Cue noun phrase span for list expansion; empty when the sentence carries no
// cue from the anaphora list.
std::pair<int, int> anaphora_cue_span(const Sentence& s) {
    int best_b = -1, best_len = 0;
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        for (const auto& cue : words::anaphora_cues()) {
            int len = static_cast<int>(marker_span(s, i, cue));
            if (len > best_len) {
                best_len = len;
                best_b = static_cast<int>(i);
            }
        }
    }
    if (best_b < 0) return {-1, -1};
    return {best_b, best_b + best_len};
}

} // namespace

void resolve_entities(Document& doc, const Lexicon& lex) {
    for (auto& s : doc.sentences) {
        if (s.list_item) continue;
        collapse_auxiliaries(s, lex);
        collapse_nominalizations(s, lex);
    }

    // Anaphoric list expansion: a cue sentence followed by bare indicator
    // lines becomes one clone per indicator, absorbing the items.
    std::vector<Sentence> out;
    out.reserve(doc.sentences.size());
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
        Sentence& s = doc.sentences[i];
        auto [cb, ce] = anaphora_cue_span(s);
        std::vector<const Sentence*> items;
        for (std::size_t j = i + 1; j < doc.sentences.size(); ++j) {
            if (!doc.sentences[j].list_item) break;
            if (doc.sentences[j].list_parent != s.index) break;
            items.push_back(&doc.sentences[j]);
        }
        if (cb < 0 || items.empty()) {
            out.push_back(std::move(s));
            continue;
        }
        for (const Sentence* item : items) {
            Sentence clone = s;
            clone.tokens.erase(clone.tokens.begin() + cb, clone.tokens.begin() + ce);
            clone.tokens.insert(clone.tokens.begin() + cb, item->tokens.begin(),
                                item->tokens.end());
            clone.list_introducer = false;
            pos_tag(clone, lex);
            out.push_back(std::move(clone));
        }
        i += items.size(); // absorbed
    }

    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].index = static_cast<int>(i);
        out[i].list_parent = -1;
    }
    doc.sentences = std::move(out);
    refresh_sentence_flags(doc, lex);
}

} // namespace ctigraph
