#include "ctigraph/textmodel.hpp"

#include <algorithm>
#include <cctype>

namespace ctigraph {

const char* to_string(Pos pos) {
    switch (pos) {
    case Pos::Verb: return "VERB";
    case Pos::Noun: return "NOUN";
    case Pos::Pron: return "PRON";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
    case Pos::Aux: return "AUX";
    case Pos::Prep: return "PREP";
    case Pos::Det: return "DET";
    case Pos::Neg: return "NEG";
    case Pos::Punct: return "PUNCT";
    case Pos::Num: return "NUM";
    case Pos::Sym: return "SYM";
    case Pos::Other: return "OTHER";
    }
    return "OTHER";
}

const char* to_string(Provenance p) {
    switch (p) {
    case Provenance::Original: return "original";
    case Provenance::PromotedCase1: return "promoted-case1";
    case Provenance::PromotedCase2: return "promoted-case2";
    case Provenance::Unbreakable: return "unbreakable";
    }
    return "original";
}

bool is_nominal(Pos pos) {
    return pos == Pos::Noun || pos == Pos::Pron || pos == Pos::Sym || pos == Pos::Num;
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

bool all_punct(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (std::isalnum(static_cast<unsigned char>(c))) return false;
    return true;
}

bool past_participle_shape(const std::string& lemma_lower, std::string_view surface) {
    std::string s = lower_copy(surface);
    if (s.size() > 2 && (s.ends_with("ed") || s.ends_with("en"))) return true;
    // Irregular participles that the lemmatizer knows map away from themselves.
    static const std::set<std::string> irregular = {"written", "sent", "taken", "hidden",
                                                    "done",    "run",  "set",   "put",
                                                    "read",    "made", "found", "gotten",
                                                    "broken",  "begun", "given", "held",
                                                    "kept",    "left", "chosen"};
    if (irregular.count(s)) return true;
    (void)lemma_lower;
    return false;
}

} // namespace

Token make_token(std::string surface, const Lexicon& lex, std::size_t begin, std::size_t end) {
    Token t;
    t.lemma = lex.lemma(surface);
    t.orig_lemma = t.lemma;
    t.surface = std::move(surface);
    t.begin = begin;
    t.end = end;
    return t;
}

void pos_tag(Sentence& sentence, const Lexicon& lex) {
    auto& toks = sentence.tokens;
    const auto& battery = *lex.battery;

    for (std::size_t i = 0; i < toks.size(); ++i) {
        Token& t = toks[i];
        std::string low = lower_copy(t.surface);

        // Participle shape is judged once, on the surface the author wrote.
        // Re-tagging after verb rewriting must not re-derive it: canonical
        // names like "read" double as irregular participle forms.
        bool fresh = !t.tagged;
        t.tagged = true;

        if (t.surface == kImplicitMarker) {
            t.pos = Pos::Other;
            continue;
        }
        if (t.surface == "*") { // unknown-entity placeholder, not punctuation
            t.pos = Pos::Sym;
            continue;
        }
        if (all_punct(t.surface)) {
            t.pos = Pos::Punct;
            continue;
        }
        if (all_digits(t.surface)) {
            t.pos = Pos::Num;
            continue;
        }
        if (battery.full_match(t.surface)) {
            t.pos = Pos::Sym;
            continue;
        }
        if (words::negators().count(low)) {
            t.pos = Pos::Neg;
            continue;
        }
        if (words::be_forms().count(low) || words::modals().count(low)) {
            t.pos = Pos::Aux;
            continue;
        }
        if (words::pronouns().count(low)) {
            // Demonstratives act as determiners in front of a nominal.
            bool demonstrative = low == "this" || low == "these" || low == "that" || low == "those";
            t.pos = (demonstrative && i + 1 < toks.size()) ? Pos::Det : Pos::Pron;
            continue;
        }
        if (words::determiners().count(low)) {
            t.pos = Pos::Det;
            continue;
        }
        if (words::prepositions().count(low)) {
            t.pos = Pos::Prep;
            continue;
        }
        if (words::conjunctions().count(low) || words::subordinators().count(low)) {
            t.pos = Pos::Other;
            continue;
        }
        if (words::discourse_markers().count(low)) {
            t.pos = Pos::Adv;
            continue;
        }

        // Light verbs carry nominalized actions ("makes a connection") and
        // common report verbs keep noun phrases from swallowing predicates
        // ("The malware starts"); both must parse as verbs.
        bool dict_verb = lex.syscalls.contains(t.lemma) ||
                         words::light_verbs().count(t.lemma) ||
                         words::common_verbs().count(t.lemma);
        // An uninflected report verb right after a singular noun is a
        // compound modifier, not a predicate ("log file", "system log");
        // a plural head keeps the verb reading ("attackers monitor traffic").
        if (dict_verb && !lex.syscalls.contains(t.lemma) &&
            !words::light_verbs().count(t.lemma) && low == t.lemma && i > 0 &&
            toks[i - 1].pos == Pos::Noun && !lower_copy(toks[i - 1].surface).ends_with('s'))
            dict_verb = false;
        // And one between a noun and an auxiliary heads the subject
        // ("the backup copy is downloaded"), whatever dictionary it is in.
        if (dict_verb && low == t.lemma && i > 0 && toks[i - 1].pos == Pos::Noun &&
            i + 1 < toks.size()) {
            std::string nxt = lower_copy(toks[i + 1].surface);
            if (words::be_forms().count(nxt) || words::modals().count(nxt))
                dict_verb = false;
        }
        // Adverbs are transparent for verb context ("it also deletes").
        std::size_t p = i;
        while (p > 0 && toks[p - 1].pos == Pos::Adv) --p;
        bool after_ok = p == 0;
        if (p > 0) {
            Pos prev = toks[p - 1].pos;
            after_ok = is_nominal(prev) || prev == Pos::Aux || prev == Pos::Neg ||
                       prev == Pos::Other; // conjunction/subordinator
        }
        if (dict_verb && after_ok) {
            t.pos = Pos::Verb;
            if (fresh && past_participle_shape(t.lemma, t.surface)) t.participle = true;
            continue;
        }
        if (past_participle_shape(t.lemma, t.surface) && (dict_verb || t.lemma != low)) {
            t.pos = Pos::Verb;
            if (fresh) t.participle = true;
            continue;
        }
        if (low.size() > 4 && low.ends_with("ing")) {
            t.pos = Pos::Verb;
            continue;
        }
        if (i > 0 && (toks[i - 1].pos == Pos::Aux ||
                      (toks[i - 1].pos == Pos::Neg && i > 1 && toks[i - 2].pos == Pos::Aux))) {
            t.pos = Pos::Verb;
            continue;
        }
        if (i > 0 && lower_copy(toks[i - 1].surface) == "to" && dict_verb) {
            t.pos = Pos::Verb;
            continue;
        }
        if (low.size() > 3 && (low.ends_with("ous") || low.ends_with("ful") ||
                               low.ends_with("ive") || low.ends_with("ious"))) {
            t.pos = Pos::Adj;
            continue;
        }
        if (low.size() > 2 && low.ends_with("ly")) {
            t.pos = Pos::Adv;
            continue;
        }
        t.pos = Pos::Noun;
    }

    // Attributive participles sit inside noun phrases ("the downloaded file");
    // they are not predicates and must survive verb homogenization.
    for (std::size_t i = 0; i < toks.size(); ++i) {
        Token& t = toks[i];
        if (t.pos != Pos::Verb || !t.participle) {
            t.attributive = false;
            continue;
        }
        // Attributive: a head noun follows and nothing verb-like precedes.
        // After a nominal, auxiliary, or negator the participle is the
        // predicate itself ("X deleted Y", "is deleted", "not deleted").
        bool nominal_after = i + 1 < toks.size() && is_nominal(toks[i + 1].pos);
        bool predicate_before =
            i > 0 && (is_nominal(toks[i - 1].pos) || toks[i - 1].pos == Pos::Aux ||
                      toks[i - 1].pos == Pos::Neg);
        t.attributive = nominal_after && !predicate_before;
    }
}

int leading_clause_end(const Sentence& sentence, const Lexicon& lex) {
    (void)lex;
    const auto& toks = sentence.tokens;
    if (toks.empty()) return 0;
    if (!words::subordinators().count(lower_copy(toks[0].surface))) return 0;
    for (std::size_t i = 1; i < toks.size(); ++i) {
        if (toks[i].pos == Pos::Punct && toks[i].surface == ",")
            return static_cast<int>(i) + 1;
    }
    return 0; // no comma: treat the whole thing as one clause, no split
}

std::pair<int, int> noun_phrase_at(const Sentence& sentence, int from) {
    const auto& toks = sentence.tokens;
    int n = static_cast<int>(toks.size());
    int i = from;
    while (i < n && (toks[i].pos == Pos::Det || toks[i].pos == Pos::Adj)) ++i;
    // Attributive participles may sit between determiner and head noun.
    while (i < n && toks[i].pos == Pos::Verb && toks[i].attributive) ++i;
    if (i >= n || !is_nominal(toks[i].pos)) return {-1, -1};
    int begin = from;
    while (i < n && (is_nominal(toks[i].pos) || toks[i].pos == Pos::Adj ||
                     (toks[i].pos == Pos::Verb && toks[i].attributive)))
        ++i;
    // of-complements belong to the phrase: "a copy of itself".
    while (i + 1 < n && lower_copy(toks[i].surface) == "of") {
        int j = i + 1;
        while (j < n && (toks[j].pos == Pos::Det || toks[j].pos == Pos::Adj)) ++j;
        if (j < n && is_nominal(toks[j].pos)) {
            ++j;
            while (j < n && is_nominal(toks[j].pos)) ++j;
            i = j;
        } else {
            break;
        }
    }
    return {begin, i};
}

std::pair<int, int> find_subject(const Sentence& sentence, const Lexicon& lex) {
    const auto& toks = sentence.tokens;
    int n = static_cast<int>(toks.size());
    int i = leading_clause_end(sentence, lex);
    while (i < n && (toks[i].pos == Pos::Punct || toks[i].pos == Pos::Adv ||
                     toks[i].pos == Pos::Other))
        ++i;
    if (i >= n) return {-1, -1};
    if (toks[i].surface == kImplicitMarker) return {-1, -1};
    if (toks[i].pos == Pos::Verb && !toks[i].attributive) return {-1, -1};
    auto np = noun_phrase_at(sentence, i);
    if (np.first < 0) return {-1, -1};
    // The phrase must actually be followed (eventually) by a predicate to be a
    // subject; a bare indicator line has none, but still reads as its topic.
    return np;
}

PassiveAnalysis detect_passive(const Sentence& sentence, const Lexicon& lex) {
    PassiveAnalysis out;
    const auto& toks = sentence.tokens;
    int n = static_cast<int>(toks.size());
    int start = leading_clause_end(sentence, lex);
    for (int i = start; i + 1 < n; ++i) {
        if (toks[i].pos != Pos::Aux || !words::be_forms().count(lower_copy(toks[i].surface)))
            continue;
        int v = i + 1;
        if (v < n && toks[v].pos == Pos::Neg) ++v; // "is not deleted"
        if (v >= n || toks[v].pos != Pos::Verb || !toks[v].participle || toks[v].attributive)
            continue;
        out.is_passive = true;
        out.aux = i;
        out.verb = v;
        // Patient: the noun phrase ending right before the AUX.
        int pe = i;
        int pb = pe - 1;
        if (pb >= 0 && is_nominal(toks[pb].pos)) {
            while (pb > start) {
                Pos p = toks[pb - 1].pos;
                bool np_part = is_nominal(p) || p == Pos::Det || p == Pos::Adj ||
                               (toks[pb - 1].pos == Pos::Verb && toks[pb - 1].attributive) ||
                               lower_copy(toks[pb - 1].surface) == "of";
                if (!np_part) break;
                --pb;
            }
            out.patient = {pb, pe};
        }
        for (int j = v + 1; j + 1 < n; ++j) {
            if (lower_copy(toks[j].surface) == "by") {
                auto np = noun_phrase_at(sentence, j + 1);
                if (np.first >= 0) out.agent = np;
                break;
            }
        }
        return out;
    }
    return out;
}

std::string join_tokens(const Sentence& sentence, int begin, int end) {
    std::string out;
    for (int i = std::max(begin, 0); i < end && i < static_cast<int>(sentence.tokens.size());
         ++i) {
        if (!out.empty()) out += ' ';
        out += sentence.tokens[i].surface;
    }
    return out;
}

} // namespace ctigraph
