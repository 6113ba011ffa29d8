#include "ctigraph/summarize.hpp"

#include <set>

#include "ctigraph/frames.hpp"

namespace ctigraph {

Verdict classify_sentence(const Sentence& sentence, const Lexicon& lex) {
    bool has_syscall_verb = false;
    bool has_indicator = false;
    for (const auto& t : sentence.tokens) {
        if (t.pos == Pos::Verb && !t.attributive && lex.canonical_verb(t.lemma))
            has_syscall_verb = true;
        if (t.pos == Pos::Sym) has_indicator = true;
    }
    if (!has_syscall_verb) return Verdict::NonProductive;
    if (has_indicator) return Verdict::Productive;

    // A wildcard subject marks recovered elided actions; those stay even
    // without a concrete indicator ("* unlink the log").
    auto [b, e] = find_subject(sentence, lex);
    if (b >= 0 && join_tokens(sentence, b, e) == "*") return Verdict::Productive;
    return Verdict::NonProductive;
}

void trim_words(Sentence& sentence, const Lexicon& lex) {
    Document probe;
    probe.sentences.push_back(sentence);
    auto candidates = extract_candidate_frames(probe, lex);

    std::set<int> keep;
    bool any = false;
    for (const auto& c : candidates) {
        if (!lex.canonical_verb(c.verb_lemma)) continue;
        any = true;
        keep.insert(c.verb_token);
        if (c.neg_token >= 0) keep.insert(c.neg_token);
        if (c.patient_prep >= 0) keep.insert(c.patient_prep);
        for (int i = std::max(c.agent_span.first, 0); i < c.agent_span.second; ++i)
            keep.insert(i);
        for (int i = std::max(c.patient_span.first, 0); i < c.patient_span.second; ++i)
            keep.insert(i);
        for (const auto& [b, e] : c.extra_spans)
            for (int i = std::max(b, 0); i < e; ++i) keep.insert(i);
    }
    if (!any) return; // nothing frame-shaped: leave the sentence alone

    // Coordination separators between kept spans stay, or the coordinated
    // objects would fuse into one noun phrase after the trim.
    int n = static_cast<int>(sentence.tokens.size());
    auto separator = [&](int i) {
        const Token& t = sentence.tokens[i];
        if (t.pos == Pos::Punct && t.surface == ",") return true;
        std::string low = lower_copy(t.surface);
        return low == "and" || low == "or";
    };
    for (int i = 0; i < n;) {
        if (!separator(i)) {
            ++i;
            continue;
        }
        int j = i;
        while (j < n && separator(j)) ++j;
        if (i > 0 && keep.count(i - 1) && j < n && keep.count(j))
            for (int k = i; k < j; ++k) keep.insert(k);
        i = j;
    }

    std::vector<Token> kept;
    kept.reserve(keep.size());
    for (int i = 0; i < static_cast<int>(sentence.tokens.size()); ++i)
        if (keep.count(i)) kept.push_back(std::move(sentence.tokens[i]));
    sentence.tokens = std::move(kept);
    pos_tag(sentence, lex);
}

void summarize_document(Document& doc, const Lexicon& lex, const SummarizeOptions& opts) {
    std::vector<Sentence> kept;
    kept.reserve(doc.sentences.size());
    for (auto& s : doc.sentences) {
        Verdict v = classify_sentence(s, lex);
        auto it = opts.overrides.find(s.index);
        if (it != opts.overrides.end()) v = it->second;
        if (v != Verdict::Productive) continue;
        trim_words(s, lex);
        // Original index survives so edges keep pointing at source sentences.
        kept.push_back(std::move(s));
    }
    doc.sentences = std::move(kept);
}

} // namespace ctigraph
