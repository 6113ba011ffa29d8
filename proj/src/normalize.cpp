#include "ctigraph/normalize.hpp"

#include <algorithm>
#include <cctype>

namespace ctigraph {

namespace {

struct Piece {
    std::string text;
    std::size_t offset = 0; // into Document::raw
    bool from_bullet = false;
    bool header = false;
    bool ends_colon = false;
    bool terminated = false; // classic .!? terminator
};

bool blank(std::string_view s) {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

bool mostly_caps(std::string_view s) {
    int upper = 0, lower = 0;
    for (char c : s) {
        if (std::isupper(static_cast<unsigned char>(c))) ++upper;
        if (std::islower(static_cast<unsigned char>(c))) ++lower;
    }
    return upper >= 3 && lower == 0;
}

bool title_case(std::string_view s) {
    int words = 0, capped = 0;
    bool in_word = false, word_capped = false;
    auto flush = [&] {
        if (in_word) {
            ++words;
            if (word_capped) ++capped;
        }
        in_word = false;
        word_capped = false;
    };
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '-') {
            flush();
        } else {
            if (!in_word) word_capped = std::isupper(static_cast<unsigned char>(c)) != 0;
            in_word = true;
        }
    }
    flush();
    return words > 0 && words <= 10 && capped == words;
}

std::size_t bullet_prefix_len(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    if (i < line.size() && (line[i] == '-' || line[i] == '*' || line[i] == '+')) {
        ++i;
        if (i < line.size() && line[i] == ' ') return i + 1;
        return 0;
    }
    // Unicode bullet U+2022
    if (i + 2 < line.size() && static_cast<unsigned char>(line[i]) == 0xE2 &&
        static_cast<unsigned char>(line[i + 1]) == 0x80 &&
        static_cast<unsigned char>(line[i + 2]) == 0xA2) {
        i += 3;
        while (i < line.size() && line[i] == ' ') ++i;
        return i;
    }
    // Enumerators: "1.", "12)", "a)", "(3)"
    i = start;
    bool paren = false;
    if (i < line.size() && line[i] == '(') {
        paren = true;
        ++i;
    }
    std::size_t digits = i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    bool got = i > digits && i - digits <= 2;
    if (!got && i < line.size() && std::isalpha(static_cast<unsigned char>(line[i])) &&
        i + 1 < line.size() && (line[i + 1] == '.' || line[i + 1] == ')')) {
        got = true;
        ++i;
    }
    if (!got) return 0;
    if (paren) {
        if (i < line.size() && line[i] == ')') ++i;
        else return 0;
    } else {
        if (i < line.size() && (line[i] == '.' || line[i] == ')')) ++i;
        else return 0;
    }
    if (i < line.size() && line[i] == ' ') return i + 1;
    return 0;
}

// Classic sentence split inside one piece of text: .!? followed by whitespace
// or end; periods glued to the next character (file names, IPs) never split.
std::vector<std::pair<std::size_t, std::size_t>> classic_spans(std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        bool at_end = i + 1 >= text.size();
        if (!at_end && !std::isspace(static_cast<unsigned char>(text[i + 1]))) continue;
        spans.emplace_back(begin, i + 1);
        begin = i + 1;
        while (begin < text.size() && std::isspace(static_cast<unsigned char>(text[begin])))
            ++begin;
        i = begin == 0 ? i : begin - 1;
    }
    if (begin < text.size() && !blank(text.substr(begin)))
        spans.emplace_back(begin, text.size());
    return spans;
}

const std::string kLeadPeel = "([{\"'";
const std::string kTrailPeel = ",;:.\"')]}!?";

struct RawToken {
    std::string core;
    std::size_t begin = 0, end = 0;
    bool had_comma = false;
};

std::vector<RawToken> word_split(std::string_view text, std::size_t base) {
    std::vector<RawToken> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        std::size_t b = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::string_view chunk = text.substr(b, i - b);
        std::size_t lead = 0;
        while (lead < chunk.size() && kLeadPeel.find(chunk[lead]) != std::string::npos) ++lead;
        std::size_t trail = 0;
        bool comma = false;
        while (chunk.size() - trail > lead &&
               kTrailPeel.find(chunk[chunk.size() - 1 - trail]) != std::string::npos) {
            if (chunk[chunk.size() - 1 - trail] == ',') comma = true;
            ++trail;
        }
        // A '>' closing an env token like <TEMP> is not trailing punctuation.
        std::string_view core = chunk.substr(lead, chunk.size() - lead - trail);
        if (core.empty()) {
            if (comma) { // a free-standing comma still separates clauses
                RawToken t;
                t.core = ",";
                t.begin = base + b;
                t.end = t.begin + 1;
                out.push_back(std::move(t));
            }
            continue;
        }
        RawToken t;
        t.core = std::string(core);
        t.begin = base + b + lead;
        t.end = t.begin + core.size();
        t.had_comma = comma;
        out.push_back(std::move(t));
    }
    return out;
}

Sentence build_sentence(const Piece& piece, const Lexicon& lex) {
    Sentence s;
    auto raw_tokens = word_split(piece.text, piece.offset);
    // Placeholder paths like <system folder>\name.exe carry spaces; stitch
    // the pieces back into one token so the battery can type them.
    for (std::size_t i = 0; i + 1 < raw_tokens.size(); ++i) {
        auto& rt = raw_tokens[i];
        if (rt.core.size() < 2 || rt.core[0] != '<') continue;
        if (!std::isalpha(static_cast<unsigned char>(rt.core[1])) && rt.core[1] != '_')
            continue;
        if (rt.core.find('>') != std::string::npos) continue;
        std::size_t last = i;
        for (std::size_t j = i + 1; j < raw_tokens.size() && j <= i + 3; ++j) {
            if (raw_tokens[j].core.find('>') != std::string::npos) {
                last = j;
                break;
            }
            if (raw_tokens[j].had_comma) break;
        }
        if (last == i) continue;
        for (std::size_t j = i + 1; j <= last; ++j) {
            rt.core += ' ';
            rt.core += raw_tokens[j].core;
        }
        rt.end = raw_tokens[last].end;
        rt.had_comma = raw_tokens[last].had_comma;
        raw_tokens.erase(raw_tokens.begin() + i + 1, raw_tokens.begin() + last + 1);
    }
    for (auto& rt : raw_tokens) {
        // Split off "n't" contractions so negation is visible.
        std::string low = lower_copy(rt.core);
        if (low.size() > 3 && low.ends_with("n't")) {
            std::string stem = rt.core.substr(0, rt.core.size() - 3);
            s.tokens.push_back(make_token(stem, lex, rt.begin, rt.begin + stem.size()));
            s.tokens.push_back(make_token("n't", lex, rt.begin + stem.size(), rt.end));
        } else {
            s.tokens.push_back(make_token(rt.core, lex, rt.begin, rt.end));
        }
        if (rt.had_comma) {
            Token comma;
            comma.surface = ",";
            comma.lemma = ",";
            comma.pos = Pos::Punct;
            comma.begin = rt.end;
            comma.end = rt.end + 1;
            comma.orig_lemma = ",";
            s.tokens.push_back(comma);
        }
    }
    pos_tag(s, lex);
    return s;
}

bool is_list_item_sentence(const Sentence& s) {
    int sym = 0, other = 0;
    for (const auto& t : s.tokens) {
        if (t.pos == Pos::Sym) ++sym;
        else if (t.pos != Pos::Punct) ++other;
    }
    return sym >= 1 && sym <= 3 && other == 0;
}

bool case2_shape(const Sentence& s, const Lexicon& lex) {
    if (s.tokens.empty()) return false;
    const Token& first = s.tokens[0];
    if (!lex.canonical_verb(first.lemma)) return false;
    for (std::size_t i = 1; i < s.tokens.size(); ++i)
        if (is_nominal(s.tokens[i].pos)) return true;
    return false;
}

bool case1_shape(const Sentence& s, const Lexicon& lex) {
    if (s.tokens.empty()) return false;
    const Token& first = s.tokens[0];
    if (!is_nominal(first.pos) && first.pos != Pos::Det) return false;
    if (first.surface.empty() || !std::isupper(static_cast<unsigned char>(first.surface[0])))
        return false;
    auto subj = find_subject(s, lex);
    if (subj.first < 0) return false;
    for (int i = subj.second; i < static_cast<int>(s.tokens.size()); ++i) {
        if (s.tokens[i].pos == Pos::Verb && !s.tokens[i].attributive) {
            for (std::size_t j = i + 1; j < s.tokens.size(); ++j)
                if (is_nominal(s.tokens[j].pos)) return true;
        }
    }
    return false;
}

} // namespace

void refresh_sentence_flags(Document& doc, const Lexicon& lex) {
    for (auto& s : doc.sentences)
        s.has_explicit_subject = find_subject(s, lex).first >= 0;
}

Document tokenize(std::string raw, std::string source_id, const Lexicon& lex,
                  const TokenizeOptions& opts) {
    Document doc;
    doc.source_id = std::move(source_id);
    doc.raw = std::move(raw);

    std::vector<Piece> pieces;
    if (!opts.structural_promotion) {
        std::string flat = doc.raw;
        std::replace(flat.begin(), flat.end(), '\n', ' ');
        std::replace(flat.begin(), flat.end(), '\r', ' ');
        for (auto [b, e] : classic_spans(flat)) {
            Piece p;
            p.text = flat.substr(b, e - b);
            p.offset = b;
            p.terminated = !p.text.empty() && (p.text.back() == '.' || p.text.back() == '!' ||
                                               p.text.back() == '?');
            pieces.push_back(std::move(p));
        }
    } else {
        // Line-level structure first, classic delimiters inside each line.
        std::vector<std::pair<std::size_t, std::string>> lines;
        std::size_t pos = 0;
        while (pos <= doc.raw.size()) {
            std::size_t nl = doc.raw.find('\n', pos);
            std::size_t end = nl == std::string::npos ? doc.raw.size() : nl;
            std::string line = doc.raw.substr(pos, end - pos);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.emplace_back(pos, line);
            if (nl == std::string::npos) break;
            pos = nl + 1;
        }
        for (std::size_t li = 0; li < lines.size(); ++li) {
            auto& [off, line] = lines[li];
            if (blank(line)) continue;
            std::size_t bp = bullet_prefix_len(line);
            std::string body = line.substr(bp);
            bool prev_blank = li == 0 || blank(lines[li - 1].second);
            bool next_blank = li + 1 >= lines.size() || blank(lines[li + 1].second);
            std::string trimmed = trim_copy(body);
            bool head = bp == 0 && prev_blank && next_blank && !trimmed.empty() &&
                        trimmed.back() != '.' && trimmed.back() != ':' &&
                        (mostly_caps(trimmed) || title_case(trimmed));
            auto spans = classic_spans(body);
            for (std::size_t si = 0; si < spans.size(); ++si) {
                auto [b, e] = spans[si];
                Piece p;
                p.text = body.substr(b, e - b);
                p.offset = off + bp + b;
                p.from_bullet = bp > 0;
                p.header = head;
                std::string t = trim_copy(p.text);
                if (!t.empty() && t.back() == ':') p.ends_colon = true;
                p.terminated = !t.empty() && (t.back() == '.' || t.back() == '!' || t.back() == '?');
                pieces.push_back(std::move(p));
            }
        }
    }

    // Promotion, list-item detection, merge-back of incomplete fragments.
    std::vector<Sentence> out;
    std::string buffer;
    std::size_t buffer_off = 0;
    int current_introducer = -1;
    bool list_scope_open = false;

    auto flush_buffer = [&](bool force) {
        if (buffer.empty() || !force) return;
        Piece p;
        p.text = buffer;
        p.offset = buffer_off;
        Sentence s = build_sentence(p, lex);
        if (!s.tokens.empty()) {
            s.provenance = Provenance::Unbreakable;
            out.push_back(std::move(s));
        }
        buffer.clear();
    };

    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
        Piece& p = pieces[pi];
        std::string text = buffer.empty() ? p.text : buffer + " " + p.text;
        std::size_t off = buffer.empty() ? p.offset : buffer_off;
        bool merged = !buffer.empty();
        Piece probe{text, off, p.from_bullet, p.header, p.ends_colon, p.terminated};
        Sentence s = build_sentence(probe, lex);
        if (s.tokens.empty()) continue;

        bool complete = p.terminated || p.ends_colon || p.header;
        bool item = is_list_item_sentence(s);
        bool c2 = case2_shape(s, lex);
        bool c1 = !c2 && case1_shape(s, lex);

        if (p.header) {
            flush_buffer(true);
            Sentence h = build_sentence(p, lex);
            h.provenance = Provenance::Unbreakable;
            out.push_back(std::move(h));
            current_introducer = -1;
            list_scope_open = false;
            continue;
        }

        if (!complete && !item && !c1 && !c2 && !p.from_bullet) {
            // Incomplete plain fragment: keep buffering toward the next piece.
            buffer = text;
            buffer_off = off;
            continue;
        }
        buffer.clear();

        if (item && !merged) {
            s.provenance = Provenance::Unbreakable;
            s.list_item = true;
            if (list_scope_open) s.list_parent = current_introducer;
            out.push_back(std::move(s));
            continue;
        }

        if (complete) {
            s.provenance = Provenance::Original;
        } else if (c2) {
            s.provenance = Provenance::PromotedCase2;
        } else if (c1) {
            s.provenance = Provenance::PromotedCase1;
        } else {
            s.provenance = Provenance::Unbreakable;
        }
        if (p.ends_colon) s.list_introducer = true;

        if (p.from_bullet && list_scope_open) s.list_parent = current_introducer;

        int idx = static_cast<int>(out.size());
        if (s.list_introducer) {
            current_introducer = idx;
            list_scope_open = true;
        } else if (!p.from_bullet && !s.list_item) {
            list_scope_open = false;
        }
        out.push_back(std::move(s));
    }
    flush_buffer(true);

    for (std::size_t i = 0; i < out.size(); ++i) out[i].index = static_cast<int>(i);
    doc.sentences = std::move(out);
    refresh_sentence_flags(doc, lex);
    return doc;
}

void homogenize(Document& doc, const Lexicon& lex) {
    for (auto& s : doc.sentences) {
        // Verb pass: canonical base forms, grammatical features preserved.
        for (auto& t : s.tokens) {
            if (t.pos != Pos::Verb || t.attributive) continue;
            auto canon = lex.canonical_verb(t.lemma);
            if (!canon) continue;
            const char* name = to_string(*canon);
            if (t.surface != name) {
                t.surface = name;
                t.lemma = name;
            }
        }
        // Noun pass: longest dictionary phrase wins, one sweep left to right.
        std::vector<std::string> norm;
        norm.reserve(s.tokens.size());
        for (const auto& t : s.tokens) norm.push_back(NounDictionary::normalize_word(t.surface));
        std::vector<Token> rebuilt;
        rebuilt.reserve(s.tokens.size());
        for (std::size_t i = 0; i < s.tokens.size();) {
            auto m = lex.nouns.match_at(norm, i);
            if (!m || (m->token_count == 1 && s.tokens[i].surface == m->canonical)) {
                rebuilt.push_back(std::move(s.tokens[i]));
                ++i;
                continue;
            }
            Token t;
            t.surface = m->canonical;
            t.lemma = lower_copy(m->canonical);
            t.orig_lemma = s.tokens[i].orig_lemma;
            t.begin = s.tokens[i].begin;
            t.end = s.tokens[i + m->token_count - 1].end;
            t.pos = Pos::Sym;
            rebuilt.push_back(std::move(t));
            i += m->token_count;
        }
        s.tokens = std::move(rebuilt);
        pos_tag(s, lex);
    }
    refresh_sentence_flags(doc, lex);
}

void to_active(Document& doc, const Lexicon& lex) {
    for (auto& s : doc.sentences) {
        auto pa = detect_passive(s, lex);
        if (!pa.is_passive || pa.patient.first < 0) continue;
        s.is_passive = true;

        const auto& toks = s.tokens;
        int n = static_cast<int>(toks.size());
        int clause = leading_clause_end(s, lex);
        bool neg = pa.verb > 0 && toks[pa.verb - 1].pos == Pos::Neg;

        int by_begin = -1, by_end = -1;
        if (pa.agent.first >= 0) {
            for (int j = pa.verb + 1; j < pa.agent.first; ++j) {
                if (lower_copy(toks[j].surface) == "by") {
                    by_begin = j;
                    break;
                }
            }
            by_end = pa.agent.second;
        }

        std::vector<Token> rebuilt;
        for (int i = 0; i < clause; ++i) rebuilt.push_back(toks[i]);
        for (int i = clause; i < pa.patient.first; ++i) rebuilt.push_back(toks[i]);
        if (pa.agent.first >= 0) {
            for (int i = pa.agent.first; i < pa.agent.second; ++i) rebuilt.push_back(toks[i]);
        } else {
            Token marker;
            marker.surface = kImplicitMarker;
            marker.lemma = kImplicitMarker;
            marker.orig_lemma = kImplicitMarker;
            marker.pos = Pos::Other;
            marker.begin = toks[pa.patient.first].begin;
            marker.end = toks[pa.patient.first].begin;
            rebuilt.push_back(marker);
        }
        if (neg) rebuilt.push_back(toks[pa.verb - 1]);
        rebuilt.push_back(toks[pa.verb]);
        for (int i = pa.patient.first; i < pa.patient.second; ++i) rebuilt.push_back(toks[i]);
        for (int i = pa.verb + 1; i < n; ++i) {
            if (by_begin >= 0 && i >= by_begin && i < by_end) continue;
            rebuilt.push_back(toks[i]);
        }
        s.tokens = std::move(rebuilt);
        pos_tag(s, lex);
    }
    refresh_sentence_flags(doc, lex);
}

} // namespace ctigraph
