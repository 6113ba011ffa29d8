#include "ctigraph/frames.hpp"

#include <algorithm>
#include <map>

namespace ctigraph {

const char* to_string(ExtraRole r) {
    switch (r) {
        case ExtraRole::Location: return "location";
        case ExtraRole::Target: return "target";
        case ExtraRole::Source: return "source";
        case ExtraRole::Temporal: return "temporal";
    }
    return "?";
}

namespace {

bool location_prep(const std::string& low) {
    return low == "in" || low == "into" || low == "under";
}

bool conditional_subordinator(const std::string& low) {
    return low == "if" || low == "unless" || low == "when";
}

bool conjunction_surface(const std::string& low) { return low == "and" || low == "or"; }

// Objects coordinated after the first patient ("deletes a.exe, b.exe and
// c.exe") each get their own frame.
std::vector<std::pair<int, int>> coordinated_objects(const Sentence& s, int after) {
    std::vector<std::pair<int, int>> more;
    int n = static_cast<int>(s.tokens.size());
    int i = after;
    while (i < n) {
        int j = i;
        bool sep = false;
        if (j < n && s.tokens[j].pos == Pos::Punct && s.tokens[j].surface == ",") {
            ++j;
            sep = true;
        }
        if (j < n && conjunction_surface(lower_copy(s.tokens[j].surface))) {
            ++j;
            sep = true;
        }
        if (!sep) break;
        auto np = noun_phrase_at(s, j);
        if (np.first != j) break;
        more.push_back(np);
        i = np.second;
    }
    return more;
}

} // namespace

std::vector<CandidateFrame> extract_candidate_frames(const Document& doc, const Lexicon& lex) {
    std::vector<CandidateFrame> out;
    for (const auto& s : doc.sentences) {
        if (s.list_item) continue;
        int n = static_cast<int>(s.tokens.size());
        int clause = leading_clause_end(s, lex);

        std::string temporal;
        bool conditional = false;
        if (clause > 0) {
            int end = clause;
            if (s.tokens[end - 1].pos == Pos::Punct) --end;
            temporal = join_tokens(s, 0, end);
            conditional = conditional_subordinator(lower_copy(s.tokens[0].surface));
        }

        auto subject = find_subject(s, lex);

        for (int v = clause; v < n; ++v) {
            const Token& vt = s.tokens[v];
            if (vt.pos != Pos::Verb || vt.attributive) continue;
            if (subject.first <= v && v < subject.second) continue;

            CandidateFrame f;
            f.sentence_index = s.index;
            f.verb_lemma = vt.lemma;
            f.verb_token = v;
            f.agent_span = subject;
            f.agent_text = subject.first >= 0 ? join_tokens(s, subject.first, subject.second)
                                              : std::string("*");
            if (clause > 0) {
                f.extras.push_back({ExtraRole::Temporal, temporal});
                f.extra_spans.push_back({0, clause});
                f.conditional = conditional;
            }
            for (int b = v - 1; b >= 0 && b >= v - 2; --b) {
                if (s.tokens[b].pos == Pos::Neg) {
                    f.negated = true;
                    f.neg_token = b;
                }
            }

            // Patient: the first noun phrase after the verb, reachable over
            // at most one preposition.
            int p = v + 1;
            while (p < n && s.tokens[p].pos == Pos::Adv) ++p;
            if (p < n && s.tokens[p].pos == Pos::Prep) {
                f.patient_prep = p;
                ++p;
            }
            auto np = noun_phrase_at(s, p);
            if (np.first < 0) continue; // nothing acted on: no frame
            f.patient_span = np;
            f.patient_text = join_tokens(s, np.first, np.second);

            int scan_from = np.second;
            auto coord = coordinated_objects(s, np.second);
            if (!coord.empty()) scan_from = coord.back().second;

            // Role-bearing prepositional phrases after the object(s).
            int i = scan_from;
            while (i < n) {
                if (s.tokens[i].pos != Pos::Prep) {
                    ++i;
                    continue;
                }
                std::string low = lower_copy(s.tokens[i].surface);
                auto pnp = noun_phrase_at(s, i + 1);
                if (pnp.first < 0) {
                    ++i;
                    continue;
                }
                std::string text = join_tokens(s, pnp.first, pnp.second);
                if (location_prep(low)) {
                    f.extras.push_back({ExtraRole::Location, text});
                    f.extra_spans.push_back({i, pnp.second});
                } else if (low == "to") {
                    f.extras.push_back({ExtraRole::Target, text});
                    f.extra_spans.push_back({i, pnp.second});
                } else if (low == "from") {
                    f.extras.push_back({ExtraRole::Source, text});
                    f.extra_spans.push_back({i, pnp.second});
                }
                i = pnp.second;
            }

            out.push_back(f);
            for (const auto& c : coord) {
                CandidateFrame g = f;
                g.patient_span = c;
                g.patient_text = join_tokens(s, c.first, c.second);
                out.push_back(std::move(g));
            }
        }
    }
    return out;
}

std::vector<Frame> prune_non_syscall(const std::vector<CandidateFrame>& candidates,
                                     const Lexicon& lex) {
    std::vector<Frame> out;
    for (const auto& c : candidates) {
        auto v = lex.canonical_verb(c.verb_lemma);
        if (!v) continue;
        Frame f;
        f.agent_text = c.agent_text;
        f.patient_text = c.patient_text;
        f.verb = *v;
        f.extras = c.extras;
        f.negated = c.negated;
        f.conditional = c.conditional;
        f.sentence_index = c.sentence_index;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Frame> extract_frames(const Document& doc, const Lexicon& lex) {
    return prune_non_syscall(extract_candidate_frames(doc, lex), lex);
}

void purge_negated(std::vector<Frame>& frames) {
    std::erase_if(frames, [](const Frame& f) { return f.negated && !f.conditional; });
}

std::vector<Frame> resolve_frame_entities(std::vector<Frame> frames, const Lexicon& lex) {
    const SeeBattery& battery = *lex.battery;

    for (auto& f : frames) {
        f.agent = prune_to_entity(f.agent_text, battery);
        if (f.agent.wildcard) f.agent = Entity{"*", NodeKind::Process, true};
        f.patient = prune_to_entity(f.patient_text, battery);
    }

    TypingContext ctx;
    ctx.battery = &battery;
    for (const auto& f : frames) {
        if (!f.agent.wildcard) ctx.agent_names.insert(lower_copy(f.agent.name));
        if ((f.verb == Syscall::Exec || f.verb == Syscall::Fork) && !f.patient.wildcard)
            ctx.exec_fork_patients.insert(lower_copy(f.patient.name));
    }

    std::vector<Frame> out;
    out.reserve(frames.size());
    for (auto& f : frames) {
        // A wildcard patient adopts the target (or source) entity: "adds the
        // value X to key K" writes K, "deletes the value X from K" unlinks K.
        if (f.patient.wildcard) {
            for (auto role : {ExtraRole::Target, ExtraRole::Source}) {
                auto it = std::find_if(f.extras.begin(), f.extras.end(), [&](const FrameExtra& e) {
                    return e.role == role && !prune_to_entity(e.text, battery).wildcard;
                });
                if (it != f.extras.end()) {
                    f.patient = prune_to_entity(it->text, battery);
                    f.extras.erase(it);
                    break;
                }
            }
        }

        if (f.patient.wildcard &&
            (f.verb == Syscall::Connect || f.verb == Syscall::Send ||
             f.verb == Syscall::Receive))
            f.patient.kind = NodeKind::Socket;

        f.agent.kind = f.agent.wildcard
                           ? NodeKind::Process
                           : type_entity(f.agent.name, f.agent.kind, ctx);
        if (!f.patient.wildcard) f.patient.kind = type_entity(f.patient.name, f.patient.kind, ctx);

        // Locations qualify file objects being written or read; one output
        // frame per location so every frame carries exactly one edge.
        std::vector<Entity> locations;
        if (f.verb == Syscall::Write || f.verb == Syscall::Read) {
            for (const auto& e : f.extras) {
                if (e.role != ExtraRole::Location) continue;
                Entity loc = prune_to_entity(e.text, battery);
                if (!loc.wildcard) locations.push_back(std::move(loc));
            }
        }
        if (locations.empty() || f.patient.kind == NodeKind::Registry ||
            f.patient.kind == NodeKind::Socket) {
            out.push_back(std::move(f));
            continue;
        }
        for (const auto& loc : locations) {
            Frame g = f;
            g.patient.name = loc.name + "\\" + f.patient.name;
            g.patient.kind = NodeKind::File;
            g.patient.wildcard = false;
            out.push_back(std::move(g));
        }
    }
    return out;
}

} // namespace ctigraph
