#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctigraph/entities.hpp"
#include "ctigraph/textmodel.hpp"

namespace ctigraph {

enum class ExtraRole { Location, Target, Source, Temporal };

const char* to_string(ExtraRole r);

struct FrameExtra {
    ExtraRole role;
    std::string text;
};

struct Frame {
    std::string agent_text;
    std::string patient_text;
    Syscall verb = Syscall::Write;
    std::vector<FrameExtra> extras;
    bool negated = false;
    bool conditional = false;
    int sentence_index = 0;
    Entity agent;
    Entity patient;
};

// One candidate per main-clause verb token; frames without a recoverable
// patient are dropped.  Verbs that are not syscall dictionary entries survive
// here and are removed by prune_non_syscall.  Token spans into the source
// sentence are kept so summarization can trim around the same material.
struct CandidateFrame {
    std::string agent_text;
    std::string patient_text;
    std::string verb_lemma;
    std::vector<FrameExtra> extras;
    bool negated = false;
    bool conditional = false;
    int sentence_index = 0;

    int verb_token = -1;
    int neg_token = -1;
    int patient_prep = -1; // preposition consumed to reach the patient
    std::pair<int, int> agent_span{-1, -1};
    std::pair<int, int> patient_span{-1, -1};
    std::vector<std::pair<int, int>> extra_spans; // parallel to extras, prep included
};

std::vector<CandidateFrame> extract_candidate_frames(const Document& doc, const Lexicon& lex);

// Second homogenization: candidates whose verb lemma maps onto a canonical
// syscall become frames, everything else is discarded.
std::vector<Frame> prune_non_syscall(const std::vector<CandidateFrame>& candidates,
                                     const Lexicon& lex);

std::vector<Frame> extract_frames(const Document& doc, const Lexicon& lex);

// Drops frames stating that an action did NOT happen, unless the negation is
// guarded by a condition (those stay, marked conditional).
void purge_negated(std::vector<Frame>& frames);

// Slot-level entity resolution: prunes slot phrases to indicator cores, types
// them, promotes TARGET/SOURCE phrases into wildcard patients, and fans
// multi-location frames out so each frame carries exactly one edge.
std::vector<Frame> resolve_frame_entities(std::vector<Frame> frames, const Lexicon& lex);

} // namespace ctigraph
