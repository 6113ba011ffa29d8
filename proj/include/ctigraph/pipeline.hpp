#pragma once

#include <string>

#include "ctigraph/graph.hpp"
#include "ctigraph/resolve.hpp"
#include "ctigraph/summarize.hpp"

namespace ctigraph {

struct PipelineOptions {
    bool structural_promotion = true;
    bool homogenize = true;
    bool to_active = true;
    bool ellipsis = true;
    bool pronouns = true;
    bool entities = true;
    bool summarize = true;
    int esr_window = 5;
    SummarizeOptions summary;
};

struct PipelineStats {
    int sentences_before = 0;
    int sentences_after = 0;
    int nodes = 0;
    int edges = 0;
};

// Full report-to-graph run.  A disabled stage is the identity substitution:
// every later stage still runs on the unmodified input.
Graph extract_graph(const std::string& text, const std::string& source_id,
                    const Lexicon& lex, const PipelineOptions& opts = {},
                    PipelineStats* stats = nullptr);

} // namespace ctigraph
