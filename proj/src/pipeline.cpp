#include "ctigraph/pipeline.hpp"

#include "ctigraph/frames.hpp"
#include "ctigraph/normalize.hpp"

namespace ctigraph {

Graph extract_graph(const std::string& text, const std::string& source_id,
                    const Lexicon& lex, const PipelineOptions& opts,
                    PipelineStats* stats) {
    TokenizeOptions tok;
    tok.structural_promotion = opts.structural_promotion;
    Document doc = tokenize(text, source_id, lex, tok);

    if (opts.homogenize) homogenize(doc, lex);
    if (opts.to_active) to_active(doc, lex);
    if (opts.ellipsis) {
        EllipsisOptions esr;
        esr.window = opts.esr_window;
        resolve_ellipsis(doc, lex, esr);
    }
    if (opts.pronouns) resolve_pronouns(doc, lex);
    if (opts.entities) resolve_entities(doc, lex);

    int before = static_cast<int>(doc.sentences.size());
    if (opts.summarize) summarize_document(doc, lex, opts.summary);
    int after = static_cast<int>(doc.sentences.size());

    auto frames = extract_frames(doc, lex);
    purge_negated(frames);
    frames = resolve_frame_entities(std::move(frames), lex);
    Graph g = build_graph(frames, lex, source_id);

    if (stats) {
        stats->sentences_before = before;
        stats->sentences_after = after;
        stats->nodes = static_cast<int>(g.nodes.size());
        stats->edges = static_cast<int>(g.edges.size());
    }
    return g;
}

} // namespace ctigraph
