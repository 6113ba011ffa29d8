#pragma once

#include <string>
#include <vector>

#include "ctigraph/frames.hpp"
#include "ctigraph/lexicon.hpp"

namespace ctigraph {

struct Node {
    int id = 0;
    std::string name;
    NodeKind kind = NodeKind::File;
    int run = -1; // wildcard-process run id; -1 for named nodes
};

struct Edge {
    int src = 0;
    int dst = 0;
    Syscall syscall = Syscall::Write;
    int seq = 0; // 1-based order of the originating frame
    int sentence = 0;
    bool conditional = false;
};

struct Graph {
    std::string source;
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    const Node* find_node(int id) const;
};

// Frames to graph: the direction map orients each edge, nodes merge on
// (name, kind) except wildcard process agents, which merge only within a
// contiguous run of frames.
Graph build_graph(const std::vector<Frame>& frames, const Lexicon& lex,
                  const std::string& source);

// Maps every edge's syscall through the antonym table; structure unchanged.
Graph invert_graph(const Graph& g, const Lexicon& lex);

std::string to_json(const Graph& g);
Graph from_json(const std::string& text);

std::string to_dot(const Graph& g);

// subject,action,object,subject_kind,object_kind,seq rows; '#' comments.
Graph from_audit_csv(const std::string& text, const Lexicon& lex,
                     const std::string& source);

Graph load_graph_file(const std::string& path, const Lexicon& lex);

} // namespace ctigraph
