#pragma once

#include <string>
#include <vector>

#include "ctigraph/graph.hpp"

namespace ctigraph {

// Case-insensitive node name equivalence.  "*" matches anything of the same
// kind, "X:.*"-shaped names match any same-kind node, and names containing
// '*' act as globs.  Symmetric.
bool name_match(const std::string& a, const std::string& b);

bool node_compatible(const Node& a, const Node& b);

struct McsResult {
    int matched_edges = 0;
    double score = 0.0;
};

// Maximum common edge subgraph under an injective node mapping, exact
// branch and bound.  Score = matched / min(|E1|, |E2|); two empty graphs
// score 1, one empty scores 0.
McsResult mcs(const Graph& a, const Graph& b);

double mcs_score(const Graph& a, const Graph& b);

struct EdgeAlignment {
    int query_edge = 0; // index into query.edges
    bool aligned = false;
    int target_src = -1; // matched target node ids when aligned
    int target_dst = -1;
    int path_length = 0;
};

struct HuntOptions {
    double threshold = 0.3;
    int path_cap = 3;
};

struct HuntResult {
    double score = 0.0;
    bool detected = false;
    std::vector<EdgeAlignment> alignments;
};

// Per-edge alignment of a query graph against a (typically much larger)
// target: an edge aligns when some compatible node pair is connected by a
// directed path of at most path_cap hops whose first hop carries the same
// syscall.  Detected when score strictly exceeds the threshold.
HuntResult hunt(const Graph& query, const Graph& target, const HuntOptions& opts = {});

} // namespace ctigraph
