#include "ctigraph/match.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace ctigraph {

namespace {

std::string fold(const std::string& s) {
    std::string out = s;
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// '*' glob over already-folded text, classic two-pointer backtracking.
bool glob_match(const std::string& pat, const std::string& text) {
    std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
    while (t < text.size()) {
        if (p < pat.size() && pat[p] == text[t]) {
            ++p;
            ++t;
        } else if (p < pat.size() && pat[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pat.size() && pat[p] == '*') ++p;
    return p == pat.size();
}

// "*" and pattern names like "IP:.*" stand for any entity of their kind.
bool typed_wildcard(const std::string& folded) {
    return folded == "*" || folded.ends_with(":.*");
}

struct McsState {
    const Graph* s = nullptr; // the side with fewer edges
    const Graph* t = nullptr;
    std::map<int, int> node_map; // s node id -> t node id
    std::set<int> used_t_nodes;
    std::vector<bool> used_t_edge;
    int best = 0;
};

void mcs_search(McsState& st, std::size_t i, int matched) {
    const auto& se = st.s->edges;
    if (matched + static_cast<int>(se.size() - i) <= st.best) return;
    if (i == se.size()) {
        st.best = std::max(st.best, matched);
        return;
    }

    const Edge& e = se[i];
    const Node* qs = st.s->find_node(e.src);
    const Node* qd = st.s->find_node(e.dst);
    for (std::size_t j = 0; j < st.t->edges.size(); ++j) {
        if (st.used_t_edge[j]) continue;
        const Edge& f = st.t->edges[j];
        if (f.syscall != e.syscall) continue;

        auto sit = st.node_map.find(e.src);
        bool src_new = sit == st.node_map.end();
        if (!src_new && sit->second != f.src) continue;
        if (src_new && (st.used_t_nodes.count(f.src) ||
                        !node_compatible(*qs, *st.t->find_node(f.src))))
            continue;
        if (src_new) {
            st.node_map.emplace(e.src, f.src);
            st.used_t_nodes.insert(f.src);
        }

        // dst is checked after src is bound so shared endpoints stay consistent
        auto dit = st.node_map.find(e.dst);
        bool dst_new = dit == st.node_map.end();
        bool ok = dst_new ? !st.used_t_nodes.count(f.dst) &&
                                node_compatible(*qd, *st.t->find_node(f.dst))
                          : dit->second == f.dst;
        if (ok) {
            if (dst_new) {
                st.node_map.emplace(e.dst, f.dst);
                st.used_t_nodes.insert(f.dst);
            }
            st.used_t_edge[j] = true;
            mcs_search(st, i + 1, matched + 1);
            st.used_t_edge[j] = false;
            if (dst_new) {
                st.node_map.erase(e.dst);
                st.used_t_nodes.erase(f.dst);
            }
        }
        if (src_new) {
            st.node_map.erase(e.src);
            st.used_t_nodes.erase(f.src);
        }
    }

    mcs_search(st, i + 1, matched); // leave edge i unmatched
}

} // namespace

bool name_match(const std::string& a, const std::string& b) {
    std::string fa = fold(a), fb = fold(b);
    if (fa == fb) return true;
    if (typed_wildcard(fa) || typed_wildcard(fb)) return true;
    if (fa.find('*') != std::string::npos && glob_match(fa, fb)) return true;
    if (fb.find('*') != std::string::npos && glob_match(fb, fa)) return true;
    return false;
}

bool node_compatible(const Node& a, const Node& b) {
    return a.kind == b.kind && name_match(a.name, b.name);
}

McsResult mcs(const Graph& a, const Graph& b) {
    McsResult r;
    std::size_t mn = std::min(a.edges.size(), b.edges.size());
    if (mn == 0) {
        r.score = (a.edges.empty() && b.edges.empty()) ? 1.0 : 0.0;
        return r;
    }

    McsState st;
    st.s = a.edges.size() <= b.edges.size() ? &a : &b;
    st.t = st.s == &a ? &b : &a;
    st.used_t_edge.assign(st.t->edges.size(), false);
    mcs_search(st, 0, 0);

    r.matched_edges = st.best;
    r.score = static_cast<double>(st.best) / static_cast<double>(mn);
    return r;
}

double mcs_score(const Graph& a, const Graph& b) { return mcs(a, b).score; }

HuntResult hunt(const Graph& query, const Graph& target, const HuntOptions& opts) {
    if (query.edges.empty())
        throw std::invalid_argument("hunt: query graph has no edges");
    if (opts.path_cap < 1) throw std::invalid_argument("hunt: path cap must be at least 1");

    std::map<int, std::vector<const Edge*>> out;
    for (const auto& f : target.edges) out[f.src].push_back(&f);

    HuntResult r;
    int aligned = 0;
    for (std::size_t i = 0; i < query.edges.size(); ++i) {
        const Edge& e = query.edges[i];
        const Node* qs = query.find_node(e.src);
        const Node* qd = query.find_node(e.dst);

        EdgeAlignment al;
        al.query_edge = static_cast<int>(i);
        for (const auto& f : target.edges) {
            if (al.aligned) break;
            if (f.syscall != e.syscall) continue;
            const Node* ts = target.find_node(f.src);
            if (!qs || !ts || !node_compatible(*qs, *ts)) continue;

            // the first hop fixes the syscall; the rest is any causal path
            std::map<int, int> dist;
            std::vector<int> frontier{f.dst};
            dist[f.dst] = 1;
            for (std::size_t head = 0; head < frontier.size(); ++head) {
                int nid = frontier[head];
                int d = dist[nid];
                const Node* tn = target.find_node(nid);
                if (qd && tn && node_compatible(*qd, *tn)) {
                    al.aligned = true;
                    al.target_src = f.src;
                    al.target_dst = nid;
                    al.path_length = d;
                    break;
                }
                if (d >= opts.path_cap) continue;
                auto it = out.find(nid);
                if (it == out.end()) continue;
                for (const Edge* next : it->second) {
                    if (dist.count(next->dst)) continue;
                    dist[next->dst] = d + 1;
                    frontier.push_back(next->dst);
                }
            }
        }
        if (al.aligned) ++aligned;
        r.alignments.push_back(al);
    }

    r.score = static_cast<double>(aligned) / static_cast<double>(query.edges.size());
    r.detected = r.score > opts.threshold;
    return r;
}

} // namespace ctigraph
