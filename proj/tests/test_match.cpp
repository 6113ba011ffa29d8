#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>

#include "ctigraph/match.hpp"

using namespace ctigraph;

namespace {

const Lexicon& lex() {
    static Lexicon l = load_lexicon(CTIGRAPH_DEFAULT_LEXICON_DIR);
    return l;
}

Graph make_graph(const std::vector<std::pair<std::string, NodeKind>>& nodes,
                 const std::vector<std::tuple<int, int, Syscall>>& edges) {
    Graph g;
    g.source = "t";
    for (std::size_t i = 0; i < nodes.size(); ++i)
        g.nodes.push_back({static_cast<int>(i), nodes[i].first, nodes[i].second, -1});
    int seq = 0;
    for (const auto& [s, d, v] : edges) {
        Edge e;
        e.src = s;
        e.dst = d;
        e.syscall = v;
        e.seq = ++seq;
        g.edges.push_back(e);
    }
    return g;
}

// Independent check: enumerate every injective node map (unmapped allowed)
// and count label-equal edges under it.  Feasible for the sizes used here.
int oracle_mcs(const Graph& a, const Graph& b) {
    std::vector<int> an, bn;
    for (const auto& n : a.nodes) an.push_back(n.id);
    for (const auto& n : b.nodes) bn.push_back(n.id);

    std::map<int, int> assign;
    std::set<int> used;
    int best = 0;

    auto leaf = [&]() {
        std::vector<bool> taken(b.edges.size(), false);
        int count = 0;
        for (const auto& e : a.edges) {
            auto s = assign.find(e.src);
            auto d = assign.find(e.dst);
            if (s == assign.end() || d == assign.end()) continue;
            if (!node_compatible(*a.find_node(e.src), *b.find_node(s->second))) continue;
            if (!node_compatible(*a.find_node(e.dst), *b.find_node(d->second))) continue;
            for (std::size_t j = 0; j < b.edges.size(); ++j) {
                const Edge& f = b.edges[j];
                if (taken[j] || f.syscall != e.syscall) continue;
                if (f.src != s->second || f.dst != d->second) continue;
                taken[j] = true;
                ++count;
                break;
            }
        }
        best = std::max(best, count);
    };

    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == an.size()) {
            leaf();
            return;
        }
        rec(i + 1); // leave an[i] unmapped
        for (int bid : bn) {
            if (used.count(bid)) continue;
            assign[an[i]] = bid;
            used.insert(bid);
            rec(i + 1);
            used.erase(bid);
            assign.erase(an[i]);
        }
    };
    rec(0);
    return best;
}

Graph random_graph(std::mt19937& rng, int max_nodes, int max_edges) {
    static const std::vector<std::pair<std::string, NodeKind>> pool = {
        {"a.exe", NodeKind::Process}, {"b.exe", NodeKind::Process},
        {"*", NodeKind::Process},     {"svc.dll", NodeKind::File},
        {"data.bin", NodeKind::File}, {"*", NodeKind::File},
        {"IP:.*", NodeKind::Socket},  {"10.0.0.5", NodeKind::Socket},
        {"HK\\Run", NodeKind::Registry},
    };
    static const std::vector<Syscall> verbs = {Syscall::Write, Syscall::Read, Syscall::Exec,
                                               Syscall::Connect};

    std::uniform_int_distribution<int> nnodes(1, max_nodes);
    int n = nnodes(rng);
    std::vector<std::pair<std::string, NodeKind>> nodes;
    std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1);
    for (int i = 0; i < n; ++i) nodes.push_back(pool[pick(rng)]);

    std::uniform_int_distribution<int> nedges(0, max_edges);
    std::uniform_int_distribution<int> node_at(0, n - 1);
    std::uniform_int_distribution<int> verb_at(0, static_cast<int>(verbs.size()) - 1);
    std::vector<std::tuple<int, int, Syscall>> edges;
    int m = nedges(rng);
    for (int i = 0; i < m; ++i)
        edges.emplace_back(node_at(rng), node_at(rng), verbs[verb_at(rng)]);
    return make_graph(nodes, edges);
}

} // namespace

TEST_CASE("name matching is case-insensitive and wildcard-aware") {
    CHECK(name_match("Authorization.exe", "authorization.EXE"));
    CHECK(name_match("*", "anything at all"));
    CHECK(name_match("10.13.13.1", "IP:.*"));
    CHECK(name_match("IP:.*", "10.13.13.1"));
    CHECK(name_match("authorization.EXE-*.pf", "authorization.EXE-0AD199D6.pf"));
    CHECK(name_match("TEMP\\*", "TEMP\\Authorization.exe"));
    CHECK_FALSE(name_match("a.exe", "b.exe"));
    CHECK_FALSE(name_match("TEMP\\*", "WINDIR\\x.exe"));
}

TEST_CASE("name matching is symmetric across the name pool") {
    std::vector<std::string> pool = {"a.exe",  "A.EXE",   "*",          "IP:.*",
                                     "10.0.0.5", "TEMP\\*", "TEMP\\x.exe", "b.dll"};
    for (const auto& x : pool)
        for (const auto& y : pool) CHECK(name_match(x, y) == name_match(y, x));
}

TEST_CASE("node compatibility needs the same kind") {
    Node wild{0, "*", NodeKind::Process, -1};
    Node file{1, "x.exe", NodeKind::File, -1};
    Node proc{2, "x.exe", NodeKind::Process, -1};
    CHECK(node_compatible(wild, proc));
    CHECK_FALSE(node_compatible(wild, file));
    CHECK_FALSE(node_compatible(file, proc));
}

TEST_CASE("a graph is fully similar to itself") {
    auto g = make_graph({{"a.exe", NodeKind::Process}, {"f", NodeKind::File},
                         {"1.2.3.4", NodeKind::Socket}},
                        {{0, 1, Syscall::Write}, {0, 2, Syscall::Connect},
                         {1, 0, Syscall::Read}});
    CHECK(mcs_score(g, g) == doctest::Approx(1.0));
}

TEST_CASE("disjoint names without wildcards score zero") {
    auto a = make_graph({{"a.exe", NodeKind::Process}, {"f1", NodeKind::File}},
                        {{0, 1, Syscall::Write}});
    auto b = make_graph({{"b.exe", NodeKind::Process}, {"f2", NodeKind::File}},
                        {{0, 1, Syscall::Write}});
    CHECK(mcs_score(a, b) == doctest::Approx(0.0));
}

TEST_CASE("empty graphs score one together and zero against anything else") {
    Graph e1, e2;
    auto g = make_graph({{"a", NodeKind::Process}, {"f", NodeKind::File}},
                        {{0, 1, Syscall::Write}});
    CHECK(mcs_score(e1, e2) == doctest::Approx(1.0));
    CHECK(mcs_score(e1, g) == doctest::Approx(0.0));
    CHECK(mcs_score(g, e1) == doctest::Approx(0.0));
}

TEST_CASE("an embedded subgraph dominates") {
    auto big = make_graph({{"a.exe", NodeKind::Process},
                           {"f1", NodeKind::File},
                           {"f2", NodeKind::File},
                           {"1.2.3.4", NodeKind::Socket}},
                          {{0, 1, Syscall::Write},
                           {0, 2, Syscall::Unlink},
                           {0, 3, Syscall::Connect},
                           {1, 0, Syscall::Read},
                           {0, 2, Syscall::Write}});
    auto small = make_graph({{"a.exe", NodeKind::Process},
                             {"f1", NodeKind::File},
                             {"1.2.3.4", NodeKind::Socket}},
                            {{0, 1, Syscall::Write}, {0, 2, Syscall::Connect},
                             {1, 0, Syscall::Read}});
    CHECK(mcs_score(small, big) == doctest::Approx(1.0));
    CHECK(mcs_score(big, small) == doctest::Approx(1.0));
}

TEST_CASE("parallel edges cannot share one counterpart") {
    auto two = make_graph({{"a", NodeKind::Process}, {"f", NodeKind::File}},
                          {{0, 1, Syscall::Write}, {0, 1, Syscall::Write}});
    auto one = make_graph({{"a", NodeKind::Process}, {"f", NodeKind::File}},
                          {{0, 1, Syscall::Write}});
    auto r = mcs(two, one);
    CHECK(r.matched_edges == 1);
    CHECK(r.score == doctest::Approx(1.0)); // min edge count is 1
}

TEST_CASE("wildcard nodes let structurally equal graphs match") {
    auto query = make_graph({{"*", NodeKind::Process}, {"IP:.*", NodeKind::Socket}},
                            {{0, 1, Syscall::Connect}});
    auto target = make_graph({{"evil.exe", NodeKind::Process}, {"10.0.0.5", NodeKind::Socket}},
                             {{0, 1, Syscall::Connect}});
    CHECK(mcs_score(query, target) == doctest::Approx(1.0));
}

TEST_CASE("search equals the exhaustive oracle on random graphs") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 120; ++trial) {
        auto a = random_graph(rng, 6, 6);
        auto b = random_graph(rng, 6, 6);
        int expect = oracle_mcs(a, b);
        auto r = mcs(a, b);
        CAPTURE(trial);
        CHECK(r.matched_edges == expect);
        // symmetry rides along for free
        CHECK(mcs(b, a).matched_edges == expect);
    }
}

TEST_CASE("scores stay within the unit interval on random graphs") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        auto a = random_graph(rng, 5, 5);
        auto b = random_graph(rng, 5, 5);
        double s = mcs_score(a, b);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        CHECK(mcs_score(b, a) == doctest::Approx(s));
    }
}

TEST_CASE("hunting an embedded query detects it with full score") {
    auto query = make_graph({{"*", NodeKind::Process},
                             {"sysformat.exe", NodeKind::File},
                             {"IP:.*", NodeKind::Socket}},
                            {{0, 1, Syscall::Write}, {0, 2, Syscall::Connect}});
    auto target = make_graph({{"explorer.exe", NodeKind::Process},
                              {"sysformat.exe", NodeKind::File},
                              {"10.9.8.7", NodeKind::Socket},
                              {"other.dll", NodeKind::File}},
                             {{0, 3, Syscall::Read},
                              {0, 1, Syscall::Write},
                              {0, 2, Syscall::Connect}});
    auto r = hunt(query, target);
    CHECK(r.score == doctest::Approx(1.0));
    CHECK(r.detected);
    REQUIRE(r.alignments.size() == 2);
    CHECK(r.alignments[0].aligned);
    CHECK(r.alignments[0].path_length == 1);
    CHECK(r.alignments[0].target_src == 0);
    CHECK(r.alignments[0].target_dst == 1);
}

TEST_CASE("no compatible nodes means no detection") {
    auto query = make_graph({{"q.exe", NodeKind::Process}, {"qf", NodeKind::File}},
                            {{0, 1, Syscall::Write}});
    auto target = make_graph({{"t.exe", NodeKind::Process}, {"tf", NodeKind::File}},
                             {{0, 1, Syscall::Write}});
    auto r = hunt(query, target);
    CHECK(r.score == doctest::Approx(0.0));
    CHECK_FALSE(r.detected);
    CHECK_FALSE(r.alignments[0].aligned);
}

TEST_CASE("indirect flows align through short causal paths") {
    // query wants a.exe writing into f2; the target routes it through f1
    auto query = make_graph({{"a.exe", NodeKind::Process}, {"f2", NodeKind::File}},
                            {{0, 1, Syscall::Write}});
    auto target = make_graph({{"a.exe", NodeKind::Process},
                              {"f1", NodeKind::File},
                              {"b.exe", NodeKind::Process},
                              {"f2", NodeKind::File}},
                             {{0, 1, Syscall::Write},
                              {1, 2, Syscall::Read},
                              {2, 3, Syscall::Write}});
    auto r = hunt(query, target);
    CHECK(r.score == doctest::Approx(1.0));
    CHECK(r.alignments[0].path_length == 3);

    HuntOptions tight;
    tight.path_cap = 2;
    auto r2 = hunt(query, target, tight);
    CHECK(r2.score == doctest::Approx(0.0));
}

TEST_CASE("the first hop must carry the query syscall") {
    auto query = make_graph({{"a.exe", NodeKind::Process}, {"c", NodeKind::File}},
                            {{0, 1, Syscall::Exec}});
    auto target = make_graph({{"a.exe", NodeKind::Process},
                              {"b", NodeKind::File},
                              {"c", NodeKind::File}},
                             {{0, 1, Syscall::Write}, {1, 2, Syscall::Exec}});
    // a exec-reaches nothing: its only outgoing edge is a write
    auto r = hunt(query, target);
    CHECK(r.score == doctest::Approx(0.0));
}

TEST_CASE("partial alignment yields the aligned fraction") {
    auto query = make_graph({{"a.exe", NodeKind::Process},
                             {"f1", NodeKind::File},
                             {"f2", NodeKind::File},
                             {"f3", NodeKind::File},
                             {"f4", NodeKind::File}},
                            {{0, 1, Syscall::Write},
                             {0, 2, Syscall::Write},
                             {0, 3, Syscall::Unlink},
                             {0, 4, Syscall::Unlink}});
    auto target = make_graph({{"a.exe", NodeKind::Process},
                              {"f1", NodeKind::File},
                              {"f3", NodeKind::File}},
                             {{0, 1, Syscall::Write}, {0, 2, Syscall::Unlink}});
    auto r = hunt(query, target);
    CHECK(r.score == doctest::Approx(0.5));
    CHECK(r.detected); // 0.5 > 0.3
    CHECK(r.alignments[0].aligned);
    CHECK_FALSE(r.alignments[1].aligned);
}

TEST_CASE("detection needs a score strictly over the threshold") {
    // exactly 3 of 10 query edges alignable: score 0.3 is not enough
    std::vector<std::pair<std::string, NodeKind>> qnodes = {{"a.exe", NodeKind::Process}};
    std::vector<std::tuple<int, int, Syscall>> qedges;
    for (int i = 0; i < 10; ++i) {
        qnodes.push_back({"f" + std::to_string(i), NodeKind::File});
        qedges.emplace_back(0, i + 1, Syscall::Write);
    }
    auto query = make_graph(qnodes, qedges);
    auto target = make_graph({{"a.exe", NodeKind::Process},
                              {"f0", NodeKind::File},
                              {"f1", NodeKind::File},
                              {"f2", NodeKind::File}},
                             {{0, 1, Syscall::Write},
                              {0, 2, Syscall::Write},
                              {0, 3, Syscall::Write}});
    auto r = hunt(query, target);
    CHECK(r.score == doctest::Approx(0.3));
    CHECK_FALSE(r.detected);

    HuntOptions lower;
    lower.threshold = 0.29;
    CHECK(hunt(query, target, lower).detected);
}

TEST_CASE("growing the target never lowers the hunt score") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> verb_at(0, 3);
    static const std::vector<Syscall> verbs = {Syscall::Write, Syscall::Read, Syscall::Exec,
                                               Syscall::Connect};
    int tried = 0;
    for (int trial = 0; trial < 80; ++trial) {
        auto query = random_graph(rng, 4, 4);
        if (query.edges.empty()) continue;
        ++tried;
        auto target = random_graph(rng, 6, 6);
        double before = hunt(query, target).score;

        auto grown = target;
        std::uniform_int_distribution<int> node_at(0, static_cast<int>(grown.nodes.size()) - 1);
        grown.nodes.push_back({static_cast<int>(grown.nodes.size()), "extra.exe",
                               NodeKind::Process, -1});
        for (int k = 0; k < 3; ++k) {
            Edge e;
            e.src = grown.nodes[node_at(rng)].id;
            e.dst = grown.nodes.back().id;
            e.syscall = verbs[verb_at(rng)];
            e.seq = static_cast<int>(grown.edges.size()) + 1;
            grown.edges.push_back(e);
        }
        double after = hunt(query, grown).score;
        CAPTURE(trial);
        CHECK(after >= before);
    }
    CHECK(tried > 40);
}

TEST_CASE("hunting with an empty query is an error") {
    Graph empty;
    auto target = make_graph({{"a", NodeKind::Process}, {"f", NodeKind::File}},
                             {{0, 1, Syscall::Write}});
    CHECK_THROWS_AS(hunt(empty, target), std::invalid_argument);
}
