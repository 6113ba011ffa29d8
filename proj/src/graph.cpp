#include "ctigraph/graph.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ctigraph {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* shape_for(NodeKind k) {
    switch (k) {
    case NodeKind::File: return "rectangle";
    case NodeKind::Process: return "oval";
    case NodeKind::Registry: return "pentagon";
    case NodeKind::Socket: return "diamond";
    }
    return "rectangle";
}

// DOT double-quoted strings treat backslash as an escape; entity names are
// full of path separators.
std::string dot_quote(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::vector<Node> nodes_by_id(const Graph& g) {
    auto nodes = g.nodes;
    std::sort(nodes.begin(), nodes.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });
    return nodes;
}

std::vector<Edge> edges_by_seq(const Graph& g) {
    auto edges = g.edges;
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.seq < b.seq; });
    return edges;
}

std::string trim_copy(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

} // namespace

const Node* Graph::find_node(int id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

Graph build_graph(const std::vector<Frame>& frames, const Lexicon& lex,
                  const std::string& source) {
    Graph g;
    g.source = source;

    std::map<std::pair<std::string, int>, int> shared; // (name, kind) -> id
    int run_node = -1;
    int runs = 0;

    auto shared_id = [&](const std::string& name, NodeKind kind) {
        auto key = std::make_pair(name, static_cast<int>(kind));
        auto it = shared.find(key);
        if (it != shared.end()) return it->second;
        Node n;
        n.id = static_cast<int>(g.nodes.size());
        n.name = name;
        n.kind = kind;
        g.nodes.push_back(n);
        shared.emplace(key, n.id);
        return n.id;
    };

    int seq = 0;
    for (const auto& f : frames) {
        ++seq;

        // Unnamed acting processes merge only while they stay contiguous; a
        // named agent ends the run and the next wildcard is a fresh actor.
        int agent_id;
        if (f.agent.wildcard) {
            if (run_node < 0) {
                Node n;
                n.id = static_cast<int>(g.nodes.size());
                n.name = "*";
                n.kind = f.agent.kind;
                n.run = runs++;
                g.nodes.push_back(n);
                run_node = n.id;
            }
            agent_id = run_node;
        } else {
            run_node = -1;
            agent_id = shared_id(f.agent.name, f.agent.kind);
        }
        int patient_id = shared_id(f.patient.name, f.patient.kind);

        Edge e;
        e.syscall = f.verb;
        e.seq = seq;
        e.sentence = f.sentence_index;
        e.conditional = f.conditional;
        bool subject_first =
            lex.directions.direction(f.verb) == FlowDirection::SubjectToObject;
        e.src = subject_first ? agent_id : patient_id;
        e.dst = subject_first ? patient_id : agent_id;
        g.edges.push_back(e);
    }
    return g;
}

Graph invert_graph(const Graph& g, const Lexicon& lex) {
    Graph out = g;
    for (auto& e : out.edges) e.syscall = lex.antonyms.invert(e.syscall);
    return out;
}

std::string to_json(const Graph& g) {
    ordered_json j;
    j["version"] = 1;
    j["source"] = g.source;
    j["nodes"] = ordered_json::array();
    for (const auto& n : nodes_by_id(g)) {
        ordered_json jn;
        jn["id"] = n.id;
        jn["name"] = n.name;
        jn["kind"] = to_string(n.kind);
        j["nodes"].push_back(std::move(jn));
    }
    j["edges"] = ordered_json::array();
    for (const auto& e : edges_by_seq(g)) {
        ordered_json je;
        je["src"] = e.src;
        je["dst"] = e.dst;
        je["syscall"] = to_string(e.syscall);
        je["seq"] = e.seq;
        je["sentence"] = e.sentence;
        j["edges"].push_back(std::move(je));
    }
    return j.dump(2) + "\n";
}

Graph from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("graph JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("graph JSON: top level is not an object");
    if (!j.contains("version"))
        throw std::runtime_error("graph JSON: missing version, expected version 1");
    if (!j["version"].is_number_integer() || j["version"].get<int>() != 1)
        throw std::runtime_error("graph JSON: unsupported version " + j["version"].dump() +
                                 ", expected version 1");

    Graph g;
    g.source = j.value("source", std::string());
    for (const auto& jn : j.value("nodes", ordered_json::array())) {
        Node n;
        n.id = jn.at("id").get<int>();
        n.name = jn.at("name").get<std::string>();
        auto kind = node_kind_from_string(jn.at("kind").get<std::string>());
        if (!kind)
            throw std::runtime_error("graph JSON: unknown node kind \"" +
                                     jn.at("kind").get<std::string>() + "\"");
        n.kind = *kind;
        g.nodes.push_back(std::move(n));
    }
    for (const auto& je : j.value("edges", ordered_json::array())) {
        Edge e;
        e.src = je.at("src").get<int>();
        e.dst = je.at("dst").get<int>();
        auto sc = syscall_from_string(je.at("syscall").get<std::string>());
        if (!sc)
            throw std::runtime_error("graph JSON: unknown syscall \"" +
                                     je.at("syscall").get<std::string>() + "\"");
        e.syscall = *sc;
        e.seq = je.at("seq").get<int>();
        e.sentence = je.at("sentence").get<int>();
        if (!g.find_node(e.src) || !g.find_node(e.dst))
            throw std::runtime_error("graph JSON: edge seq " + std::to_string(e.seq) +
                                     " references a missing node");
        g.edges.push_back(e);
    }
    return g;
}

std::string to_dot(const Graph& g) {
    std::string out = "digraph \"" + dot_quote(g.source) + "\" {\n";
    for (const auto& n : nodes_by_id(g)) {
        out += "  n" + std::to_string(n.id) + " [label=\"" + dot_quote(n.name) +
               "\", shape=" + shape_for(n.kind) + "];\n";
    }
    for (const auto& e : edges_by_seq(g)) {
        out += "  n" + std::to_string(e.src) + " -> n" + std::to_string(e.dst) +
               " [label=\"" + std::to_string(e.seq) + ": " + to_string(e.syscall) + "\"";
        if (e.conditional) out += ", style=dashed";
        out += "];\n";
    }
    out += "}\n";
    return out;
}

Graph from_audit_csv(const std::string& text, const Lexicon& lex,
                     const std::string& source) {
    Graph g;
    g.source = source;

    std::map<std::pair<std::string, int>, int> shared;
    auto shared_id = [&](const std::string& name, NodeKind kind) {
        auto key = std::make_pair(name, static_cast<int>(kind));
        auto it = shared.find(key);
        if (it != shared.end()) return it->second;
        Node n;
        n.id = static_cast<int>(g.nodes.size());
        n.name = name;
        n.kind = kind;
        g.nodes.push_back(n);
        shared.emplace(key, n.id);
        return n.id;
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = trim_copy(line);
        if (stripped.empty() || stripped[0] == '#') continue;

        std::vector<std::string> fields;
        std::string field;
        std::istringstream row(stripped);
        while (std::getline(row, field, ',')) fields.push_back(trim_copy(field));
        auto fail = [&](const std::string& why) {
            throw std::runtime_error("audit csv line " + std::to_string(lineno) + ": " + why);
        };
        if (fields.size() != 6)
            fail("expected subject,action,object,kind_s,kind_o,seq, got " +
                 std::to_string(fields.size()) + " fields");

        // Action accepts canonical names and dictionary synonyms alike.
        auto sc = syscall_from_string(fields[1]);
        if (!sc) sc = lex.syscalls.canonical(lex.lemma(fields[1]));
        if (!sc) fail("unknown action \"" + fields[1] + "\"");
        auto kind_s = node_kind_from_string(fields[3]);
        if (!kind_s) fail("unknown subject kind \"" + fields[3] + "\"");
        auto kind_o = node_kind_from_string(fields[4]);
        if (!kind_o) fail("unknown object kind \"" + fields[4] + "\"");
        int seq = 0;
        try {
            seq = std::stoi(fields[5]);
        } catch (const std::exception&) {
            fail("bad seq \"" + fields[5] + "\"");
        }

        int subject_id = shared_id(fields[0], *kind_s);
        int object_id = shared_id(fields[2], *kind_o);

        Edge e;
        e.syscall = *sc;
        e.seq = seq;
        bool subject_first =
            lex.directions.direction(*sc) == FlowDirection::SubjectToObject;
        e.src = subject_first ? subject_id : object_id;
        e.dst = subject_first ? object_id : subject_id;
        g.edges.push_back(e);
    }
    return g;
}

Graph load_graph_file(const std::string& path, const Lexicon& lex) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();

    std::string ext = std::filesystem::path(path).extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".json") return from_json(buf.str());
    if (ext == ".csv")
        return from_audit_csv(buf.str(), lex, std::filesystem::path(path).stem().string());
    throw std::runtime_error("unsupported graph file extension \"" + ext +
                             "\" (expected .json or .csv): " + path);
}

} // namespace ctigraph
