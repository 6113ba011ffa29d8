#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ctigraph/match.hpp"
#include "ctigraph/pipeline.hpp"

namespace py = pybind11;
using namespace ctigraph;

namespace {

std::string default_lexicon_dir() {
    if (const char* env = std::getenv("CTIGRAPH_LEXICON_DIR")) return env;
    return CTIGRAPH_DEFAULT_LEXICON_DIR;
}

PipelineOptions make_options(const std::vector<std::string>& disable, int esr_window,
                             const std::map<int, std::string>& verdicts) {
    PipelineOptions opts;
    opts.esr_window = esr_window;
    for (const auto& s : disable) {
        if (s == "tokenize-promotion") opts.structural_promotion = false;
        else if (s == "homogenize") opts.homogenize = false;
        else if (s == "to-active") opts.to_active = false;
        else if (s == "esr") opts.ellipsis = false;
        else if (s == "pr") opts.pronouns = false;
        else if (s == "er") opts.entities = false;
        else if (s == "summarize") opts.summarize = false;
        else throw std::invalid_argument("unknown stage '" + s + "'");
    }
    for (const auto& [index, v] : verdicts) {
        if (v == "P") opts.summary.overrides[index] = Verdict::Productive;
        else if (v == "N") opts.summary.overrides[index] = Verdict::NonProductive;
        else throw std::invalid_argument("verdict must be 'P' or 'N'");
    }
    return opts;
}

} // namespace

PYBIND11_MODULE(_ctigraph, m) {
    m.doc() = "CTI report to provenance graph compiler";

    py::enum_<NodeKind>(m, "NodeKind")
        .value("File", NodeKind::File)
        .value("Process", NodeKind::Process)
        .value("Registry", NodeKind::Registry)
        .value("Socket", NodeKind::Socket);

    py::enum_<Syscall>(m, "Syscall")
        .value("Write", Syscall::Write)
        .value("Read", Syscall::Read)
        .value("Unlink", Syscall::Unlink)
        .value("Send", Syscall::Send)
        .value("Receive", Syscall::Receive)
        .value("Connect", Syscall::Connect)
        .value("Fork", Syscall::Fork)
        .value("Exec", Syscall::Exec)
        .value("Exit", Syscall::Exit)
        .value("Mmap", Syscall::Mmap);

    py::class_<Lexicon>(m, "Lexicon")
        .def(py::init([](const std::string& dir) {
                 return load_lexicon(dir.empty() ? default_lexicon_dir() : dir);
             }),
             py::arg("dir") = "");

    py::class_<Node>(m, "Node")
        .def_readonly("id", &Node::id)
        .def_readonly("name", &Node::name)
        .def_readonly("kind", &Node::kind)
        .def("__repr__", [](const Node& n) {
            return "<Node " + std::to_string(n.id) + " '" + n.name + "'>";
        });

    py::class_<Edge>(m, "Edge")
        .def_readonly("src", &Edge::src)
        .def_readonly("dst", &Edge::dst)
        .def_readonly("syscall", &Edge::syscall)
        .def_readonly("seq", &Edge::seq)
        .def_readonly("sentence", &Edge::sentence)
        .def_readonly("conditional", &Edge::conditional);

    py::class_<Graph>(m, "Graph")
        .def_readonly("source", &Graph::source)
        .def_readonly("nodes", &Graph::nodes)
        .def_readonly("edges", &Graph::edges)
        .def("to_json", [](const Graph& g) { return to_json(g); })
        .def("to_dot", [](const Graph& g) { return to_dot(g); })
        .def("__repr__", [](const Graph& g) {
            return "<Graph source='" + g.source + "' nodes=" +
                   std::to_string(g.nodes.size()) + " edges=" +
                   std::to_string(g.edges.size()) + ">";
        });

    py::class_<McsResult>(m, "McsResult")
        .def_readonly("matched_edges", &McsResult::matched_edges)
        .def_readonly("score", &McsResult::score);

    py::class_<EdgeAlignment>(m, "EdgeAlignment")
        .def_readonly("query_edge", &EdgeAlignment::query_edge)
        .def_readonly("aligned", &EdgeAlignment::aligned)
        .def_readonly("target_src", &EdgeAlignment::target_src)
        .def_readonly("target_dst", &EdgeAlignment::target_dst)
        .def_readonly("path_length", &EdgeAlignment::path_length);

    py::class_<HuntResult>(m, "HuntResult")
        .def_readonly("score", &HuntResult::score)
        .def_readonly("detected", &HuntResult::detected)
        .def_readonly("alignments", &HuntResult::alignments);

    m.def(
        "_extract",
        [](const std::string& text, const std::string& source, const Lexicon& lex,
           const std::vector<std::string>& disable, int esr_window,
           const std::map<int, std::string>& verdicts) {
            PipelineStats stats;
            Graph g = extract_graph(text, source, lex,
                                    make_options(disable, esr_window, verdicts), &stats);
            py::dict d;
            d["sentences_before"] = stats.sentences_before;
            d["sentences_after"] = stats.sentences_after;
            d["nodes"] = stats.nodes;
            d["edges"] = stats.edges;
            return py::make_tuple(g, d);
        },
        py::arg("text"), py::arg("source"), py::arg("lexicon"), py::arg("disable"),
        py::arg("esr_window"), py::arg("verdicts"));

    m.def("from_json", [](const std::string& text) { return from_json(text); },
          py::arg("text"));
    m.def("load_graph_file",
          [](const std::string& path, const Lexicon& lex) {
              return load_graph_file(path, lex);
          },
          py::arg("path"), py::arg("lexicon"));
    m.def("invert", &invert_graph, py::arg("graph"), py::arg("lexicon"));
    m.def("mcs", &mcs, py::arg("a"), py::arg("b"));
    m.def("mcs_score", &mcs_score, py::arg("a"), py::arg("b"));
    m.def("name_match", &name_match, py::arg("a"), py::arg("b"));
    m.def(
        "hunt",
        [](const Graph& query, const Graph& target, double threshold, int path_cap) {
            HuntOptions opts;
            opts.threshold = threshold;
            opts.path_cap = path_cap;
            return hunt(query, target, opts);
        },
        py::arg("query"), py::arg("target"), py::arg("threshold") = 0.3,
        py::arg("path_cap") = 3);
}
