#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "ctigraph/match.hpp"
#include "ctigraph/pipeline.hpp"

using namespace ctigraph;
namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success (hunt: detected), 1 batch had failures,
// 2 usage or input error, 3 hunt ran but did not detect.
constexpr int kExitBatchFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotDetected = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_disable(PipelineOptions& opts, const std::vector<std::string>& stages) {
    for (const auto& s : stages) {
        if (s == "tokenize-promotion") opts.structural_promotion = false;
        else if (s == "homogenize") opts.homogenize = false;
        else if (s == "to-active") opts.to_active = false;
        else if (s == "esr") opts.ellipsis = false;
        else if (s == "pr") opts.pronouns = false;
        else if (s == "er") opts.entities = false;
        else if (s == "summarize") opts.summarize = false;
    }
}

// sentence-index<TAB>P|N per line; blank lines and '#' comments allowed.
std::map<int, Verdict> load_verdicts(const std::string& path) {
    std::map<int, Verdict> out;
    std::istringstream in(slurp(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        std::string where = path + " line " + std::to_string(lineno);
        if (tab == std::string::npos)
            throw std::runtime_error(where + ": expected index<TAB>P|N");
        int index = 0;
        try {
            index = std::stoi(line.substr(0, tab));
        } catch (const std::exception&) {
            throw std::runtime_error(where + ": bad sentence index");
        }
        std::string v = line.substr(tab + 1);
        if (v == "P") out[index] = Verdict::Productive;
        else if (v == "N") out[index] = Verdict::NonProductive;
        else throw std::runtime_error(where + ": verdict must be P or N");
    }
    return out;
}

struct ExtractJob {
    std::string input;
    std::string stem;
    bool ok = false;
    bool empty_input = false;
    std::string error;
    std::string json;
    std::string dot;
    PipelineStats stats;
};

int run_extract(const std::vector<std::string>& inputs, const std::string& lexicon_dir,
                const std::string& out_dir, const std::string& format,
                const PipelineOptions& opts, int workers, bool stats_tsv) {
    const Lexicon lex = load_lexicon(lexicon_dir);

    std::vector<ExtractJob> jobs(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        jobs[i].input = inputs[i];
        jobs[i].stem = fs::path(inputs[i]).stem().string();
    }

    // Workers only compute; all writing happens afterwards in input order
    // so identical invocations give identical bytes.
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
            ExtractJob& job = jobs[i];
            try {
                std::string text = slurp(job.input);
                job.empty_input = text.find_first_not_of(" \t\r\n") == std::string::npos;
                Graph g = extract_graph(text, job.stem, lex, opts, &job.stats);
                job.json = to_json(g);
                job.dot = to_dot(g);
                job.ok = true;
            } catch (const std::exception& e) {
                job.error = e.what();
            }
        }
    };
    int n = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    if (stats_tsv) std::cout << "file\tsentences_before\tsentences_after\tnodes\tedges\n";
    bool failed = false;
    for (const ExtractJob& job : jobs) {
        if (!job.ok) {
            std::cerr << "error: " << job.input << ": " << job.error << "\n";
            failed = true;
            continue;
        }
        if (job.empty_input)
            std::cerr << "warning: " << job.input << ": empty report, emitting empty graph\n";
        try {
            fs::create_directories(out_dir);
            if (format != "dot") {
                std::ofstream out(fs::path(out_dir) / (job.stem + ".json"), std::ios::binary);
                out << job.json;
            }
            if (format != "json") {
                std::ofstream out(fs::path(out_dir) / (job.stem + ".dot"), std::ios::binary);
                out << job.dot;
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << job.input << ": " << e.what() << "\n";
            failed = true;
            continue;
        }
        if (stats_tsv)
            std::cout << job.input << '\t' << job.stats.sentences_before << '\t'
                      << job.stats.sentences_after << '\t' << job.stats.nodes << '\t'
                      << job.stats.edges << '\n';
        else
            std::cout << job.input << ": sentences " << job.stats.sentences_before << " -> "
                      << job.stats.sentences_after << ", nodes " << job.stats.nodes
                      << ", edges " << job.stats.edges << "\n";
    }
    return failed ? kExitBatchFailure : 0;
}

int run_compare(const std::string& path1, const std::string& path2, bool invert_second,
                const std::string& lexicon_dir) {
    const Lexicon lex = load_lexicon(lexicon_dir);
    Graph g1 = load_graph_file(path1, lex);
    Graph g2 = load_graph_file(path2, lex);
    if (invert_second) g2 = invert_graph(g2, lex);
    std::printf("%.6f\n", mcs_score(g1, g2));
    return 0;
}

int run_hunt(const std::string& query_path, const std::string& target_path,
             const HuntOptions& opts, const std::string& lexicon_dir) {
    const Lexicon lex = load_lexicon(lexicon_dir);
    Graph query = load_graph_file(query_path, lex);
    Graph target = load_graph_file(target_path, lex);
    HuntResult r = hunt(query, target, opts);

    std::printf("score %.6f\n", r.score);
    std::printf("detected %s\n", r.detected ? "yes" : "no");
    for (const EdgeAlignment& a : r.alignments) {
        const Edge& e = query.edges[a.query_edge];
        if (a.aligned)
            std::printf("edge %d %s aligned src=%d dst=%d hops=%d\n", a.query_edge,
                        to_string(e.syscall), a.target_src, a.target_dst, a.path_length);
        else
            std::printf("edge %d %s unaligned\n", a.query_edge, to_string(e.syscall));
    }
    return r.detected ? 0 : kExitNotDetected;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CTI report to provenance graph compiler"};
    app.require_subcommand(1);

    std::string lexicon_dir = CTIGRAPH_DEFAULT_LEXICON_DIR;
    app.add_option("--lexicon-dir", lexicon_dir, "Lexicon data directory")
        ->capture_default_str();

    auto* extract = app.add_subcommand("extract", "Compile report text into graphs");
    std::vector<std::string> inputs;
    std::string out_dir = ".";
    std::string format = "both";
    std::vector<std::string> disable;
    std::string verdicts_path;
    std::string stats_fmt = "plain";
    int esr_window = 5;
    int workers = 1;
    extract->add_option("inputs", inputs, "Report text files")->required();
    extract->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    extract->add_option("--format", format, "Output formats")
        ->check(CLI::IsMember({"dot", "json", "both"}))
        ->capture_default_str();
    extract->add_option("--disable", disable, "Disable a pipeline stage (repeatable)")
        ->check(CLI::IsMember({"tokenize-promotion", "homogenize", "to-active", "esr",
                               "pr", "er", "summarize"}));
    extract->add_option("--esr-window", esr_window, "Subject recovery lookback")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    extract->add_option("--verdicts", verdicts_path,
                        "Per-sentence verdict overrides (index<TAB>P|N)");
    extract->add_option("--workers", workers, "Parallel workers")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    extract->add_option("--stats", stats_fmt, "Stats line format")
        ->check(CLI::IsMember({"plain", "tsv"}))
        ->capture_default_str();

    auto* compare = app.add_subcommand("compare", "Score two graphs with MCS similarity");
    std::string cmp1, cmp2;
    bool invert_second = false;
    compare->add_option("graph1", cmp1, "First graph file")->required();
    compare->add_option("graph2", cmp2, "Second graph file")->required();
    compare->add_flag("--invert-second", invert_second,
                      "Invert the second graph's syscalls before scoring");

    auto* huntcmd = app.add_subcommand("hunt", "Align a query graph against a target");
    std::string query_path, target_path;
    HuntOptions hunt_opts;
    huntcmd->add_option("query", query_path, "Query graph file")->required();
    huntcmd->add_option("target", target_path, "Target graph (.json) or audit log (.csv)")
        ->required();
    huntcmd->add_option("--threshold", hunt_opts.threshold, "Detection threshold")
        ->capture_default_str();
    huntcmd->add_option("--path-cap", hunt_opts.path_cap, "Maximum alignment path length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (extract->parsed()) {
            PipelineOptions opts;
            apply_disable(opts, disable);
            opts.esr_window = esr_window;
            if (!verdicts_path.empty()) opts.summary.overrides = load_verdicts(verdicts_path);
            return run_extract(inputs, lexicon_dir, out_dir, format, opts, workers,
                               stats_fmt == "tsv");
        }
        if (compare->parsed()) return run_compare(cmp1, cmp2, invert_second, lexicon_dir);
        return run_hunt(query_path, target_path, hunt_opts, lexicon_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
