#include "colnet/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "colnet/generators.hpp"
#include "colnet/oracle.hpp"
#include "colnet/protocol.hpp"

namespace colnet::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

std::string join_ints(const std::vector<int>& values, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(values[i]);
    }
    return out;
}

std::string simulate_json(const std::string& task, const ProtocolRun& run) {
    std::string out = "{\"task\":\"" + task + "\",\"status\":\"";
    if (run.outcomes.front().kind == NodeOutcome::Kind::kUnsolvable) {
        return out + "unsolvable\",\"rounds\":" + std::to_string(run.rounds) + "}";
    }
    out += "solved\",\"rounds\":" + std::to_string(run.rounds) + ",\"outputs\":[";
    for (std::size_t v = 0; v < run.outcomes.size(); ++v) {
        const NodeOutcome& o = run.outcomes[v];
        if (v) out += ",";
        if (o.kind == NodeOutcome::Kind::kLeaderPath) {
            out += "{\"node\":" + std::to_string(v) + ",\"path\":[" + join_ints(o.leader_path, ",") + "]}";
        } else {
            out += "{\"node\":" + std::to_string(v) + ",\"topology\":" + o.topology->to_json() +
                   ",\"self\":" + std::to_string(o.self_class) + "}";
        }
    }
    return out + "]}";
}

std::string simulate_csv(const ProtocolRun& run) {
    std::string out = "node,status,path,self\n";
    for (std::size_t v = 0; v < run.outcomes.size(); ++v) {
        const NodeOutcome& o = run.outcomes[v];
        out += std::to_string(v);
        switch (o.kind) {
            case NodeOutcome::Kind::kUnsolvable:
                out += ",unsolvable,,";
                break;
            case NodeOutcome::Kind::kLeaderPath:
                out += ",leader," + join_ints(o.leader_path, "-") + ",";
                break;
            case NodeOutcome::Kind::kTopology:
                out += ",topology,," + std::to_string(o.self_class);
                break;
        }
        out += "\n";
    }
    return out;
}

}  // namespace

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    try {
        const ParsedNetwork parsed = parse_network(read_file(path));
        out << "ok: " << parsed.net.node_count() << " nodes, " << parsed.net.edge_count() << " edges, "
            << parsed.col.color_count << " colors\n";
        return 0;
    } catch (const std::exception& e) {
        err << "invalid: " << e.what() << "\n";
        return 1;
    }
}

int cmd_oracle(const std::string& path, int k, int alpha, std::ostream& out, std::ostream& err) {
    try {
        const ParsedNetwork parsed = parse_network(read_file(path));
        const OracleReport report = oracle_report(parsed.net, parsed.col, k, alpha);
        out << "{\"quotient\":" << report.quotient.q.to_json() << ",\"t_star\":" << report.quotient.t_star
            << ",\"sigma\":" << report.quotient.sigma << ",\"feasible\":" << (report.solvable ? "true" : "false")
            << ",\"leader\":" << (report.leader >= 0 ? std::to_string(report.leader) : "null") << "}\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const ParsedNetwork parsed = parse_network(read_file(options.path));
        if (!validate_color_bound(parsed.col, options.alpha, options.k)) {
            err << "warning: k=" << options.k << " is below the true size of color " << options.alpha
                << "; results are unreliable\n";
            if (options.strict) return 3;
        }
        ProtocolConfig config{options.k, options.alpha, task_from_name(options.task)};
        ProtocolRun run;
        try {
            run = run_protocol(parsed.net, parsed.col, config, options.max_rounds,
                               !options.transcript_path.empty());
        } catch (const RoundLimitError& e) {
            err << "error: " << e.what() << " (nodes";
            for (int v : e.unfinished()) err << " " << v;
            err << ")\n";
            return 2;
        }
        if (!options.transcript_path.empty()) write_file(options.transcript_path, run.transcript.to_jsonl());
        const std::string text =
            options.format == "csv" ? simulate_csv(run) : simulate_json(options.task, run) + "\n";
        if (options.out_path.empty()) {
            out << text;
        } else {
            write_file(options.out_path, text);
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

// mismatch list for one file, empty when protocol and oracle agree
std::vector<std::string> compare_one(const ParsedNetwork& parsed, int k, int alpha) {
    std::vector<std::string> diffs;
    for (const Task task : {Task::kLeaderElection, Task::kTopology}) {
        const std::vector<NodeOutcome> expected = oracle_solve(parsed.net, parsed.col, k, alpha, task);
        const ProtocolRun run = run_protocol(parsed.net, parsed.col, {k, alpha, task});
        const bool oracle_solvable = expected.front().kind != NodeOutcome::Kind::kUnsolvable;
        const bool protocol_solvable = run.outcomes.front().kind != NodeOutcome::Kind::kUnsolvable;
        if (oracle_solvable != protocol_solvable) {
            diffs.push_back(task_name(task) + ": verdict mismatch");
            continue;
        }
        if (!oracle_solvable) continue;
        if (task == Task::kTopology) {
            for (std::size_t v = 0; v < expected.size(); ++v) {
                if (!(expected[v] == run.outcomes[v])) {
                    diffs.push_back("top: node " + std::to_string(v) + " topology or position mismatch");
                    break;
                }
            }
        } else {
            auto walk = [&](int v, const std::vector<int>& ports) {
                int cur = v;
                for (int p : ports) cur = parsed.net.neighbor(cur, p).node;
                return cur;
            };
            for (std::size_t v = 0; v < expected.size(); ++v) {
                const int want = walk(static_cast<int>(v), expected[v].leader_path);
                const int got = walk(static_cast<int>(v), run.outcomes[v].leader_path);
                if (want != got) {
                    diffs.push_back("le: node " + std::to_string(v) + " walks to " + std::to_string(got) +
                                    ", oracle leader is " + std::to_string(want));
                    break;
                }
            }
        }
    }
    return diffs;
}

}  // namespace

int cmd_compare(const std::string& path, int k, int alpha, std::ostream& out, std::ostream& err) {
    try {
        if (std::filesystem::is_directory(path)) {
            std::vector<std::string> files;
            for (const auto& entry : std::filesystem::directory_iterator(path)) {
                if (entry.path().extension() == ".net") files.push_back(entry.path().string());
            }
            std::sort(files.begin(), files.end());
            out << "file,agree,detail\n";
            bool all_agree = true;
            for (const std::string& file : files) {
                const std::vector<std::string> diffs = compare_one(parse_network(read_file(file)), k, alpha);
                all_agree = all_agree && diffs.empty();
                out << file << "," << (diffs.empty() ? "yes" : "no") << ","
                    << (diffs.empty() ? "" : diffs.front()) << "\n";
            }
            return all_agree ? 0 : 1;
        }
        const std::vector<std::string> diffs = compare_one(parse_network(read_file(path)), k, alpha);
        if (diffs.empty()) {
            out << "{\"file\":\"" << path << "\",\"agree\":true}\n";
            return 0;
        }
        out << "{\"file\":\"" << path << "\",\"agree\":false,\"diff\":[";
        for (std::size_t i = 0; i < diffs.size(); ++i) out << (i ? "," : "") << "\"" << diffs[i] << "\"";
        out << "]}\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

void bench_row(std::ostream& out, const PortNetwork& net, const Coloring& col, int k, int alpha) {
    const int diam = diameter(net);
    const ProtocolRun run = run_protocol(net, col, {k, alpha, Task::kLeaderElection});
    const long long bound = 2LL * (k + 1) * (diam + 1) + diam;
    out << net.node_count() << "," << diam << "," << k << "," << run.rounds << "," << bound << ","
        << run.refine_steps << "\n";
}

}  // namespace

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
    try {
        out << "n,D,k,rounds,bound,i\n";
        if (options.family == "chordal") {
            const PortNetwork net = gen_chordal(options.n, options.d);
            const Coloring col = single_alpha_coloring(options.n, 0);
            for (int k = options.k_min; k <= options.k_max; ++k) bench_row(out, net, col, k, 1);
        } else if (options.family == "ring") {
            for (int n = options.n_min; n <= options.n_max; n += options.n_step) {
                const ParsedNetwork ring = gen_ring({n, {{0, 1}}, single_alpha_coloring(n, 0).color});
                bench_row(out, ring.net, ring.col, options.k, 1);
            }
        } else if (options.family == "stretch") {
            RingSpec base;
            base.n = 0;
            base.colors.clear();
            for (std::size_t j = 0; j < options.sizes.size(); ++j) {
                base.n += options.sizes[j];
                for (int c = 0; c < options.sizes[j]; ++c) base.colors.push_back(static_cast<int>(j) + 1);
            }
            for (int t = options.t_min; t <= options.t_max; ++t) {
                const int laps = (t + base.n - 1) / base.n;
                std::vector<int> targets(options.sizes.size());
                for (std::size_t j = 0; j < options.sizes.size(); ++j) {
                    targets[j] = (2 * laps + 1) * options.sizes[j];
                }
                const StretchResult stretched = gen_stretch(base, t, targets);
                bench_row(out, stretched.net, stretched.col, targets[0], 1);
            }
        } else {
            err << "error: unknown bench family '" << options.family << "'\n";
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err) {
    try {
        auto emit = [&](const PortNetwork& net, const Coloring& col, const std::string& path) {
            const std::string text = serialize_network(net, col);
            if (path.empty()) {
                out << text;
            } else {
                write_file(path, text);
            }
        };
        if (options.family == "ring") {
            RingSpec spec{options.n, options.pattern.empty() ? std::vector<std::pair<int, int>>{{0, 1}} : options.pattern,
                          options.colors};
            if (options.single_alpha) spec.colors = single_alpha_coloring(options.n, 0).color;
            const ParsedNetwork ring = gen_ring(spec);
            emit(ring.net, ring.col, options.out_path);
        } else if (options.family == "chordal") {
            const PortNetwork net = gen_chordal(options.n, options.d);
            Coloring col = options.single_alpha ? single_alpha_coloring(options.n, 0) : uniform_coloring(options.n);
            if (!options.colors.empty()) {
                col.color = options.colors;
                col.color_count = *std::max_element(col.color.begin(), col.color.end());
            }
            emit(net, col, options.out_path);
        } else if (options.family == "stretch") {
            RingSpec base;
            base.n = 0;
            for (std::size_t j = 0; j < options.sizes.size(); ++j) {
                base.n += options.sizes[j];
                for (int c = 0; c < options.sizes[j]; ++c) base.colors.push_back(static_cast<int>(j) + 1);
            }
            if (!options.pattern.empty()) base.pattern = options.pattern;
            const StretchResult stretched = gen_stretch(base, options.rounds, options.target_sizes);
            emit(stretched.net, stretched.col, options.out_path);
        } else if (options.family == "pendant") {
            const PendantFamily family = gen_pendant_family(options.n, options.d, options.k);
            if (options.out_small_path.empty() || options.out_big_path.empty()) {
                err << "error: pendant generation needs --out-small and --out-big\n";
                return 1;
            }
            emit(family.small_net, family.small_col, options.out_small_path);
            emit(family.big_net, family.big_col, options.out_big_path);
        } else {
            err << "error: unknown family '" << options.family << "'\n";
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Simulator and oracle for leader election and topology recognition in colored port-labeled networks"};
    app.require_subcommand(1);

    std::string path;
    int k = 1;
    int alpha = 1;

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a network file");
    validate->add_option("file", path, "network file")->required();

    CLI::App* oracle = app.add_subcommand("oracle", "print quotient graph, stabilization data and leader");
    oracle->add_option("file", path, "network file")->required();
    oracle->add_option("--k", k, "bound on the size of color alpha");
    oracle->add_option("--alpha", alpha, "distinguished color");

    SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand("simulate", "run the distributed protocol");
    simulate->add_option("file", sim.path, "network file")->required();
    simulate->add_option("--k", sim.k, "bound on the size of color alpha");
    simulate->add_option("--alpha", sim.alpha, "distinguished color");
    simulate->add_option("--task", sim.task, "le or top");
    simulate->add_option("--max-rounds", sim.max_rounds, "round limit (0 = automatic)");
    simulate->add_option("--format", sim.format, "json or csv");
    simulate->add_option("--transcript", sim.transcript_path, "write a JSONL transcript here");
    simulate->add_option("--out", sim.out_path, "write results here instead of stdout");
    simulate->add_flag("--strict", sim.strict, "fail when k is below the true color size");

    CLI::App* compare = app.add_subcommand("compare", "differential check of protocol against oracle");
    compare->add_option("file", path, "network file or directory of .net files")->required();
    compare->add_option("--k", k, "bound on the size of color alpha");
    compare->add_option("--alpha", alpha, "distinguished color");

    GenOptions gen;
    std::string pattern_text;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a network file");
    gen_cmd->add_option("family", gen.family, "ring | chordal | stretch | pendant")->required();
    gen_cmd->add_option("--n", gen.n, "node count (ring/chordal/pendant)");
    gen_cmd->add_option("--d", gen.d, "chord count");
    gen_cmd->add_option("--k", gen.k, "copies (pendant)");
    gen_cmd->add_option("--colors", gen.colors, "explicit colors")->delimiter(',');
    gen_cmd->add_option("--pattern", pattern_text, "ring port pattern, e.g. 0:1 or 0:1,1:0");
    gen_cmd->add_option("--sizes", gen.sizes, "base color sizes (stretch)")->delimiter(',');
    gen_cmd->add_option("--x-prime", gen.target_sizes, "stretched color sizes")->delimiter(',');
    gen_cmd->add_option("--T", gen.rounds, "rounds to hide from (stretch)");
    gen_cmd->add_flag("--single-alpha", gen.single_alpha, "color node 0 with 1, the rest with 2");
    gen_cmd->add_option("--out", gen.out_path, "output file (default stdout)");
    gen_cmd->add_option("--out-small", gen.out_small_path, "pendant: small network file");
    gen_cmd->add_option("--out-big", gen.out_big_path, "pendant: big network file");

    BenchOptions bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "measure rounds against the analytic bound");
    bench_cmd->add_option("--family", bench.family, "chordal | ring | stretch");
    bench_cmd->add_option("--n", bench.n, "chordal node count");
    bench_cmd->add_option("--d", bench.d, "chordal chord count");
    bench_cmd->add_option("--k", bench.k, "fixed k (ring/stretch)");
    bench_cmd->add_option("--k-min", bench.k_min, "first k (chordal)");
    bench_cmd->add_option("--k-max", bench.k_max, "last k (chordal)");
    bench_cmd->add_option("--n-min", bench.n_min, "first ring size");
    bench_cmd->add_option("--n-max", bench.n_max, "last ring size");
    bench_cmd->add_option("--n-step", bench.n_step, "ring size step");
    bench_cmd->add_option("--sizes", bench.sizes, "stretch base color sizes")->delimiter(',');
    bench_cmd->add_option("--t-min", bench.t_min, "first stretch T");
    bench_cmd->add_option("--t-max", bench.t_max, "last stretch T");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (!pattern_text.empty()) {
        std::istringstream in(pattern_text);
        std::string item;
        while (std::getline(in, item, ',')) {
            const std::size_t colon = item.find(':');
            if (colon == std::string::npos) {
                std::cerr << "error: pattern entries look like p:q\n";
                return 1;
            }
            gen.pattern.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
        }
    }

    if (validate->parsed()) return cmd_validate(path, std::cout, std::cerr);
    if (oracle->parsed()) return cmd_oracle(path, k, alpha, std::cout, std::cerr);
    if (simulate->parsed()) return cmd_simulate(sim, std::cout, std::cerr);
    if (compare->parsed()) return cmd_compare(path, k, alpha, std::cout, std::cerr);
    if (gen_cmd->parsed()) return cmd_gen(gen, std::cout, std::cerr);
    if (bench_cmd->parsed()) return cmd_bench(bench, std::cout, std::cerr);
    return 1;
}

}  // namespace colnet::cli
