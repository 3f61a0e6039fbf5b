#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "colnet/engine.hpp"
#include "colnet/generators.hpp"
#include "colnet/views.hpp"
#include "support/reference.hpp"

using namespace colnet;

namespace {

// outputs its own color in round one, never sends anything
class EchoProcess : public NodeProcess {
public:
    void init(int degree, int color, const std::string&) override {
        degree_ = degree;
        color_ = color;
    }
    std::vector<std::optional<std::string>> send() override { return std::vector<std::optional<std::string>>(degree_); }
    std::optional<std::string> receive(const std::vector<std::optional<std::string>>&) override {
        return std::to_string(color_);
    }

private:
    int degree_ = 0;
    int color_ = 0;
};

// floods the maximum color for the number of rounds given as input
class FloodMaxProcess : public NodeProcess {
public:
    void init(int degree, int color, const std::string& input) override {
        degree_ = degree;
        best_ = color;
        rounds_left_ = std::stoi(input);
    }
    std::vector<std::optional<std::string>> send() override {
        return std::vector<std::optional<std::string>>(degree_, std::to_string(best_));
    }
    std::optional<std::string> receive(const std::vector<std::optional<std::string>>& inbox) override {
        for (const auto& message : inbox) {
            if (message) best_ = std::max(best_, std::stoi(*message));
        }
        if (--rounds_left_ == 0) return std::to_string(best_);
        return std::nullopt;
    }
    std::string state_digest() const override { return "best=" + std::to_string(best_); }

private:
    int degree_ = 0;
    int best_ = 0;
    int rounds_left_ = 0;
};

template <typename Process>
class Program : public NodeProgram {
public:
    std::unique_ptr<NodeProcess> spawn() const override { return std::make_unique<Process>(); }
};

ParsedNetwork oriented_ring(int n, std::vector<int> colors = {}) {
    RingSpec spec;
    spec.n = n;
    spec.colors = std::move(colors);
    return gen_ring(spec);
}

}  // namespace

TEST_CASE("echo finishes in one round with the colors as outputs") {
    const ParsedNetwork ring = oriented_ring(5, {1, 2, 3, 2, 1});
    const RunResult result = run(ring.net, ring.col, Program<EchoProcess>{}, "", {8, false});
    CHECK(result.rounds == 1);
    CHECK_FALSE(result.limit_hit);
    for (int v = 0; v < 5; ++v) CHECK(*result.outputs[v] == std::to_string(ring.col.color[v]));
}

TEST_CASE("flood-max needs exactly the diameter on a 6-ring") {
    const ParsedNetwork ring = oriented_ring(6, {1, 2, 3, 1, 2, 1});
    const RunResult result = run(ring.net, ring.col, Program<FloodMaxProcess>{}, "3", {16, false});
    CHECK(result.rounds == 3);
    for (int v = 0; v < 6; ++v) CHECK(*result.outputs[v] == "3");

    // two rounds are not enough for the node antipodal to the maximum
    const RunResult partial = run(ring.net, ring.col, Program<FloodMaxProcess>{}, "2", {16, false});
    bool someone_wrong = false;
    for (int v = 0; v < 6; ++v) someone_wrong = someone_wrong || *partial.outputs[v] != "3";
    CHECK(someone_wrong);
}

TEST_CASE("round limit reports unfinished nodes") {
    const ParsedNetwork ring = oriented_ring(4);
    const RunResult result = run(ring.net, ring.col, Program<FloodMaxProcess>{}, "9", {3, false});
    CHECK(result.limit_hit);
    CHECK(result.rounds == 3);
    CHECK(result.unfinished == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("identical runs produce byte-identical transcripts") {
    const ParsedNetwork ring = oriented_ring(6, {2, 1, 1, 2, 1, 1});
    const RunResult a = run(ring.net, ring.col, Program<FloodMaxProcess>{}, "4", {16, true});
    const RunResult b = run(ring.net, ring.col, Program<FloodMaxProcess>{}, "4", {16, true});
    CHECK(a.transcript.to_jsonl() == b.transcript.to_jsonl());
    CHECK(!a.transcript.to_jsonl().empty());
}

TEST_CASE("transcript JSONL shape") {
    const ParsedNetwork p = parse_network("n 2\ncolors 1 2\nedge 0 0 1 0\n");
    const RunResult result = run(p.net, p.col, Program<FloodMaxProcess>{}, "1", {4, true});
    const std::string jsonl = result.transcript.to_jsonl();
    CHECK(jsonl == "{\"t\":1,\"v\":0,\"in\":{\"0\":\"32\"},\"out\":{\"0\":\"31\"},\"done\":true}\n"
                   "{\"t\":1,\"v\":1,\"in\":{\"0\":\"31\"},\"out\":{\"0\":\"32\"},\"done\":true}\n");
}

TEST_CASE("every sent message is received once at the paired port") {
    const ParsedNetwork ring = oriented_ring(6, {1, 2, 3, 1, 2, 1});
    const RunResult result = run(ring.net, ring.col, Program<FloodMaxProcess>{}, "3", {16, true});
    auto entry = [&](int round, int node) -> const Transcript::Entry& {
        for (const auto& e : result.transcript.entries) {
            if (e.round == round && e.node == node) return e;
        }
        REQUIRE(false);
        throw std::logic_error("unreachable");
    };
    for (int round = 1; round <= result.rounds; ++round) {
        for (int v = 0; v < 6; ++v) {
            for (int p = 0; p < ring.net.degree(v); ++p) {
                const PortTarget t = ring.net.neighbor(v, p);
                CHECK(entry(round, v).out[p] == entry(round, t.node).in[t.port]);
            }
        }
    }
}

TEST_CASE("outcomes are independent of node numbering") {
    // relabel the nodes of an asymmetric network and compare outcomes
    const ParsedNetwork base = parse_network(
        "n 5\ncolors 1 2 2 1 2\nedge 0 0 1 0\nedge 1 1 2 0\nedge 2 1 3 0\nedge 3 1 4 0\nedge 1 2 4 1\n");
    const std::vector<int> perm{3, 0, 4, 2, 1};  // image of each node
    std::vector<std::vector<PortTarget>> adj(5);
    Coloring col;
    col.color.resize(5);
    col.color_count = 2;
    for (int v = 0; v < 5; ++v) {
        col.color[perm[v]] = base.col.color[v];
        adj[perm[v]].resize(base.net.degree(v));
        for (int p = 0; p < base.net.degree(v); ++p) {
            const PortTarget t = base.net.neighbor(v, p);
            adj[perm[v]][p] = {perm[t.node], t.port};
        }
    }
    const PortNetwork permuted(std::move(adj));
    const RunResult a = run(base.net, base.col, Program<FloodMaxProcess>{}, "4", {16, false});
    const RunResult b = run(permuted, col, Program<FloodMaxProcess>{}, "4", {16, false});
    CHECK(a.rounds == b.rounds);
    for (int v = 0; v < 5; ++v) CHECK(a.outputs[v] == b.outputs[perm[v]]);
}

TEST_CASE("twin_check: same node, symmetric nodes, and equal views across networks") {
    const ParsedNetwork ring6 = oriented_ring(6);
    const RunResult r6 = run(ring6.net, ring6.col, Program<FloodMaxProcess>{}, "5", {16, true});
    CHECK(twin_check(r6.transcript, ring6.net, 2, r6.transcript, ring6.net, 2, 5));
    // all nodes of the uniform oriented ring are indistinguishable
    CHECK(twin_check(r6.transcript, ring6.net, 0, r6.transcript, ring6.net, 4, 5));

    // depth-T views of uniform oriented rings agree across different sizes,
    // so transcripts agree for any program (the executable indistinguishability form)
    const ParsedNetwork ring3 = oriented_ring(3);
    ViewStore store;
    CHECK(build_view(store, ring6.net, ring6.col, 0, 5) == build_view(store, ring3.net, ring3.col, 0, 5));
    const RunResult r3 = run(ring3.net, ring3.col, Program<FloodMaxProcess>{}, "5", {16, true});
    CHECK(twin_check(r6.transcript, ring6.net, 1, r3.transcript, ring3.net, 2, 5));

    // different colors break the equality immediately
    const ParsedNetwork marked = oriented_ring(6, {2, 1, 1, 1, 1, 1});
    const RunResult rm = run(marked.net, marked.col, Program<FloodMaxProcess>{}, "5", {16, true});
    CHECK_FALSE(twin_check(r6.transcript, ring6.net, 0, rm.transcript, marked.net, 0, 5));
}

TEST_CASE("equal truncated views imply equal transcripts on small networks") {
    // executable form of the view-indistinguishability proposition, swept
    // over enumerated networks with the flooding program
    testref::EnumOptions options;
    options.max_labelings_per_graph = 2;
    options.max_colorings_per_graph = 2;
    int pairs = 0;
    testref::enumerate_networks(4, options, [&](const PortNetwork& net, const Coloring& col) {
        constexpr int rounds = 4;
        ViewStore store;
        ViewBuilder builder(store, net, col);
        const RunResult result = run(net, col, Program<FloodMaxProcess>{}, std::to_string(rounds), {8, true});
        for (int u = 0; u < net.node_count(); ++u) {
            for (int v = u + 1; v < net.node_count(); ++v) {
                if (builder.view(u, rounds) == builder.view(v, rounds)) {
                    ++pairs;
                    CHECK(twin_check(result.transcript, net, u, result.transcript, net, v, rounds));
                }
            }
        }
    });
    CHECK(pairs > 20);
}
