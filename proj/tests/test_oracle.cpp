#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "colnet/generators.hpp"
#include "colnet/oracle.hpp"
#include "colnet/views.hpp"
#include "support/reference.hpp"

using namespace colnet;

namespace {

ParsedNetwork two_path(int c0 = 1, int c1 = 2) {
    return parse_network("n 2\ncolors " + std::to_string(c0) + " " + std::to_string(c1) + "\nedge 0 0 1 0\n");
}

ParsedNetwork oriented_ring(int n, std::vector<int> colors = {}) {
    RingSpec spec;
    spec.n = n;
    spec.colors = std::move(colors);
    return gen_ring(spec);
}

bool same_blocks(const std::vector<int>& a, const std::vector<int>& b) {
    std::map<int, int> forward, backward;
    for (std::size_t v = 0; v < a.size(); ++v) {
        const auto [fit, fin] = forward.emplace(a[v], b[v]);
        if (!fin && fit->second != b[v]) return false;
        const auto [bit, bin] = backward.emplace(b[v], a[v]);
        if (!bin && bit->second != a[v]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("stable partition base cases") {
    // all colors distinct: discrete immediately
    const ParsedNetwork distinct = parse_network("n 3\ncolors 1 2 3\nedge 0 0 1 0\nedge 1 1 2 0\n");
    const Partition p1 = stable_partition(distinct.net, distinct.col);
    CHECK(p1.count == 3);
    CHECK(p1.t_star == 0);

    // uniform oriented ring: a single class that never splits
    const ParsedNetwork ring = oriented_ring(6);
    const Partition p2 = stable_partition(ring.net, ring.col);
    CHECK(p2.count == 1);
    CHECK(p2.t_star == 0);

    // alternating colors on the oriented 6-ring: two classes of size three
    const ParsedNetwork alt = oriented_ring(6, {1, 2, 1, 2, 1, 2});
    const Partition p3 = stable_partition(alt.net, alt.col);
    CHECK(p3.count == 2);
    const QuotientResult qr = quotient(alt.net, alt.col);
    CHECK(qr.sigma == 3);
}

TEST_CASE("partition classes equal truncated-view classes at every step") {
    testref::EnumOptions options;
    options.max_labelings_per_graph = 2;
    options.max_colorings_per_graph = 3;
    for (int n : {2, 3, 4, 5}) {
        testref::enumerate_networks(n, options, [&](const PortNetwork& net, const Coloring& col) {
            std::vector<std::vector<int>> color_key(net.node_count());
            for (int v = 0; v < net.node_count(); ++v) color_key[v] = {col.color[v]};
            std::vector<int> cls(net.node_count());
            for (int v = 0; v < net.node_count(); ++v) cls[v] = col.color[v];
            for (int t = 0; t <= 4; ++t) {
                CHECK(same_blocks(cls, testref::ref_view_classes(net, col, t)));
                cls = refine_once(net, cls);
            }
        });
    }
}

TEST_CASE("fixpoint persists under further refinement") {
    testref::EnumOptions options;
    options.max_labelings_per_graph = 3;
    options.max_colorings_per_graph = 4;
    for (int n : {3, 4, 5}) {
        testref::enumerate_networks(n, options, [&](const PortNetwork& net, const Coloring& col) {
            const Partition part = stable_partition(net, col);
            CHECK(part.t_star <= net.node_count());
            const std::vector<int> once = refine_once(net, part.cls);
            const std::vector<int> twice = refine_once(net, once);
            CHECK(same_blocks(part.cls, once));
            CHECK(same_blocks(part.cls, twice));
            // and the fixpoint classes are exactly the view classes at t*+2
            CHECK(same_blocks(part.cls, testref::ref_view_classes(net, col, part.t_star + 2)));
        });
    }
}

TEST_CASE("all fixpoint classes share one size") {
    testref::EnumOptions options;
    options.max_labelings_per_graph = 3;
    options.max_colorings_per_graph = 4;
    for (int n : {2, 3, 4, 5}) {
        testref::enumerate_networks(n, options, [&](const PortNetwork& net, const Coloring& col) {
            const QuotientResult qr = quotient(net, col);  // throws if sizes diverge
            CHECK(qr.sigma * qr.q.class_count() == net.node_count());
        });
    }
}

TEST_CASE("quotient of the two-node path is the path itself") {
    const ParsedNetwork p = two_path();
    const QuotientResult qr = quotient(p.net, p.col);
    CHECK(qr.q.class_count() == 2);
    CHECK(qr.sigma == 1);
    CHECK(qr.q == QuotientGraph({1, 2}, {{{0, 0}, {1, 0}}}));
    // canonical ids order class encodings: "(1 ...)" sorts before "(2 ...)"
    CHECK(qr.class_of_node == std::vector<int>{0, 1});
}

TEST_CASE("quotient of the uniform oriented ring is one class with a loop over ports 0 and 1") {
    const ParsedNetwork ring = oriented_ring(8);
    const QuotientResult qr = quotient(ring.net, ring.col);
    CHECK(qr.q.class_count() == 1);
    CHECK(qr.sigma == 8);
    CHECK(qr.q == QuotientGraph({1}, {{{0, 0}, {0, 1}}}));
    CHECK_FALSE(is_tree(qr.q));
}

TEST_CASE("quotient of the same-color two-node path has a degenerate loop") {
    const ParsedNetwork p = two_path(1, 1);
    const QuotientResult qr = quotient(p.net, p.col);
    CHECK(qr.q.class_count() == 1);
    CHECK(qr.q == QuotientGraph({1}, {{{0, 0}, {0, 0}}}));
}

TEST_CASE("views in the quotient equal views in the network") {
    testref::EnumOptions options;
    options.max_labelings_per_graph = 2;
    options.max_colorings_per_graph = 3;
    for (int n : {2, 3, 4, 5}) {
        testref::enumerate_networks(n, options, [&](const PortNetwork& net, const Coloring& col) {
            const QuotientResult qr = quotient(net, col);
            ViewStore store;
            ViewBuilder in_net(store, net, col);
            Coloring qcol;
            qcol.color = qr.q.class_colors();
            ViewBuilder in_quotient(store, qr.q.to_adjacency(), qr.q.class_colors());
            for (int v = 0; v < net.node_count(); ++v) {
                for (int d = 0; d <= 2 * qr.t_star + 4; ++d) {
                    CHECK(in_net.view(v, d) == in_quotient.view(qr.class_of_node[v], d));
                }
            }
        });
    }
}

TEST_CASE("feasibility criterion") {
    const QuotientGraph loop({1}, {{{0, 0}, {0, 1}}});
    CHECK_FALSE(feasible(loop, 2, 1));  // one alpha class <= floor(2/2), not a tree
    CHECK(feasible(loop, 1, 1));        // 1 > floor(1/2)
    CHECK_FALSE(feasible(loop, 9, 1));

    const QuotientGraph path({1, 2}, {{{0, 0}, {1, 0}}});
    CHECK(feasible(path, 1, 1));  // trees are always feasible
    CHECK(feasible(path, 7, 1));
    CHECK(feasible(path, 2, 2));

    // alpha count k > floor(k/2) for every k >= 1
    const QuotientGraph two_loop({1, 1}, {{{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}});
    CHECK(feasible(two_loop, 2, 1));
    CHECK_THROWS_AS(feasible(path, 0, 1), std::invalid_argument);
}

TEST_CASE("oracle_solve on the two-node path elects the smaller encoding") {
    const ParsedNetwork p = two_path();
    const std::vector<NodeOutcome> le = oracle_solve(p.net, p.col, 1, 1, Task::kLeaderElection);
    CHECK(le[0] == NodeOutcome::leader({}));
    CHECK(le[1] == NodeOutcome::leader({0}));

    const std::vector<NodeOutcome> top = oracle_solve(p.net, p.col, 1, 1, Task::kTopology);
    CHECK(top[0].kind == NodeOutcome::Kind::kTopology);
    CHECK(top[0].self_class == 0);
    CHECK(top[1].self_class == 1);
    CHECK(top[0].topology == top[1].topology);

    // alpha = 2 works the same: the leader order does not depend on alpha
    const std::vector<NodeOutcome> le2 = oracle_solve(p.net, p.col, 1, 2, Task::kLeaderElection);
    CHECK(le2[0] == NodeOutcome::leader({}));
}

TEST_CASE("oracle_solve declares symmetric rings unsolvable") {
    const ParsedNetwork ring = oriented_ring(6);
    for (const Task task : {Task::kLeaderElection, Task::kTopology}) {
        const std::vector<NodeOutcome> out = oracle_solve(ring.net, ring.col, 6, 1, task);
        for (const NodeOutcome& o : out) CHECK(o == NodeOutcome::unsolvable());
    }
}

TEST_CASE("oracle_solve rejects dishonest bounds") {
    const ParsedNetwork ring = oriented_ring(6);
    CHECK_THROWS_AS(oracle_solve(ring.net, ring.col, 5, 1, Task::kLeaderElection), std::invalid_argument);
    CHECK_THROWS_AS(oracle_solve(ring.net, ring.col, 0, 1, Task::kLeaderElection), std::invalid_argument);
    const ParsedNetwork p = two_path();
    CHECK_THROWS_AS(oracle_solve(p.net, p.col, 1, 3, Task::kLeaderElection), std::invalid_argument);
}

TEST_CASE("oracle report carries quotient, stabilization and leader") {
    const ParsedNetwork p = two_path();
    const OracleReport report = oracle_report(p.net, p.col, 1, 1);
    CHECK(report.solvable);
    CHECK(report.leader == 0);
    CHECK(report.quotient.t_star == 0);

    const ParsedNetwork ring = oriented_ring(4);
    const OracleReport infeasible = oracle_report(ring.net, ring.col, 4, 1);
    CHECK_FALSE(infeasible.solvable);
    CHECK(infeasible.leader == -1);
}

TEST_CASE("brute-force shallower-copy checks") {
    const ParsedNetwork p = two_path();
    CHECK_FALSE(has_shallower_copy_brute(p.net, 0, {}, 4));      // nothing above depth 0
    CHECK(has_shallower_copy_brute(p.net, 0, {0, 0}, 4));        // back at the start
    CHECK_FALSE(has_shallower_copy_brute(p.net, 0, {0}, 4));     // first visit of node 1

    const ParsedNetwork ring = oriented_ring(5);
    CHECK_FALSE(has_shallower_copy_brute(ring.net, 0, {0, 0}, 8));
    CHECK(has_shallower_copy_brute(ring.net, 0, {0, 0, 0, 0, 0}, 8));  // all the way around

    CHECK_THROWS_AS(has_shallower_copy_brute(ring.net, 0, {0}, 13), std::invalid_argument);
    const PortNetwork big = gen_chordal(8, 2);
    CHECK_THROWS_AS(has_shallower_copy_brute(big, 0, {0}, 4), std::invalid_argument);
}

TEST_CASE("color bound validation") {
    const ParsedNetwork ring = oriented_ring(5);
    CHECK(validate_color_bound(ring.col, 1, 5));
    CHECK_FALSE(validate_color_bound(ring.col, 1, 4));
    const ParsedNetwork p = two_path();
    CHECK(validate_color_bound(p.col, 1, 1));
}
