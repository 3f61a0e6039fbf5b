#include "colnet/generators.hpp"

#include <algorithm>
#include <stdexcept>

namespace colnet {

namespace {

std::pair<int, int> pattern_at(const RingSpec& spec, int edge) {
    return spec.pattern[edge % spec.pattern.size()];
}

PortNetwork ring_network(int n, const std::vector<std::pair<int, int>>& edge_ports) {
    std::vector<std::vector<PortTarget>> adj(n, std::vector<PortTarget>(2));
    for (int i = 0; i < n; ++i) {
        const auto [p, q] = edge_ports[i];
        const int j = (i + 1) % n;
        if ((p != 0 && p != 1) || (q != 0 && q != 1)) {
            throw ValidationError("ring ports must be 0 or 1");
        }
        adj[i][p] = {j, q};
        adj[j][q] = {i, p};
    }
    return PortNetwork(std::move(adj));
}

}  // namespace

ParsedNetwork gen_ring(const RingSpec& spec) {
    if (spec.n < 3) throw ValidationError("a ring needs at least three nodes");
    if (spec.pattern.empty() || spec.n % static_cast<int>(spec.pattern.size()) != 0) {
        throw ValidationError("ring port pattern length must divide n");
    }
    std::vector<std::pair<int, int>> edge_ports(spec.n);
    for (int i = 0; i < spec.n; ++i) edge_ports[i] = pattern_at(spec, i);
    PortNetwork net = ring_network(spec.n, edge_ports);

    Coloring col;
    col.color = spec.colors.empty() ? std::vector<int>(spec.n, 1) : spec.colors;
    if (static_cast<int>(col.color.size()) != spec.n) throw ValidationError("ring coloring size mismatch");
    col.color_count = *std::max_element(col.color.begin(), col.color.end());
    col.validate(net);
    return {std::move(net), std::move(col)};
}

StretchResult gen_stretch(const RingSpec& base, int rounds, const std::vector<int>& target_sizes) {
    if (rounds < 1) throw ValidationError("stretch needs at least one round");
    const ParsedNetwork base_ring = gen_ring(base);  // validates the base
    const int n = base.n;
    const int r = base_ring.col.color_count;
    if (static_cast<int>(target_sizes.size()) != r) {
        throw ValidationError("one target size per base color is required");
    }

    const int laps = (rounds + n - 1) / n;  // ceil(rounds / n)
    const int copied = 2 * n * laps + n;
    std::vector<int> base_sizes(r, 0);
    for (int c : base_ring.col.color) ++base_sizes[c - 1];
    for (int j = 0; j < r; ++j) {
        if (target_sizes[j] < (2 * laps + 1) * base_sizes[j]) {
            throw ValidationError("target size of color " + std::to_string(j + 1) +
                                  " is below the stretch requirement");
        }
    }
    int n_prime = 0;
    for (int size : target_sizes) n_prime += size;

    std::vector<std::pair<int, int>> edge_ports(n_prime);
    for (int i = 0; i < n_prime; ++i) edge_ports[i] = pattern_at(base, i % n);
    // The seam edge closing the ring must fit the ports already fixed at its
    // two endpoints; any proper completion works, this one is deterministic.
    edge_ports[n_prime - 1] = {1 - edge_ports[n_prime - 2].second, 1 - edge_ports[0].first};
    PortNetwork net = ring_network(n_prime, edge_ports);

    Coloring col;
    col.color.reserve(n_prime);
    std::vector<int> used(r, 0);
    for (int i = 0; i < copied; ++i) {
        const int c = base_ring.col.color[i % n];
        col.color.push_back(c);
        ++used[c - 1];
    }
    for (int j = 0; j < r; ++j) {
        for (int left = target_sizes[j] - used[j]; left > 0; --left) col.color.push_back(j + 1);
    }
    if (static_cast<int>(col.color.size()) != n_prime) throw std::logic_error("stretch fill miscounted");
    col.color_count = r;
    col.validate(net);
    return {std::move(net), std::move(col), copied};
}

PortNetwork gen_chordal(int n, int d) {
    if (d < 1 || 2 * d >= n) throw ValidationError("chordal ring requires 1 <= d < n/2");
    std::vector<std::vector<PortTarget>> adj(n, std::vector<PortTarget>(2 * d));
    for (int i = 0; i < n; ++i) {
        for (int j = 1; j <= d; ++j) {
            const int other = (i + j) % n;
            adj[i][j - 1] = {other, d + j - 1};
            adj[other][d + j - 1] = {i, j - 1};
        }
    }
    return PortNetwork(std::move(adj));
}

PendantFamily gen_pendant_family(int n, int d, int k) {
    if (k < 1) throw ValidationError("pendant family requires k >= 1");
    PortNetwork small = gen_chordal(n, d);
    Coloring small_col = single_alpha_coloring(n, 0);

    const int big_n = k * n;
    PortNetwork ring = gen_chordal(big_n, d);
    std::vector<std::vector<PortTarget>> adj = ring.adjacency();
    adj.push_back({PortTarget{0, 2 * d}});  // the pendant node, port 0
    adj[0].push_back({big_n, 0});           // attached at the next free port of v_0
    PortNetwork big(std::move(adj));

    Coloring big_col;
    big_col.color.assign(big_n + 1, 2);
    for (int j = 0; j < k; ++j) big_col.color[j * n] = 1;
    big_col.color_count = 2;
    big_col.validate(big);
    return {std::move(small), std::move(small_col), std::move(big), std::move(big_col)};
}

Coloring uniform_coloring(int n) {
    Coloring col;
    col.color.assign(n, 1);
    col.color_count = 1;
    return col;
}

Coloring single_alpha_coloring(int n, int alpha_node) {
    Coloring col;
    col.color.assign(n, 2);
    col.color.at(alpha_node) = 1;
    col.color_count = 2;
    return col;
}

}  // namespace colnet
