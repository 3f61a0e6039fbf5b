#include "colnet/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "colnet/views.hpp"

namespace colnet {

bool Partition::same_blocks(const Partition& other) const {
    if (cls.size() != other.cls.size() || count != other.count) return false;
    std::map<int, int> mapping;
    for (std::size_t v = 0; v < cls.size(); ++v) {
        const auto [it, inserted] = mapping.emplace(cls[v], other.cls[v]);
        if (!inserted && it->second != other.cls[v]) return false;
    }
    return true;
}

namespace {

std::vector<int> dense_by_key(const std::vector<std::vector<int>>& keys) {
    std::map<std::vector<int>, int> ids;
    for (const auto& key : keys) ids.emplace(key, 0);
    int next = 0;
    for (auto& [key, id] : ids) id = next++;
    std::vector<int> out(keys.size());
    for (std::size_t v = 0; v < keys.size(); ++v) out[v] = ids.at(keys[v]);
    return out;
}

int count_classes(const std::vector<int>& cls) {
    return cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
}

}  // namespace

std::vector<int> refine_once(const PortNetwork& net, const std::vector<int>& cls) {
    std::vector<std::vector<int>> keys(net.node_count());
    for (int v = 0; v < net.node_count(); ++v) {
        keys[v].push_back(cls[v]);
        for (int p = 0; p < net.degree(v); ++p) {
            const PortTarget t = net.neighbor(v, p);
            keys[v].push_back(p);
            keys[v].push_back(t.port);
            keys[v].push_back(cls[t.node]);
        }
    }
    return dense_by_key(keys);
}

Partition stable_partition(const PortNetwork& net, const Coloring& col) {
    col.validate(net);
    std::vector<std::vector<int>> color_keys(net.node_count());
    for (int v = 0; v < net.node_count(); ++v) color_keys[v] = {col.color[v]};
    std::vector<int> cls = dense_by_key(color_keys);

    int t = 0;
    while (true) {
        std::vector<int> next = refine_once(net, cls);
        if (count_classes(next) == count_classes(cls)) {
            return {std::move(cls), count_classes(next), t};
        }
        cls = std::move(next);
        ++t;
        if (t > net.node_count()) throw std::logic_error("partition refinement failed to stabilize");
    }
}

QuotientResult quotient(const PortNetwork& net, const Coloring& col) {
    const Partition part = stable_partition(net, col);
    const int n = net.node_count();

    // class sizes must agree (their common value is sigma)
    std::vector<int> sizes(part.count, 0);
    std::vector<int> rep(part.count, -1);
    for (int v = 0; v < n; ++v) {
        ++sizes[part.cls[v]];
        if (rep[part.cls[v]] < 0) rep[part.cls[v]] = v;
    }
    for (int c = 0; c < part.count; ++c) {
        if (sizes[c] != sizes[0]) throw std::logic_error("stable partition classes have unequal sizes");
    }
    const int sigma = sizes[0];

    // canonical ids: ascending encoding order of the class views at the
    // stabilization depth reached by the distributed refinement (t_star + 1)
    ViewStore store;
    ViewBuilder builder(store, net, col);
    std::vector<ViewId> class_views(part.count);
    for (int c = 0; c < part.count; ++c) class_views[c] = builder.view(rep[c], part.t_star + 1);
    std::vector<int> order(part.count);
    for (int c = 0; c < part.count; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return store.compare_encodings(class_views[a], class_views[b]) == std::strong_ordering::less;
    });
    std::vector<int> canonical(part.count);
    for (int i = 0; i < part.count; ++i) canonical[order[i]] = i;

    std::vector<int> class_of_node(n);
    for (int v = 0; v < n; ++v) class_of_node[v] = canonical[part.cls[v]];

    std::vector<int> colors(part.count, 0);
    for (int v = 0; v < n; ++v) {
        int& slot = colors[class_of_node[v]];
        if (slot == 0) {
            slot = col.color[v];
        } else if (slot != col.color[v]) {
            throw std::logic_error("class members disagree on their color");
        }
    }

    std::map<std::pair<int, int>, std::pair<int, int>> links;
    for (int v = 0; v < n; ++v) {
        for (int p = 0; p < net.degree(v); ++p) {
            const PortTarget t = net.neighbor(v, p);
            const std::pair<int, int> to{class_of_node[t.node], t.port};
            const auto [it, inserted] = links.try_emplace({class_of_node[v], p}, to);
            if (!inserted && it->second != to) {
                throw std::logic_error("class representatives disagree on an incident edge");
            }
        }
    }
    std::set<QuotientGraph::Edge> edges;
    for (const auto& [from, to] : links) {
        QuotientGraph::Endpoint a{from.first, from.second};
        QuotientGraph::Endpoint b{to.first, to.second};
        if (b < a) std::swap(a, b);
        edges.insert({a, b});
    }
    return {QuotientGraph(std::move(colors), {edges.begin(), edges.end()}), std::move(class_of_node), part.t_star,
            sigma};
}

bool feasible(const QuotientGraph& q, int k, int alpha) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    return !(q.count_color(alpha) <= k / 2 && !is_tree(q));
}

namespace {

std::vector<int> lex_min_shortest_path(const PortNetwork& net, int from, int to) {
    const std::vector<int> dist = bfs_distances(net, to);
    std::vector<int> ports;
    int cur = from;
    while (cur != to) {
        for (int p = 0;; ++p) {
            if (p >= net.degree(cur)) throw std::logic_error("no shortest-path step found");
            const PortTarget t = net.neighbor(cur, p);
            if (dist[t.node] == dist[cur] - 1) {
                ports.push_back(p);
                cur = t.node;
                break;
            }
        }
    }
    return ports;
}

}  // namespace

std::vector<NodeOutcome> oracle_solve(const PortNetwork& net, const Coloring& col, int k, int alpha, Task task) {
    col.validate(net);
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    const int alpha_size = col.size_of_color(alpha);
    if (alpha_size == 0) throw std::invalid_argument("alpha must occur in the network");
    if (alpha_size > k) throw std::invalid_argument("k is below the true size of color alpha");

    const QuotientResult qr = quotient(net, col);
    std::vector<NodeOutcome> out;
    out.reserve(net.node_count());
    if (!feasible(qr.q, k, alpha)) {
        out.assign(net.node_count(), NodeOutcome::unsolvable());
        return out;
    }
    if (qr.sigma != 1) throw std::logic_error("solvable instance must have singleton classes");

    int leader = -1;
    for (int v = 0; v < net.node_count(); ++v) {
        if (qr.class_of_node[v] == 0) leader = v;
    }
    for (int v = 0; v < net.node_count(); ++v) {
        if (task == Task::kTopology) {
            out.push_back(NodeOutcome::map(qr.q, qr.class_of_node[v]));
        } else {
            out.push_back(NodeOutcome::leader(v == leader ? std::vector<int>{} : lex_min_shortest_path(net, v, leader)));
        }
    }
    return out;
}

OracleReport oracle_report(const PortNetwork& net, const Coloring& col, int k, int alpha) {
    OracleReport report{quotient(net, col), false, -1};
    report.solvable = feasible(report.quotient.q, k, alpha);
    if (report.solvable && report.quotient.sigma == 1) {
        for (int v = 0; v < net.node_count(); ++v) {
            if (report.quotient.class_of_node[v] == 0) report.leader = v;
        }
    }
    return report;
}

namespace {

bool walk_reaches(const PortNetwork& net, int node, int target, int remaining) {
    if (node == target) return true;
    if (remaining == 0) return false;
    for (int p = 0; p < net.degree(node); ++p) {
        if (walk_reaches(net, net.neighbor(node, p).node, target, remaining - 1)) return true;
    }
    return false;
}

}  // namespace

bool has_shallower_copy_brute(const PortNetwork& net, int root, const std::vector<int>& walk, int depth_limit) {
    if (net.node_count() > 6 || depth_limit > 12) {
        throw std::invalid_argument("brute-force copy check is limited to n <= 6 and depth <= 12");
    }
    if (static_cast<int>(walk.size()) > depth_limit) {
        throw std::invalid_argument("walk longer than the view depth");
    }
    int node = root;
    for (std::size_t i = 0; i < walk.size(); ++i) {
        if (walk[i] < 0 || walk[i] >= net.degree(node)) {
            throw std::invalid_argument("invalid walk step " + std::to_string(i));
        }
        node = net.neighbor(node, walk[i]).node;
    }
    if (walk.empty()) return false;
    // all walks of length < |walk|, by bounded depth-first enumeration
    return walk_reaches(net, root, node, static_cast<int>(walk.size()) - 1);
}

bool validate_color_bound(const Coloring& col, int alpha, int k) { return col.size_of_color(alpha) <= k; }

}  // namespace colnet
