#include "colnet/netmodel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace colnet {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

void check(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

}  // namespace

PortNetwork::PortNetwork(std::vector<std::vector<PortTarget>> adjacency) : adj_(std::move(adjacency)) {
    const int n = static_cast<int>(adj_.size());
    check(n >= 2, "network must have at least two nodes");
    for (int v = 0; v < n; ++v) {
        const auto& ports = adj_[v];
        check(!ports.empty(), "node " + std::to_string(v) + " has degree 0; network must be connected");
        std::set<int> seen_neighbors;
        for (int p = 0; p < static_cast<int>(ports.size()); ++p) {
            const PortTarget t = ports[p];
            check(t.node >= 0 && t.node < n, "node " + std::to_string(v) + " port " + std::to_string(p) +
                                                 " points outside the network");
            check(t.node != v, "self-loop at node " + std::to_string(v));
            check(t.port >= 0 && t.port < static_cast<int>(adj_[t.node].size()),
                  "node " + std::to_string(v) + " port " + std::to_string(p) + " names an invalid remote port");
            const PortTarget back = adj_[t.node][t.port];
            check(back.node == v && back.port == p,
                  "asymmetric port pairing between node " + std::to_string(v) + " port " + std::to_string(p) +
                      " and node " + std::to_string(t.node) + " port " + std::to_string(t.port));
            check(seen_neighbors.insert(t.node).second,
                  "parallel edge between nodes " + std::to_string(v) + " and " + std::to_string(t.node));
        }
    }
    // connectivity
    std::vector<char> reached(n, 0);
    std::deque<int> queue{0};
    reached[0] = 1;
    int count = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (const PortTarget& t : adj_[v]) {
            if (!reached[t.node]) {
                reached[t.node] = 1;
                ++count;
                queue.push_back(t.node);
            }
        }
    }
    check(count == n, "network is not connected");
}

int PortNetwork::edge_count() const {
    int total = 0;
    for (const auto& ports : adj_) total += static_cast<int>(ports.size());
    return total / 2;
}

void Coloring::validate(const PortNetwork& net) const {
    check(static_cast<int>(color.size()) == net.node_count(), "coloring size does not match node count");
    check(color_count >= 1, "color count must be positive");
    std::vector<char> used(color_count + 1, 0);
    for (int v = 0; v < net.node_count(); ++v) {
        check(color[v] >= 1, "color of node " + std::to_string(v) + " must be positive");
        check(color[v] <= color_count,
              "color " + std::to_string(color[v]) + " of node " + std::to_string(v) + " exceeds color count");
        used[color[v]] = 1;
    }
    for (int c = 1; c <= color_count; ++c) {
        check(used[c], "color " + std::to_string(c) + " unused; coloring must be surjective");
    }
}

int Coloring::size_of_color(int c) const {
    return static_cast<int>(std::count(color.begin(), color.end(), c));
}

namespace {

struct Token {
    std::string_view text;
    int line;
    int column;
};

struct Line {
    std::vector<Token> tokens;
    int number;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    int line_no = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.front() != '#') {
            Line out{{}, line_no};
            std::size_t i = 0;
            while (i < line.size()) {
                while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
                if (i >= line.size()) break;
                std::size_t start = i;
                while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
                out.tokens.push_back({line.substr(start, i - start), line_no, static_cast<int>(start + 1)});
            }
            if (!out.tokens.empty()) lines.push_back(std::move(out));
        }
        if (eol >= text.size()) break;
        pos = eol + 1;
        ++line_no;
    }
    return lines;
}

int parse_int(const Token& tok, int min_value) {
    int value = 0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(tok.line, tok.column, "expected an integer, got '" + std::string(tok.text) + "'");
    }
    if (value < min_value) {
        throw ParseError(tok.line, tok.column,
                         "value " + std::to_string(value) + " below minimum " + std::to_string(min_value));
    }
    return value;
}

}  // namespace

ParsedNetwork parse_network(std::string_view text) {
    const std::vector<Line> lines = tokenize(text);
    std::size_t idx = 0;
    auto expect_line = [&](const char* what) -> const Line& {
        if (idx >= lines.size()) throw ParseError(static_cast<int>(lines.size()) + 1, 1, std::string("missing ") + what);
        return lines[idx];
    };

    const Line& header = expect_line("'n <count>' header");
    if (header.tokens[0].text != "n" || header.tokens.size() != 2) {
        throw ParseError(header.number, header.tokens[0].column, "expected 'n <count>'");
    }
    const int n = parse_int(header.tokens[1], 1);
    ++idx;

    const Line& colors_line = expect_line("'colors ...' line");
    if (colors_line.tokens[0].text != "colors") {
        throw ParseError(colors_line.number, colors_line.tokens[0].column, "expected 'colors <c_1> ... <c_n>'");
    }
    if (static_cast<int>(colors_line.tokens.size()) != n + 1) {
        throw ParseError(colors_line.number, colors_line.tokens[0].column,
                         "expected " + std::to_string(n) + " colors, got " +
                             std::to_string(colors_line.tokens.size() - 1));
    }
    Coloring col;
    col.color.reserve(n);
    for (int i = 1; i <= n; ++i) {
        col.color.push_back(parse_int(colors_line.tokens[i], 1));
    }
    col.color_count = *std::max_element(col.color.begin(), col.color.end());
    ++idx;

    // Collect edges keyed by (node, port); port density is checked afterwards.
    std::vector<std::map<int, PortTarget>> ports(n);
    auto claim_port = [&](int node, int port, PortTarget target, const Token& at) {
        if (!ports[node].emplace(port, target).second) {
            throw ParseError(at.line, at.column,
                             "port " + std::to_string(port) + " of node " + std::to_string(node) + " already used");
        }
    };
    for (; idx < lines.size(); ++idx) {
        const Line& line = lines[idx];
        if (line.tokens[0].text != "edge") {
            throw ParseError(line.number, line.tokens[0].column,
                             "expected 'edge <u> <p_u> <v> <p_v>', got '" + std::string(line.tokens[0].text) + "'");
        }
        if (line.tokens.size() != 5) {
            throw ParseError(line.number, line.tokens[0].column, "edge line needs exactly four integers");
        }
        const int u = parse_int(line.tokens[1], 0);
        const int pu = parse_int(line.tokens[2], 0);
        const int v = parse_int(line.tokens[3], 0);
        const int pv = parse_int(line.tokens[4], 0);
        if (u >= n || v >= n) {
            throw ParseError(line.number, line.tokens[1].column, "edge endpoint out of range");
        }
        if (u == v) {
            throw ParseError(line.number, line.tokens[1].column, "self-loops are not allowed");
        }
        claim_port(u, pu, {v, pv}, line.tokens[2]);
        claim_port(v, pv, {u, pu}, line.tokens[4]);
    }

    std::vector<std::vector<PortTarget>> adj(n);
    for (int v = 0; v < n; ++v) {
        const int deg = static_cast<int>(ports[v].size());
        adj[v].resize(deg);
        for (const auto& [port, target] : ports[v]) {
            if (port >= deg) {
                throw ValidationError("node " + std::to_string(v) + " uses port " + std::to_string(port) +
                                      " but has degree " + std::to_string(deg));
            }
            adj[v][port] = target;
        }
    }
    PortNetwork net(std::move(adj));
    col.validate(net);
    return {std::move(net), std::move(col)};
}

std::string serialize_network(const PortNetwork& net, const Coloring& col) {
    col.validate(net);
    std::ostringstream out;
    out << "n " << net.node_count() << "\n";
    out << "colors";
    for (int c : col.color) out << " " << c;
    out << "\n";
    for (int u = 0; u < net.node_count(); ++u) {
        for (int p = 0; p < net.degree(u); ++p) {
            const PortTarget t = net.neighbor(u, p);
            if (t.node > u) {
                out << "edge " << u << " " << p << " " << t.node << " " << t.port << "\n";
            }
        }
    }
    return out.str();
}

std::vector<int> bfs_distances(const PortNetwork& net, int from) {
    std::vector<int> dist(net.node_count(), -1);
    std::deque<int> queue{from};
    dist[from] = 0;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (const PortTarget& t : net.adjacency()[v]) {
            if (dist[t.node] < 0) {
                dist[t.node] = dist[v] + 1;
                queue.push_back(t.node);
            }
        }
    }
    return dist;
}

int eccentricity(const PortNetwork& net, int from) {
    const std::vector<int> dist = bfs_distances(net, from);
    return *std::max_element(dist.begin(), dist.end());
}

int diameter(const PortNetwork& net) {
    int best = 0;
    for (int v = 0; v < net.node_count(); ++v) best = std::max(best, eccentricity(net, v));
    return best;
}

QuotientGraph::QuotientGraph(std::vector<int> class_colors, std::vector<Edge> edges)
    : colors_(std::move(class_colors)), edges_(std::move(edges)) {
    const int k = static_cast<int>(colors_.size());
    check(k >= 1, "quotient graph needs at least one class");
    for (int c : colors_) check(c >= 1, "class colors must be positive");
    for (Edge& e : edges_) {
        check(e.a.cls >= 0 && e.a.cls < k && e.b.cls >= 0 && e.b.cls < k, "edge endpoint class out of range");
        check(e.a.port >= 0 && e.b.port >= 0, "edge ports must be non-negative");
        if (e.b < e.a) std::swap(e.a, e.b);
    }
    std::sort(edges_.begin(), edges_.end());
    check(std::adjacent_find(edges_.begin(), edges_.end()) == edges_.end(), "duplicate quotient edge");

    // Port slots at each class must be exactly {0..deg-1}; a degenerate loop
    // (both endpoints equal) occupies one slot.
    std::vector<std::vector<int>> slots(k);
    for (const Edge& e : edges_) {
        slots[e.a.cls].push_back(e.a.port);
        if (!(e.a == e.b)) slots[e.b.cls].push_back(e.b.port);
    }
    for (int c = 0; c < k; ++c) {
        std::sort(slots[c].begin(), slots[c].end());
        for (int p = 0; p < static_cast<int>(slots[c].size()); ++p) {
            check(slots[c][p] == p, "ports of class " + std::to_string(c) + " are not exactly 0..deg-1");
        }
    }

    // connectivity as a multigraph
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Edge& e : edges_) parent[find(e.a.cls)] = find(e.b.cls);
    for (int c = 0; c < k; ++c) check(find(c) == find(0), "quotient graph is not connected");
}

int QuotientGraph::degree(int cls) const {
    int d = 0;
    for (const Edge& e : edges_) {
        if (e.a.cls == cls) ++d;
        if (e.b.cls == cls && !(e.a == e.b)) ++d;
    }
    return d;
}

int QuotientGraph::count_color(int color) const {
    return static_cast<int>(std::count(colors_.begin(), colors_.end(), color));
}

std::vector<std::vector<PortTarget>> QuotientGraph::to_adjacency() const {
    std::vector<std::vector<PortTarget>> adj(class_count());
    for (int c = 0; c < class_count(); ++c) adj[c].resize(degree(c));
    for (const Edge& e : edges_) {
        adj[e.a.cls][e.a.port] = {e.b.cls, e.b.port};
        adj[e.b.cls][e.b.port] = {e.a.cls, e.a.port};
    }
    return adj;
}

std::string QuotientGraph::to_json() const {
    std::ostringstream out;
    out << "{\"classes\":[";
    for (int c = 0; c < class_count(); ++c) {
        if (c) out << ",";
        out << "{\"id\":" << c << ",\"color\":" << colors_[c] << "}";
    }
    out << "],\"edges\":[";
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (i) out << ",";
        const Edge& e = edges_[i];
        out << "[" << e.a.cls << "," << e.a.port << "," << e.b.cls << "," << e.b.port << "]";
    }
    out << "]}";
    return out.str();
}

bool is_tree(const QuotientGraph& q) {
    if (static_cast<int>(q.edges().size()) != q.class_count() - 1) return false;
    std::set<std::pair<int, int>> pairs;
    for (const QuotientGraph::Edge& e : q.edges()) {
        if (e.a.cls == e.b.cls) return false;  // self-loop
        if (!pairs.insert({e.a.cls, e.b.cls}).second) return false;  // parallel edge
    }
    return true;  // connectivity holds by construction
}

}  // namespace colnet
