#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace colnet {

// One endpoint of a port-labeled connection: the node on the other side of
// an edge and the local port number at that node.
struct PortTarget {
    int node = -1;
    int port = -1;
    auto operator<=>(const PortTarget&) const = default;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Simple connected undirected graph with a local port numbering 0..deg(v)-1
// at every node. adjacency()[v][p] names the neighbor reached through port p
// of v and the port at which the edge arrives there. Immutable after
// construction; the constructor rejects anything that is not a valid network
// (dangling ports, asymmetric pairing, self-loops, parallel edges,
// disconnected graphs, fewer than two nodes).
class PortNetwork {
public:
    explicit PortNetwork(std::vector<std::vector<PortTarget>> adjacency);

    int node_count() const { return static_cast<int>(adj_.size()); }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    PortTarget neighbor(int v, int p) const { return adj_[v][p]; }
    const std::vector<std::vector<PortTarget>>& adjacency() const { return adj_; }
    int edge_count() const;

    bool operator==(const PortNetwork& other) const { return adj_ == other.adj_; }

private:
    std::vector<std::vector<PortTarget>> adj_;
};

// Node colors are 1-based; color_count is the number c of distinct colors and
// every value in 1..c must occur somewhere (checked by validate()).
struct Coloring {
    std::vector<int> color;
    int color_count = 0;

    void validate(const PortNetwork& net) const;
    int size_of_color(int c) const;
    bool operator==(const Coloring&) const = default;
};

struct ParsedNetwork {
    PortNetwork net;
    Coloring col;
};

// Line-based text format:
//   n <count>
//   colors <c_1> ... <c_n>
//   edge <u> <p_u> <v> <p_v>     (one line per undirected edge)
// Lines starting with '#' are comments. Throws ParseError (with position) on
// malformed input and ValidationError on structural violations.
ParsedNetwork parse_network(std::string_view text);

// Canonical text form: edges listed once, keyed by (smaller endpoint, its
// port). parse_network(serialize_network(x)) == x.
std::string serialize_network(const PortNetwork& net, const Coloring& col);

std::vector<int> bfs_distances(const PortNetwork& net, int from);
int eccentricity(const PortNetwork& net, int from);
int diameter(const PortNetwork& net);

// Colored multigraph on view-equivalence classes. Self-loops and parallel
// edges are allowed, including the degenerate loop whose two endpoints are
// the same (class, port) slot; such a loop occupies a single port.
class QuotientGraph {
public:
    struct Endpoint {
        int cls = -1;
        int port = -1;
        auto operator<=>(const Endpoint&) const = default;
    };
    struct Edge {
        Endpoint a, b;
        auto operator<=>(const Edge&) const = default;
    };

    QuotientGraph(std::vector<int> class_colors, std::vector<Edge> edges);

    int class_count() const { return static_cast<int>(colors_.size()); }
    int class_color(int cls) const { return colors_[cls]; }
    const std::vector<int>& class_colors() const { return colors_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int degree(int cls) const;
    int count_color(int color) const;

    // adjacency in the same shape as PortNetwork::adjacency(); loops walk
    // back into the class itself.
    std::vector<std::vector<PortTarget>> to_adjacency() const;

    // {"classes":[{"id":0,"color":1},...],"edges":[[a,p,b,q],...]}
    std::string to_json() const;

    bool operator==(const QuotientGraph&) const = default;

private:
    std::vector<int> colors_;
    std::vector<Edge> edges_;
};

// Tree test used by the solvability criterion: connected, no self-loops, no
// parallel edges, and exactly class_count-1 edges.
bool is_tree(const QuotientGraph& q);

}  // namespace colnet
