#pragma once

#include <vector>

#include "colnet/netmodel.hpp"
#include "colnet/protocol.hpp"

namespace colnet {

// Node classes by truncated-view equality at the stabilization depth t_star:
// two nodes share a class iff their full colored views are equal.
struct Partition {
    std::vector<int> cls;  // per node, dense ids in canonical key order
    int count = 0;
    int t_star = 0;

    bool same_blocks(const Partition& other) const;
};

// Iterated refinement from the color classes, one step per depth, keyed by
// (own class, sequence over ports of (port, remote port, neighbor class)).
// Stops at the first step that splits nothing.
Partition stable_partition(const PortNetwork& net, const Coloring& col);

// One further refinement step of an arbitrary class vector (used to check
// that the fixpoint stays put).
std::vector<int> refine_once(const PortNetwork& net, const std::vector<int>& cls);

struct QuotientResult {
    QuotientGraph q;
    std::vector<int> class_of_node;  // canonical class ids
    int t_star = 0;
    int sigma = 0;  // common class size
};

// Ground-truth colored quotient graph with canonical class ids (ascending
// encoding order at depth t_star+1, matching the protocol's ordering).
QuotientResult quotient(const PortNetwork& net, const Coloring& col);

// Solvability criterion: false iff the number of alpha-colored classes is at
// most floor(k/2) and the quotient graph is not a tree.
bool feasible(const QuotientGraph& q, int k, int alpha);

// Reference solver. Requires k >= the true size of alpha (the oracle knows
// the truth and rejects bad bounds, so test inputs stay honest).
std::vector<NodeOutcome> oracle_solve(const PortNetwork& net, const Coloring& col, int k, int alpha, Task task);

struct OracleReport {
    QuotientResult quotient;
    bool solvable = false;
    int leader = -1;  // network node id; -1 when unsolvable
};
OracleReport oracle_report(const PortNetwork& net, const Coloring& col, int k, int alpha);

// Exponential reference: resolves the port walk from the root node to a
// network node x and answers whether some strictly shorter walk from the same
// root also ends at x, by enumerating all of them. Rejects node counts above
// 6 and depth limits above 12.
bool has_shallower_copy_brute(const PortNetwork& net, int root, const std::vector<int>& walk, int depth_limit);

// True iff the number of alpha-colored nodes is at most k.
bool validate_color_bound(const Coloring& col, int alpha, int k);

}  // namespace colnet
