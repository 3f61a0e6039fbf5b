#pragma once

#include <utility>
#include <vector>

#include "colnet/netmodel.hpp"

namespace colnet {

// Ring v_0..v_{n-1} where edge i joins v_i and v_{i+1 mod n} with ports
// (pattern[i].first at v_i, pattern[i].second at v_{i+1}). The pattern may be
// shorter than n and is then repeated cyclically (its length must divide n).
// The default single entry (0,1) gives the oriented ring.
struct RingSpec {
    int n = 3;
    std::vector<std::pair<int, int>> pattern{{0, 1}};
    std::vector<int> colors;  // empty means all nodes take color 1
};

ParsedNetwork gen_ring(const RingSpec& spec);

// Ring stretched so that an observer cannot tell it from the base within the
// given number of rounds: ports and colors of the first 2n*ceil(T/n)+n
// positions are copied cyclically from the base, the remaining ports repeat
// the base pattern (with the two seam ports completed deterministically) and
// the remaining color counts are filled in ascending color order up to
// target_sizes. Requires target_sizes[j] >= (2*ceil(T/n)+1) * base size of
// color j+1.
struct StretchResult {
    PortNetwork net;
    Coloring col;
    int copied_positions = 0;
};
StretchResult gen_stretch(const RingSpec& base, int rounds, const std::vector<int>& target_sizes);

// 2d-regular chordal ring on n nodes: for j in 1..d, v_i and v_{i+j} are
// joined with port j-1 at v_i and port d+j-1 at v_{i+j}. Requires d < n/2.
PortNetwork gen_chordal(int n, int d);

// The pair used for the round lower bound: G(n,d) with a single node of
// color 1 at v_0, and G(kn,d) plus a pendant node hanging off v_0 (attached
// at the next free port of v_0, port 0 on the pendant side), colored 1 at
// every position that is a multiple of n.
struct PendantFamily {
    PortNetwork small_net;
    Coloring small_col;
    PortNetwork big_net;
    Coloring big_col;
};
PendantFamily gen_pendant_family(int n, int d, int k);

// All nodes colored 1.
Coloring uniform_coloring(int n);
// alpha_node colored 1, everything else colored 2.
Coloring single_alpha_coloring(int n, int alpha_node);

}  // namespace colnet
