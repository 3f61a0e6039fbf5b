#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "colnet/netmodel.hpp"

namespace colnet {

// Handle to a truncated colored view held in a ViewStore. Two handles from
// the same store are equal iff the views are equal as port-labeled colored
// trees; the store folds the exponential tree into a canonical DAG.
using ViewId = std::uint32_t;

inline constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

// Append-only interning table for view records. All mutating entry points
// are serialized by an internal mutex, so the store can be shared freely.
class ViewStore {
public:
    ViewStore() = default;
    ViewStore(const ViewStore&) = delete;
    ViewStore& operator=(const ViewStore&) = delete;

    // children[p] = (port at the child through which the edge arrives, child
    // view). All children must share one depth; the record's depth is one
    // more. A record with no children has depth 0.
    ViewId intern(int color, std::span<const std::pair<int, ViewId>> children);

    int color(ViewId id) const { return records_[id].color; }
    int depth(ViewId id) const { return records_[id].depth; }
    int child_count(ViewId id) const { return static_cast<int>(records_[id].children.size()); }
    std::pair<int, ViewId> child(ViewId id, int port) const { return records_[id].children[port]; }
    std::size_t size() const { return records_.size(); }

    // Length of the shortest root-to-node path inside this record's tree that
    // reaches color alpha; kInfiniteDistance if alpha does not appear.
    int dist_to_color(ViewId id, int alpha);

    // Restriction of the record to the given smaller (or equal) depth.
    ViewId truncate(ViewId id, int target_depth);

    // Byte-wise order of the canonical text encodings, computed structurally
    // so that deep views never have to be materialized.
    std::strong_ordering compare_encodings(ViewId a, ViewId b);

private:
    struct Record {
        int color;
        int depth;
        std::vector<std::pair<int, ViewId>> children;
    };

    ViewId intern_locked(int color, std::span<const std::pair<int, ViewId>> children);
    int dist_locked(ViewId id, int alpha);
    ViewId truncate_locked(ViewId id, int target_depth);
    std::strong_ordering compare_locked(ViewId a, ViewId b);

    std::vector<Record> records_;
    std::unordered_map<std::string, ViewId> index_;
    std::unordered_map<std::uint64_t, int> dist_memo_;
    std::unordered_map<std::uint64_t, ViewId> trunc_memo_;
    std::unordered_map<std::uint64_t, std::strong_ordering> cmp_memo_;
    mutable std::mutex mutex_;
};

// Canonical text encoding:
//   view := "(" color { " " port ":" port view } ")"
// with children in increasing local-port order and decimal integers. Grows
// with the size of the underlying tree, so only use on shallow views.
std::string encode(const ViewStore& store, ViewId id);

// Inverse of encode; throws std::invalid_argument on malformed text.
ViewId decode(ViewStore& store, std::string_view text);

// One communication step: the depth-(t+1) view of a node of the given color
// whose port-p child is neighbors[p]. Rejects an empty neighbor list and
// mismatched child depths.
ViewId assemble(ViewStore& store, int color, std::span<const std::pair<int, ViewId>> neighbors);

struct ViewPathStep {
    int port = -1;      // local port taken at the current record
    int incoming = -1;  // port at the child through which the edge arrives
    auto operator<=>(const ViewPathStep&) const = default;
};
using ViewPath = std::vector<ViewPathStep>;

struct ResolvedView {
    ViewId record;
    int remaining_depth;
};

// Follows the path from the root and returns the record standing for the
// subtree at its endpoint. Throws std::invalid_argument on an invalid step.
ResolvedView resolve(const ViewStore& store, ViewId id, const ViewPath& path);

// Loop guard of the view-growing phase: true iff some root-to-leaf path of
// the conceptual depth-l tree has no prefix node v satisfying
// |path(v)| >= 2(k+1)(d'+1), where d' is the running maximum over the prefix
// of the distance from each node to color alpha inside its residual subtree.
bool uncovered_leaf_exists(ViewStore& store, ViewId view, int k, int alpha);

// Memoizing builder of truncated views of network nodes over any port-labeled
// adjacency (plain networks or quotient multigraphs).
class ViewBuilder {
public:
    ViewBuilder(ViewStore& store, std::vector<std::vector<PortTarget>> adjacency, std::vector<int> colors);
    ViewBuilder(ViewStore& store, const PortNetwork& net, const Coloring& col);

    ViewId view(int node, int depth);
    ViewStore& store() { return store_; }
    int node_count() const { return static_cast<int>(colors_.size()); }

private:
    ViewStore& store_;
    std::vector<std::vector<PortTarget>> adj_;
    std::vector<int> colors_;
    std::vector<std::vector<ViewId>> levels_;  // levels_[d][v]
};

// Depth-l truncated colored view of one node; convenience over ViewBuilder.
ViewId build_view(ViewStore& store, const PortNetwork& net, const Coloring& col, int node, int depth);

// Wire form exchanged between nodes: "V<depth> " followed by the reachable
// records in post-order, each as color(q:ref,...) with refs into the emitted
// table, entries joined by ';'. Content-canonical, so byte-equal exactly for
// equal views, and linear in the DAG rather than the tree.
std::string encode_message(const ViewStore& store, ViewId id);
ViewId decode_message(ViewStore& store, std::string_view bytes);

}  // namespace colnet
