#include "colnet/views.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace colnet {

namespace {

std::uint64_t pack(std::uint32_t hi, std::uint32_t lo) {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

}  // namespace

ViewId ViewStore::intern(int color, std::span<const std::pair<int, ViewId>> children) {
    std::lock_guard<std::mutex> lock(mutex_);
    return intern_locked(color, children);
}

ViewId ViewStore::intern_locked(int color, std::span<const std::pair<int, ViewId>> children) {
    if (color < 1) throw std::invalid_argument("view color must be positive");
    int child_depth = -1;
    for (std::size_t p = 0; p < children.size(); ++p) {
        const auto& [incoming, child] = children[p];
        if (incoming < 0) throw std::invalid_argument("negative incoming port");
        if (child >= records_.size()) throw std::invalid_argument("unknown child view");
        if (p == 0) {
            child_depth = records_[child].depth;
        } else if (records_[child].depth != child_depth) {
            throw std::invalid_argument("mismatched child depths");
        }
    }

    std::string key;
    key.resize(sizeof(int) + children.size() * (sizeof(int) + sizeof(ViewId)));
    char* out = key.data();
    std::memcpy(out, &color, sizeof(int));
    out += sizeof(int);
    for (const auto& [incoming, child] : children) {
        std::memcpy(out, &incoming, sizeof(int));
        out += sizeof(int);
        std::memcpy(out, &child, sizeof(ViewId));
        out += sizeof(ViewId);
    }

    const auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const ViewId id = static_cast<ViewId>(records_.size());
    records_.push_back({color, children.empty() ? 0 : child_depth + 1,
                        std::vector<std::pair<int, ViewId>>(children.begin(), children.end())});
    index_.emplace(std::move(key), id);
    return id;
}

int ViewStore::dist_to_color(ViewId id, int alpha) {
    std::lock_guard<std::mutex> lock(mutex_);
    return dist_locked(id, alpha);
}

int ViewStore::dist_locked(ViewId id, int alpha) {
    if (records_[id].color == alpha) return 0;
    const std::uint64_t key = pack(id, static_cast<std::uint32_t>(alpha));
    if (const auto it = dist_memo_.find(key); it != dist_memo_.end()) return it->second;
    int best = kInfiniteDistance;
    for (const auto& [incoming, child] : records_[id].children) {
        (void)incoming;
        best = std::min(best, dist_locked(child, alpha));
    }
    const int result = best == kInfiniteDistance ? kInfiniteDistance : best + 1;
    dist_memo_.emplace(key, result);
    return result;
}

ViewId ViewStore::truncate(ViewId id, int target_depth) {
    std::lock_guard<std::mutex> lock(mutex_);
    return truncate_locked(id, target_depth);
}

ViewId ViewStore::truncate_locked(ViewId id, int target_depth) {
    const int d = records_[id].depth;
    if (target_depth > d) throw std::invalid_argument("cannot truncate a view to a larger depth");
    if (target_depth == d) return id;
    const std::uint64_t key = pack(id, static_cast<std::uint32_t>(target_depth));
    if (const auto it = trunc_memo_.find(key); it != trunc_memo_.end()) return it->second;
    ViewId result;
    if (target_depth == 0) {
        result = intern_locked(records_[id].color, {});
    } else {
        std::vector<std::pair<int, ViewId>> children;
        children.reserve(records_[id].children.size());
        for (const auto& [incoming, child] : records_[id].children) {
            children.push_back({incoming, truncate_locked(child, target_depth - 1)});
        }
        result = intern_locked(records_[id].color, children);
    }
    trunc_memo_.emplace(key, result);
    return result;
}

std::strong_ordering ViewStore::compare_encodings(ViewId a, ViewId b) {
    std::lock_guard<std::mutex> lock(mutex_);
    return compare_locked(a, b);
}

// Byte order of the canonical text without materializing it. Decimal fields
// compare as plain strings: when one field text is a proper prefix of the
// other, the byte that follows it in the full encoding (' ', '(' or ')') is
// always below '0', so ordinary string comparison gives the right answer.
std::strong_ordering ViewStore::compare_locked(ViewId a, ViewId b) {
    if (a == b) return std::strong_ordering::equal;
    const std::uint64_t key = pack(a, b);
    if (const auto it = cmp_memo_.find(key); it != cmp_memo_.end()) return it->second;

    std::strong_ordering result = std::strong_ordering::equal;
    const Record& ra = records_[a];
    const Record& rb = records_[b];
    if (ra.color != rb.color) {
        result = std::to_string(ra.color).compare(std::to_string(rb.color)) < 0 ? std::strong_ordering::less
                                                                                : std::strong_ordering::greater;
    } else {
        const std::size_t common = std::min(ra.children.size(), rb.children.size());
        for (std::size_t p = 0; p < common && result == std::strong_ordering::equal; ++p) {
            const auto& [qa, ca] = ra.children[p];
            const auto& [qb, cb] = rb.children[p];
            if (qa != qb) {
                result = std::to_string(qa).compare(std::to_string(qb)) < 0 ? std::strong_ordering::less
                                                                            : std::strong_ordering::greater;
            } else {
                result = compare_locked(ca, cb);
            }
        }
        if (result == std::strong_ordering::equal && ra.children.size() != rb.children.size()) {
            // the record with more children continues with ' ' where the other
            // emits ')', and ' ' < ')'
            result = ra.children.size() > rb.children.size() ? std::strong_ordering::less
                                                             : std::strong_ordering::greater;
        }
    }
    cmp_memo_.emplace(key, result);
    return result;
}

std::string encode(const ViewStore& store, ViewId id) {
    std::string out;
    out += "(";
    out += std::to_string(store.color(id));
    for (int p = 0; p < store.child_count(id); ++p) {
        const auto [incoming, child] = store.child(id, p);
        out += " ";
        out += std::to_string(p);
        out += ":";
        out += std::to_string(incoming);
        out += encode(store, child);
    }
    out += ")";
    return out;
}

namespace {

struct TextCursor {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("bad view encoding at offset " + std::to_string(pos) + ": " + what);
    }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    int integer() {
        int value = 0;
        const char* first = text.data() + pos;
        const char* last = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr == first) fail("expected an integer");
        pos += static_cast<std::size_t>(ptr - first);
        return value;
    }
};

ViewId decode_record(ViewStore& store, TextCursor& cur) {
    cur.expect('(');
    const int color = cur.integer();
    std::vector<std::pair<int, ViewId>> children;
    while (cur.peek() == ' ') {
        ++cur.pos;
        const int port = cur.integer();
        if (port != static_cast<int>(children.size())) cur.fail("child ports must be 0,1,... in order");
        cur.expect(':');
        const int incoming = cur.integer();
        children.push_back({incoming, decode_record(store, cur)});
    }
    cur.expect(')');
    return store.intern(color, children);
}

}  // namespace

ViewId decode(ViewStore& store, std::string_view text) {
    TextCursor cur{text};
    const ViewId id = decode_record(store, cur);
    if (cur.pos != text.size()) cur.fail("trailing characters");
    return id;
}

ViewId assemble(ViewStore& store, int color, std::span<const std::pair<int, ViewId>> neighbors) {
    if (neighbors.empty()) throw std::invalid_argument("assemble needs at least one neighbor view");
    return store.intern(color, neighbors);
}

ResolvedView resolve(const ViewStore& store, ViewId id, const ViewPath& path) {
    ViewId cur = id;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const ViewPathStep step = path[i];
        if (step.port < 0 || step.port >= store.child_count(cur)) {
            throw std::invalid_argument("invalid port " + std::to_string(step.port) + " at path step " +
                                        std::to_string(i));
        }
        const auto [incoming, child] = store.child(cur, step.port);
        if (step.incoming >= 0 && step.incoming != incoming) {
            throw std::invalid_argument("incoming port mismatch at path step " + std::to_string(i));
        }
        cur = child;
    }
    return {cur, store.depth(cur)};
}

namespace {

class UncoveredSearch {
public:
    UncoveredSearch(ViewStore& store, int k, int alpha, long long l)
        : store_(store), k_(k), alpha_(alpha), l_(l) {}

    bool run(ViewId root) { return search(root, 0); }

private:
    long long threshold(long long d) const { return 2LL * (k_ + 1) * (d + 1); }

    bool search(ViewId rec, int max_dist) {
        const int d = store_.dist_to_color(rec, alpha_);
        if (d == kInfiniteDistance) return true;  // no trigger possible on this branch
        max_dist = std::max(max_dist, d);
        if (threshold(max_dist) > l_) return true;  // no descendant can reach the threshold
        const long long tree_depth = l_ - store_.depth(rec);
        if (tree_depth >= threshold(max_dist)) return false;  // trigger: whole subtree covered
        if (store_.depth(rec) == 0) return true;              // uncovered leaf
        const std::uint64_t key = (static_cast<std::uint64_t>(rec) << 16) | static_cast<std::uint32_t>(max_dist);
        if (covered_.count(key)) return false;
        for (int p = 0; p < store_.child_count(rec); ++p) {
            if (search(store_.child(rec, p).second, max_dist)) return true;
        }
        covered_.insert(key);
        return false;
    }

    ViewStore& store_;
    int k_;
    int alpha_;
    long long l_;
    std::unordered_set<std::uint64_t> covered_;
};

}  // namespace

bool uncovered_leaf_exists(ViewStore& store, ViewId view, int k, int alpha) {
    if (store.depth(view) < 1) throw std::invalid_argument("uncovered_leaf_exists needs depth >= 1");
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (alpha < 1) throw std::invalid_argument("alpha must be a valid color");
    // finite max_dist values stay below the view depth, which stays below
    // 2^16 for any workload this simulator is meant for
    return UncoveredSearch(store, k, alpha, store.depth(view)).run(view);
}

ViewBuilder::ViewBuilder(ViewStore& store, std::vector<std::vector<PortTarget>> adjacency, std::vector<int> colors)
    : store_(store), adj_(std::move(adjacency)), colors_(std::move(colors)) {
    if (adj_.size() != colors_.size()) throw std::invalid_argument("adjacency/color size mismatch");
}

ViewBuilder::ViewBuilder(ViewStore& store, const PortNetwork& net, const Coloring& col)
    : ViewBuilder(store, net.adjacency(), col.color) {}

ViewId ViewBuilder::view(int node, int depth) {
    if (node < 0 || node >= node_count()) throw std::invalid_argument("node out of range");
    if (depth < 0) throw std::invalid_argument("negative view depth");
    while (static_cast<int>(levels_.size()) <= depth) {
        const int d = static_cast<int>(levels_.size());
        std::vector<ViewId> level(node_count());
        for (int v = 0; v < node_count(); ++v) {
            if (d == 0) {
                level[v] = store_.intern(colors_[v], {});
            } else {
                std::vector<std::pair<int, ViewId>> children;
                children.reserve(adj_[v].size());
                for (const PortTarget& t : adj_[v]) {
                    children.push_back({t.port, levels_[d - 1][t.node]});
                }
                level[v] = store_.intern(colors_[v], children);
            }
        }
        levels_.push_back(std::move(level));
    }
    return levels_[depth][node];
}

ViewId build_view(ViewStore& store, const PortNetwork& net, const Coloring& col, int node, int depth) {
    ViewBuilder builder(store, net, col);
    return builder.view(node, depth);
}

std::string encode_message(const ViewStore& store, ViewId id) {
    std::string out = "V" + std::to_string(store.depth(id)) + " ";
    std::unordered_map<ViewId, int> table_index;
    std::string table;
    // iterative post-order so children land in the table before their parents
    struct Frame {
        ViewId rec;
        int next_child;
    };
    std::vector<Frame> stack{{id, 0}};
    while (!stack.empty()) {
        Frame& frame = stack.back();
        if (table_index.count(frame.rec)) {
            stack.pop_back();
            continue;
        }
        if (frame.next_child < store.child_count(frame.rec)) {
            const ViewId child = store.child(frame.rec, frame.next_child).second;
            ++frame.next_child;
            if (!table_index.count(child)) stack.push_back({child, 0});
            continue;
        }
        const int index = static_cast<int>(table_index.size());
        table_index.emplace(frame.rec, index);
        if (index > 0) table += ";";
        table += std::to_string(store.color(frame.rec));
        table += "(";
        for (int p = 0; p < store.child_count(frame.rec); ++p) {
            const auto [incoming, child] = store.child(frame.rec, p);
            if (p) table += ",";
            table += std::to_string(incoming);
            table += ":";
            table += std::to_string(table_index.at(child));
        }
        table += ")";
        stack.pop_back();
    }
    return out + table;
}

ViewId decode_message(ViewStore& store, std::string_view bytes) {
    TextCursor cur{bytes};
    cur.expect('V');
    const int declared_depth = cur.integer();
    cur.expect(' ');
    std::vector<ViewId> table;
    while (true) {
        const int color = cur.integer();
        cur.expect('(');
        std::vector<std::pair<int, ViewId>> children;
        while (cur.peek() != ')') {
            if (!children.empty()) cur.expect(',');
            const int incoming = cur.integer();
            cur.expect(':');
            const int ref = cur.integer();
            if (ref < 0 || ref >= static_cast<int>(table.size())) cur.fail("forward table reference");
            children.push_back({incoming, table[ref]});
        }
        cur.expect(')');
        table.push_back(store.intern(color, children));
        if (cur.pos == bytes.size()) break;
        cur.expect(';');
    }
    const ViewId root = table.back();
    if (store.depth(root) != declared_depth) {
        throw std::invalid_argument("message depth prefix does not match its payload");
    }
    return root;
}

}  // namespace colnet
