#include "colnet/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace colnet {

std::string task_name(Task task) { return task == Task::kLeaderElection ? "le" : "top"; }

Task task_from_name(std::string_view name) {
    if (name == "le") return Task::kLeaderElection;
    if (name == "top") return Task::kTopology;
    throw std::invalid_argument("unknown task '" + std::string(name) + "' (expected 'le' or 'top')");
}

NodeOutcome NodeOutcome::unsolvable() { return {}; }

NodeOutcome NodeOutcome::leader(std::vector<int> path) {
    NodeOutcome out;
    out.kind = Kind::kLeaderPath;
    out.leader_path = std::move(path);
    return out;
}

NodeOutcome NodeOutcome::map(QuotientGraph q, int self) {
    NodeOutcome out;
    out.kind = Kind::kTopology;
    out.topology = std::move(q);
    out.self_class = self;
    return out;
}

std::string NodeOutcome::to_json() const {
    switch (kind) {
        case Kind::kUnsolvable:
            return "{\"status\":\"unsolvable\"}";
        case Kind::kLeaderPath: {
            std::string out = "{\"status\":\"leader\",\"path\":[";
            for (std::size_t i = 0; i < leader_path.size(); ++i) {
                if (i) out += ",";
                out += std::to_string(leader_path[i]);
            }
            return out + "]}";
        }
        case Kind::kTopology:
            return "{\"status\":\"topology\",\"self\":" + std::to_string(self_class) +
                   ",\"topology\":" + topology->to_json() + "}";
    }
    throw std::logic_error("corrupt outcome");
}

NodeOutcome NodeOutcome::from_json(std::string_view text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    const std::string status = j.at("status").get<std::string>();
    if (status == "unsolvable") return unsolvable();
    if (status == "leader") return leader(j.at("path").get<std::vector<int>>());
    if (status == "topology") {
        const nlohmann::json& t = j.at("topology");
        std::vector<int> colors;
        for (const auto& cls : t.at("classes")) colors.push_back(cls.at("color").get<int>());
        std::vector<QuotientGraph::Edge> edges;
        for (const auto& e : t.at("edges")) {
            edges.push_back({{e.at(0).get<int>(), e.at(1).get<int>()}, {e.at(2).get<int>(), e.at(3).get<int>()}});
        }
        return map(QuotientGraph(std::move(colors), std::move(edges)), j.at("self").get<int>());
    }
    throw std::invalid_argument("unknown outcome status '" + status + "'");
}

bool test_repetition(ViewStore& store, ViewId view, const ViewPath& path, int k, int alpha) {
    if (store.depth(view) < 1) throw std::invalid_argument("test_repetition needs a view of depth >= 1");
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    ViewId cur = view;
    int max_dist = store.dist_to_color(cur, alpha);
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (path[i].port < 0 || path[i].port >= store.child_count(cur)) {
            throw std::invalid_argument("invalid path step " + std::to_string(i));
        }
        cur = store.child(cur, path[i].port).second;
        const int d = store.dist_to_color(cur, alpha);
        if (d == kInfiniteDistance || max_dist == kInfiniteDistance) {
            max_dist = kInfiniteDistance;
        } else {
            max_dist = std::max(max_dist, d);
        }
    }
    if (max_dist == kInfiniteDistance) return false;
    return static_cast<long long>(path.size()) >= 2LL * (k + 1) * (max_dist + 1);
}

namespace {

// Distinct records of the first max_depth tree levels, layer by layer, each
// layer in first-visit order with parents expanded in increasing port order.
std::vector<std::vector<ViewId>> record_layers(const ViewStore& store, ViewId root, int max_depth) {
    std::vector<std::vector<ViewId>> layers;
    std::unordered_set<ViewId> seen{root};
    layers.push_back({root});
    for (int depth = 1; depth <= max_depth; ++depth) {
        std::vector<ViewId> layer;
        for (ViewId rec : layers[depth - 1]) {
            for (int p = 0; p < store.child_count(rec); ++p) {
                const ViewId child = store.child(rec, p).second;
                if (seen.insert(child).second) layer.push_back(child);
            }
        }
        if (layer.empty()) break;
        layers.push_back(std::move(layer));
    }
    return layers;
}

}  // namespace

int count_view_classes(ViewStore& store, ViewId view, int max_depth, int trunc_depth) {
    std::unordered_set<ViewId> classes;
    for (const auto& layer : record_layers(store, view, max_depth)) {
        for (ViewId rec : layer) classes.insert(store.truncate(rec, trunc_depth));
    }
    return static_cast<int>(classes.size());
}

ViewQuotient quotient_from_view(ViewStore& store, ViewId view, int cover_depth, int trunc_depth) {
    if (store.depth(view) < cover_depth + trunc_depth) {
        throw std::invalid_argument("view is too shallow to classify its covering records");
    }
    const std::vector<std::vector<ViewId>> layers = record_layers(store, view, cover_depth);

    std::set<ViewId> key_set;
    for (const auto& layer : layers) {
        for (ViewId rec : layer) key_set.insert(store.truncate(rec, trunc_depth));
    }
    std::vector<ViewId> keys(key_set.begin(), key_set.end());
    std::sort(keys.begin(), keys.end(), [&](ViewId a, ViewId b) {
        return store.compare_encodings(a, b) == std::strong_ordering::less;
    });
    std::unordered_map<ViewId, int> class_id;
    for (std::size_t i = 0; i < keys.size(); ++i) class_id.emplace(keys[i], static_cast<int>(i));

    // every (class, port) slot must resolve to a single opposite slot,
    // whatever representative record witnesses it
    std::map<std::pair<int, int>, std::pair<int, int>> links;
    for (int depth = 0; depth + 1 <= cover_depth && depth < static_cast<int>(layers.size()); ++depth) {
        for (ViewId rec : layers[depth]) {
            const int a = class_id.at(store.truncate(rec, trunc_depth));
            for (int p = 0; p < store.child_count(rec); ++p) {
                const auto [incoming, child] = store.child(rec, p);
                const int b = class_id.at(store.truncate(child, trunc_depth));
                const auto [it, inserted] = links.try_emplace({a, p}, std::make_pair(b, incoming));
                if (!inserted && it->second != std::make_pair(b, incoming)) {
                    throw std::logic_error("inconsistent classification while building the quotient graph");
                }
            }
        }
    }
    for (const auto& [from, to] : links) {
        const auto back = links.find(to);
        if (back == links.end() || back->second != from) {
            throw std::logic_error("asymmetric quotient link");
        }
    }

    std::set<QuotientGraph::Edge> edges;
    for (const auto& [from, to] : links) {
        QuotientGraph::Endpoint a{from.first, from.second};
        QuotientGraph::Endpoint b{to.first, to.second};
        if (b < a) std::swap(a, b);
        edges.insert({a, b});
    }
    std::vector<int> colors(keys.size());
    std::vector<char> has_port(keys.size(), 0);
    for (std::size_t i = 0; i < keys.size(); ++i) colors[i] = store.color(keys[i]);
    for (const auto& [from, to] : links) has_port[from.first] = 1;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (!has_port[i]) throw std::logic_error("class without a witnessed edge; covering view too shallow");
    }
    return {QuotientGraph(std::move(colors), {edges.begin(), edges.end()}), std::move(keys)};
}

std::optional<std::vector<int>> find_class_occurrence(ViewStore& store, ViewId view, int max_depth,
                                                      int trunc_depth, ViewId class_key) {
    struct Arrival {
        ViewId parent;
        int port;
    };
    std::unordered_map<ViewId, Arrival> arrivals;
    std::vector<ViewId> layer{view};
    std::unordered_set<ViewId> seen{view};
    for (int depth = 0; depth <= max_depth; ++depth) {
        for (ViewId rec : layer) {
            if (store.truncate(rec, trunc_depth) == class_key) {
                std::vector<int> path;
                ViewId cur = rec;
                while (cur != view) {
                    const Arrival a = arrivals.at(cur);
                    path.push_back(a.port);
                    cur = a.parent;
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
        }
        if (depth == max_depth) break;
        std::vector<ViewId> next;
        for (ViewId rec : layer) {
            for (int p = 0; p < store.child_count(rec); ++p) {
                const ViewId child = store.child(rec, p).second;
                if (seen.insert(child).second) {
                    arrivals.emplace(child, Arrival{rec, p});
                    next.push_back(child);
                }
            }
        }
        layer = std::move(next);
    }
    return std::nullopt;
}

namespace {

int multigraph_diameter(const std::vector<std::vector<PortTarget>>& adj) {
    const int n = static_cast<int>(adj.size());
    int best = 0;
    for (int s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::vector<int> queue{s};
        dist[s] = 0;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const int v = queue[q];
            for (const PortTarget& t : adj[v]) {
                if (dist[t.node] < 0) {
                    dist[t.node] = dist[v] + 1;
                    queue.push_back(t.node);
                }
            }
        }
        for (int d : dist) best = std::max(best, d == -1 ? 0 : d);
    }
    return best;
}

}  // namespace

BudgetResult compute_round_budget(ViewStore& store, const QuotientGraph& q, int k, int alpha) {
    ViewBuilder builder(store, q.to_adjacency(), q.class_colors());
    const int diam = multigraph_diameter(q.to_adjacency());
    const int depth_cap = default_round_limit(k, diam, q.class_count());

    BudgetResult result;
    result.class_rounds.resize(q.class_count());
    for (int cls = 0; cls < q.class_count(); ++cls) {
        int cover_depth = -1;
        for (int t = 1; t <= depth_cap; ++t) {
            if (!uncovered_leaf_exists(store, builder.view(cls, t), k, alpha)) {
                cover_depth = t;
                break;
            }
        }
        if (cover_depth < 0) throw std::logic_error("view phase failed to stop within its envelope");
        int prev = count_view_classes(store, builder.view(cls, cover_depth), cover_depth, 0);
        int steps = -1;
        for (int i = 1; i <= q.class_count() + 1; ++i) {
            const int count = count_view_classes(store, builder.view(cls, cover_depth + i), cover_depth, i);
            if (count == prev) {
                steps = i;
                break;
            }
            prev = count;
        }
        if (steps < 0) throw std::logic_error("refinement failed to stabilize");
        result.class_rounds[cls] = cover_depth + steps;
        result.budget = std::max(result.budget, result.class_rounds[cls]);
    }
    return result;
}

int default_round_limit(int k, int diameter, int node_count) {
    return 4 * (k + 1) * (diameter + 1) + 4 * diameter + node_count + 16;
}

RoundLimitError::RoundLimitError(std::vector<int> unfinished)
    : std::runtime_error("round limit exceeded with " + std::to_string(unfinished.size()) + " unfinished node(s)"),
      unfinished_(std::move(unfinished)) {}

namespace {

enum class Phase { kViewing, kRefining, kPadding };

class SolveProcess : public NodeProcess {
public:
    SolveProcess(const ProtocolProgram* program, int spawn_index)
        : program_(program), store_(program->store()), spawn_index_(spawn_index) {}

    void init(int degree, int color, const std::string& input) override {
        config_ = ProtocolProgram::parse_input(input);
        degree_ = degree;
        color_ = color;
        view_ = store_->intern(color, {});
        depth_ = 0;
    }

    std::vector<std::optional<std::string>> send() override {
        const std::string body = encode_message(*store_, view_);
        std::vector<std::optional<std::string>> out(degree_);
        for (int p = 0; p < degree_; ++p) out[p] = "P" + std::to_string(p) + " " + body;
        return out;
    }

    std::optional<std::string> receive(const std::vector<std::optional<std::string>>& inbox) override {
        ++rounds_;
        if (!frozen_) extend(inbox);
        switch (phase_) {
            case Phase::kViewing:
                if (frozen_) throw std::logic_error("neighbor went silent during the view phase");
                if (!uncovered_leaf_exists(*store_, view_, config_.k, config_.alpha)) {
                    cover_depth_ = depth_;
                    prev_count_ = count_view_classes(*store_, view_, cover_depth_, 0);
                    phase_ = Phase::kRefining;
                }
                return std::nullopt;
            case Phase::kRefining: {
                if (frozen_) throw std::logic_error("neighbor went silent during the refinement phase");
                const int i = depth_ - cover_depth_;
                const int count = count_view_classes(*store_, view_, cover_depth_, i);
                if (count != prev_count_) {
                    prev_count_ = count;
                    return std::nullopt;
                }
                refine_steps_ = i;
                quotient_ = quotient_from_view(*store_, view_, cover_depth_, refine_steps_);
                const ViewId own_key = store_->truncate(view_, refine_steps_);
                const auto it = std::find(quotient_->class_keys.begin(), quotient_->class_keys.end(), own_key);
                if (it == quotient_->class_keys.end()) throw std::logic_error("own class missing from quotient");
                self_class_ = static_cast<int>(it - quotient_->class_keys.begin());
                const BudgetResult& budget = program_->budget_for(quotient_->q);
                if (budget.class_rounds[self_class_] != rounds_) {
                    throw std::logic_error("self-simulation disagrees with the node's own running time");
                }
                budget_ = budget.budget;
                required_rounds_ = rounds_ + budget_;
                phase_ = Phase::kPadding;
                program_->record_stats(spawn_index_, {cover_depth_, refine_steps_, budget_});
                return std::nullopt;
            }
            case Phase::kPadding:
                if (rounds_ == required_rounds_) return finish().to_json();
                return std::nullopt;
        }
        throw std::logic_error("corrupt phase");
    }

    std::string state_digest() const override {
        std::ostringstream out;
        out << "phase=" << static_cast<int>(phase_) << " depth=" << depth_ << " rounds=" << rounds_;
        return std::move(out).str();
    }

private:
    void extend(const std::vector<std::optional<std::string>>& inbox) {
        std::vector<std::pair<int, ViewId>> children(degree_);
        for (int p = 0; p < degree_; ++p) {
            if (!inbox[p]) {
                frozen_ = true;
                return;
            }
            const std::string& msg = *inbox[p];
            if (msg.empty() || msg[0] != 'P') throw std::invalid_argument("malformed neighbor message");
            int sender_port = 0;
            const char* first = msg.data() + 1;
            const char* last = msg.data() + msg.size();
            auto [ptr, ec] = std::from_chars(first, last, sender_port);
            if (ec != std::errc() || ptr == last || *ptr != ' ') {
                throw std::invalid_argument("malformed neighbor message");
            }
            const ViewId neighbor_view =
                decode_message(*store_, std::string_view(ptr + 1, static_cast<std::size_t>(last - ptr - 1)));
            if (store_->depth(neighbor_view) != depth_) {
                frozen_ = true;
                return;
            }
            children[p] = {sender_port, neighbor_view};
        }
        view_ = store_->intern(color_, children);
        ++depth_;
    }

    NodeOutcome finish() const {
        const QuotientGraph& q = quotient_->q;
        const int alpha_classes = q.count_color(config_.alpha);
        if (alpha_classes <= config_.k / 2 && !is_tree(q)) return NodeOutcome::unsolvable();
        if (config_.task == Task::kTopology) return NodeOutcome::map(q, self_class_);
        const ViewId leader_key = quotient_->class_keys.front();
        std::optional<std::vector<int>> path =
            find_class_occurrence(*store_, view_, cover_depth_, refine_steps_, leader_key);
        if (!path) throw std::logic_error("leader occurrence not found in the covering view");
        return NodeOutcome::leader(std::move(*path));
    }

    const ProtocolProgram* program_;
    std::shared_ptr<ViewStore> store_;
    int spawn_index_;
    ProtocolConfig config_;
    int degree_ = 0;
    int color_ = 0;
    ViewId view_ = 0;
    int depth_ = 0;
    int rounds_ = 0;
    Phase phase_ = Phase::kViewing;
    bool frozen_ = false;
    int cover_depth_ = -1;
    int prev_count_ = -1;
    int refine_steps_ = -1;
    std::optional<ViewQuotient> quotient_;
    int self_class_ = -1;
    int budget_ = -1;
    int required_rounds_ = -1;
};

}  // namespace

ProtocolProgram::ProtocolProgram(std::shared_ptr<ViewStore> store, ProtocolConfig config)
    : store_(std::move(store)), config_(config) {
    if (!store_) throw std::invalid_argument("protocol program needs a view store");
    if (config_.k < 1) throw std::invalid_argument("k must be at least 1");
    if (config_.alpha < 1) throw std::invalid_argument("alpha must be at least 1");
}

std::unique_ptr<NodeProcess> ProtocolProgram::spawn() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return std::make_unique<SolveProcess>(this, spawn_count_++);
}

std::string ProtocolProgram::make_input(const ProtocolConfig& config) {
    return "task=" + task_name(config.task) + ";k=" + std::to_string(config.k) +
           ";alpha=" + std::to_string(config.alpha);
}

ProtocolConfig ProtocolProgram::parse_input(const std::string& input) {
    ProtocolConfig config;
    std::istringstream in(input);
    std::string field;
    while (std::getline(in, field, ';')) {
        const std::size_t eq = field.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("malformed protocol input");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "task") {
            config.task = task_from_name(value);
        } else if (key == "k") {
            config.k = std::stoi(value);
        } else if (key == "alpha") {
            config.alpha = std::stoi(value);
        } else {
            throw std::invalid_argument("unknown protocol input field '" + key + "'");
        }
    }
    return config;
}

const BudgetResult& ProtocolProgram::budget_for(const QuotientGraph& q) const {
    std::lock_guard<std::mutex> lock(mutex_);
    const std::string key = q.to_json();
    const auto it = budget_memo_.find(key);
    if (it != budget_memo_.end()) return it->second;
    return budget_memo_.emplace(key, compute_round_budget(*store_, q, config_.k, config_.alpha)).first->second;
}

std::vector<ProtocolProgram::NodeStats> ProtocolProgram::stats() const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<NodeStats> out(spawn_count_);
    for (const auto& [index, stats] : stats_) out[index] = stats;
    return out;
}

void ProtocolProgram::record_stats(int spawn_index, const NodeStats& stats) const {
    std::lock_guard<std::mutex> lock(mutex_);
    stats_[spawn_index] = stats;
}

ProtocolRun run_protocol(const PortNetwork& net, const Coloring& col, const ProtocolConfig& config,
                         int max_rounds, bool record_transcript) {
    col.validate(net);
    if (config.k < 1) throw std::invalid_argument("k must be at least 1");
    if (config.alpha < 1 || config.alpha > col.color_count || col.size_of_color(config.alpha) == 0) {
        throw std::invalid_argument("alpha must be a color that occurs in the network");
    }
    if (max_rounds <= 0) max_rounds = default_round_limit(config.k, diameter(net), net.node_count());

    auto store = std::make_shared<ViewStore>();
    ProtocolProgram program(store, config);
    RunOptions options;
    options.max_rounds = max_rounds;
    options.record_transcript = record_transcript;
    RunResult raw = run(net, col, program, ProtocolProgram::make_input(config), options);
    if (raw.limit_hit) throw RoundLimitError(raw.unfinished);

    ProtocolRun result;
    result.rounds = raw.rounds;
    result.transcript = std::move(raw.transcript);
    result.outcomes.reserve(net.node_count());
    for (int v = 0; v < net.node_count(); ++v) result.outcomes.push_back(NodeOutcome::from_json(*raw.outputs[v]));

    const std::vector<ProtocolProgram::NodeStats> stats = program.stats();
    result.refine_steps = stats.empty() ? 0 : stats[0].refine_steps;
    result.budget = stats.empty() ? 0 : stats[0].budget;
    for (const auto& s : stats) {
        result.cover_depths.push_back(s.cover_depth);
        if (s.refine_steps != result.refine_steps || s.budget != result.budget) {
            throw std::logic_error("nodes disagree on the refinement depth or round budget");
        }
    }

    // agreement contract across nodes
    const NodeOutcome::Kind kind = result.outcomes.front().kind;
    for (const NodeOutcome& o : result.outcomes) {
        if ((o.kind == NodeOutcome::Kind::kUnsolvable) != (kind == NodeOutcome::Kind::kUnsolvable)) {
            throw std::logic_error("nodes disagree on solvability");
        }
    }
    if (kind == NodeOutcome::Kind::kTopology) {
        for (const NodeOutcome& o : result.outcomes) {
            if (!(o.topology == result.outcomes.front().topology)) {
                throw std::logic_error("nodes output different topologies");
            }
        }
    }
    if (kind == NodeOutcome::Kind::kLeaderPath) {
        int leader = -1;
        for (int v = 0; v < net.node_count(); ++v) {
            int cur = v;
            for (int port : result.outcomes[v].leader_path) {
                if (port < 0 || port >= net.degree(cur)) throw std::logic_error("leader path leaves the network");
                cur = net.neighbor(cur, port).node;
            }
            if (leader == -1) leader = cur;
            if (cur != leader) throw std::logic_error("leader paths do not meet at a single node");
        }
    }
    return result;
}

}  // namespace colnet
