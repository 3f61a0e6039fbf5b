#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "colnet/engine.hpp"
#include "colnet/netmodel.hpp"
#include "colnet/views.hpp"

namespace colnet {

enum class Task { kLeaderElection, kTopology };

std::string task_name(Task task);
Task task_from_name(std::string_view name);

// Per-node result: the instance is unsolvable, a port walk to the leader
// (empty iff the node is the leader), or the labeled topology with the node's
// own position.
struct NodeOutcome {
    enum class Kind { kUnsolvable, kLeaderPath, kTopology };

    Kind kind = Kind::kUnsolvable;
    std::vector<int> leader_path;
    std::optional<QuotientGraph> topology;
    int self_class = -1;

    static NodeOutcome unsolvable();
    static NodeOutcome leader(std::vector<int> path);
    static NodeOutcome map(QuotientGraph q, int self);

    std::string to_json() const;
    static NodeOutcome from_json(std::string_view text);
    bool operator==(const NodeOutcome&) const = default;
};

struct ProtocolConfig {
    int k = 1;
    int alpha = 1;
    Task task = Task::kLeaderElection;
};

// Condition of the repetition test evaluated for one path of a truncated
// view: with d' the maximum over all prefix records of their distance to
// color alpha (inside the residual subtree), true iff d' is finite and
// |path| >= 2(k+1)(d'+1).
bool test_repetition(ViewStore& store, ViewId view, const ViewPath& path, int k, int alpha);

// Distinct residual-depth-trunc_depth classes among the records in the first
// max_depth tree levels of the view.
int count_view_classes(ViewStore& store, ViewId view, int max_depth, int trunc_depth);

// Quotient graph extracted from one covering view: classes are the distinct
// depth-trunc_depth truncations of the records at tree depth <= cover_depth,
// with canonical ids in increasing encoding order.
struct ViewQuotient {
    QuotientGraph q;
    std::vector<ViewId> class_keys;  // class_keys[id] = truncation keying class id
};
ViewQuotient quotient_from_view(ViewStore& store, ViewId view, int cover_depth, int trunc_depth);

// Port path of the first occurrence of the class (minimum depth, then
// lexicographically smallest ports) among records at tree depth <= max_depth.
std::optional<std::vector<int>> find_class_occurrence(ViewStore& store, ViewId view, int max_depth,
                                                      int trunc_depth, ViewId class_key);

// Self-simulation on the quotient graph: for every class, the number of
// rounds this protocol needs to finish its view and refinement phases when
// run from that class. budget is the maximum, used to pad all nodes to a
// common finish line.
struct BudgetResult {
    std::vector<int> class_rounds;  // indexed by canonical class id
    int budget = 0;
};
BudgetResult compute_round_budget(ViewStore& store, const QuotientGraph& q, int k, int alpha);

// Envelope used as the default engine round limit.
int default_round_limit(int k, int diameter, int node_count);

class RoundLimitError : public std::runtime_error {
public:
    explicit RoundLimitError(std::vector<int> unfinished);
    const std::vector<int>& unfinished() const { return unfinished_; }

private:
    std::vector<int> unfinished_;
};

// The solver as an engine program: grow the own view until it provably covers
// the network, extend it until the class partition stabilizes, build the
// quotient graph, then keep exchanging until the shared round budget is spent
// and output.
class ProtocolProgram : public NodeProgram {
public:
    ProtocolProgram(std::shared_ptr<ViewStore> store, ProtocolConfig config);

    std::unique_ptr<NodeProcess> spawn() const override;

    static std::string make_input(const ProtocolConfig& config);
    static ProtocolConfig parse_input(const std::string& input);

    const BudgetResult& budget_for(const QuotientGraph& q) const;

    struct NodeStats {
        int cover_depth = -1;   // view-phase exit depth l
        int refine_steps = -1;  // refinement exit index i
        int budget = -1;
    };
    // in spawn order, recorded when each node finishes
    std::vector<NodeStats> stats() const;
    void record_stats(int spawn_index, const NodeStats& stats) const;

    std::shared_ptr<ViewStore> store() const { return store_; }
    const ProtocolConfig& config() const { return config_; }

private:
    std::shared_ptr<ViewStore> store_;
    ProtocolConfig config_;
    mutable std::map<std::string, BudgetResult> budget_memo_;
    mutable std::map<int, NodeStats> stats_;
    mutable int spawn_count_ = 0;
    mutable std::mutex mutex_;
};

struct ProtocolRun {
    std::vector<NodeOutcome> outcomes;
    int rounds = 0;
    std::vector<int> cover_depths;  // per node
    int refine_steps = 0;           // common to all nodes
    int budget = 0;
    Transcript transcript;
};

// Drives the engine with the protocol program; throws RoundLimitError when
// max_rounds (default: the envelope above, from the real diameter) is hit,
// and std::logic_error if the per-node outcomes violate the agreement
// contract.
ProtocolRun run_protocol(const PortNetwork& net, const Coloring& col, const ProtocolConfig& config,
                         int max_rounds = 0, bool record_transcript = false);

}  // namespace colnet
