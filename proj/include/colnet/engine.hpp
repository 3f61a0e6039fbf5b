#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "colnet/netmodel.hpp"

namespace colnet {

// Per-node state machine driven by the round executor. One round is: every
// running node emits one optional message per port (send), all messages are
// delivered across their edges, then every running node consumes its inbox
// (receive) and may produce its final output. Implementations must be
// deterministic functions of their own state and inbox.
class NodeProcess {
public:
    virtual ~NodeProcess() = default;
    virtual void init(int degree, int color, const std::string& input) = 0;
    virtual std::vector<std::optional<std::string>> send() = 0;
    virtual std::optional<std::string> receive(const std::vector<std::optional<std::string>>& inbox) = 0;
    virtual std::string state_digest() const { return {}; }
};

class NodeProgram {
public:
    virtual ~NodeProgram() = default;
    // Called once per node, in node order.
    virtual std::unique_ptr<NodeProcess> spawn() const = 0;
};

// Full record of one run: which bytes moved where each round, port-stamped on
// both sides, plus per-round state digests and outputs.
struct Transcript {
    struct Entry {
        int round = 0;
        int node = 0;
        std::vector<std::optional<std::string>> in;
        std::vector<std::optional<std::string>> out;
        bool done = false;
        std::optional<std::string> output;
        std::string digest;
    };
    std::vector<Entry> entries;
    int rounds = 0;

    // JSON lines, one per (round, node):
    // {"t":3,"v":5,"in":{"0":"<hex>",...},"out":{...},"done":false}
    std::string to_jsonl() const;
};

struct RunOptions {
    int max_rounds = 1;
    bool record_transcript = false;
};

struct RunResult {
    std::vector<std::optional<std::string>> outputs;  // per node, set once done
    int rounds = 0;                                   // last round with a running node
    bool limit_hit = false;
    std::vector<int> unfinished;
    Transcript transcript;
};

// Runs the program on every node until all nodes have produced an output or
// max_rounds is exhausted (limit_hit then reports the stragglers). Nodes that
// have finished deliver the absent message on all their ports.
RunResult run(const PortNetwork& net, const Coloring& col, const NodeProgram& program, const std::string& input,
              const RunOptions& options);

// True iff node u1 of the first run and node u2 of the second received the
// same per-port messages and produced the same outputs through the given
// round. Both transcripts must come from the same program and input.
bool twin_check(const Transcript& t1, const PortNetwork& net1, int u1, const Transcript& t2,
                const PortNetwork& net2, int u2, int rounds);

}  // namespace colnet
