#include "colnet/engine.hpp"

#include <sstream>
#include <stdexcept>

namespace colnet {

namespace {

std::string to_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out += digits[c >> 4];
        out += digits[c & 0xf];
    }
    return out;
}

void append_port_map(std::string& out, const std::vector<std::optional<std::string>>& messages) {
    out += "{";
    bool first = true;
    for (std::size_t p = 0; p < messages.size(); ++p) {
        if (!messages[p]) continue;
        if (!first) out += ",";
        first = false;
        out += "\"" + std::to_string(p) + "\":\"" + to_hex(*messages[p]) + "\"";
    }
    out += "}";
}

}  // namespace

std::string Transcript::to_jsonl() const {
    std::string out;
    for (const Entry& e : entries) {
        out += "{\"t\":" + std::to_string(e.round) + ",\"v\":" + std::to_string(e.node) + ",\"in\":";
        append_port_map(out, e.in);
        out += ",\"out\":";
        append_port_map(out, e.out);
        out += e.done ? ",\"done\":true}" : ",\"done\":false}";
        out += "\n";
    }
    return out;
}

RunResult run(const PortNetwork& net, const Coloring& col, const NodeProgram& program, const std::string& input,
              const RunOptions& options) {
    col.validate(net);
    if (options.max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");

    const int n = net.node_count();
    std::vector<std::unique_ptr<NodeProcess>> procs;
    procs.reserve(n);
    for (int v = 0; v < n; ++v) {
        procs.push_back(program.spawn());
        procs.back()->init(net.degree(v), col.color[v], input);
    }

    RunResult result;
    result.outputs.resize(n);
    std::vector<char> running(n, 1);
    int running_count = n;

    for (int round = 1; round <= options.max_rounds && running_count > 0; ++round) {
        result.rounds = round;

        std::vector<std::vector<std::optional<std::string>>> outbox(n);
        for (int v = 0; v < n; ++v) {
            if (running[v]) {
                outbox[v] = procs[v]->send();
                if (static_cast<int>(outbox[v].size()) != net.degree(v)) {
                    throw std::logic_error("node program emitted an outbox of the wrong size");
                }
            } else {
                outbox[v].assign(net.degree(v), std::nullopt);
            }
        }

        // delivery: the message leaving v through port p arrives at the paired
        // port of the neighbor across that edge, in the same round
        std::vector<std::vector<std::optional<std::string>>> inbox(n);
        for (int v = 0; v < n; ++v) inbox[v].resize(net.degree(v));
        for (int v = 0; v < n; ++v) {
            for (int p = 0; p < net.degree(v); ++p) {
                const PortTarget t = net.neighbor(v, p);
                inbox[t.node][t.port] = outbox[v][p];
            }
        }

        for (int v = 0; v < n; ++v) {
            if (!running[v]) continue;
            std::optional<std::string> output = procs[v]->receive(inbox[v]);
            const bool done = output.has_value();
            if (done) {
                result.outputs[v] = std::move(output);
                running[v] = 0;
                --running_count;
            }
            if (options.record_transcript) {
                Transcript::Entry entry;
                entry.round = round;
                entry.node = v;
                entry.in = std::move(inbox[v]);
                entry.out = std::move(outbox[v]);
                entry.done = done;
                entry.output = result.outputs[v];
                entry.digest = procs[v]->state_digest();
                result.transcript.entries.push_back(std::move(entry));
            }
        }
    }

    result.transcript.rounds = result.rounds;
    if (running_count > 0) {
        result.limit_hit = true;
        for (int v = 0; v < n; ++v) {
            if (running[v]) result.unfinished.push_back(v);
        }
    }
    return result;
}

bool twin_check(const Transcript& t1, const PortNetwork& net1, int u1, const Transcript& t2,
                const PortNetwork& net2, int u2, int rounds) {
    if (net1.degree(u1) != net2.degree(u2)) return false;
    auto entry_for = [](const Transcript& t, int node, int round) -> const Transcript::Entry* {
        for (const Transcript::Entry& e : t.entries) {
            if (e.node == node && e.round == round) return &e;
        }
        return nullptr;
    };
    for (int round = 1; round <= rounds; ++round) {
        const Transcript::Entry* e1 = entry_for(t1, u1, round);
        const Transcript::Entry* e2 = entry_for(t2, u2, round);
        if ((e1 == nullptr) != (e2 == nullptr)) return false;
        if (e1 == nullptr) continue;  // both already finished
        if (e1->in != e2->in) return false;
        if (e1->done != e2->done) return false;
        if (e1->output != e2->output) return false;
    }
    return true;
}

}  // namespace colnet
