#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace colnet::cli {

// Exit codes: 0 success/agreement, 1 validation failure or mismatch,
// 2 round limit exceeded, 3 color-bound warning escalated by --strict.

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err);

int cmd_oracle(const std::string& path, int k, int alpha, std::ostream& out, std::ostream& err);

struct SimulateOptions {
    std::string path;
    int k = 1;
    int alpha = 1;
    std::string task = "le";
    int max_rounds = 0;  // 0 = derive the envelope from the network
    std::string format = "json";
    std::string transcript_path;
    bool strict = false;
    std::string out_path;
};
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

// Runs protocol against oracle for both tasks; on a directory, handles every
// *.net file inside (sorted) and emits one CSV row per file.
int cmd_compare(const std::string& path, int k, int alpha, std::ostream& out, std::ostream& err);

struct BenchOptions {
    std::string family = "chordal";  // chordal | ring | stretch
    int n = 24;
    int d = 4;
    int k = 2;
    int k_min = 1;
    int k_max = 6;
    int n_min = 8;
    int n_max = 32;
    int n_step = 4;
    std::vector<int> sizes{1, 2, 3};
    int t_min = 4;
    int t_max = 10;
};
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);

struct GenOptions {
    std::string family;  // ring | chordal | stretch | pendant
    int n = 6;
    int d = 2;
    int k = 3;
    std::vector<int> colors;
    std::vector<std::pair<int, int>> pattern;
    std::vector<int> sizes;
    std::vector<int> target_sizes;
    int rounds = 8;
    bool single_alpha = false;
    std::string out_path;        // stdout when empty
    std::string out_small_path;  // pendant: the two outputs
    std::string out_big_path;
};
int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv);

}  // namespace colnet::cli
