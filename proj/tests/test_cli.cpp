#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "colnet/generators.hpp"
#include "colnet/netmodel.hpp"

using namespace colnet;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
};

std::string cli_binary() {
    const char* path = std::getenv("COLNET_CLI");
    REQUIRE_MESSAGE(path != nullptr, "COLNET_CLI must point at the built binary");
    return path;
}

CliResult run_cli(const std::string& args) {
    const std::string command = cli_binary() + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buffer[4096];
    while (std::size_t got = fread(buffer, 1, sizeof buffer, pipe)) out.append(buffer, got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "colnet_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_fixture(const std::string& name, const std::string& content) {
    const fs::path path = scratch_dir() / name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("validate") {
    const fs::path good = write_fixture("good.net", "n 2\ncolors 1 2\nedge 0 0 1 0\n");
    CHECK(run_cli("validate " + good.string()).code == 0);

    const fs::path bijection = write_fixture("bij.net", "n 3\ncolors 1 1 1\nedge 0 0 1 0\nedge 0 0 2 0\n");
    CHECK(run_cli("validate " + bijection.string()).code == 1);

    const fs::path split = write_fixture("split.net", "n 4\ncolors 1 1 1 2\nedge 0 0 1 0\nedge 2 0 3 0\n");
    CHECK(run_cli("validate " + split.string()).code == 1);
}

TEST_CASE("oracle output") {
    const fs::path path = write_fixture("path.net", "n 2\ncolors 1 2\nedge 0 0 1 0\n");
    const CliResult res = run_cli("oracle " + path.string() + " --k 1 --alpha 1");
    CHECK(res.code == 0);
    CHECK(res.out == "{\"quotient\":{\"classes\":[{\"id\":0,\"color\":1},{\"id\":1,\"color\":2}],"
                     "\"edges\":[[0,0,1,0]]},\"t_star\":0,\"sigma\":1,\"feasible\":true,\"leader\":0}\n");
}

TEST_CASE("simulate solved and unsolvable") {
    const fs::path path = write_fixture("path.net", "n 2\ncolors 1 2\nedge 0 0 1 0\n");
    const CliResult solved = run_cli("simulate " + path.string() + " --k 1 --alpha 1 --task le");
    CHECK(solved.code == 0);
    CHECK(solved.out == "{\"task\":\"le\",\"status\":\"solved\",\"rounds\":20,"
                        "\"outputs\":[{\"node\":0,\"path\":[]},{\"node\":1,\"path\":[0]}]}\n");

    const ParsedNetwork ring = gen_ring({4, {{0, 1}}, {}});
    const fs::path ring_path = write_fixture("ring.net", serialize_network(ring.net, ring.col));
    const CliResult unsolvable = run_cli("simulate " + ring_path.string() + " --k 4 --alpha 1 --task top");
    CHECK(unsolvable.code == 0);
    CHECK(unsolvable.out.find("\"status\":\"unsolvable\"") != std::string::npos);

    const CliResult csv = run_cli("simulate " + path.string() + " --k 1 --alpha 1 --task le --format csv");
    CHECK(csv.out == "node,status,path,self\n0,leader,,\n1,leader,0,\n");
}

TEST_CASE("simulate transcript, round limit and strict mode") {
    const fs::path path = write_fixture("path.net", "n 2\ncolors 1 2\nedge 0 0 1 0\n");
    const fs::path transcript = scratch_dir() / "transcript.jsonl";
    CHECK(run_cli("simulate " + path.string() + " --k 1 --alpha 1 --transcript " + transcript.string()).code == 0);
    std::ifstream in(transcript);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        CHECK(line.find("{\"t\":") == 0);
        ++lines;
    }
    CHECK(lines == 2 * 20 - 1);  // node 0 finishes one round earlier

    CHECK(run_cli("simulate " + path.string() + " --k 1 --alpha 1 --max-rounds 3").code == 2);

    const ParsedNetwork ring = gen_ring({4, {{0, 1}}, {}});
    const fs::path ring_path = write_fixture("ring4.net", serialize_network(ring.net, ring.col));
    CHECK(run_cli("simulate " + ring_path.string() + " --k 2 --alpha 1").code == 0);  // warns only
    CHECK(run_cli("simulate " + ring_path.string() + " --k 2 --alpha 1 --strict").code == 3);
}

TEST_CASE("compare agrees on files and directories") {
    const fs::path dir = scratch_dir() / "batch";
    fs::create_directories(dir);
    std::ofstream(dir / "a.net") << "n 2\ncolors 1 2\nedge 0 0 1 0\n";
    const ParsedNetwork ring = gen_ring({5, {{0, 1}}, single_alpha_coloring(5, 0).color});
    std::ofstream(dir / "b.net") << serialize_network(ring.net, ring.col);

    CHECK(run_cli("compare " + (dir / "a.net").string() + " --k 1 --alpha 1").code == 0);
    const CliResult batch = run_cli("compare " + dir.string() + " --k 1 --alpha 1");
    CHECK(batch.code == 0);
    std::istringstream lines(batch.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "file,agree,detail");
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.find(",yes,") != std::string::npos);
        ++rows;
    }
    CHECK(rows == 2);

    CHECK(run_cli("compare " + (dir / "missing.net").string() + " --k 1 --alpha 1").code == 1);
}

TEST_CASE("gen emits valid networks") {
    const fs::path out = scratch_dir() / "gen.net";
    CHECK(run_cli("gen ring --n 6 --colors 1,2,2,3,3,3 --out " + out.string()).code == 0);
    CHECK(run_cli("validate " + out.string()).code == 0);

    CHECK(run_cli("gen chordal --n 8 --d 2 --single-alpha --out " + out.string()).code == 0);
    const ParsedNetwork chordal = parse_network([&] {
        std::ifstream in(out);
        std::ostringstream text;
        text << in.rdbuf();
        return text.str();
    }());
    CHECK(chordal.net == gen_chordal(8, 2));
    CHECK(chordal.col.color[0] == 1);

    CHECK(run_cli("gen stretch --sizes 1,2,3 --T 8 --x-prime 5,11,18 --out " + out.string()).code == 0);
    CHECK(run_cli("validate " + out.string()).code == 0);

    const fs::path small = scratch_dir() / "small.net";
    const fs::path big = scratch_dir() / "big.net";
    CHECK(run_cli("gen pendant --n 6 --d 2 --k 3 --out-small " + small.string() + " --out-big " + big.string())
              .code == 0);
    CHECK(run_cli("validate " + small.string()).code == 0);
    CHECK(run_cli("validate " + big.string()).code == 0);

    CHECK(run_cli("gen ring --n 2").code == 1);
}

TEST_CASE("bench emits the fixed header and respects the bound column") {
    const CliResult res = run_cli("bench --family chordal --n 10 --d 2 --k-min 1 --k-max 3");
    CHECK(res.code == 0);
    std::istringstream lines(res.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,D,k,rounds,bound,i");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 3);

    // byte-identical reruns
    CHECK(run_cli("bench --family chordal --n 10 --d 2 --k-min 1 --k-max 3").out == res.out);
}
