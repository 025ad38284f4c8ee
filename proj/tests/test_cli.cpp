#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "graphstein/cli.hpp"
#include "graphstein/graph.hpp"
#include "graphstein/homogeneity.hpp"

using namespace graphstein;

namespace {

struct CliResult {
    int code = 0;
    std::string out, err;
};

CliResult cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/graphstein_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("gen then count matches the library") {
    TempFile g("cli_g.txt");
    const CliResult gen = cli({"gen", "--n", "30", "--p", "0.5", "--seed", "42", "--out", g.path});
    REQUIRE(gen.code == 0);

    std::ifstream in(g.path);
    const Graph graph = read_edge_list(in);
    CHECK(graph == gen_gnp(30, 0.5, 42));

    const CliResult count = cli({"count", "--in", g.path, "--pattern", "c4", "--no-timestamp"});
    REQUIRE(count.code == 0);
    std::ostringstream want;
    want << "\"t2\":" << count_four_cycles(graph);
    CHECK(count.out.find(want.str()) != std::string::npos);
}

TEST_CASE("gen without --out streams the edge list") {
    const CliResult r = cli({"gen", "--n", "6", "--p", "1", "--seed", "1"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    const Graph g = read_edge_list(in);
    CHECK(count_edges(g) == 15);
}

TEST_CASE("stochastic commands demand a seed") {
    unsetenv("GRAPHSTEIN_SEED");
    const CliResult r = cli({"gen", "--n", "10", "--p", "0.5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("seed") != std::string::npos);

    setenv("GRAPHSTEIN_SEED", "77", 1);
    const CliResult ok = cli({"gen", "--n", "10", "--p", "0.5"});
    CHECK(ok.code == 0);
    std::istringstream in(ok.out);
    CHECK(read_edge_list(in) == gen_gnp(10, 0.5, 77));

    // --seed beats the environment
    const CliResult flag = cli({"gen", "--n", "10", "--p", "0.5", "--seed", "78"});
    std::istringstream in2(flag.out);
    CHECK(read_edge_list(in2) == gen_gnp(10, 0.5, 78));
    unsetenv("GRAPHSTEIN_SEED");
}

TEST_CASE("usage errors exit with 2") {
    CHECK(cli({"count"}).code == 2);                                // missing --in
    CHECK(cli({"bogus"}).code == 2);                                // unknown subcommand
    CHECK(cli({}).code == 2);                                       // no subcommand
    CHECK(cli({"count", "--in", "/nonexistent/file"}).code == 2);   // unreadable input
    CHECK(cli({"gen", "--n", "10", "--seed", "1"}).code == 2);      // neither --p nor --kernel
    TempFile bad("cli_bad.txt");
    std::ofstream(bad.path) << "3 1\n0 0\n";
    const CliResult r = cli({"count", "--in", bad.path});
    CHECK(r.code == 2);
    CHECK(r.err.find("line") != std::string::npos);  // parse errors carry line numbers
}

TEST_CASE("test subcommand exit codes encode the decision") {
    TempFile g("cli_accept.txt");
    REQUIRE(cli({"gen", "--n", "200", "--p", "0.5", "--seed", "3", "--out", g.path}).code == 0);
    const CliResult accept = cli({"test", "--in", g.path, "--alpha", "0.05", "--no-timestamp"});
    CHECK(accept.code == 0);
    CHECK(accept.out.find("\"reject\":false") != std::string::npos);

    TempFile e("cli_empty.txt");
    std::ofstream(e.path) << "100 0\n";
    const CliResult reject = cli({"test", "--in", e.path, "--alpha", "0.05", "--no-timestamp"});
    CHECK(reject.code == 1);
    CHECK(reject.out.find("\"reject\":true") != std::string::npos);
}

TEST_CASE("confset reports intervals containing the truth") {
    TempFile g("cli_confset.txt");
    REQUIRE(cli({"gen", "--n", "300", "--p", "0.4", "--seed", "8", "--out", g.path}).code == 0);
    const CliResult r = cli({"confset", "--in", g.path, "--alpha", "0.05", "--no-timestamp"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"intervals\":[[") != std::string::npos);
    CHECK(r.out.find("\"statistic_min\":") != std::string::npos);
    CHECK(r.out.find("\"argmin_p\":") != std::string::npos);
}

TEST_CASE("same seed gives byte-identical reports") {
    const std::vector<std::string> cmd = {"experiment", "--kind",  "coverage", "--n",   "40",
                                          "--reps",     "20",      "--seed",   "5",     "--alpha",
                                          "0.05",       "--no-timestamp"};
    const CliResult a = cli(cmd);
    const CliResult b = cli(cmd);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("verify-coupling in both modes") {
    const CliResult exact = cli({"verify-coupling", "--builtin", "graph", "--n", "5", "--p", "0.5",
                                 "--mode", "exact", "--no-timestamp"});
    REQUIRE(exact.code == 0);
    CHECK(exact.out.find("\"all_pass\":true") != std::string::npos);

    const CliResult mc = cli({"verify-coupling", "--builtin", "sizebias2d", "--mode", "mc", "--reps",
                              "5000", "--seed", "4", "--no-timestamp"});
    CHECK(mc.code == 0);
    CHECK(mc.out.find("\"mode\":\"mc\"") != std::string::npos);
}

TEST_CASE("permstat file mode and sampling mode") {
    TempFile p("cli_perm.txt");
    std::ofstream(p.path) << "2 1 4 3\n";
    const CliResult file = cli({"permstat", "--in", p.path, "--no-timestamp"});
    REQUIRE(file.code == 0);
    CHECK(file.out.find("\"descents\":2") != std::string::npos);
    CHECK(file.out.find("\"inversions\":2") != std::string::npos);

    TempFile csv("cli_perm.csv");
    const CliResult sample =
        cli({"permstat", "--n", "12", "--reps", "5", "--seed", "6", "--out", csv.path, "--no-timestamp"});
    REQUIRE(sample.code == 0);
    std::ifstream in(csv.path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "rep,w1,w2");
    int lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 5);
}

TEST_CASE("experiment csv output") {
    TempFile csv("cli_exp.csv");
    const CliResult r = cli({"experiment", "--kind", "distance", "--target", "perm", "--n", "30",
                             "--reps", "50", "--seed", "2", "--csv", csv.path, "--no-timestamp"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"ks_w1\":") != std::string::npos);
    std::ifstream in(csv.path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "rep,w1,w2");
}
