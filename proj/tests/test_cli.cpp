#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qbsc/cli.hpp"
#include "qbsc/report.hpp"

using namespace qbsc;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string tmp_path(const std::string& name) {
    return std::string("qbsc_test_") + name;
}

/// Runs dispatch with stdout captured.
int run_capture(const std::vector<std::string>& args, std::string& out) {
    std::ostringstream captured;
    std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
    int code = -1;
    try {
        code = dispatch(args);
    } catch (...) {
        std::cout.rdbuf(old);
        throw;
    }
    std::cout.rdbuf(old);
    out = captured.str();
    return code;
}

} // namespace

TEST_CASE("parse_real") {
    CHECK(parse_real("0.5") == 0.5);
    CHECK(parse_real("2^-10") == 0.0009765625);
    CHECK(parse_real("2^-10") == std::exp2(-10));
    CHECK(parse_real("2^6") == 64.0);
    CHECK(parse_real("-3^2") == 9.0); // (-3)^2; sign binds to the base
    CHECK_THROWS_AS(parse_real("2^^3"), std::exception);
    CHECK_THROWS_AS(parse_real("abc"), std::exception);
}

TEST_CASE("parse_messages") {
    const auto one = parse_messages("0,1");
    REQUIRE(one.size() == 2);
    CHECK(one[0] == Message{0});
    CHECK(one[1] == Message{1});
    const auto two = parse_messages("0.1,2.3");
    REQUIRE(two.size() == 2);
    CHECK(two[0] == Message{0, 1});
    CHECK(two[1] == Message{2, 3});
    CHECK_THROWS_AS(parse_messages(""), validation_error);
}

TEST_CASE("bounds subcommand prints the worked alpha") {
    std::string out;
    const int code = run_capture({"bounds", "--l", "2", "--r", "1024", "--eps", "2^-10"}, out);
    CHECK(code == 0);
    CHECK(out.find("alpha_for_target = 26") != std::string::npos);
}

TEST_CASE("bounds subcommand with nothing to compute fails usage") {
    std::string out;
    CHECK(run_capture({"bounds"}, out) == 2);
}

TEST_CASE("unknown subcommand is a usage error") {
    std::string out;
    CHECK(run_capture({"frobnicate"}, out) == 2);
}

TEST_CASE("run subcommand writes a deterministic transcript") {
    const std::string f1 = tmp_path("run1.txt"), f2 = tmp_path("run2.txt");
    std::string out;
    const std::vector<std::string> args{"run",  "--preset", "bb84", "--code", "rep:q=4,N=3",
                                        "--A",  "2",        "--seed", "7",    "--t",
                                        "0",    "--out",    f1};
    CHECK(run_capture(args, out) == 0);
    CHECK(out.find("accept=true") != std::string::npos);
    auto args2 = args;
    args2.back() = f2;
    CHECK(run_capture(args2, out) == 0);
    CHECK(slurp(f1) == slurp(f2));
    CHECK(slurp(f1).rfind("QBSC/1\n", 0) == 0);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("attack subcommand produces byte-identical CSVs per seed") {
    const std::string f1 = tmp_path("at1.csv"), f2 = tmp_path("at2.csv");
    std::string out;
    const std::vector<std::string> base{
        "attack", "--preset", "bb84",   "--code",  "rep:q=4,N=3", "--strategy", "wrong",
        "--strings", "0,2",   "--open", "fixed:1", "--trials",    "2000",       "--seed",
        "11",     "--csv"};
    auto args1 = base;
    args1.push_back(f1);
    auto args2 = base;
    args2.push_back(f2);
    CHECK(run_capture(args1, out) == 0);
    CHECK(run_capture(args2, out) == 0);
    CHECK(slurp(f1) == slurp(f2));
    CHECK(slurp(f1).find("wrong-fixed1") != std::string::npos);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("verify subcommand reports the brute-force optimum") {
    std::string out;
    const int code = run_capture({"verify", "--preset", "bb84", "--code", "rep:q=4,N=3",
                                  "--strings", "0,1", "--alpha", "1"},
                                 out);
    CHECK(code == 0);
    CHECK(out.find("lambda_max = 1.125") != std::string::npos);
    CHECK(out.find("verdict: ok") != std::string::npos);
}

TEST_CASE("audit subcommand flags a lying code file with exit 3") {
    const std::string path = tmp_path("lying_code.txt");
    {
        std::ofstream f(path);
        f << "code kind=external q=4 N=3 k=1 d=3 d_status=declared-only\n0 0 2\n";
    }
    std::string out;
    const int code = run_capture(
        {"audit", "--preset", "bb84", "--code", "file:" + path, "--strings", "0,1",
         "--alpha", "1"},
        out);
    CHECK(code == 3);
    CHECK(out.find("VIOLATION") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("audit subcommand passes on an honest setup") {
    std::string out;
    const int code = run_capture({"audit", "--preset", "bb84", "--code", "rep:q=4,N=4",
                                  "--strings", "0,1", "--alpha", "2"},
                                 out);
    CHECK(code == 0);
    CHECK(out.find("verdict: ok") != std::string::npos);
}

TEST_CASE("codes subcommand writes a reloadable definition") {
    const std::string path = tmp_path("code_def.txt");
    std::string out;
    CHECK(run_capture({"codes", "--code", "rs:q=5,N=4,k=2", "--out", path}, out) == 0);
    CHECK(out.find("kind=rs") != std::string::npos);
    std::string out2;
    CHECK(run_capture({"codes", "--code", "file:" + path}, out2) == 0);
    CHECK(out2.find("d=3") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("plan subcommand reproduces the worked sweep") {
    const std::string csv = tmp_path("plan.csv");
    std::string out;
    const int code = run_capture({"plan", "--preset", "bb84", "--r", "1024", "--eps", "2^-10",
                                  "--family", "gv", "--delta", "0.01", "--N-list",
                                  "1000,10000,100000", "--csv", csv},
                                 out);
    CHECK(code == 0);
    CHECK(out.find("best: family=gv N=100000") != std::string::npos);
    const std::string body = slurp(csv);
    CHECK(body.rfind("q,D,l,r,", 0) == 0);
    CHECK(body.find("true") != std::string::npos);
    std::remove(csv.c_str());
}

TEST_CASE("config file values are read and overridden by flags") {
    const std::string cfg = tmp_path("cfg.ini");
    {
        // values containing commas need quotes in the config format
        std::ofstream f(cfg);
        f << "# session defaults\n[run]\ncode=\"rep:q=4,N=3\"\nA=2\nseed=7\nt=0\n";
    }
    const std::string f1 = tmp_path("cfg_run1.txt"), f2 = tmp_path("cfg_run2.txt");
    std::string out;
    CHECK(run_capture({"--config", cfg, "run", "--out", f1}, out) == 0);
    CHECK(run_capture({"run", "--code", "rep:q=4,N=3", "--A", "2", "--seed", "7", "--t", "0",
                       "--out", f2},
                      out) == 0);
    CHECK(slurp(f1) == slurp(f2));

    // a flag beats the file
    const std::string f3 = tmp_path("cfg_run3.txt");
    CHECK(run_capture({"--config", cfg, "run", "--seed", "8", "--out", f3}, out) == 0);
    CHECK(slurp(f3).find("seed=8") != std::string::npos);
    std::remove(cfg.c_str());
    std::remove(f1.c_str());
    std::remove(f2.c_str());
    std::remove(f3.c_str());
}

TEST_CASE("dump-config round trips") {
    std::string dumped;
    CHECK(run_capture({"--dump-config", "run", "--code", "rep:q=4,N=3", "--A", "2", "--seed",
                       "13"},
                      dumped) == 0);
    const std::string cfg = tmp_path("dump.ini");
    {
        std::ofstream f(cfg);
        f << dumped;
    }
    const std::string f1 = tmp_path("dump_run1.txt"), f2 = tmp_path("dump_run2.txt");
    std::string out;
    CHECK(run_capture({"run", "--code", "rep:q=4,N=3", "--A", "2", "--seed", "13", "--out", f1},
                      out) == 0);
    CHECK(run_capture({"--config", cfg, "run", "--out", f2}, out) == 0);
    CHECK(slurp(f1) == slurp(f2));
    std::remove(cfg.c_str());
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("QBSC_SEED provides the default seed") {
    setenv("QBSC_SEED", "4242", 1);
    const std::string f1 = tmp_path("env_run.txt");
    std::string out;
    CHECK(run_capture({"run", "--code", "rep:q=4,N=3", "--A", "1", "--out", f1}, out) == 0);
    CHECK(slurp(f1).find("seed=4242") != std::string::npos);
    unsetenv("QBSC_SEED");
    std::remove(f1.c_str());
}

TEST_CASE("docs fixtures stay true") {
    const std::string root = QBSC_SOURCE_DIR;
    SUBCASE("golden transcript is what the engine emits for that seed") {
        const std::string golden = slurp(root + "/docs/transcript-example.txt");
        const std::string f = tmp_path("golden_run.txt");
        std::string out;
        CHECK(run_capture({"run", "--preset", "bb84", "--code", "rep:q=4,N=3", "--A", "2",
                           "--seed", "7", "--t", "0", "--out", f},
                          out) == 0);
        CHECK(slurp(f) == golden);
        std::remove(f.c_str());
    }
    SUBCASE("golden sweep report is reproduced byte for byte") {
        const std::string golden = slurp(root + "/docs/plan-example.csv");
        const std::string f = tmp_path("golden_plan.csv");
        std::string out;
        CHECK(run_capture({"plan", "--preset", "bb84", "--r", "1024", "--eps", "2^-10",
                           "--family", "gv", "--delta", "0.01", "--N-list",
                           "1000,10000,100000", "--csv", f},
                          out) == 0);
        CHECK(slurp(f) == golden);
        std::remove(f.c_str());
    }
    SUBCASE("scheme definition file loads through the CLI") {
        std::string out;
        const int code = run_capture({"verify", "--preset",
                                      "file:" + root + "/docs/bb84-scheme.txt", "--code",
                                      "rep:q=4,N=3", "--strings", "0,1", "--alpha", "1"},
                                     out);
        CHECK(code == 0);
        CHECK(out.find("lambda_max = 1.125") != std::string::npos);
    }
}

TEST_CASE("plan csv rows are ordered feasible-first then by block length") {
    const std::string csv = tmp_path("plan_order.csv");
    std::string out;
    CHECK(run_capture({"plan", "--preset", "bb84", "--r", "1024", "--eps", "2^-10",
                       "--family", "gv", "--delta", "0.01", "--N-list", "1000,10000,100000",
                       "--csv", csv},
                      out) == 0);
    const std::string body = slurp(csv);
    const auto first_row = body.find('\n') + 1;
    CHECK(body.compare(first_row, 30, "4,2,2,1024,0.0009765625,26,100") == 0);
    const auto second_row = body.find('\n', first_row) + 1;
    CHECK(body.find(",1000,", second_row) != std::string::npos);
    std::remove(csv.c_str());
}

TEST_CASE("verify flags a lying declared distance with exit 3") {
    const std::string path = tmp_path("lying_verify.txt");
    {
        std::ofstream f(path);
        f << "code kind=external q=4 N=3 k=1 d=3 d_status=declared-only\n0 0 2\n";
    }
    std::string out;
    const int code = run_capture({"verify", "--preset", "bb84", "--code", "file:" + path,
                                  "--strings", "0,1", "--alpha", "1"},
                                 out);
    CHECK(code == 3);
    CHECK(out.find("verdict: VIOLATION") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("csv writer fundamentals") {
    CsvWriter empty({"a", "b"});
    CHECK(empty.str() == "a,b\n"); // header-only when there are no rows

    CsvWriter quoted({"x"});
    quoted.begin_row();
    quoted.field("hello, \"world\"");
    CHECK(quoted.str() == "x\n\"hello, \"\"world\"\"\"\n");
}

TEST_CASE("verify and attack write their side files") {
    const std::string csv = tmp_path("verify.csv");
    const std::string tr = tmp_path("attack_sample.txt");
    std::string out;
    CHECK(run_capture({"verify", "--preset", "bb84", "--code", "rep:q=4,N=3", "--strings",
                       "0,1", "--alpha", "1", "--csv", csv},
                      out) == 0);
    const std::string body = slurp(csv);
    CHECK(body.rfind("strategy,string,", 0) == 0);
    CHECK(body.find("optimal,0,") != std::string::npos);

    CHECK(run_capture({"attack", "--preset", "bb84", "--code", "rep:q=4,N=3", "--strategy",
                       "superposition", "--strings", "0,1", "--open", "best", "--trials",
                       "500", "--seed", "3", "--transcript-out", tr},
                      out) == 0);
    const std::string sample = slurp(tr);
    CHECK(sample.rfind("QBSC/1\n", 0) == 0);
    CHECK(sample.find("mode=cheat:superposition-best") != std::string::npos);
    // the engine accepts its own cheat transcript as well-formed
    CHECK_NOTHROW(parse_transcript(sample));
    std::remove(csv.c_str());
    std::remove(tr.c_str());
}

TEST_CASE("mismatched code and scheme alphabets are rejected") {
    std::string out;
    CHECK(run_capture({"run", "--preset", "bb84", "--code", "rs:q=5,N=4,k=2", "--A", "2.3",
                       "--seed", "1"},
                      out) == 2);
}
