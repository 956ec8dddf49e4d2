#include "fixtures.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <sstream>

using namespace mcn::testing;

namespace {

struct Run
{
    int status = -1;
    std::string out;
};

// Runs the CLI with stderr folded into the captured text when `merge_stderr` is set.
Run run(const std::string& args, bool merge_stderr = false)
{
    std::string cmd = std::string(MCN_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string cfg(const char* name) { return config_path(name); }

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST(Cli, ValidateClean)
{
    const auto r = run("validate " + cfg("example1.json"));
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(contains(r.out, "valid\n"));
}

TEST(Cli, ValidateCyclic)
{
    const auto r = run("validate " + cfg("broken-cyclic.json"));
    EXPECT_EQ(r.status, 2);
    EXPECT_TRUE(contains(r.out, "violation:")) << r.out;
    EXPECT_TRUE(contains(r.out, "cyclic")) << r.out;
}

TEST(Cli, MissingFileIsConfigError)
{
    const auto r = run("check /nonexistent/net.json --faults v1", true);
    EXPECT_EQ(r.status, 2);
    EXPECT_TRUE(contains(r.out, "error:")) << r.out;
}

TEST(Cli, BadArguments)
{
    EXPECT_EQ(run("analyze " + cfg("example1.json")).status, 2);
    EXPECT_EQ(run("check " + cfg("example1.json") + " --faults v1 --method theorem").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("--format yaml validate " + cfg("example1.json")).status, 2);
}

TEST(Cli, UnknownFaultNode)
{
    const auto r = run("check " + cfg("example1.json") + " --faults v9", true);
    EXPECT_EQ(r.status, 2);
    EXPECT_TRUE(contains(r.out, "v9")) << r.out;
}

TEST(Cli, AnalyzeExample1)
{
    const auto r = run("analyze " + cfg("example1.json") + " --max-faults 2");
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(contains(r.out, "== r = 1 (both): 4 scenarios, 4 solvable, 0 unsolvable")) << r.out;
    EXPECT_TRUE(contains(r.out, "== r = 2 (both): 6 scenarios")) << r.out;
}

TEST(Cli, AnalyzeTransposedReportsUnsolvable)
{
    const auto r = run("analyze " + cfg("example1-transposed.json") + " --max-faults 2 --sufficient");
    EXPECT_EQ(r.status, 1);
    EXPECT_TRUE(contains(r.out, "== r = 2 (both): 6 scenarios, 5 solvable, 1 unsolvable")) << r.out;
    EXPECT_TRUE(contains(r.out, "scenario {v2,v4}: unsolvable")) << r.out;
    EXPECT_TRUE(contains(r.out, "sufficient condition r = 2: fails")) << r.out;
}

TEST(Cli, CheckExitCodes)
{
    EXPECT_EQ(run("check " + cfg("example1.json") + " --faults v1,o:v3").status, 0);
    EXPECT_EQ(run("check " + cfg("example1-transposed.json") + " --faults v2,v4").status, 1);
    const auto split = run("check " + cfg("example1.json") + " --faults v1,v2 --no-assumption1");
    EXPECT_EQ(split.status, 1);
    EXPECT_TRUE(contains(split.out, "check f(v1,2)")) << split.out;
}

TEST(Cli, StructuredCheck)
{
    const auto r = run("--format structured check " + cfg("example1-transposed.json") + " --faults v2,v4");
    ASSERT_EQ(r.status, 1);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["verdict"], "unsolvable");
    EXPECT_EQ(j["r"], 2);
    EXPECT_EQ(j["linking"], 1);
    EXPECT_EQ(j["agreement"], true);
    EXPECT_EQ(j["scenario"][1]["side"], "O");
    EXPECT_EQ(j["scenario"][1]["id"], "v4");
}

TEST(Cli, StructuredAnalyze)
{
    const auto r = run("--format structured analyze " + cfg("example1.json") + " --max-faults 1 --sufficient");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["analysis"].size(), 1u);
    EXPECT_EQ(j["analysis"][0]["scenarios"], 4);
    EXPECT_EQ(j["analysis"][0]["sufficient"]["holds"], true);
    EXPECT_EQ(j["analysis"][0]["sufficient"]["below_hypothesis"], true);
}

TEST(Cli, OracleSeedIsReported)
{
    const auto a = run("oracle " + cfg("example1.json") + " --faults v1,v3 --seed 17");
    EXPECT_EQ(a.status, 0);
    EXPECT_TRUE(contains(a.out, "seed 17")) << a.out;
    EXPECT_TRUE(contains(a.out, "consistent")) << a.out;
    const auto j = nlohmann::json::parse(run("--format structured oracle " + cfg("example1.json") + " --faults v1 --trials 3").out);
    EXPECT_TRUE(j["seed"].is_number_unsigned());
    EXPECT_EQ(j["ranks"].size(), 3u);
}

TEST(Cli, RepeatedRunsAreByteIdentical)
{
    for (const std::string args : {"analyze " + cfg("example1.json") + " --max-faults 3 --sufficient",
                                   "--format structured analyze " + cfg("example1.json") + " --max-faults 2 --no-assumption1",
                                   "oracle " + cfg("example1.json") + " --faults v2,v4 --seed 5",
                                   "export-graph " + cfg("example1.json") + " --which analysis"}) {
        const auto a = run(args);
        const auto b = run(args);
        EXPECT_EQ(a.status, b.status) << args;
        EXPECT_EQ(a.out, b.out) << args;
        EXPECT_FALSE(a.out.empty()) << args;
    }
}

TEST(Cli, Simulate)
{
    const auto r = run("simulate " + cfg("example1.json") + " --faults v2 --horizon 5 --signal impulse");
    ASSERT_EQ(r.status, 0);
    std::istringstream in(r.out);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    EXPECT_EQ(lines, 6);
    EXPECT_EQ(r.out.rfind("k,", 0), 0u);
    EXPECT_EQ(run("simulate " + cfg("example1.json") + " --faults v2 --signal ramp").status, 2);
    EXPECT_EQ(run("simulate " + cfg("example1.json") + " --faults v2 --amplitude 0").status, 2);
}

TEST(Cli, ExportGraph)
{
    const auto r = run("export-graph " + cfg("example1.json") + " --faults v2,v4");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("# mcn-fdi graph v1\ngraph mlambda\n", 0), 0u) << r.out;
    EXPECT_TRUE(contains(r.out, " fault f(R:v2)\n"));
    const auto split = run("export-graph " + cfg("example1.json") + " --faults v1 --no-assumption1");
    EXPECT_TRUE(contains(split.out, " fault f(R:v1,2)\n")) << split.out;
    EXPECT_EQ(run("export-graph " + cfg("example1.json") + " --which plant").status, 2);
}
