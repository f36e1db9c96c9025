#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "streamcount/cli.hpp"
#include "streamcount/error.hpp"
#include "streamcount/generators.hpp"
#include "streamcount/graph.hpp"
#include "streamcount/stream.hpp"

namespace streamcount {
namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("streamcount_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Writes a generated graph and returns its path.
  std::string graph(const std::string& name, std::vector<std::string> gen_args) {
    gen_args.insert(gen_args.begin(), "gen");
    gen_args.push_back("--out");
    gen_args.push_back(path(name));
    EXPECT_EQ(cli(gen_args).code, 0);
    return path(name);
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, GenComplete) {
  const CliRun r = cli({"gen", "complete", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const Graph g = read_graph(in);
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_EQ(g.edge_count(), 6u);
}

TEST_F(CliTest, GenCycle) {
  const CliRun r = cli({"gen", "cycle", "n=5"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const Graph g = read_graph(in);
  EXPECT_EQ(g.edge_count(), 5u);
  for (Vertex v = 0; v < 5; ++v) EXPECT_EQ(g.degree(v), 2u);
}

TEST_F(CliTest, GenGnmMatchesGolden) {
  const CliRun r = cli({"gen", "gnm", "n=20", "m=40", "seed=7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(std::filesystem::path(STREAMCOUNT_TEST_DATA) / "gnm_20_40_seed7.graph"));
  EXPECT_EQ(cli({"gen", "random-gnm", "20", "40", "--seed", "7"}).out, r.out);
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  ::setenv("STREAMCOUNT_SEED", "7", 1);
  const CliRun env = cli({"gen", "gnm", "20", "40"});
  ::unsetenv("STREAMCOUNT_SEED");
  EXPECT_EQ(env.out, cli({"gen", "gnm", "20", "40", "--seed", "7"}).out);
  EXPECT_NE(env.out, cli({"gen", "gnm", "20", "40", "--seed", "8"}).out);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"gen", "complete"}).code, kExitUsage);
  EXPECT_EQ(cli({"gen", "dodecahedron", "3"}).code, kExitUsage);
  EXPECT_EQ(cli({"count", "--stream", "x"}).code, kExitUsage);
  EXPECT_EQ(cli({"report", path("empty.txt")}).code, kExitFailure);
  std::ofstream(path("empty.txt")) << "";
  EXPECT_EQ(cli({"report", path("empty.txt")}).code, kExitUsage);
}

TEST_F(CliTest, ShuffleStreamChurnRules) {
  const std::string g = graph("k4.graph", {"complete", "4"});
  const CliRun io = cli({"shuffle-stream", "--graph", g, "--seed", "3"});
  ASSERT_EQ(io.code, 0) << io.err;
  std::istringstream in(io.out);
  EXPECT_EQ(read_stream(in).updates().size(), 6u);

  const CliRun ts = cli({"shuffle-stream", "--graph", g, "--mode", "ts", "--churn", "0.5", "--seed", "3"});
  ASSERT_EQ(ts.code, 0) << ts.err;
  std::istringstream tin(ts.out);
  EXPECT_EQ(read_stream(tin).updates().size(), 6u + 2 * 3);

  EXPECT_EQ(cli({"shuffle-stream", "--graph", g, "--churn", "0.5"}).code, kExitUsage);
  EXPECT_EQ(cli({"shuffle-stream", "--graph", g, "--mode", "ts", "--churn", "1"}).code, kExitUsage);

  const CliRun gone = cli({"shuffle-stream", "--graph", g, "--mode", "ts", "--delete-all"});
  ASSERT_EQ(gone.code, 0);
  std::istringstream gin(gone.out);
  EXPECT_EQ(read_stream(gin).final_edge_count(), 0u);
}

TEST_F(CliTest, ExactCount) {
  const std::string host = graph("petersen.graph", {"petersen"});
  const std::string c5 = graph("c5.graph", {"cycle", "5"});
  const CliRun r = cli({"exact", "--graph", host, "--pattern", c5});
  ASSERT_EQ(r.code, 0) << r.err;
  const RunRecord rec = RunRecord::parse(r.out);
  EXPECT_EQ(rec.get("count"), "12");
  EXPECT_EQ(rec.get("ordered"), "120");
}

TEST_F(CliTest, CountIsDeterministicAndThreePass) {
  const std::string k5 = graph("k5.graph", {"complete", "5"});
  const std::string k3 = graph("k3.graph", {"complete", "3"});
  ASSERT_EQ(cli({"shuffle-stream", "--graph", k5, "--seed", "2", "--out", path("k5.str")}).code, 0);
  const std::vector<std::string> args = {"count",  "--pattern",     k3,   "--stream", path("k5.str"),
                                         "--mode", "io",            "--epsilon", "0.1",
                                         "--lower-bound", "10",     "--seed",   "5", "--exact"};
  const CliRun a = cli(args);
  const CliRun b = cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.err.find("wall_seconds="), std::string::npos);
  const RunRecord rec = RunRecord::parse(a.out.substr(0, a.out.find('\n')));
  EXPECT_EQ(rec.get("passes"), "3");
  EXPECT_EQ(rec.get("exact"), "10");
  EXPECT_EQ(rec.get("rho"), "3/2");
  EXPECT_LT(std::strtod(rec.get("relative_error")->c_str(), nullptr), 0.15);
  EXPECT_NE(a.out.find("record=count.pass pass=3"), std::string::npos);
}

TEST_F(CliTest, CountCliquesSaturated) {
  const std::string k5 = graph("k5.graph", {"complete", "5"});
  ASSERT_EQ(cli({"shuffle-stream", "--graph", k5, "--out", path("k5.str")}).code, 0);
  const CliRun r = cli({"count-cliques", "--r", "4", "--stream", path("k5.str"), "--saturate", "--lower-bound", "1",
                     "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  const RunRecord rec = RunRecord::parse(r.out.substr(0, r.out.find('\n')));
  EXPECT_EQ(rec.get("estimate"), "5");
  EXPECT_EQ(rec.get("exact"), "5");
  EXPECT_EQ(rec.get("lambda"), "4");
  EXPECT_EQ(rec.get("passes"), "12");
  EXPECT_NE(r.out.find("record=count-cliques.pass pass=12"), std::string::npos);

  const CliRun q = cli({"count-cliques", "--r", "3", "--stream", path("k5.str"), "--saturate", "--lower-bound", "1",
                     "--model", "query"});
  ASSERT_EQ(q.code, 0) << q.err;
  EXPECT_EQ(RunRecord::parse(q.out).get("estimate"), "10");
}

TEST_F(CliTest, CountCliquesRejectsTurnstileStreams) {
  const std::string k4 = graph("k4.graph", {"complete", "4"});
  ASSERT_EQ(cli({"shuffle-stream", "--graph", k4, "--mode", "ts", "--churn", "0.5", "--out", path("k4.str")}).code,
            0);
  EXPECT_NE(cli({"count-cliques", "--r", "3", "--stream", path("k4.str"), "--saturate"}).code, kExitOk);
}

TEST_F(CliTest, ReportAggregates) {
  const std::string records = path("runs.txt");
  {
    std::ofstream out(records);
    out << "command=count seed=1 estimate=9 exact=10 relative_error=0.1 passes=3 bits=640\n";
    out << "record=count.pass pass=1 bits=64\n";
    out << "command=count seed=2 estimate=10.5 exact=10 relative_error=0.05 passes=3 bits=704\n";
    out << "command=count seed=3 estimate=10 exact=10 relative_error=0 passes=6 bits=512\n";
  }
  const CliRun r = cli({"report", records});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::optional<RunRecord> summary;
  std::size_t echoed = 0;
  while (std::getline(in, line)) {
    if (line.rfind("summary=", 0) == 0) summary = RunRecord::parse(line);
    if (line.rfind("command=", 0) == 0) ++echoed;
  }
  EXPECT_EQ(echoed, 3u);
  ASSERT_TRUE(summary);
  EXPECT_EQ(summary->get("records"), "3");
  EXPECT_EQ(summary->get("relative_error.median"), "0.05");
  EXPECT_EQ(summary->get("relative_error.mean"), "0.05");
  EXPECT_EQ(summary->get("relative_error.stddev"), "0.05");
  EXPECT_EQ(summary->get("max_passes"), "6");
  EXPECT_EQ(summary->get("max_bits"), "704");
}

TEST_F(CliTest, ReportSingleRecordPassesThrough) {
  const std::string line = "command=exact count=12 ordered=120 vertices=10 edges=15";
  std::ofstream(path("one.txt")) << line << '\n';
  const CliRun r = cli({"report", path("one.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), line);
}

TEST(RunRecordTest, RoundTrip) {
  RunRecord rec;
  rec.set("command", std::string("count"));
  rec.set("estimate", 9.75);
  rec.set("passes", std::uint64_t{3});
  rec.set("estimate", 10.0);
  EXPECT_EQ(rec.to_line(), "command=count estimate=10 passes=3");
  EXPECT_EQ(RunRecord::parse(rec.to_line()).fields(), rec.fields());
  EXPECT_THROW(RunRecord::parse("command=count oops"), Error);
}

}  // namespace
}  // namespace streamcount
