#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstring>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "siglap/cli.hpp"
#include "siglap/io.hpp"
#include "support/expect.hpp"
#include "support/generators.hpp"

namespace siglap {
namespace {

namespace fs = std::filesystem;
using testing::Rng;

const std::string kData = SIGLAP_DATA_DIR;

SignedGraph parse(const std::string& text) {
  std::istringstream in(text);
  return io::read_graph(in);
}

std::string parse_error_message(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    return e.what();
  }
  ADD_FAILURE() << "no parse error";
  return {};
}

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run_in_process(cli::RunConfig cfg) {
  std::ostringstream out, err;
  const int code = cli::run(cfg, out, err);
  return {code, out.str(), err.str()};
}

cli::RunConfig config(cli::Command c, const std::string& file) {
  cli::RunConfig cfg;
  cfg.command = c;
  cfg.input_path = kData + "/" + file;
  return cfg;
}

fs::path temp_file(const std::string& name, const std::string& contents = {}) {
  const auto p = fs::temp_directory_path() / ("siglap_test_" + name);
  std::ofstream(p) << contents;
  return p;
}

// Runs the built CLI binary; stdout captured, stderr discarded.
Outcome run_binary(const std::string& args) {
  const std::string cmd = std::string(SIGLAP_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

TEST(ReadGraph, ParsesCommentsAndBlankLines) {
  const auto g = parse("# header\n\nnodes 3   # three\n0 1 1.5\n 2 1 -0.25 \n");
  EXPECT_EQ(g.node_count(), 3u);
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edge(1), (Edge{1, 2, -0.25}));
}

TEST(ReadGraph, ShippedExamples) {
  const auto g = io::read_graph_file(kData + "/cycle_w010.graph");
  EXPECT_EQ(g, testing::cycle_example(-0.1));
  EXPECT_EQ(io::read_graph_file(kData + "/cycle_w025.graph"), testing::cycle_example(-0.25));
  EXPECT_EQ(io::read_graph_file(kData + "/cycle_w050.graph"), testing::cycle_example(-0.5));
  EXPECT_EQ(io::read_graph_file(kData + "/two_triangles.graph"),
            testing::two_triangles_with_chords(-1.0, -1.0));
}

TEST(ReadGraph, ErrorsCarryLineNumbers) {
  EXPECT_NE(parse_error_message("").find("missing 'nodes N'"), std::string::npos);
  EXPECT_NE(parse_error_message("edges 3\n").find("line 1"), std::string::npos);
  EXPECT_NE(parse_error_message("nodes 0\n").find("line 1"), std::string::npos);
  EXPECT_NE(parse_error_message("nodes 3 extra\n").find("line 1"), std::string::npos);
  EXPECT_NE(parse_error_message("nodes 3\n0 1 1\n\n0 x 1\n").find("line 4"), std::string::npos);
  EXPECT_NE(parse_error_message("nodes 3\n0 1 1 9\n").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error_message("nodes 3\n-1 1 1\n").find("line 2"), std::string::npos);
  // validation errors from the graph builder keep their own kind
  EXPECT_EQ(testing::error_kind([] { parse("nodes 2\n0 1 0\n"); }), ErrorKind::ZeroWeight);
  EXPECT_EQ(testing::error_kind([] { parse("nodes 2\n0 5 1\n"); }), ErrorKind::NodeOutOfRange);
  EXPECT_EQ(testing::error_kind([] { io::read_graph_file("/nonexistent/graph"); }),
            ErrorKind::IoError);
}

TEST(WriteGraph, RoundTripIsExact) {
  Rng rng(601);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_signed(rng, rng.between(1, 10), 1);
    std::ostringstream out;
    io::write_graph(out, g);
    const auto back = parse(out.str());
    EXPECT_EQ(back, g);
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
      EXPECT_EQ(std::memcmp(&back.edge(k).weight, &g.edge(k).weight, sizeof(double)), 0);
    }
  }
}

TEST(ReadVector, ValuesAndErrors) {
  std::istringstream in("1 2.5 # c\n-3e-1\n");
  const auto v = io::read_vector(in);
  ASSERT_EQ(v.size(), 3);
  EXPECT_EQ(v[2], -0.3);
  std::istringstream bad("1\n2 abc\n");
  try {
    io::read_vector(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Formats, TrajectoryCsvAndClusterReport) {
  Trajectory traj;
  traj.times = {0.0, 0.5};
  traj.states.resize(2, 2);
  traj.states << 1.0, 0.0, 0.75, 0.25;
  std::ostringstream csv;
  io::write_trajectory_csv(csv, traj);
  EXPECT_EQ(csv.str(), "t,x0,x1\n0,1,0\n0.5,0.75,0.25\n");

  ClusterPartition p;
  p.cluster_of = {0, 1, 0};
  p.values = {2.0, 1.0 / 3.0};
  std::ostringstream report;
  io::write_cluster_report(report, p);
  EXPECT_EQ(report.str(), "node,cluster,value\n0,0,2\n1,1,0.333333333333\n2,0,2\n");
}

TEST(Cli, CheckPsdInteriorExample) {
  const auto o = run_in_process(config(cli::Command::CheckPsd, "cycle_w010.graph"));
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("PSD (strict interior), sigma=(8,0,1)\n"), std::string::npos);
}

TEST(Cli, CheckPsdBoundaryAndIndefinite) {
  EXPECT_NE(run_in_process(config(cli::Command::CheckPsd, "cycle_w025.graph"))
                .out.find("PSD (boundary), sigma=(7,0,2)"),
            std::string::npos);
  const auto o = run_in_process(config(cli::Command::CheckPsd, "cycle_w050.graph"));
  EXPECT_NE(o.out.find("indefinite, sigma=(7,1,1)"), std::string::npos);
  EXPECT_NE(o.out.find("resistance sum check: no"), std::string::npos);
}

TEST(Cli, ThresholdExample) {
  const auto o = run_in_process(config(cli::Command::Threshold, "cycle_w010.graph"));
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("edge (0,4): max |w-| = 0.25\n"), std::string::npos);
}

TEST(Cli, SignatureOfEdgelessGraph) {
  const auto path = temp_file("edgeless.graph", "nodes 4\n");
  auto cfg = config(cli::Command::Signature, "");
  cfg.input_path = path.string();
  const auto o = run_in_process(cfg);
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("sigma(L)=(0,0,4)"), std::string::npos);
  EXPECT_NE(o.out.find("components: 4"), std::string::npos);
  fs::remove(path);
}

TEST(Cli, HeaderEchoesSeedAndTolerance) {
  auto cfg = config(cli::Command::Signature, "cycle_w010.graph");
  cfg.tol = 1e-10;
  cfg.seed = 17;
  const auto o = run_in_process(cfg);
  EXPECT_EQ(o.out.rfind("# siglap signature\n", 0), 0u);
  EXPECT_NE(o.out.find("# seed: 17\n"), std::string::npos);
  EXPECT_NE(o.out.find("# tol: 1e-10\n"), std::string::npos);
  EXPECT_NE(o.out.find("tol=1e-10"), std::string::npos);
}

TEST(Cli, ResistanceReports) {
  auto cfg = config(cli::Command::Resistance, "two_triangles.graph");
  auto o = run_in_process(cfg);
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("edge 6 (0,1): R(G+) = 0.666666666667"), std::string::npos);
  EXPECT_NE(o.out.find("R_tot = 1.33333333333"), std::string::npos);
  cfg.pairs = {{0, 4}};
  o = run_in_process(cfg);
  EXPECT_NE(o.out.find("R(0,4) = "), std::string::npos);
}

TEST(Cli, ExitCodes) {
  // hypothesis not met: more than one cycle for the cluster prediction
  auto o = run_in_process(config(cli::Command::PredictClusters, "two_triangles.graph"));
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("exactly one cycle"), std::string::npos);
  EXPECT_TRUE(o.out.empty());

  o = run_in_process(config(cli::Command::Signature, "missing.graph"));
  EXPECT_EQ(o.code, 1);

  const auto bad = temp_file("bad.graph", "nodes 3\n0 1 one\n");
  auto cfg = config(cli::Command::Signature, "");
  cfg.input_path = bad.string();
  o = run_in_process(cfg);
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("line 2"), std::string::npos);
  fs::remove(bad);

  const auto split = temp_file("split.graph", "nodes 3\n0 1 1\n1 2 -1\n");
  cfg = config(cli::Command::Threshold, "");
  cfg.input_path = split.string();
  EXPECT_EQ(run_in_process(cfg).code, 2);
  // check-psd falls back to the spectrum instead of failing
  cfg.command = cli::Command::CheckPsd;
  o = run_in_process(cfg);
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("direct spectral verdict"), std::string::npos);
  fs::remove(split);
}

TEST(Cli, PredictClustersReport) {
  const auto o = run_in_process(config(cli::Command::PredictClusters, "cycle_w025.graph"));
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("q = 5\n"), std::string::npos);
  EXPECT_NE(o.out.find("node,cluster,value\n0,0,-2\n"), std::string::npos);
}

TEST(Cli, SimulateWritesCsvAndClusters) {
  const auto clusters = fs::temp_directory_path() / "siglap_test_clusters.txt";
  auto cfg = config(cli::Command::Simulate, "cycle_w025.graph");
  cfg.seed = 3;
  cfg.clusters_path = clusters.string();
  const auto o = run_in_process(cfg);
  ASSERT_EQ(o.code, 0);
  std::istringstream lines(o.out);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(first.rfind("# seed: 3,", 0), 0u);
  EXPECT_EQ(second, "t,x0,x1,x2,x3,x4,x5,x6,x7,x8");
  std::ifstream in(clusters);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("# clusters: 5\n"), std::string::npos);
  fs::remove(clusters);
}

TEST(Cli, SimulateAcceptsInitialStateFile) {
  const auto x0 = temp_file("x0.txt", "0 0 0 0 0 0 0 0 1\n");
  auto cfg = config(cli::Command::Simulate, "cycle_w010.graph");
  cfg.x0_path = x0.string();
  cfg.t_final = 0.01;
  auto o = run_in_process(cfg);
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("\n0,0,0,0,0,0,0,0,0,1\n"), std::string::npos);
  std::ofstream(x0) << "1 2\n";
  o = run_in_process(cfg);
  EXPECT_EQ(o.code, 1);
  fs::remove(x0);
}

TEST(CliBinary, DeterministicBytes) {
  const std::string args = "simulate " + kData + "/cycle_w025.graph --seed 11 --t-final 2";
  const auto a = run_binary(args);
  const auto b = run_binary(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
  const auto c = run_binary("check-psd " + kData + "/cycle_w010.graph");
  EXPECT_EQ(c.out, run_binary("check-psd " + kData + "/cycle_w010.graph").out);
}

TEST(CliBinary, ExitCodesAndOutputFile) {
  EXPECT_EQ(run_binary("check-psd " + kData + "/cycle_w010.graph").code, 0);
  EXPECT_EQ(run_binary("predict-clusters " + kData + "/cycle_w010.graph").code, 2);
  EXPECT_EQ(run_binary("signature /nonexistent.graph").code, 1);
  EXPECT_EQ(run_binary("no-such-command x").code, 1);
  EXPECT_EQ(run_binary("resistance " + kData + "/cycle_w010.graph --pair 0-4").code, 1);

  const auto out = fs::temp_directory_path() / "siglap_test_out.txt";
  const auto o = run_binary("threshold " + kData + "/cycle_w010.graph --out " + out.string());
  EXPECT_EQ(o.code, 0);
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("edge (0,4): max |w-| = 0.25"), std::string::npos);
  fs::remove(out);
}

}  // namespace
}  // namespace siglap
