#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "robustpath/bench.hpp"
#include "robustpath/hardness.hpp"
#include "robustpath/pipelines.hpp"
#include "robustpath/sp_decomp.hpp"
#include "support.hpp"

using namespace robustpath;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

std::string strip_wall(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(const std::string& args) {
  fs::path dir = fs::temp_directory_path() / "rp_cli_tests";
  fs::create_directories(dir);
  static int calls = 0;
  fs::path out = dir / ("stdout_" + std::to_string(getpid()) + "_" + std::to_string(calls++) + ".txt");
  std::string cmd = std::string(ROBUSTPATH_CLI) + " " + args + " > " + out.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "rp_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Pipelines, NamesRoundTrip) {
  for (Pipeline p : {Pipeline::Sp, Pipeline::Treewidth, Pipeline::Metatree, Pipeline::FlowBaseline, Pipeline::Brute})
    EXPECT_EQ(parse_pipeline(pipeline_name(p)), p);
  EXPECT_THROW(parse_pipeline("nope"), Error);
  EXPECT_FALSE(pipeline_is_stochastic(Pipeline::Brute));
}

TEST(Pipelines, AllAgreeOnSmallSp) {
  Rng rng(6);
  for (int i = 0; i < 5; ++i) {
    Instance inst = random_sp_instance(12, 2, rng);
    Rational opt = dfs_minimax(inst);
    PipelineOptions o;
    o.seed = i;
    for (Pipeline p : {Pipeline::Sp, Pipeline::Treewidth, Pipeline::Metatree, Pipeline::FlowBaseline, Pipeline::Brute}) {
      if (p == Pipeline::Metatree && inst.n > 9) continue;
      PipelineResult r = run_pipeline(inst, p, o);
      EXPECT_TRUE(is_valid_path(inst, r.path)) << pipeline_name(p);
      EXPECT_EQ(r.costs, path_costs(inst, r.path));
      EXPECT_GE(r.max_cost, opt);
    }
    EXPECT_EQ(run_pipeline(inst, Pipeline::Brute, o).max_cost, opt);
  }
}

TEST(Pipelines, SeedDeterminism) {
  Rng rng(9);
  Instance inst = random_sp_instance(60, 4, rng);
  PipelineOptions o;
  o.seed = 42;
  PipelineResult a = run_pipeline(inst, Pipeline::Sp, o), b = run_pipeline(inst, Pipeline::Sp, o);
  EXPECT_EQ(a.path, b.path);
  EXPECT_EQ(a.tail_freq, b.tail_freq);
  EXPECT_EQ(a.moment_max, b.moment_max);
}

TEST(Pipelines, SpRejectsBridge) {
  Instance bridge = make_instance(4, 0, 3, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}, {{1, 1, 1, 1, 1}});
  EXPECT_THROW(run_pipeline(bridge, Pipeline::Sp, {}), Error);
  EXPECT_TRUE(is_valid_path(bridge, run_pipeline(bridge, Pipeline::Metatree, {}).path));
}

TEST(Generators, Shapes) {
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    Instance sp = random_sp_instance(30, 3, rng);
    EXPECT_EQ(sp.m(), 30);
    EXPECT_NO_THROW(recognize_sp(sp));
    Instance dag = random_dag_instance(8, 0.3, 2, rng);
    EXPECT_FALSE(dfs_paths(dag).empty());
    Instance tw = random_tw2_instance(8, 0.8, 2, rng);
    EXPECT_FALSE(dfs_paths(tw).empty());
  }
}

TEST(GapDemo, Kinds) {
  GapDemoReport one = gap_demo("flow-two-vertex", 1);
  EXPECT_EQ(one.gap, 1);
  GapDemoReport dis = gap_demo("flow-disjoint", 10);
  EXPECT_EQ(dis.opt, 10);
  EXPECT_EQ(dis.gap, 10);
  GapDemoReport weak = gap_demo("weak-tree", 10);
  std::map<std::string, bool> verdict(weak.verdicts.begin(), weak.verdicts.end());
  EXPECT_TRUE(verdict.at("Weak-Tree-LP at GS = 1"));
  for (std::string gs : {"1", "5", "9"}) EXPECT_FALSE(verdict.at("Tree-LP at GS = " + gs));
  EXPECT_TRUE(verdict.at("Tree-LP at GS = 10"));
  EXPECT_EQ(gap_demo("tree-fix", 6).lp_value, 6);
  EXPECT_THROW(gap_demo("bogus", 3), Error);
}

TEST(Bench, SchemaAndRowCount) {
  BenchSuite suite;
  PipelineOptions o;
  auto rows = run_bench(suite, o, 4);
  std::string csv = bench_csv(rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "instance,pipeline,n,m,k,H,GS_star,max_cost,opt,ratio,trials,seed,tail_freq,moment_max,wall_ms");
  int count = 0;
  while (std::getline(in, line)) {
    ++count;
    auto cells = split(line, ',');
    ASSERT_EQ(cells.size(), 15u) << line;
    EXPECT_EQ(cells[1], "sp");
    EXPECT_NO_THROW(parse_rational(cells[6]));
    EXPECT_NO_THROW(parse_rational(cells[7]));
    EXPECT_EQ(cells[10], "50");
    EXPECT_FALSE(cells[14].empty());
  }
  EXPECT_EQ(count, 15);
  EXPECT_EQ(rows[0].instance, "sp-20-s1");
  EXPECT_EQ(rows[14].instance, "sp-100-s3");
}

TEST(Bench, DeterministicAcrossThreadCounts) {
  BenchSuite suite;
  suite.sizes = {20, 30};
  suite.pipelines = {Pipeline::Sp, Pipeline::FlowBaseline};
  PipelineOptions o;
  std::string a = bench_csv(run_bench(suite, o, 1), false);
  std::string b = bench_csv(run_bench(suite, o, 4), false);
  EXPECT_EQ(a, b);
  EXPECT_EQ(strip_wall(bench_csv(run_bench(suite, o, 3))), strip_wall(a));
}

TEST(Bench, RatioText) {
  RunRecord r;
  r.max_cost = 3;
  EXPECT_EQ(ratio_text(r), "");
  r.opt = Rational(2);
  EXPECT_EQ(ratio_text(r), "1.500000");
  r.opt = Rational(0);
  EXPECT_EQ(ratio_text(r), "inf");
  r.max_cost = 0;
  EXPECT_EQ(ratio_text(r), "1.000000");
}

TEST(Cli, BruteOnTwoVertex) {
  fs::path inst = scratch("two.json");
  ASSERT_EQ(cli("generate --family two-vertex --k 4 --out " + inst.string()).code, 0);
  CliRun r = cli("solve --instance " + inst.string() + " --pipeline brute");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("max_cost 1\n"), std::string::npos) << r.out;
}

TEST(Cli, SpSolveWithinBound) {
  fs::path inst = scratch("sp.json");
  ASSERT_EQ(cli("generate --family sp --size 40 --k 4 --seed 3 --out " + inst.string()).code, 0);
  CliRun r = cli("solve --instance " + inst.string() + " --pipeline sp --trials 50 --seed 7 --opt --csv");
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  auto cells = split(row, ',');
  ASSERT_EQ(cells.size(), 15u);
  double ratio = std::stod(cells[9]);
  int height = std::stoi(cells[5]);
  EXPECT_LE(ratio, 16.0 * height * std::log2(4.0));
}

TEST(Cli, MetatreeOnThreeVertexGraph) {
  fs::path inst = scratch("three.json"), path = scratch("three_path.json");
  write_text_file(inst.string(), serialize_instance(three_vertex_graph()));
  CliRun r = cli("solve --instance " + inst.string() + " --pipeline metatree --seed 1 --path-out " + path.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(cli("verify --instance " + inst.string() + " --path " + path.string()).code, 0);
}

TEST(Cli, VerifyTampered) {
  fs::path inst = scratch("t.json"), path = scratch("t_path.json");
  write_text_file(inst.string(), serialize_instance(three_vertex_graph()));
  write_text_file(path.string(), R"({"path": [1, 2], "costs": ["2", "4"]})");
  EXPECT_EQ(cli("verify --instance " + inst.string() + " --path " + path.string()).code, 0);
  write_text_file(path.string(), R"({"path": [1, 2], "costs": ["1", "4"]})");
  CliRun bad = cli("verify --instance " + inst.string() + " --path " + path.string());
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("ValidationFailure"), std::string::npos) << bad.out;
  write_text_file(path.string(), R"({"path": [2, 1]})");
  EXPECT_EQ(cli("verify --instance " + inst.string() + " --path " + path.string()).code, 1);
}

TEST(Cli, GapDemoText) {
  CliRun r = cli("gap-demo --kind flow-disjoint --k 10");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("gap 10\n"), std::string::npos) << r.out;
  EXPECT_NE(cli("gap-demo --kind flow-two-vertex --k 1").out.find("gap 1\n"), std::string::npos);
}

TEST(Cli, GenerateKzRoundTrips) {
  fs::path inst = scratch("kz.json");
  ASSERT_EQ(cli("generate --family kz --t 2 --out " + inst.string()).code, 0);
  Instance loaded = read_instance_file(inst.string());
  EXPECT_EQ(loaded, gen_kz_hard_instance(2).inst);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("solve").code, 2);
  fs::path inst = scratch("u.json");
  write_text_file(inst.string(), serialize_instance(three_vertex_graph()));
  EXPECT_EQ(cli("solve --instance " + inst.string() + " --pipeline sp").code, 2);
  EXPECT_EQ(cli("solve --instance " + inst.string() + " --pipeline wat --seed 1").code, 2);
}

TEST(Cli, EnvCapOverride) {
  fs::path inst = scratch("cap.json");
  write_text_file(inst.string(), serialize_instance(gen_two_vertex_gap(6)));
  CliRun r = cli("solve --instance " + inst.string() + " --pipeline brute");
  EXPECT_EQ(r.code, 0);
  std::string cmd = "RP_ENUM_CAP=2 " + std::string(ROBUSTPATH_CLI) + " solve --instance " + inst.string() +
                    " --pipeline brute > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  EXPECT_NE(WEXITSTATUS(status), 0);
}

TEST(Cli, ConfigFileFlagsWin) {
  fs::path inst = scratch("cfg.json"), cfg = scratch("cfg.toml");
  write_text_file(inst.string(), serialize_instance(gen_two_vertex_gap(3)));
  write_text_file(cfg.string(), "[solve]\npipeline = \"brute\"\ninstance = \"" + inst.string() + "\"\n");
  CliRun r = cli("--config " + cfg.string() + " solve");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("pipeline brute"), std::string::npos) << r.out;
  CliRun flags = cli("--config " + cfg.string() + " solve --pipeline flow-baseline");
  EXPECT_NE(flags.out.find("pipeline flow-baseline"), std::string::npos) << flags.out;
}

TEST(Cli, BenchMatchesLibrary) {
  fs::path out = scratch("bench.csv");
  ASSERT_EQ(cli("bench --sizes 20 --seeds 1,2 --no-wall --out " + out.string()).code, 0);
  BenchSuite suite;
  suite.sizes = {20};
  suite.seeds = {1, 2};
  EXPECT_EQ(read_text_file(out.string()), bench_csv(run_bench(suite, {}, 2), false));
}
