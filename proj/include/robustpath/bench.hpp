#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robustpath/pipelines.hpp"

namespace robustpath {

struct RunRecord {
  std::string instance;
  Pipeline pipeline = Pipeline::Sp;
  int n = 0, m = 0, k = 0;
  int height = 0;
  std::optional<Rational> gs_star;
  StPath path;
  std::vector<Rational> costs;
  Rational max_cost;
  std::optional<Rational> opt;
  int trials = 0;
  uint64_t seed = 0;
  std::optional<double> tail_freq;
  std::optional<double> moment_max;
  double wall_ms = 0;
};

const std::string& csv_header();
std::string csv_row(const RunRecord& r, bool with_wall = true);
// "" when opt is unknown, "inf" when opt = 0 < max_cost.
std::string ratio_text(const RunRecord& r);

// Runs one pipeline, re-verifies the path, and (when compute_opt) adds the brute-force optimum
// if enumeration stays under opts.enum_cap.
RunRecord run_record(const std::string& id, const Instance& inst, Pipeline p, const PipelineOptions& opts,
                     bool compute_opt);

// Families: sp (size = edges), dag and tw2 (size = vertices), disjoint and two-vertex
// (size = k, the agent count), kz (size = replacement rounds).
Instance generate_family(const std::string& family, int size, int k, uint64_t seed);

struct BenchSuite {
  std::string family = "sp";
  std::vector<int> sizes{20, 40, 60, 80, 100};
  std::vector<uint64_t> seeds{1, 2, 3};
  std::vector<Pipeline> pipelines{Pipeline::Sp};
  int k = 4;
  bool compute_opt = true;
};

// One row per (size, seed, pipeline) in that nesting order; cells run on up to `threads`
// workers and rows are emitted in cell order.
std::vector<RunRecord> run_bench(const BenchSuite& suite, const PipelineOptions& base, int threads);
std::string bench_csv(const std::vector<RunRecord>& rows, bool with_wall = true);

}  // namespace robustpath
