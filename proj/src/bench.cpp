#include "robustpath/bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <thread>

#include "robustpath/hardness.hpp"

namespace robustpath {

const std::string& csv_header() {
  static const std::string h =
      "instance,pipeline,n,m,k,H,GS_star,max_cost,opt,ratio,trials,seed,tail_freq,moment_max,wall_ms";
  return h;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string ratio_text(const RunRecord& r) {
  if (!r.opt) return "";
  if (*r.opt == 0) return r.max_cost == 0 ? fixed6(1.0) : "inf";
  return fixed6(Rational(r.max_cost / *r.opt).get_d());
}

std::string csv_row(const RunRecord& r, bool with_wall) {
  std::string out = r.instance + "," + pipeline_name(r.pipeline) + "," + std::to_string(r.n) + "," +
                    std::to_string(r.m) + "," + std::to_string(r.k) + "," + std::to_string(r.height) + ",";
  out += (r.gs_star ? format_rational(*r.gs_star) : "") + ",";
  out += format_rational(r.max_cost) + ",";
  out += (r.opt ? format_rational(*r.opt) : "") + ",";
  out += ratio_text(r) + ",";
  out += std::to_string(r.trials) + "," + std::to_string(r.seed) + ",";
  out += (r.tail_freq ? fixed6(*r.tail_freq) : "") + ",";
  out += (r.moment_max ? fixed6(*r.moment_max) : "") + ",";
  if (with_wall) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", r.wall_ms);
    out += buf;
  }
  return out;
}

RunRecord run_record(const std::string& id, const Instance& inst, Pipeline p, const PipelineOptions& opts,
                     bool compute_opt) {
  auto t0 = std::chrono::steady_clock::now();
  PipelineResult res = run_pipeline(inst, p, opts);
  RunRecord r;
  r.instance = id;
  r.pipeline = p;
  r.n = inst.n;
  r.m = inst.m();
  r.k = inst.k();
  r.height = res.height;
  r.gs_star = res.gs_star;
  r.path = res.path;
  r.costs = res.costs;
  r.max_cost = res.max_cost;
  if (pipeline_is_stochastic(p)) {
    r.trials = res.trials;
    r.seed = opts.seed;
    r.tail_freq = res.tail_freq;
    r.moment_max = res.moment_max;
  }
  if (compute_opt) {
    try {
      r.opt = brute_force_minimax(inst, opts.enum_cap).value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CapExceeded) throw;
    }
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Instance generate_family(const std::string& family, int size, int k, uint64_t seed) {
  Rng rng(mix64(seed ^ (static_cast<uint64_t>(size) << 32)));
  if (family == "sp") return random_sp_instance(size, k, rng);
  if (family == "dag") return random_dag_instance(size, 0.4, k, rng);
  if (family == "tw2") return random_tw2_instance(size, 0.8, k, rng);
  if (family == "disjoint") return gen_disjoint_paths_gap(size, size);
  if (family == "two-vertex") return gen_two_vertex_gap(size);
  if (family == "kz") return gen_kz_hard_instance(size).inst;
  throw Error(ErrorCode::ValidationError, "unknown instance family '" + family + "'");
}

std::vector<RunRecord> run_bench(const BenchSuite& suite, const PipelineOptions& base, int threads) {
  struct Cell {
    int size;
    uint64_t seed;
    Pipeline pipeline;
  };
  std::vector<Cell> cells;
  for (int size : suite.sizes)
    for (uint64_t seed : suite.seeds)
      for (Pipeline p : suite.pipelines) cells.push_back({size, seed, p});
  std::vector<RunRecord> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < cells.size(); i = next++) {
      try {
        const Cell& c = cells[i];
        Instance inst = generate_family(suite.family, c.size, suite.k, c.seed);
        PipelineOptions opts = base;
        opts.seed = c.seed;
        std::string id = suite.family + "-" + std::to_string(c.size) + "-s" + std::to_string(c.seed);
        rows[i] = run_record(id, inst, c.pipeline, opts, suite.compute_opt);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  int count = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string bench_csv(const std::vector<RunRecord>& rows, bool with_wall) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) out += csv_row(r, with_wall) + "\n";
  return out;
}

}  // namespace robustpath
