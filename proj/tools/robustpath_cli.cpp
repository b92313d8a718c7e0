#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "robustpath/bench.hpp"
#include "robustpath/hardness.hpp"
#include "robustpath/pipelines.hpp"
#include "robustpath/rounding.hpp"

using namespace robustpath;

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void env_cap(const char* name, long& target) {
  if (const char* v = std::getenv(name)) {
    char* end = nullptr;
    long x = std::strtol(v, &end, 10);
    if (!end || *end || x <= 0) throw UsageError(std::string(name) + " must be a positive integer");
    target = x;
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_file(path, text);
}

std::string path_json(const StPath& p, const std::vector<Rational>& costs) {
  nlohmann::json doc;
  doc["path"] = p;
  std::vector<std::string> c;
  for (const auto& x : costs) c.push_back(format_rational(x));
  doc["costs"] = c;
  return doc.dump(2) + "\n";
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Cnf load_cnf(const std::string& text) {
  // DIMACS: "p cnf V C" header, clauses terminated by 0, "c" comment lines.
  Cnf f;
  std::istringstream in(text);
  std::string line;
  std::vector<int> clause;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first == "c") continue;
    if (first == "p") {
      std::string fmt;
      int clauses = 0;
      ls >> fmt >> f.vars >> clauses;
      continue;
    }
    std::istringstream all(line);
    int lit;
    while (all >> lit) {
      if (lit == 0) {
        f.clauses.push_back(clause);
        clause.clear();
      } else {
        clause.push_back(lit);
      }
    }
  }
  if (!clause.empty()) f.clauses.push_back(clause);
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust min-max s-t path solvers, gap demos and benchmarks"};
  app.set_config("--config", "", "TOML or INI config file; flags win on conflict");
  app.require_subcommand(1);

  PipelineOptions opts;
  long seed = -1;
  std::string instance_path, out_path, pipeline_name_arg = "sp";

  auto add_caps = [&](CLI::App* cmd) {
    cmd->add_option("--enum-cap", opts.enum_cap, "Path enumeration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--label-cap", opts.label_cap, "Tree-labeling unfolding cap")->check(CLI::PositiveNumber);
    cmd->add_option("--metatree-cap", opts.metatree_cap, "Metatree logical node cap")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("--instance", instance_path, "Instance file")->required();
  solve->add_option("--pipeline", pipeline_name_arg, "sp, treewidth, metatree, flow-baseline or brute");
  solve->add_option("--trials", opts.trials, "Rounding trials")->check(CLI::PositiveNumber);
  solve->add_option("--seed", seed, "Seed (required for sp, treewidth, metatree)")->check(CLI::NonNegativeNumber);
  solve->add_option("--width-hint", opts.width_hint, "Treewidth hint for the width cap");
  solve->add_flag("--refine", opts.refine, "(1+eps) refinement after halving");
  bool with_opt = false, as_csv = false;
  std::string path_out;
  solve->add_flag("--opt", with_opt, "Also compute the brute-force optimum");
  solve->add_flag("--csv", as_csv, "Print a CSV record instead of text");
  solve->add_option("--path-out", path_out, "Write the returned path and costs as JSON");
  add_caps(solve);

  auto* gap = app.add_subcommand("gap-demo", "Integrality-gap demonstrations");
  std::string gap_kind;
  int gap_k = 10;
  gap->add_option("--kind", gap_kind, "flow-two-vertex, flow-disjoint, weak-tree or tree-fix")->required();
  gap->add_option("--k", gap_k, "Agent count")->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("generate", "Write a generated instance");
  std::string family;
  int g_k = 3, g_length = -1, g_t = 1, g_size = 20, g_kappa = 4, g_universe = 6, g_vars = 4, g_clauses = 5;
  std::string g_cnf, g_cover, g_variant = "path";
  gen->add_option("--family", family,
                  "two-vertex, disjoint, kz, sp, dag, tw2, set-cover, 3sat-cover, 3c2, maximin")
      ->required();
  gen->add_option("--k", g_k, "Agents / paths");
  gen->add_option("--length", g_length, "Edges per path (disjoint; default k)");
  gen->add_option("--t", g_t, "Replacement rounds (kz)");
  gen->add_option("--size", g_size, "Edges (sp) or vertices (dag, tw2)");
  gen->add_option("--kappa", g_kappa, "Collections (random set cover)");
  gen->add_option("--universe", g_universe, "Universe size (random set cover)");
  gen->add_option("--vars", g_vars, "Variables (random 3-CNF)");
  gen->add_option("--clauses", g_clauses, "Clauses (random 3-CNF)");
  gen->add_option("--cnf", g_cnf, "DIMACS file for 3sat-cover");
  gen->add_option("--set-cover", g_cover, "Set cover file for 3c2 and maximin");
  gen->add_option("--variant", g_variant, "maximin variant: path, wis-tree, wis-interval, spanning-tree");
  gen->add_option("--seed", seed, "Seed for random families");
  gen->add_option("--out", out_path, "Output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Re-check a claimed path");
  std::string verify_path;
  verify->add_option("--instance", instance_path, "Instance file")->required();
  verify->add_option("--path", verify_path, "Path JSON written by solve --path-out")->required();

  auto* bench = app.add_subcommand("bench", "Run a benchmark grid and write CSV");
  BenchSuite suite;
  std::string sizes_arg, seeds_arg, pipelines_arg;
  int threads = 4;
  bool no_wall = false;
  bench->add_option("--family", suite.family, "sp, dag, tw2, disjoint, two-vertex, kz");
  bench->add_option("--sizes", sizes_arg, "Comma-separated sizes");
  bench->add_option("--seeds", seeds_arg, "Comma-separated seeds");
  bench->add_option("--pipelines", pipelines_arg, "Comma-separated pipelines");
  bench->add_option("--k", suite.k, "Agents for random families")->check(CLI::PositiveNumber);
  bench->add_option("--trials", opts.trials, "Rounding trials")->check(CLI::PositiveNumber);
  bench->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_flag("--no-opt", [&](int64_t) { suite.compute_opt = false; }, "Skip brute-force optima");
  bench->add_flag("--no-wall", no_wall, "Leave the wall_ms column empty");
  bench->add_option("--out", out_path, "CSV file (default stdout)");
  add_caps(bench);

  auto* moment = app.add_subcommand("moment-check", "Empirical moment statistic on the LP solution");
  long moment_trials = 10000;
  moment->add_option("--instance", instance_path, "Instance file")->required();
  moment->add_option("--pipeline", pipeline_name_arg, "sp, treewidth or metatree");
  moment->add_option("--trials", moment_trials, "Samples")->check(CLI::PositiveNumber);
  moment->add_option("--seed", seed, "Seed")->required();
  add_caps(moment);

  try {
    env_cap("RP_ENUM_CAP", opts.enum_cap);
    env_cap("RP_LABEL_CAP", opts.label_cap);
    env_cap("RP_METATREE_CAP", opts.metatree_cap);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (seed >= 0) opts.seed = static_cast<uint64_t>(seed);

    if (*solve) {
      Pipeline p = parse_pipeline(pipeline_name_arg);
      if (pipeline_is_stochastic(p) && seed < 0) throw UsageError("--seed is required for pipeline " + pipeline_name_arg);
      Instance inst = read_instance_file(instance_path);
      RunRecord r = run_record(instance_path, inst, p, opts, with_opt);
      if (!path_out.empty()) write_text_file(path_out, path_json(r.path, r.costs));
      if (as_csv) {
        std::cout << csv_header() << "\n" << csv_row(r) << "\n";
      } else {
        std::cout << "pipeline " << pipeline_name(p) << "\npath";
        for (int e : r.path) std::cout << " " << e;
        std::cout << "\ncosts";
        for (const auto& c : r.costs) std::cout << " " << format_rational(c);
        std::cout << "\nmax_cost " << format_rational(r.max_cost) << "\n";
        if (r.gs_star) std::cout << "GS_star " << format_rational(*r.gs_star) << "\n";
        if (r.height) std::cout << "H " << r.height << "\n";
        if (r.opt) std::cout << "opt " << format_rational(*r.opt) << "\nratio " << ratio_text(r) << "\n";
      }
      return 0;
    }

    if (*gap) {
      std::cout << gap_demo(gap_kind, gap_k).text();
      return 0;
    }

    if (*gen) {
      Rng rng(seed >= 0 ? static_cast<uint64_t>(seed) : 1);
      auto need_cover = [&] {
        if (g_cover.empty()) return random_set_cover(g_kappa, g_universe, 2, 0.3, rng);
        return load_set_cover(read_text_file(g_cover));
      };
      std::string text;
      if (family == "two-vertex") {
        text = serialize_instance(gen_two_vertex_gap(g_k));
      } else if (family == "disjoint") {
        text = serialize_instance(gen_disjoint_paths_gap(g_k, g_length < 0 ? g_k : g_length));
      } else if (family == "kz") {
        text = serialize_instance(gen_kz_hard_instance(g_t).inst);
      } else if (family == "sp") {
        text = serialize_instance(random_sp_instance(g_size, g_k, rng));
      } else if (family == "dag") {
        text = serialize_instance(random_dag_instance(g_size, 0.4, g_k, rng));
      } else if (family == "tw2") {
        text = serialize_instance(random_tw2_instance(g_size, 0.8, g_k, rng));
      } else if (family == "set-cover") {
        text = serialize_set_cover(random_set_cover(g_kappa, g_universe, 2, 0.3, rng));
      } else if (family == "3sat-cover") {
        Cnf f = g_cnf.empty() ? random_3cnf(g_vars, g_clauses, rng) : load_cnf(read_text_file(g_cnf));
        text = serialize_set_cover(gen_2choose1_from_3sat(f));
      } else if (family == "3c2") {
        text = serialize_set_cover(gen_3c2_from_2c1(need_cover()));
      } else if (family == "maximin") {
        SetCoverInstance sc = need_cover();
        MaximinInstance mi;
        if (g_variant == "path")
          mi = gen_maximin_path(sc);
        else if (g_variant == "wis-tree")
          mi = gen_maximin_wis(sc, MaximinVariant::WisTree);
        else if (g_variant == "wis-interval")
          mi = gen_maximin_wis(sc, MaximinVariant::WisInterval);
        else if (g_variant == "spanning-tree")
          mi = gen_maximin_spanning_tree(sc.collections[0].size() == 3 ? sc : gen_3c2_from_2c1(sc));
        else
          throw UsageError("unknown maximin variant '" + g_variant + "'");
        text = mi.variant == MaximinVariant::Path ? serialize_instance(maximin_path_instance(mi)) : serialize_maximin(mi);
      } else {
        throw UsageError("unknown family '" + family + "'");
      }
      emit(out_path, text);
      return 0;
    }

    if (*verify) {
      Instance inst = read_instance_file(instance_path);
      StPath p;
      std::vector<Rational> claimed;
      try {
        auto doc = nlohmann::json::parse(read_text_file(verify_path));
        p = doc.at("path").get<StPath>();
        if (doc.contains("costs"))
          for (const auto& c : doc["costs"]) claimed.push_back(parse_rational(c.get<std::string>()));
      } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, ex.what());
      }
      try {
        check_path(inst, p);
      } catch (const Error& e) {
        throw Error(ErrorCode::ValidationFailure, e.what());
      }
      std::vector<Rational> actual = path_costs(inst, p);
      if (!claimed.empty() && claimed != actual)
        throw Error(ErrorCode::ValidationFailure, "claimed costs differ from the recomputed costs");
      std::cout << "ok max_cost " << format_rational(max_of(actual)) << "\n";
      return 0;
    }

    if (*bench) {
      if (!sizes_arg.empty()) {
        suite.sizes.clear();
        for (const auto& s : split_csv(sizes_arg)) suite.sizes.push_back(std::stoi(s));
      }
      if (!seeds_arg.empty()) {
        suite.seeds.clear();
        for (const auto& s : split_csv(seeds_arg)) suite.seeds.push_back(std::stoull(s));
      }
      if (!pipelines_arg.empty()) {
        suite.pipelines.clear();
        for (const auto& s : split_csv(pipelines_arg)) suite.pipelines.push_back(parse_pipeline(s));
      }
      emit(out_path, bench_csv(run_bench(suite, opts, threads), !no_wall));
      return 0;
    }

    if (*moment) {
      Instance inst = read_instance_file(instance_path);
      MomentReport rep = pipeline_moment_check(inst, parse_pipeline(pipeline_name_arg), moment_trials, opts);
      std::printf("H %d GS %s trials %ld bound %.6f\n", rep.height, format_rational(rep.gs).c_str(), rep.trials,
                  rep.bound);
      for (size_t i = 0; i < rep.mean.size(); ++i)
        std::printf("agent %zu mean %.6f stderr %.6f %s\n", i, rep.mean[i], rep.stderr_[i],
                    rep.flagged[i] ? "FLAGGED" : "ok");
      return rep.any_flagged() ? kExitVerify : 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << error_code_name(e.code()) << ": " << e.what() << "\n";
    if (e.code() == ErrorCode::ValidationFailure) return kExitVerify;
    if (e.code() == ErrorCode::ValidationError && std::string(e.what()).find("unknown") != std::string::npos)
      return kExitUsage;
    return kExitVerify;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
