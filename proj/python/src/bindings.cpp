#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "robustpath/bench.hpp"
#include "robustpath/hardness.hpp"
#include "robustpath/pipelines.hpp"

namespace py = pybind11;
using namespace robustpath;

namespace {

std::vector<std::string> texts(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& q : v) out.push_back(format_rational(q));
  return out;
}

py::dict solve(const std::string& instance_json, const std::string& pipeline, std::optional<uint64_t> seed,
               int trials) {
  Pipeline p = parse_pipeline(pipeline);
  if (pipeline_is_stochastic(p) && !seed) throw py::value_error("pipeline " + pipeline + " needs a seed");
  PipelineOptions o;
  o.seed = seed.value_or(0);
  o.trials = trials;
  Instance inst = load_instance(instance_json);
  PipelineResult r;
  {
    py::gil_scoped_release nogil;
    r = run_pipeline(inst, p, o);
  }
  py::dict d;
  d["path"] = r.path;
  d["costs"] = texts(r.costs);
  d["max_cost"] = format_rational(r.max_cost);
  d["gs_star"] = r.gs_star ? py::cast(format_rational(*r.gs_star)) : py::none();
  d["height"] = r.height;
  d["rounds"] = r.rounds;
  return d;
}

py::dict brute(const std::string& instance_json) {
  BruteForceResult b = brute_force_minimax(load_instance(instance_json));
  py::dict d;
  d["path"] = b.path;
  d["value"] = format_rational(b.value);
  return d;
}

py::dict verify(const std::string& instance_json, const StPath& path) {
  Instance inst = load_instance(instance_json);
  check_path(inst, path);
  py::dict d;
  d["costs"] = texts(path_costs(inst, path));
  d["max_cost"] = format_rational(minimax_value(inst, path));
  return d;
}

py::dict kz(int t) {
  KzInstance g = gen_kz_hard_instance(t);
  py::dict d;
  d["instance"] = serialize_instance(g.inst);
  d["height"] = g.height;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> err(m, "RobustPathError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      err(e.what());
    }
  });

  m.def("normalize_instance", [](const std::string& s) { return serialize_instance(load_instance(s)); },
        py::arg("instance_json"), "Validate an instance and return its canonical JSON.");
  m.def("solve", &solve, py::arg("instance_json"), py::arg("pipeline") = "sp", py::arg("seed") = py::none(),
        py::arg("trials") = 50);
  m.def("brute_force", &brute, py::arg("instance_json"));
  m.def("verify", &verify, py::arg("instance_json"), py::arg("path"));
  m.def("gap_demo", [](const std::string& kind, int k) { return gap_demo(kind, k).text(); }, py::arg("kind"),
        py::arg("k"));
  m.def("generate", [](const std::string& family, int size, int k, uint64_t seed) {
    return serialize_instance(generate_family(family, size, k, seed));
  }, py::arg("family"), py::arg("size"), py::arg("k") = 4, py::arg("seed") = 1);
  m.def("kz_instance", &kz, py::arg("t"));
  m.def("bench_csv", [](const std::string& family, std::vector<int> sizes, std::vector<uint64_t> seeds,
                        std::vector<std::string> pipelines, int k, int threads) {
    BenchSuite s;
    s.family = family;
    s.sizes = std::move(sizes);
    s.seeds = std::move(seeds);
    s.pipelines.clear();
    for (const auto& p : pipelines) s.pipelines.push_back(parse_pipeline(p));
    s.k = k;
    py::gil_scoped_release nogil;
    return bench_csv(run_bench(s, {}, threads), false);
  }, py::arg("family"), py::arg("sizes"), py::arg("seeds"), py::arg("pipelines"), py::arg("k") = 4,
        py::arg("threads") = 1);
}
