#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "match_arena/diagnostics.hpp"
#include "match_arena/experiment.hpp"
#include "match_arena/fractional.hpp"
#include "match_arena/graph.hpp"
#include "match_arena/hardness.hpp"
#include "match_arena/instance_io.hpp"
#include "match_arena/rounding.hpp"

namespace py = pybind11;
using namespace match_arena;

namespace {

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

EdgeList edge_list(const std::vector<Edge>& edges) {
  EdgeList out;
  out.reserve(edges.size());
  for (const Edge& e : edges) out.emplace_back(e.u, e.v);
  return out;
}

py::dict assignment_dict(const FractionalAssignment& x) {
  py::dict d;
  for (const auto& [e, value] : x) d[py::make_tuple(e.u, e.v)] = value;
  return d;
}

EngineSpec engine_of(const std::string& name, std::size_t particles) {
  if (name == "exact") return ExactEngine{};
  if (name == "particle") return ParticleEngine{particles};
  throw std::invalid_argument("engine must be 'exact' or 'particle'");
}

py::object fraction(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(r.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online matching under vertex arrivals";

  py::class_<ArrivalInstance>(m, "ArrivalInstance")
      .def(py::init<std::vector<std::vector<VertexId>>>(), py::arg("earlier_neighbors"))
      .def("__len__", &ArrivalInstance::size)
      .def("earlier_neighbors",
           [](const ArrivalInstance& inst, VertexId v) {
             auto s = inst.earlier_neighbors(v);
             return std::vector<VertexId>(s.begin(), s.end());
           })
      .def_property_readonly("edges", [](const ArrivalInstance& inst) { return edge_list(inst.edges()); })
      .def("__repr__", [](const ArrivalInstance& inst) {
        return "<ArrivalInstance n=" + std::to_string(inst.size()) + " m=" + std::to_string(inst.num_edges()) + ">";
      });

  py::class_<EdgeArrivalInstance>(m, "EdgeArrivalInstance")
      .def_property_readonly("num_vertices", &EdgeArrivalInstance::num_vertices)
      .def_property_readonly("edges", [](const EdgeArrivalInstance& inst) { return edge_list(inst.edges()); });

  m.def("maximum_matching_size",
        [](const ArrivalInstance& inst) { return maximum_matching(inst.graph()).size(); });

  m.def("f_kappa", &eval_f_kappa, py::arg("theta"), py::arg("kappa"));
  m.def("beta_star", &beta_star, py::arg("kappa"));

  m.def(
      "run_fractional",
      [](const ArrivalInstance& inst, double kappa, std::optional<double> beta) {
        const FractionalRun run = run_fractional(inst, {kappa, beta.value_or(beta_star(kappa))});
        py::dict out;
        out["x"] = assignment_dict(run.x);
        out["y"] = run.y;
        out["value"] = fractional_value(run.x);
        std::vector<double> thetas;
        for (const auto& u : run.updates) thetas.push_back(u.theta.theta);
        out["theta"] = thetas;
        return out;
      },
      py::arg("instance"), py::arg("kappa") = 1.0, py::arg("beta") = py::none());

  m.def(
      "run_warmup",
      [](const ArrivalInstance& inst, std::uint64_t seed) { return edge_list(run_warmup(inst, seed).matching.edges); },
      py::arg("instance"), py::arg("seed") = 0);

  m.def(
      "run_improved",
      [](const ArrivalInstance& inst, double epsilon, const std::string& engine, std::size_t particles,
         std::uint64_t seed) {
        const RoundingConfig cfg{epsilon, engine_of(engine, particles), seed};
        return edge_list(run_improved(inst, cfg).matching.edges);
      },
      py::arg("instance"), py::arg("epsilon") = 0.05, py::arg("engine") = "exact", py::arg("particles") = 20000,
      py::arg("seed") = 0);

  m.def(
      "edge_probabilities",
      [](const ArrivalInstance& inst, const std::string& which, double epsilon) {
        RoundingPlan plan;
        if (which == "warmup") plan = plan_warmup(inst);
        else if (which == "improved") plan = plan_improved_exact(inst, {epsilon, ExactEngine{}, 0});
        else throw std::invalid_argument("expected 'warmup' or 'improved'");
        const auto probs = exact_edge_probabilities(inst, plan);
        py::dict out;
        for (std::size_t i = 0; i < probs.size(); ++i)
          out[py::make_tuple(inst.edges()[i].u, inst.edges()[i].v)] = probs[i];
        return out;
      },
      py::arg("instance"), py::arg("rounding") = "warmup", py::arg("epsilon") = 0.05,
      "Exact Pr[{u, v} matched] per edge.");

  m.def(
      "verify_certificate",
      [](std::size_t n) {
        const CertificateCheck check = verify_certificate(dual_certificate(n), n);
        py::dict out;
        out["feasible"] = check.feasible;
        out["value"] = fraction(check.value);
        out["weighted_rounds"] = fraction(check.weighted_rounds);
        out["violations"] = check.violations;
        return out;
      },
      py::arg("n"));
  m.def("certificate_bound", [](std::size_t n) { return fraction(certificate_bound(n)); }, py::arg("n"));
  m.def("hard_instance", [](std::size_t n) { return generate_hard_instance(n).instance; }, py::arg("n"));
  m.def(
      "prefix_ratio",
      [](std::size_t n, const std::string& baseline) {
        const auto alg = parse_edge_baseline(baseline) == EdgeBaselineKind::MaximalGreedy
                             ? maximal_greedy_baseline()
                             : proportional_split_baseline();
        const PrefixRatioResult r = prefix_competitive_ratio(alg, generate_hard_instance(n));
        return py::make_tuple(r.min_ratio, r.round_values);
      },
      py::arg("n"), py::arg("baseline") = "maximal_greedy");
  m.def(
      "lp_export",
      [](std::size_t n) {
        std::ostringstream out;
        write_lp(out, n);
        return out.str();
      },
      py::arg("n"));

  m.def(
      "generate_family",
      [](const std::string& family, std::size_t n, double p, std::uint64_t seed) -> py::object {
        AnyInstance inst = generate_family({parse_family(family), n, p}, seed);
        if (auto* v = std::get_if<ArrivalInstance>(&inst)) return py::cast(std::move(*v));
        return py::cast(std::get<EdgeArrivalInstance>(std::move(inst)));
      },
      py::arg("family"), py::arg("n") = 8, py::arg("p") = 0.5, py::arg("seed") = 0);

  m.def(
      "run_trials",
      [](const std::string& family, const std::string& alg, std::size_t n, double p, std::size_t trials,
         std::uint64_t seed, double epsilon, const std::string& engine, std::size_t particles, double kappa) {
        ExperimentSpec spec;
        spec.family = {parse_family(family), n, p};
        spec.algorithm.kind = parse_algorithm(alg);
        spec.algorithm.epsilon = epsilon;
        spec.algorithm.engine = engine_of(engine, particles);
        spec.algorithm.kappa = kappa;
        spec.trials = trials;
        spec.seed = seed;
        std::vector<py::dict> rows;
        for (const ResultRow& r : run_trials(spec)) {
          py::dict d;
          d["instance"] = r.instance;
          d["trial"] = r.trial;
          d["value"] = r.value;
          d["opt"] = r.opt;
          d["ratio"] = r.ratio;
          rows.push_back(d);
        }
        return rows;
      },
      py::arg("family"), py::arg("alg"), py::arg("n") = 8, py::arg("p") = 0.5, py::arg("trials") = 1,
      py::arg("seed") = 0, py::arg("epsilon") = 0.05, py::arg("engine") = "particle",
      py::arg("particles") = 20000, py::arg("kappa") = 1.1997);

  m.def(
      "long_path_probabilities",
      [](const ArrivalInstance& inst, std::size_t length_threshold, double delta, std::size_t samples,
         double epsilon, std::uint64_t seed) {
        const RoundingConfig cfg{epsilon, ExactEngine{}, seed};
        const auto report = estimate_long_path_prob(inst, cfg, {length_threshold, delta, samples});
        std::vector<py::tuple> out;
        for (const auto& c : report.vertices)
          out.push_back(py::make_tuple(c.vertex, c.long_path.estimate, c.good));
        return out;
      },
      py::arg("instance"), py::arg("length_threshold") = 5, py::arg("delta") = 0.05, py::arg("samples") = 10000,
      py::arg("epsilon") = 0.05, py::arg("seed") = 0);

  m.def("read_instance", [](const std::string& text) -> py::object {
    std::istringstream in(text);
    AnyInstance inst = read_instance(in);
    if (auto* v = std::get_if<ArrivalInstance>(&inst)) return py::cast(std::move(*v));
    return py::cast(std::get<EdgeArrivalInstance>(std::move(inst)));
  });
}
