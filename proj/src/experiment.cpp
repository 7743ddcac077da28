#include "match_arena/experiment.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "match_arena/format.hpp"
#include "match_arena/fractional.hpp"
#include "match_arena/hardness.hpp"
#include "match_arena/parallel.hpp"
#include "match_arena/random.hpp"

namespace match_arena {

namespace {

template <class Enum, std::size_t N>
Enum parse_name(std::string_view name, const std::array<Enum, N>& all, const char* what) {
  for (Enum e : all)
    if (to_string(e) == name) return e;
  throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

constexpr std::array kFamilies{FamilyKind::HardGn, FamilyKind::RandomBipartite, FamilyKind::RandomGeneral,
                               FamilyKind::Path, FamilyKind::ThreeEdgePathInternalFirst,
                               FamilyKind::Triangle};
constexpr std::array kAlgorithms{AlgorithmKind::GreedyIntegral, AlgorithmKind::WarmupRounding,
                                 AlgorithmKind::ImprovedRounding, AlgorithmKind::FractionalWW,
                                 AlgorithmKind::FractionalEdgeBaseline};
constexpr std::array kBaselines{EdgeBaselineKind::MaximalGreedy, EdgeBaselineKind::ProportionalSplit};

bool is_edge_algorithm(AlgorithmKind kind) { return kind == AlgorithmKind::FractionalEdgeBaseline; }

// Bernoulli and shuffles from uniform01 only, so instances are the same on
// every standard library.
bool coin(std::mt19937_64& gen, double p) { return uniform01(gen) < p; }

std::vector<VertexId> shuffled(std::size_t n, std::mt19937_64& gen) {
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(gen) * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  return order;
}

ArrivalInstance path_instance(std::size_t k) {
  std::vector<std::vector<VertexId>> lists(k);
  for (VertexId v = 1; v < k; ++v) lists[v] = {v - 1};
  return ArrivalInstance(std::move(lists));
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::HardGn: return "hard_gn";
    case FamilyKind::RandomBipartite: return "random_bipartite";
    case FamilyKind::RandomGeneral: return "random_general";
    case FamilyKind::Path: return "path";
    case FamilyKind::ThreeEdgePathInternalFirst: return "three_edge_path";
    case FamilyKind::Triangle: return "triangle";
  }
  return "?";
}

std::string_view to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::GreedyIntegral: return "greedy";
    case AlgorithmKind::WarmupRounding: return "warmup";
    case AlgorithmKind::ImprovedRounding: return "improved";
    case AlgorithmKind::FractionalWW: return "fractional";
    case AlgorithmKind::FractionalEdgeBaseline: return "edge_baseline";
  }
  return "?";
}

std::string_view to_string(EdgeBaselineKind kind) {
  switch (kind) {
    case EdgeBaselineKind::MaximalGreedy: return "maximal_greedy";
    case EdgeBaselineKind::ProportionalSplit: return "proportional_split";
  }
  return "?";
}

FamilyKind parse_family(std::string_view name) { return parse_name(name, kFamilies, "family"); }
AlgorithmKind parse_algorithm(std::string_view name) { return parse_name(name, kAlgorithms, "algorithm"); }
EdgeBaselineKind parse_edge_baseline(std::string_view name) {
  return parse_name(name, kBaselines, "edge baseline");
}

bool is_edge_arrival(FamilyKind kind) { return kind == FamilyKind::HardGn; }

void ExperimentSpec::validate() const {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  bool edge_input = is_edge_arrival(family.kind);
  if (fixed_instance) {
    edge_input = std::holds_alternative<EdgeArrivalInstance>(*fixed_instance);
  } else {
    switch (family.kind) {
      case FamilyKind::HardGn:
      case FamilyKind::Path:
        if (family.n == 0) throw std::invalid_argument("family needs n >= 1");
        break;
      case FamilyKind::RandomBipartite:
      case FamilyKind::RandomGeneral:
        if (!(family.p >= 0.0 && family.p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
        break;
      default:
        break;
    }
  }
  if (edge_input != is_edge_algorithm(algorithm.kind))
    throw std::invalid_argument(std::string("algorithm ") + std::string(to_string(algorithm.kind)) +
                                " does not run on " + (edge_input ? "edge" : "vertex") +
                                "-arrival instances");
  if (algorithm.kind == AlgorithmKind::ImprovedRounding) {
    RoundingConfig cfg{algorithm.epsilon, algorithm.engine, seed};
    cfg.validate();
  }
  if (algorithm.kind == AlgorithmKind::FractionalWW) {
    if (!(algorithm.kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
    if (algorithm.beta && !(*algorithm.beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  }
}

AnyInstance generate_family(const FamilySpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case FamilyKind::HardGn:
      return generate_hard_instance(spec.n).instance;
    case FamilyKind::RandomBipartite: {
      std::mt19937_64 gen(seed);
      const std::size_t left = spec.n / 2;
      const auto order = shuffled(spec.n, gen);  // order[i]: arrival slot of vertex i
      Graph g(spec.n);
      for (VertexId a = 0; a < left; ++a)
        for (VertexId b = static_cast<VertexId>(left); b < spec.n; ++b)
          if (coin(gen, spec.p)) g.add_edge(order[a], order[b]);
      return ArrivalInstance::from_graph(g);
    }
    case FamilyKind::RandomGeneral: {
      std::mt19937_64 gen(seed);
      Graph g(spec.n);
      for (VertexId b = 1; b < spec.n; ++b)
        for (VertexId a = 0; a < b; ++a)
          if (coin(gen, spec.p)) g.add_edge(a, b);
      return ArrivalInstance::from_graph(g);
    }
    case FamilyKind::Path:
      return path_instance(spec.n);
    case FamilyKind::ThreeEdgePathInternalFirst:
      // Path a - b - c - d; b and c arrive first, then a, then d.
      return ArrivalInstance({{}, {0}, {0}, {1}});
    case FamilyKind::Triangle:
      return ArrivalInstance({{}, {0}, {0, 1}});
  }
  throw std::invalid_argument("unknown family");
}

std::string family_label(const FamilySpec& spec) {
  std::string label(to_string(spec.kind));
  switch (spec.kind) {
    case FamilyKind::HardGn:
    case FamilyKind::Path:
      label += ":n=" + std::to_string(spec.n);
      break;
    case FamilyKind::RandomBipartite:
    case FamilyKind::RandomGeneral:
      label += ":n=" + std::to_string(spec.n) + ":p=" + format_real(spec.p);
      break;
    default:
      break;
  }
  return label;
}

Matching greedy_integral(const ArrivalInstance& inst) {
  std::vector<bool> matched(inst.size(), false);
  Matching m;
  for (VertexId v = 0; v < inst.size(); ++v) {
    for (VertexId u : inst.earlier_neighbors(v)) {
      if (matched[u]) continue;
      matched[u] = matched[v] = true;
      m.edges.emplace_back(u, v);
      break;
    }
  }
  return m;
}

namespace {

double checked_matching_size(const Graph& g, const Matching& m) {
  if (!is_valid_matching(g, m)) throw std::logic_error("algorithm emitted an invalid matching");
  return static_cast<double>(m.size());
}

double checked_fractional_value(const Graph& g, const FractionalAssignment& x) {
  const FeasibilityReport report = check_fractional_feasibility(x, g);
  if (!report.feasible) throw std::logic_error("algorithm left the matching polytope");
  return fractional_value(x);
}

double run_vertex_algorithm(const AlgorithmSpec& alg, const ArrivalInstance& inst, const Graph& g,
                            std::uint64_t seed) {
  switch (alg.kind) {
    case AlgorithmKind::GreedyIntegral:
      return checked_matching_size(g, greedy_integral(inst));
    case AlgorithmKind::WarmupRounding:
      return checked_matching_size(g, run_warmup(inst, seed).matching);
    case AlgorithmKind::ImprovedRounding:
      return checked_matching_size(g, run_improved(inst, {alg.epsilon, alg.engine, seed}).matching);
    case AlgorithmKind::FractionalWW: {
      const WWParams params{alg.kappa, alg.beta.value_or(beta_star(alg.kappa))};
      return checked_fractional_value(g, run_fractional(inst, params).x);
    }
    case AlgorithmKind::FractionalEdgeBaseline:
      break;
  }
  throw std::invalid_argument("not a vertex-arrival algorithm");
}

double run_edge_algorithm(const AlgorithmSpec& alg, const EdgeArrivalInstance& inst, const Graph& g) {
  const EdgeArrivalAlgorithm baseline = alg.baseline == EdgeBaselineKind::MaximalGreedy
                                            ? maximal_greedy_baseline()
                                            : proportional_split_baseline();
  std::vector<double> loads(inst.num_vertices(), 0.0);
  FractionalAssignment x;
  for (const Edge& e : inst.edges()) {
    const double value = baseline.assign(e, loads);
    loads[e.u] += value;
    loads[e.v] += value;
    x[e] = value;
  }
  return checked_fractional_value(g, x);
}

}  // namespace

std::vector<ResultRow> run_trials(const ExperimentSpec& spec) {
  spec.validate();
  const std::string label = spec.fixed_instance ? spec.fixed_label : family_label(spec.family);
  std::vector<ResultRow> rows(spec.trials);
  parallel_chunks(spec.trials, worker_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const std::uint64_t seed = derive_seed(spec.seed, t);
      const AnyInstance instance =
          spec.fixed_instance ? *spec.fixed_instance : generate_family(spec.family, seed);
      const auto start = std::chrono::steady_clock::now();
      ResultRow& row = rows[t];
      row.instance = label;
      row.trial = t;
      if (const auto* vertex = std::get_if<ArrivalInstance>(&instance)) {
        const Graph g = vertex->graph();
        row.value = run_vertex_algorithm(spec.algorithm, *vertex, g, seed);
        row.opt = static_cast<double>(maximum_matching(g).size());
      } else {
        const auto& edge = std::get<EdgeArrivalInstance>(instance);
        const Graph g = edge.graph();
        row.value = run_edge_algorithm(spec.algorithm, edge, g);
        row.opt = static_cast<double>(maximum_matching(g).size());
      }
      row.ratio = row.opt > 0 ? row.value / row.opt : 1.0;
      row.runtime_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  });
  return rows;
}

Summary summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("cannot summarize zero rows");
  Summary s;
  s.trials = rows.size();
  s.min_ratio = rows.front().ratio;
  s.max_ratio = rows.front().ratio;
  double ratio_sum = 0.0;
  double value_sum = 0.0;
  for (const auto& r : rows) {
    ratio_sum += r.ratio;
    value_sum += r.value;
    s.min_ratio = std::min(s.min_ratio, r.ratio);
    s.max_ratio = std::max(s.max_ratio, r.ratio);
  }
  const double n = static_cast<double>(rows.size());
  s.mean_ratio = ratio_sum / n;
  s.mean_value = value_sum / n;
  if (rows.size() > 1) {
    double ss = 0.0;
    for (const auto& r : rows) ss += (r.ratio - s.mean_ratio) * (r.ratio - s.mean_ratio);
    s.std_error = std::sqrt(ss / (n - 1)) / std::sqrt(n);
  }
  return s;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool include_runtime) {
  out << "instance,trial,value,opt,ratio" << (include_runtime ? ",runtime_seconds" : "") << '\n';
  for (const auto& r : rows) {
    out << r.instance << ',' << r.trial << ',' << format_real(r.value) << ',' << format_real(r.opt)
        << ',' << format_real(r.ratio);
    if (include_runtime) out << ',' << format_real(r.runtime_seconds);
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed to write results");
}

void write_summary_table(std::ostream& out, const std::string& label, const Summary& s) {
  std::ostringstream t;
  t << std::fixed << std::setprecision(6);
  t << std::left << std::setw(36) << "instance" << std::right << std::setw(8) << "trials"
    << std::setw(12) << "mean ratio" << std::setw(12) << "std error" << std::setw(10) << "min"
    << std::setw(10) << "max" << '\n';
  t << std::left << std::setw(36) << label << std::right << std::setw(8) << s.trials
    << std::setw(12) << s.mean_ratio << std::setw(12) << s.std_error << std::setw(10)
    << s.min_ratio << std::setw(10) << s.max_ratio << '\n';
  out << t.str();
}

}  // namespace match_arena
