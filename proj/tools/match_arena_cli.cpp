// match_arena: instance generation, experiments, hardness reports, diagnostics.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "match_arena/diagnostics.hpp"
#include "match_arena/experiment.hpp"
#include "match_arena/format.hpp"
#include "match_arena/hardness.hpp"
#include "match_arena/instance_io.hpp"

using namespace match_arena;

namespace {

struct CommonOptions {
  std::string family = "random_bipartite";
  std::size_t n = 8;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::string instance_path;
  std::string out;
};

struct RoundingOptions {
  double epsilon = 0.05;
  std::string engine = "particle";
  std::size_t particles = 20000;
};

void add_family_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--family", o.family, "hard_gn|random_bipartite|random_general|path|three_edge_path|triangle")
      ->capture_default_str();
  cmd->add_option("--n", o.n, "size parameter of the family")->capture_default_str();
  cmd->add_option("--p", o.p, "edge probability of the random families")->capture_default_str();
  cmd->add_option("--seed", o.seed, "base seed")->capture_default_str();
  cmd->add_option("--instance", o.instance_path, "read the instance from a file instead");
  cmd->add_option("--out", o.out, "output file (default stdout)");
}

void add_rounding_flags(CLI::App* cmd, RoundingOptions& o) {
  cmd->add_option("--epsilon", o.epsilon, "improvement parameter")->capture_default_str();
  cmd->add_option("--engine", o.engine, "exact|particle")->capture_default_str();
  cmd->add_option("--particles", o.particles, "particle ensemble size")->capture_default_str();
}

EngineSpec engine_of(const RoundingOptions& o) {
  if (o.engine == "exact") return ExactEngine{};
  if (o.engine == "particle") return ParticleEngine{o.particles};
  throw CLI::ValidationError("--engine", "expected exact or particle");
}

FamilySpec family_of(const CommonOptions& o) { return {parse_family(o.family), o.n, o.p}; }

AnyInstance load_instance(const CommonOptions& o) {
  if (!o.instance_path.empty()) return read_instance_file(o.instance_path);
  return generate_family(family_of(o), o.seed);
}

// Writes to --out when given, stdout otherwise.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  fn(file);
  if (!file) throw std::runtime_error("failed writing " + path);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    grid.push_back(std::stod(item));
  }
  return grid;
}

int cmd_hardness(std::size_t n, const std::string& lp_out) {
  const DualCertificate cert = dual_certificate(n);
  const CertificateCheck check = verify_certificate(cert, n);
  std::cout << "n = " << n << '\n'
            << "certificate feasible: " << (check.feasible ? "yes" : "no") << '\n'
            << "certificate value:    " << check.value.str() << " (" << format_real(check.value.convert_to<double>())
            << ")\n"
            << "expected value:       " << certificate_bound(n).str() << '\n'
            << "sum_k k*c_k:          " << check.weighted_rounds.str() << '\n';
  for (const auto& v : check.violations) std::cout << "violated: " << v << '\n';

  const HardFamilyInstance inst = generate_hard_instance(n);
  for (const auto& alg : {maximal_greedy_baseline(), proportional_split_baseline()}) {
    const PrefixRatioResult r = prefix_competitive_ratio(alg, inst);
    std::cout << alg.name << ": min_k V_k/k = " << format_real(r.min_ratio) << '\n';
  }
  if (!lp_out.empty()) {
    emit(lp_out == "-" ? std::string() : lp_out, [&](std::ostream& out) { write_lp(out, n); });
  }
  return check.feasible && check.value == certificate_bound(n) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online matching under vertex arrivals: experiments and diagnostics"};
  app.require_subcommand(1);

  CommonOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "emit an instance file");
  add_family_flags(gen, gen_opts);

  CommonOptions run_opts;
  RoundingOptions run_round;
  std::string alg = "greedy";
  std::string baseline = "maximal_greedy";
  double kappa = 1.1997;
  std::optional<double> beta;
  std::size_t trials = 1;
  bool runtime = false;
  auto* run = app.add_subcommand("run", "run trials and emit a result CSV");
  add_family_flags(run, run_opts);
  add_rounding_flags(run, run_round);
  run->add_option("--alg", alg, "greedy|warmup|improved|fractional|edge_baseline")->capture_default_str();
  run->add_option("--baseline", baseline, "maximal_greedy|proportional_split")->capture_default_str();
  run->add_option("--kappa", kappa, "fractional algorithm parameter")->capture_default_str();
  run->add_option("--beta", beta, "fractional scaling (default 1 + f(0))");
  run->add_option("--trials", trials, "trial count")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_flag("--runtime", runtime, "add a runtime_seconds column");

  std::size_t hard_n = 10;
  std::string lp_out;
  auto* hard = app.add_subcommand("hardness", "verify the dual certificate and export the LP");
  hard->add_option("--n", hard_n, "round count (even)")->capture_default_str();
  hard->add_option("--lp-out", lp_out, "write the LP here ('-' for stdout)");

  CommonOptions diag_opts;
  RoundingOptions diag_round;
  GoodVertexParams good;
  std::string k_grid = "1,2,4";
  auto* diag = app.add_subcommand("diagnose", "path, blocking-set and good-vertex diagnostics");
  add_family_flags(diag, diag_opts);
  add_rounding_flags(diag, diag_round);
  diag->add_option("--threshold-L", good.length_threshold, "long path length L")->capture_default_str();
  diag->add_option("--delta", good.prob_threshold, "good-vertex probability threshold")->capture_default_str();
  diag->add_option("--samples", good.samples, "tau samples")->capture_default_str();
  diag->add_option("--k-grid", k_grid, "comma separated blocking-mass thresholds")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const AnyInstance inst = load_instance(gen_opts);
      emit(gen_opts.out, [&](std::ostream& out) { write_instance(out, inst); });
      return 0;
    }
    if (*run) {
      ExperimentSpec spec;
      spec.family = family_of(run_opts);
      spec.algorithm.kind = parse_algorithm(alg);
      spec.algorithm.epsilon = run_round.epsilon;
      spec.algorithm.engine = engine_of(run_round);
      spec.algorithm.kappa = kappa;
      spec.algorithm.beta = beta;
      spec.algorithm.baseline = parse_edge_baseline(baseline);
      spec.trials = trials;
      spec.seed = run_opts.seed;
      if (!run_opts.instance_path.empty()) {
        spec.fixed_instance = read_instance_file(run_opts.instance_path);
        spec.fixed_label = run_opts.instance_path;
      }
      const auto rows = run_trials(spec);
      emit(run_opts.out, [&](std::ostream& out) { write_results_csv(out, rows, runtime); });
      auto& table = run_opts.out.empty() ? std::cerr : std::cout;
      write_summary_table(table, rows.front().instance + " / " + alg, summarize(rows));
      return 0;
    }
    if (*hard) return cmd_hardness(hard_n, lp_out);
    if (*diag) {
      const AnyInstance any = load_instance(diag_opts);
      const auto* inst = std::get_if<ArrivalInstance>(&any);
      if (!inst) throw std::invalid_argument("diagnose needs a vertex-arrival instance");
      RoundingConfig cfg{diag_round.epsilon, engine_of(diag_round), diag_opts.seed};
      const GoodVertexReport report = estimate_long_path_prob(*inst, cfg, good);
      const TailReport tail = tail_bound_report(*inst, report.plan, parse_grid(k_grid), good.samples, cfg.seed);
      emit(diag_opts.out, [&](std::ostream& out) { write_diagnostics_csv(out, report, tail); });
      const BadVertexReport bad = bad_vertex_report(report, cfg.epsilon);
      auto& log = diag_opts.out.empty() ? std::cerr : std::cout;
      log << "bad vertices: " << bad.bad_count << " of " << bad.vertex_count << '\n'
          << "sum x: " << format_real(bad.fractional_value) << ", eps^3 sum x: " << format_real(bad.scaled_value)
          << ", x mass at bad vertices: " << format_real(bad.bad_incident_mass) << '\n'
          << "tail bound within 4 sigma everywhere: " << (tail.all_within ? "yes" : "no") << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
