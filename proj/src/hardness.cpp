#include "match_arena/hardness.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace match_arena {

HardFamilyInstance generate_hard_instance(std::size_t n) {
  if (n == 0) throw std::invalid_argument("hard family needs n >= 1");
  HardFamilyInstance out;
  out.n = n;
  std::vector<Edge> edges;
  edges.reserve(n * (n + 1) / 2);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= i; ++j) edges.emplace_back(out.left(j), out.right(i - j + 1));
    out.round_end.push_back(edges.size());
  }
  out.instance = EdgeArrivalInstance(2 * n, std::move(edges));
  return out;
}

DualCertificate dual_certificate(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("dual certificate defined for even n >= 2");
  const Rational denom = Rational(n) * Rational(n + 1);
  DualCertificate cert;
  cert.c.assign(n, Rational(2) / denom);
  cert.ell.assign(n, Rational(0));
  for (std::size_t j = 1; j <= n; ++j) {
    // j <= n/2 + 1
    if (2 * j <= n + 2) cert.ell[j - 1] = (Rational(n) - Rational(2 * (j - 1))) / denom;
  }
  cert.r = cert.ell;
  return cert;
}

Rational certificate_bound(std::size_t n) {
  return Rational(1, 2) + Rational(1, 2 * static_cast<long long>(n) + 2);
}

CertificateCheck verify_certificate(const DualCertificate& cert, std::size_t n) {
  if (cert.ell.size() != n || cert.r.size() != n || cert.c.size() != n)
    throw std::invalid_argument("certificate dimensions do not match n = " + std::to_string(n));
  CertificateCheck check;
  auto violate = [&](std::string what) {
    check.feasible = false;
    check.violations.push_back(std::move(what));
  };

  for (std::size_t j = 0; j < n; ++j) {
    if (cert.ell[j] < 0) violate("ell_" + std::to_string(j + 1) + " < 0");
    if (cert.r[j] < 0) violate("r_" + std::to_string(j + 1) + " < 0");
    if (cert.c[j] < 0) violate("c_" + std::to_string(j + 1) + " < 0");
  }

  for (std::size_t k = 1; k <= n; ++k) check.weighted_rounds += Rational(k) * cert.c[k - 1];
  if (check.weighted_rounds < 1)
    violate("sum_k k*c_k = " + check.weighted_rounds.str() + " < 1");

  // tail[i] = sum_{k >= i} c_k
  std::vector<Rational> tail(n + 2, Rational(0));
  for (std::size_t i = n; i >= 1; --i) tail[i] = tail[i + 1] + cert.c[i - 1];
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= i; ++j) {
      if (cert.ell[j - 1] + cert.r[i - j] < tail[i])
        violate("edge constraint i=" + std::to_string(i) + " j=" + std::to_string(j));
    }
  }

  for (std::size_t j = 0; j < n; ++j) check.value += cert.ell[j] + cert.r[j];
  return check;
}

EdgeArrivalAlgorithm maximal_greedy_baseline() {
  return {"maximal-greedy", [](const Edge& e, std::span<const double> loads) {
            return std::max(0.0, std::min(1.0 - loads[e.u], 1.0 - loads[e.v]));
          }};
}

EdgeArrivalAlgorithm proportional_split_baseline(double share) {
  if (!(share > 0.0 && share <= 1.0)) throw std::invalid_argument("share must lie in (0, 1]");
  return {"proportional-split", [share](const Edge& e, std::span<const double> loads) {
            return share * std::max(0.0, std::min(1.0 - loads[e.u], 1.0 - loads[e.v]));
          }};
}

PrefixRatioResult prefix_competitive_ratio(const EdgeArrivalAlgorithm& alg,
                                           const HardFamilyInstance& inst, double tol) {
  PrefixRatioResult result;
  std::vector<double> loads(inst.instance.num_vertices(), 0.0);
  const auto& edges = inst.instance.edges();
  double value = 0.0;
  std::size_t next_edge = 0;
  for (std::size_t k = 1; k <= inst.round_end.size(); ++k) {
    for (; next_edge < inst.round_end[k - 1]; ++next_edge) {
      const Edge& e = edges[next_edge];
      const double x = alg.assign(e, loads);
      if (!(x >= -tol) || loads[e.u] + x > 1.0 + tol || loads[e.v] + x > 1.0 + tol)
        throw std::runtime_error(alg.name + " left the matching polytope at edge " +
                                 std::to_string(e.u) + "-" + std::to_string(e.v));
      loads[e.u] += x;
      loads[e.v] += x;
      value += x;
      result.x[e] = x;
    }
    result.round_values.push_back(value);
    result.round_ratios.push_back(value / static_cast<double>(k));
  }
  result.min_ratio = *std::min_element(result.round_ratios.begin(), result.round_ratios.end());
  return result;
}

void write_lp(std::ostream& out, std::size_t n) {
  if (n == 0) throw std::invalid_argument("LP export needs n >= 1");
  auto var = [](std::size_t i, std::size_t j) {
    return "x_" + std::to_string(i) + "_" + std::to_string(j);
  };
  out << "lp-matching v1 n=" << n << '\n' << "max alpha\n";
  for (std::size_t j = 1; j <= n; ++j) {
    out << "row left";
    for (std::size_t i = j; i <= n; ++i) out << " 1," << var(i, j);
    out << " <= 1\n";
  }
  for (std::size_t j = 1; j <= n; ++j) {
    out << "row right";
    for (std::size_t i = j; i <= n; ++i) out << " 1," << var(i, i - j + 1);
    out << " <= 1\n";
  }
  for (std::size_t k = 1; k <= n; ++k) {
    out << "row comp";
    for (std::size_t i = 1; i <= k; ++i)
      for (std::size_t j = 1; j <= i; ++j) out << " 1," << var(i, j);
    out << " -" << k << ",alpha >= 0\n";
  }
}

}  // namespace match_arena
