#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "match_arena/graph.hpp"

namespace match_arena {

using Rational = boost::multiprecision::cpp_rational;

/// The prefix-hard edge-arrival family. Left vertex u_j has id j - 1 and
/// right vertex v_j has id n + j - 1 (j is 1-based). Round i reveals
/// (u_j, v_{i-j+1}) for j = 1..i, in increasing j.
struct HardFamilyInstance {
  std::size_t n = 0;
  EdgeArrivalInstance instance;
  std::vector<std::size_t> round_end;  // edges revealed after round i (1-based i -> index i-1)

  VertexId left(std::size_t j) const { return static_cast<VertexId>(j - 1); }
  VertexId right(std::size_t j) const { return static_cast<VertexId>(n + j - 1); }
};

/// Throws std::invalid_argument for n == 0.
HardFamilyInstance generate_hard_instance(std::size_t n);

/// Dual variables: ell_j, r_j for the vertex constraints, c_k for round k.
/// Vectors are 0-based (index j - 1).
struct DualCertificate {
  std::vector<Rational> ell;
  std::vector<Rational> r;
  std::vector<Rational> c;
};

/// c_k = 2/(n(n+1)); ell_j = r_j = (n - 2(j-1))/(n(n+1)) for j <= n/2 + 1, else 0.
/// Throws std::invalid_argument unless n is even and >= 2.
DualCertificate dual_certificate(std::size_t n);

/// 1/2 + 1/(2n + 2).
Rational certificate_bound(std::size_t n);

struct CertificateCheck {
  bool feasible = true;
  Rational value;           // sum_j (ell_j + r_j)
  Rational weighted_rounds; // sum_k k c_k
  std::vector<std::string> violations;
};

/// Exact check of every dual constraint. Throws std::invalid_argument when
/// the certificate's dimensions do not match n.
CertificateCheck verify_certificate(const DualCertificate& cert, std::size_t n);

/// An online fractional edge-arrival algorithm: value for the arriving edge
/// given the current per-vertex loads. Called once per edge, irrevocably.
struct EdgeArrivalAlgorithm {
  std::string name;
  std::function<double(const Edge&, std::span<const double> loads)> assign;
};

/// x_e = min(1 - load_u, 1 - load_v).
EdgeArrivalAlgorithm maximal_greedy_baseline();
/// x_e = share * min(1 - load_u, 1 - load_v): water-filling that only pours a
/// fixed share of the common slack.
EdgeArrivalAlgorithm proportional_split_baseline(double share = 0.5);

struct PrefixRatioResult {
  double min_ratio = 0.0;
  std::vector<double> round_values;  // V_k
  std::vector<double> round_ratios;  // V_k / k
  FractionalAssignment x;
};

/// Runs `alg` over the rounds and reports min_k V_k / k. Throws
/// std::runtime_error if the algorithm leaves the matching polytope.
PrefixRatioResult prefix_competitive_ratio(const EdgeArrivalAlgorithm& alg,
                                           const HardFamilyInstance& inst, double tol = 1e-9);

/// Writes the prefix-competitiveness LP:
///   lp-matching v1 n=<n>
///   max alpha
///   row left  <coeff,var>... <= 1      (j = 1..n)
///   row right <coeff,var>... <= 1      (j = 1..n)
///   row comp  <coeff,var>... -k,alpha >= 0   (k = 1..n)
/// with x_i_j the value of round i's edge at u_j.
void write_lp(std::ostream& out, std::size_t n);

}  // namespace match_arena
