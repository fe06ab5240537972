#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qsr/complex_matrix.hpp"
#include "qsr/entropies.hpp"
#include "qsr/states.hpp"

namespace qsr {

// Outcome of one inequality verification. pass holds iff lhs <= rhs + slack;
// operator checks additionally record the min-eigenvalue witness in details.
struct CheckReport {
  std::string check_name;
  std::string inputs_digest;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
  std::map<std::string, double> details;
};

// witness = lambda_min(2(I-S) + 4T - [I - (S+T)^{-1/2} S (S+T)^{-1/2}]),
// with the on-support inverse square root; pass iff witness >= -slack.
CheckReport check_hayashi_nagaoka(const ComplexMatrix& s, const ComplexMatrix& t, double slack);

// sqrt(Tr(A^2 rho)) <= F(rho, A rho A / Tr(A^2 rho)) + slack.
CheckReport check_gentle(const ComplexMatrix& rho, const ComplexMatrix& a, double slack);

struct EnsembleMember {
  double p = 0.0;
  ComplexMatrix rho;
};

// 1 - sum_{k != k'} sqrt(p_k p_k') F(rho_k, rho_k')
//   <= sum_k p_k^2 Tr(rho^{-1/2} rho_k rho^{-1/2} rho_k) + slack.
CheckReport check_pgm(const std::vector<EnsembleMember>& ensemble, double slack);

// Chain dh(0) <= -2 log2 F <= dh(eps) + log2(4/eps), each side computed
// independently, plus the square-root-measurement construction behind the
// upper bound: with p = 1/(1 + eps^2/(4F^2)) and
// Lambda1^2 = p rho^{-1/2} rho1 rho^{-1/2} for rho = p rho1 + (1-p) rho2,
// require Tr(Lambda1^2 rho1) >= 1 - eps and Tr(Lambda1^2 rho2) <= 4F^2/eps.
CheckReport check_dh_chain(const ComplexMatrix& rho1, const ComplexMatrix& rho2, double eps,
                           double slack);

// For a pure state on registers R, A, B, C, the two computable unsmoothed
// steps of the cost/achievability comparison, with mu_C maximally mixed:
//  (i)  dmax(rho_RBC || rho_RB (x) mu_C) >= -hmin(C|RB) + log2 d_C - slack
//  (ii) -dhalf(rho_BC || rho_B (x) mu_C) <= hmax(C|B) - log2 d_C + slack.
CheckReport check_comparison_chain(const PureVector& phi_rabc, double slack);

// k2 + k3 - k4 <= k1 + slack on a tripartite pure state, with the k's from
// spread_ks. Requires supp(rho_rc) inside supp(rho_r (x) rho_c).
CheckReport check_spread_inequality(const PureVector& phi, const std::string& r_label,
                                    const std::string& c_label, double slack);

// Exact classical hypothesis-testing divergence of two probability vectors,
// by the fractional-knapsack solution of the underlying linear program.
double classical_dh(const std::vector<double>& p, const std::vector<double>& q, double eps);

struct SweepEntry {
  long n = 0;
  double value = 0.0;      // dh_eps(rho^n, sigma^n, eps)
  double reference = 0.0;  // n * D(rho||sigma)
  double gap = 0.0;
  double envelope = 0.0;  // c sqrt(n) + c'
  bool within_envelope = false;
  bool lp_checked = false;  // commuting inputs only
  double lp_value = 0.0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  double rel_entropy = 0.0;
  double variance = 0.0;  // Tr(rho (log rho - log sigma)^2) - D^2
  bool truncated = false;
  std::string note;
  bool all_within_envelope = true;
};

// dh_eps(rho^{(x)n}, sigma^{(x)n}, eps) for n = 1..n_max against the
// first-order reference n*D(rho||sigma), with a loose sqrt(n) envelope
// (c = 3 sqrt(V) * quantile scale, c' = 10 bits). Commuting inputs are
// cross-checked against the classical oracle. Stops early with a note when
// dim^n exceeds the eigensolver budget.
SweepResult asymptotic_sweep(const ComplexMatrix& rho, const ComplexMatrix& sigma, double eps,
                             long n_max);

// Seeded batch of one checker family. Suites: hayashi-nagaoka, gentle, pgm,
// dh-chain, comparison, spread, convex-split, all. dims bounds the register
// dimensions where a suite draws them at random (<= 0 picks the default).
std::vector<CheckReport> run_suite(const std::string& suite, int trials, std::uint64_t seed,
                                   int dims);

}  // namespace qsr
