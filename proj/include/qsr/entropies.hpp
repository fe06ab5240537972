#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsr/complex_matrix.hpp"
#include "qsr/states.hpp"

namespace qsr {

struct SolverReport {
  int iterations = 0;
  double gap = 0.0;
};

// All values in bits. `infinite` is the distinguished report state for
// support violations / vanishing fidelity; `value` is meaningless then.
struct EntropyResult {
  double value = 0.0;
  bool infinite = false;
  std::optional<ComplexMatrix> certificate;
  SolverReport report;
};

struct FidelityResult {
  double fidelity = 0.0;
  double purified_distance = 0.0;
};

// F = || sqrt(rho) sqrt(sigma) ||_1, P = sqrt(1 - F^2) with F clipped to [0,1].
FidelityResult fidelity_and_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

double von_neumann(const ComplexMatrix& rho);

// Umegaki relative entropy; infinite when supp(rho) is not inside supp(sigma).
EntropyResult relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma);

// I(a:b) = S(a) + S(b) - S(ab) on the named register groups.
double mutual_information(const QuantumState& s, const std::vector<std::string>& a,
                          const std::vector<std::string>& b);
// I(a:b|c) = S(ac) + S(bc) - S(c) - S(abc).
double cond_mutual_information(const QuantumState& s, const std::vector<std::string>& a,
                               const std::vector<std::string>& b,
                               const std::vector<std::string>& c);

// Max-divergence: log2 of the largest eigenvalue of sigma^{-1/2} rho sigma^{-1/2}
// on the support of sigma. Certificate: rank-one witness M with
// Tr(M sigma) = 1 and Tr(M rho) / Tr(M sigma) = 2^value.
EntropyResult dmax(const ComplexMatrix& rho, const ComplexMatrix& sigma);

// Hypothesis-testing divergence, exact via the Neyman-Pearson threshold search.
// Certificate: the optimal test operator Pi with Tr(Pi rho) = 1 - eps.
EntropyResult dh_eps(const ComplexMatrix& rho, const ComplexMatrix& sigma, double eps);

// Renyi-1/2 divergence -2 log2 F(rho, sigma).
EntropyResult d_half(const ComplexMatrix& rho, const ComplexMatrix& sigma);

// Conditional min-entropy H_min(a | rest) via the convex program
// minimize Tr X subject to I_a (x) X >= rho. Certificate: sigma* = X*/Tr X*.
EntropyResult hmin_cond(const QuantumState& s, const std::vector<std::string>& a);

// Conditional max-entropy via purification duality: H_max(a|b) = -H_min(a|c)
// on a purification. Certificate: the purification's density operator.
EntropyResult hmax_cond(const QuantumState& s, const std::vector<std::string>& a);

// Max-information I_max(a : rest) = min over sigma of D_max(rho || rho_a (x) sigma).
EntropyResult imax(const QuantumState& s, const std::vector<std::string>& a);

// Feasible-point UPPER BOUND on the smoothed max-divergence: searches a small
// ansatz family of states within purified distance eps of rho (always
// including rho itself), never the exact infimum. Certificate: the chosen
// nearby state; solver_report.gap records its verified purified distance.
EntropyResult smooth_dmax(const ComplexMatrix& rho, const ComplexMatrix& sigma, double eps,
                          int ansatz_budget);

struct SpreadReport {
  double h0 = 0.0;     // log2 rank
  double h_inf = 0.0;  // -log2 lambda_max
  double spread = 0.0;
  double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
  bool has_ks = false;
};

SpreadReport entanglement_spread(const ComplexMatrix& psi);

// For a tripartite pure state: spread of the marginal complementary to
// {r,c}, plus k1 = D_max(rho_rc || rho_r (x) rho_c), k2 = H_inf(rho_c),
// k3 = H_inf(rho_r), k4 = H_inf(rho_rc).
SpreadReport spread_ks(const PureVector& phi, const std::string& r_label,
                       const std::string& c_label);

}  // namespace qsr
