#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsr/complex_matrix.hpp"
#include "qsr/entropies.hpp"
#include "qsr/states.hpp"

namespace qsr {

// Configuration for one redistribution run. The input state must carry
// registers labelled R, A, B, C; sigma_c is a state on a single register of
// dimension dim(C).
struct ProtocolConfig {
  QuantumState sigma_c;
  long n = 1;
  long b = 1;
  double eps1 = 0.1;
  double eps2 = 0.1;
  std::uint64_t seed = 0;
  // Derive n and b from the entropic quantities instead of taking them as
  // given: n = ceil(2^k / eps1^2), b = ceil(eps2^2 * 2^dh).
  bool derive_parameters = false;
  // Replace the matching step's output with the exact target superposition
  // (isolates the decoding error from the matching error).
  bool inject_exact_mu = false;
  // When positive, k is the feasible smoothed upper bound with this budget.
  int smoothing_budget = 0;
  long dim_cap = 0;  // 0: use the global default cap
  bool keep_final_state = false;
};

struct ProtocolTranscript {
  double k = 0.0;
  bool k_infinite = false;
  double dh_value = 0.0;
  long n = 0, b = 0;
  double qubits_sent = 0.0;            // exactly 0.5 * log2(floor(n/b))
  double convex_split_fidelity = 0.0;  // achieved F between prepared and target
  double measured_P = 0.0;             // purified distance of final RABC1 state
  double guaranteed_P = 0.0;           // 3 eps1 + 6 eps2
  bool guarantee_valid = false;
  double decode_success_prob = 0.0;  // mass where the decoded index is correct
  double fail_mass = 0.0;            // mass on the "no output" branch
  std::optional<PureVector> final_state;
};

// tau = (1/n) sum_j rho_{P Q_j} (x) sigma^{(x)(n-1)} on registers P, Q1..Qn.
QuantumState convex_split_state(const QuantumState& rho_pq, const std::string& q_label,
                                const QuantumState& sigma_q, long n);

// j in 1..n -> (j1, j2) with j1 = floor((j-1)/b), j2 = j mod b (b when 0).
std::pair<long, long> index_split(long j, long n, long b);

struct PositionOperators {
  ComplexMatrix pi_single;              // test operator on B (x) C
  std::vector<ComplexMatrix> pi_list;   // Pi_j on B (x) C1..Cb
  ComplexMatrix pi_sum;                 // sum of Pi_j
  ComplexMatrix pi_support;             // support projector of the sum
  int d_b = 0, d_c = 0, blocks = 0;
};

PositionOperators build_position_operators(const ComplexMatrix& pi_bc, int d_b, int d_c,
                                           int blocks);

// Rectangular isometry rows x cols with rows = cols * (blocks + 1): the
// coherent positional measurement with an extra "no output" outcome.
struct DecoderIsometry {
  std::vector<cplx> v;
  long rows = 0, cols = 0;
};

// V = sum_j sqrt(Pi^{-1/2} Pi_j Pi^{-1/2}) (x) |j> + sqrt(I - Pi^0) (x) |0>.
// Throws with a witness when V^dagger V deviates from I beyond 1e-8.
DecoderIsometry decoder_isometry(const PositionOperators& ops);

// The ideal post-matching superposition restricted to one block:
// (1/sqrt(b)) sum_{j2} |j2>|phi_{RBAC_{j2}}>|0>_{L_{j2}} prod_{i!=j2} |sigma>_{L_i C_i}
// on registers R, B, A, J2, L1..Lb, C1..Cb.
PureVector block_superposition(const PureVector& phi, const QuantumState& sigma_c, long b);

// ceil(eps2^2 * 2^dh), at least 1.
long block_count_formula(double eps2, double dh);

ProtocolTranscript run_protocol(const PureVector& phi, const ProtocolConfig& config);

// Same protocol with the roles of A and B exchanged (the reversed direction
// of the task); reports the A-side quantities.
ProtocolTranscript run_protocol_reversed(const PureVector& phi, const ProtocolConfig& config);

}  // namespace qsr
