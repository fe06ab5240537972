#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsr/complex_matrix.hpp"
#include "qsr/eig.hpp"

namespace qsr {

struct Register {
  std::string label;
  long dim;
};

// Ordered list of labelled tensor factors. Labels are unique; the product of
// dims is the carrier dimension.
class RegisterLayout {
public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Register> regs);

  long total_dim() const { return total_; }
  int size() const { return static_cast<int>(regs_.size()); }
  const Register& reg(int i) const { return regs_[i]; }
  const std::vector<Register>& registers() const { return regs_; }
  int position_of(const std::string& label) const;
  long dim_of(const std::string& label) const { return regs_[position_of(label)].dim; }
  bool has(const std::string& label) const;
  std::vector<std::string> labels() const;
  std::vector<int> dims_int() const;

private:
  std::vector<Register> regs_;
  long total_ = 1;
};

class PureVector {
public:
  PureVector() = default;
  PureVector(RegisterLayout layout, std::vector<cplx> amplitudes);

  const RegisterLayout& layout() const { return layout_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }
  std::vector<cplx>& amplitudes() { return amp_; }
  long dim() const { return layout_.total_dim(); }
  double norm() const;

  ComplexMatrix density() const;

private:
  RegisterLayout layout_;
  std::vector<cplx> amp_;
};

class QuantumState {
public:
  QuantumState() = default;
  // Validates Hermitian/PSD/trace-one invariants and sets the purity flag.
  QuantumState(RegisterLayout layout, ComplexMatrix rho);

  const RegisterLayout& layout() const { return layout_; }
  const ComplexMatrix& matrix() const { return rho_; }
  bool pure() const { return pure_; }

private:
  RegisterLayout layout_;
  ComplexMatrix rho_;
  bool pure_ = false;
};

enum class RandomKind { PureHaar, MixedGinibre };

QuantumState random_state(const RegisterLayout& layout, RandomKind kind, std::uint64_t seed);
PureVector random_pure_vector(const RegisterLayout& layout, std::uint64_t seed);

// Canonical purification from the eigendecomposition; ancilla dim = rank.
PureVector purify(const QuantumState& rho, const std::string& ancilla_label);

struct UhlmannResult {
  // dim(Z) x dim(Y) isometry mapping a's non-shared part onto b's.
  std::vector<cplx> v;
  long rows = 0, cols = 0;
  double overlap = 0.0;
};

// a lives on X+Y, b on X+Z where X = shared_labels (present in both).
// Returns V: Y -> Z maximizing |<b|(I_X (x) V)|a>| together with that overlap,
// which equals the fidelity of the X-marginals.
UhlmannResult uhlmann_isometry(const PureVector& a, const PureVector& b,
                               const std::vector<std::string>& shared_labels);

PureVector permute_registers(const PureVector& v, const std::vector<std::string>& new_order);
QuantumState permute_registers(const QuantumState& s, const std::vector<std::string>& new_order);

// Swap plan for one basis value of the control register.
using SwapPlan = std::vector<std::pair<std::string, std::string>>;

// Applies, for each basis value j of the control register, the register swaps
// returned by plan(j). Labels keep their positions; only amplitudes move.
PureVector controlled_swap(const PureVector& pure, const std::string& control_label,
                           const std::function<SwapPlan(long)>& plan);
// Convenience: applies target_pairs for every nonzero control value.
PureVector controlled_swap(const PureVector& pure, const std::string& control_label,
                           const SwapPlan& target_pairs);

// Applies a matrix to the tensor factor spanned by `labels` (in that order).
// When out_regs is given the matrix may be a non-square isometry; the listed
// registers are replaced by out_regs (placed at the end of the layout).
PureVector apply_on_registers(const PureVector& v, const std::vector<std::string>& labels,
                              const cplx* m, long out_dim, long in_dim,
                              const std::vector<Register>& out_regs);
PureVector apply_on_registers(const PureVector& v, const std::vector<std::string>& labels,
                              const ComplexMatrix& m);

// Density operator of the kept registers (partial trace over the rest).
QuantumState reduce(const PureVector& v, const std::vector<std::string>& keep);
QuantumState reduce(const QuantumState& s, const std::vector<std::string>& keep);

cplx overlap(const PureVector& a, const PureVector& b);

PureVector tensor(const PureVector& a, const PureVector& b);
QuantumState tensor_states(const QuantumState& a, const QuantumState& b);

}  // namespace qsr
