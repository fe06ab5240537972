#include "qsr/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace qsr {

RegisterLayout::RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
  std::set<std::string> seen;
  for (const auto& r : regs_) {
    if (r.dim <= 0) throw DimensionError("register dim must be positive: " + r.label);
    if (!seen.insert(r.label).second) throw InputError("duplicate register label: " + r.label);
    total_ *= r.dim;
  }
}

int RegisterLayout::position_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (regs_[i].label == label) return i;
  throw InputError("no register with label: " + label);
}

bool RegisterLayout::has(const std::string& label) const {
  for (const auto& r : regs_)
    if (r.label == label) return true;
  return false;
}

std::vector<std::string> RegisterLayout::labels() const {
  std::vector<std::string> out;
  for (const auto& r : regs_) out.push_back(r.label);
  return out;
}

std::vector<int> RegisterLayout::dims_int() const {
  std::vector<int> out;
  for (const auto& r : regs_) out.push_back(static_cast<int>(r.dim));
  return out;
}

PureVector::PureVector(RegisterLayout layout, std::vector<cplx> amplitudes)
    : layout_(std::move(layout)), amp_(std::move(amplitudes)) {
  if (static_cast<long>(amp_.size()) != layout_.total_dim())
    throw DimensionError("amplitude count does not match layout dimension");
}

double PureVector::norm() const {
  double s = 0.0;
  for (const cplx& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

ComplexMatrix PureVector::density() const {
  const long d = dim();
  ComplexMatrix rho(static_cast<int>(d));
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) rho.at(static_cast<int>(r), static_cast<int>(c)) = amp_[r] * std::conj(amp_[c]);
  return rho;
}

QuantumState::QuantumState(RegisterLayout layout, ComplexMatrix rho)
    : layout_(std::move(layout)), rho_(std::move(rho)) {
  if (layout_.total_dim() != rho_.dim())
    throw DimensionError("layout dimension does not match density matrix dim");
  const double tr = trace(rho_).real();
  if (std::abs(tr - 1.0) > 1e-10 || std::abs(trace(rho_).imag()) > 1e-10)
    throw ContractError("density matrix trace differs from 1 by more than 1e-10");
  rho_ = hermitize(rho_, 1e-9);
  EigenDecomposition ed = eig_hermitian(rho_);
  if (!ed.eigenvalues.empty() && ed.eigenvalues.front() < -1e-10)
    throw ContractError("density matrix is not PSD within 1e-10");
  double purity = 0.0;
  for (double l : ed.eigenvalues) purity += l * l;
  pure_ = purity >= 1.0 - 1e-9;
}

QuantumState random_state(const RegisterLayout& layout, RandomKind kind, std::uint64_t seed) {
  const long d = layout.total_dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  if (kind == RandomKind::PureHaar) {
    std::vector<cplx> amp(d);
    for (auto& a : amp) {
      const double re = nd(rng), im = nd(rng);
      a = cplx(re, im);
    }
    double nrm = 0.0;
    for (const auto& a : amp) nrm += std::norm(a);
    nrm = std::sqrt(nrm);
    for (auto& a : amp) a /= nrm;
    return QuantumState(layout, PureVector(layout, amp).density());
  }
  ComplexMatrix g(static_cast<int>(d));
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) {
      const double re = nd(rng), im = nd(rng);
      g.at(static_cast<int>(r), static_cast<int>(c)) = cplx(re, im);
    }
  ComplexMatrix rho(static_cast<int>(d));
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) {
      cplx acc = 0.0;
      for (long k = 0; k < d; ++k)
        acc += g.at(static_cast<int>(r), static_cast<int>(k)) * std::conj(g.at(static_cast<int>(c), static_cast<int>(k)));
      rho.at(static_cast<int>(r), static_cast<int>(c)) = acc;
    }
  const double tr = trace(rho).real();
  rho = scale(rho, 1.0 / tr);
  return QuantumState(layout, rho);
}

PureVector random_pure_vector(const RegisterLayout& layout, std::uint64_t seed) {
  const long d = layout.total_dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> amp(d);
  for (auto& a : amp) {
    const double re = nd(rng), im = nd(rng);
    a = cplx(re, im);
  }
  double nrm = 0.0;
  for (const auto& a : amp) nrm += std::norm(a);
  nrm = std::sqrt(nrm);
  for (auto& a : amp) a /= nrm;
  return PureVector(layout, std::move(amp));
}

PureVector purify(const QuantumState& rho, const std::string& ancilla_label) {
  EigenDecomposition ed = eig_hermitian(rho.matrix());
  const int d = rho.matrix().dim();
  double lmax = 0.0;
  for (double l : ed.eigenvalues) lmax = std::max(lmax, l);
  const double cut = 1e-10 * lmax;
  std::vector<int> kept;
  for (int i = 0; i < d; ++i)
    if (ed.eigenvalues[i] > cut) kept.push_back(i);
  const long rank = static_cast<long>(kept.size());
  std::vector<Register> regs = rho.layout().registers();
  regs.push_back({ancilla_label, rank});
  RegisterLayout out(regs);
  std::vector<cplx> amp(out.total_dim(), cplx(0.0));
  for (int a = 0; a < d; ++a)
    for (long i = 0; i < rank; ++i)
      amp[static_cast<size_t>(a) * rank + i] =
          std::sqrt(ed.eigenvalues[kept[i]]) * ed.eigenvectors.at(a, kept[i]);
  return PureVector(out, std::move(amp));
}

namespace {

// Index remap helper: digit decomposition of a flat index in a layout.
struct Digits {
  std::vector<long> dims, strides;
  void init(const RegisterLayout& l) {
    dims.resize(l.size());
    strides.resize(l.size());
    long s = 1;
    for (int i = l.size() - 1; i >= 0; --i) {
      dims[i] = l.reg(i).dim;
      strides[i] = s;
      s *= dims[i];
    }
  }
  long digit(long idx, int pos) const { return (idx / strides[pos]) % dims[pos]; }
};

}  // namespace

PureVector permute_registers(const PureVector& v, const std::vector<std::string>& new_order) {
  const RegisterLayout& l = v.layout();
  if (static_cast<int>(new_order.size()) != l.size())
    throw InputError("permutation must list every register exactly once");
  std::vector<int> src_pos;
  std::vector<Register> regs;
  bool identity = true;
  for (size_t i = 0; i < new_order.size(); ++i) {
    const int p = l.position_of(new_order[i]);
    if (p != static_cast<int>(i)) identity = false;
    src_pos.push_back(p);
    regs.push_back(l.reg(p));
  }
  if (identity) return v;
  RegisterLayout out_layout(regs);
  Digits src;
  src.init(l);
  std::vector<long> out_strides(new_order.size());
  long s = 1;
  for (int i = static_cast<int>(new_order.size()) - 1; i >= 0; --i) {
    out_strides[i] = s;
    s *= regs[i].dim;
  }
  std::vector<cplx> amp(l.total_dim());
  const long total = l.total_dim();
  const int k = l.size();
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < total; ++idx) {
    long out = 0;
    for (int i = 0; i < k; ++i) out += src.digit(idx, src_pos[i]) * out_strides[i];
    amp[out] = v.amplitudes()[idx];
  }
  return PureVector(out_layout, std::move(amp));
}

QuantumState permute_registers(const QuantumState& st, const std::vector<std::string>& new_order) {
  const RegisterLayout& l = st.layout();
  if (static_cast<int>(new_order.size()) != l.size())
    throw InputError("permutation must list every register exactly once");
  std::vector<int> src_pos;
  std::vector<Register> regs;
  for (const auto& lab : new_order) {
    src_pos.push_back(l.position_of(lab));
    regs.push_back(l.reg(src_pos.back()));
  }
  RegisterLayout out_layout(regs);
  Digits src;
  src.init(l);
  std::vector<long> out_strides(new_order.size());
  long s = 1;
  for (int i = static_cast<int>(new_order.size()) - 1; i >= 0; --i) {
    out_strides[i] = s;
    s *= regs[i].dim;
  }
  const long total = l.total_dim();
  const int k = l.size();
  std::vector<long> map(total);
  for (long idx = 0; idx < total; ++idx) {
    long out = 0;
    for (int i = 0; i < k; ++i) out += src.digit(idx, src_pos[i]) * out_strides[i];
    map[idx] = out;
  }
  ComplexMatrix rho(static_cast<int>(total));
  for (long r = 0; r < total; ++r)
    for (long c = 0; c < total; ++c)
      rho.at(static_cast<int>(map[r]), static_cast<int>(map[c])) =
          st.matrix().at(static_cast<int>(r), static_cast<int>(c));
  return QuantumState(out_layout, std::move(rho));
}

PureVector controlled_swap(const PureVector& pure, const std::string& control_label,
                           const std::function<SwapPlan(long)>& plan) {
  const RegisterLayout& l = pure.layout();
  const int cpos = l.position_of(control_label);
  Digits dg;
  dg.init(l);
  const long total = l.total_dim();
  const int k = l.size();
  std::vector<cplx> amp(total);
  // Precompute per-control-value swap position pairs.
  const long cdim = l.reg(cpos).dim;
  std::vector<std::vector<std::pair<int, int>>> pos_pairs(cdim);
  for (long j = 0; j < cdim; ++j) {
    for (const auto& [la, lb] : plan(j)) {
      const int pa = l.position_of(la), pb = l.position_of(lb);
      if (l.reg(pa).dim != l.reg(pb).dim)
        throw DimensionError("controlled_swap: register dims differ: " + la + ", " + lb);
      pos_pairs[j].push_back({pa, pb});
    }
  }
  std::vector<long> digits(k);
#pragma omp parallel for schedule(static) firstprivate(digits)
  for (long idx = 0; idx < total; ++idx) {
    for (int i = 0; i < k; ++i) digits[i] = dg.digit(idx, i);
    const long j = digits[cpos];
    long out = 0;
    // apply the swaps to the digit vector
    auto swapped = digits;
    for (const auto& [pa, pb] : pos_pairs[j]) std::swap(swapped[pa], swapped[pb]);
    for (int i = 0; i < k; ++i) out += swapped[i] * dg.strides[i];
    amp[out] = pure.amplitudes()[idx];
  }
  return PureVector(l, std::move(amp));
}

PureVector controlled_swap(const PureVector& pure, const std::string& control_label,
                           const SwapPlan& target_pairs) {
  return controlled_swap(pure, control_label,
                         [&](long j) { return j == 0 ? SwapPlan{} : target_pairs; });
}

PureVector apply_on_registers(const PureVector& v, const std::vector<std::string>& labels,
                              const cplx* m, long out_dim, long in_dim,
                              const std::vector<Register>& out_regs) {
  const RegisterLayout& l = v.layout();
  // Move the target registers to the back, in the listed order.
  std::vector<std::string> order;
  for (const auto& r : l.registers()) {
    bool targeted = false;
    for (const auto& lab : labels)
      if (lab == r.label) targeted = true;
    if (!targeted) order.push_back(r.label);
  }
  std::vector<Register> rest_regs;
  for (const auto& lab : order) rest_regs.push_back(l.reg(l.position_of(lab)));
  for (const auto& lab : labels) order.push_back(lab);
  PureVector p = permute_registers(v, order);

  long in_check = 1;
  for (const auto& lab : labels) in_check *= l.dim_of(lab);
  if (in_check != in_dim) throw DimensionError("apply_on_registers: matrix in_dim mismatch");
  long out_check = 1;
  for (const auto& r : out_regs) out_check *= r.dim;
  if (out_check != out_dim) throw DimensionError("apply_on_registers: matrix out_dim mismatch");

  const long rest = l.total_dim() / in_dim;
  std::vector<cplx> amp(rest * out_dim);
  const cplx* x = p.amplitudes().data();
#pragma omp parallel for schedule(static)
  for (long r = 0; r < rest; ++r) {
    const cplx* xr = x + r * in_dim;
    cplx* ar = amp.data() + r * out_dim;
    for (long o = 0; o < out_dim; ++o) {
      cplx acc = 0.0;
      const cplx* mo = m + o * in_dim;
      for (long i = 0; i < in_dim; ++i) acc += mo[i] * xr[i];
      ar[o] = acc;
    }
  }
  std::vector<Register> regs = rest_regs;
  for (const auto& r : out_regs) regs.push_back(r);
  return PureVector(RegisterLayout(regs), std::move(amp));
}

PureVector apply_on_registers(const PureVector& v, const std::vector<std::string>& labels,
                              const ComplexMatrix& m) {
  std::vector<Register> out_regs;
  for (const auto& lab : labels) out_regs.push_back({lab, v.layout().dim_of(lab)});
  return apply_on_registers(v, labels, m.data(), m.dim(), m.dim(), out_regs);
}

QuantumState reduce(const PureVector& v, const std::vector<std::string>& keep) {
  std::vector<std::string> order = keep;
  for (const auto& r : v.layout().registers()) {
    bool kept = false;
    for (const auto& lab : keep)
      if (lab == r.label) kept = true;
    if (!kept) order.push_back(r.label);
  }
  PureVector p = permute_registers(v, order);
  long keep_dim = 1;
  for (const auto& lab : keep) keep_dim *= v.layout().dim_of(lab);
  const long env = v.dim() / keep_dim;
  ComplexMatrix rho(static_cast<int>(keep_dim));
  const cplx* x = p.amplitudes().data();
#pragma omp parallel for schedule(static)
  for (long r = 0; r < keep_dim; ++r)
    for (long c = 0; c < keep_dim; ++c) {
      cplx acc = 0.0;
      const cplx* xr = x + r * env;
      const cplx* xc = x + c * env;
      for (long e = 0; e < env; ++e) acc += xr[e] * std::conj(xc[e]);
      rho.at(static_cast<int>(r), static_cast<int>(c)) = acc;
    }
  std::vector<Register> regs;
  for (const auto& lab : keep) regs.push_back(v.layout().reg(v.layout().position_of(lab)));
  return QuantumState(RegisterLayout(regs), std::move(rho));
}

QuantumState reduce(const QuantumState& s, const std::vector<std::string>& keep) {
  std::vector<int> keep_idx;
  for (const auto& lab : keep) keep_idx.push_back(s.layout().position_of(lab));
  std::sort(keep_idx.begin(), keep_idx.end());
  ComplexMatrix rho = partial_trace(s.matrix(), s.layout().dims_int(), keep_idx);
  std::vector<Register> regs;
  for (int i : keep_idx) regs.push_back(s.layout().reg(i));
  QuantumState out(RegisterLayout(regs), std::move(rho));
  // Restore the caller's requested order.
  return permute_registers(out, keep);
}

cplx overlap(const PureVector& a, const PureVector& b) {
  PureVector bb = permute_registers(b, a.layout().labels());
  if (bb.dim() != a.dim()) throw DimensionError("overlap: dimensions differ");
  cplx acc = 0.0;
  for (long i = 0; i < a.dim(); ++i) acc += std::conj(a.amplitudes()[i]) * bb.amplitudes()[i];
  return acc;
}

UhlmannResult uhlmann_isometry(const PureVector& a, const PureVector& b,
                               const std::vector<std::string>& shared_labels) {
  std::vector<std::string> order_a = shared_labels, order_b = shared_labels;
  std::vector<std::string> rest_a, rest_b;
  for (const auto& r : a.layout().registers()) {
    bool shared = false;
    for (const auto& lab : shared_labels)
      if (lab == r.label) shared = true;
    if (!shared) rest_a.push_back(r.label);
  }
  for (const auto& r : b.layout().registers()) {
    bool shared = false;
    for (const auto& lab : shared_labels)
      if (lab == r.label) shared = true;
    if (!shared) rest_b.push_back(r.label);
  }
  order_a.insert(order_a.end(), rest_a.begin(), rest_a.end());
  order_b.insert(order_b.end(), rest_b.begin(), rest_b.end());
  PureVector pa = permute_registers(a, order_a);
  PureVector pb = permute_registers(b, order_b);
  long x_dim = 1;
  for (const auto& lab : shared_labels) x_dim *= a.layout().dim_of(lab);
  if (b.layout().total_dim() % x_dim != 0 || a.layout().total_dim() % x_dim != 0)
    throw DimensionError("uhlmann_isometry: shared registers do not factor");
  for (const auto& lab : shared_labels)
    if (b.layout().dim_of(lab) != a.layout().dim_of(lab))
      throw DimensionError("uhlmann_isometry: shared register dims differ");
  const long y_dim = a.layout().total_dim() / x_dim;
  const long z_dim = b.layout().total_dim() / x_dim;
  if (z_dim < y_dim) throw DimensionError("uhlmann_isometry: target space smaller than source");

  // Cross operator N[z,y] = sum_x conj(B[x,z]) A[x,y].
  std::vector<cplx> n(static_cast<size_t>(z_dim) * y_dim);
  mul_raw(pb.amplitudes().data(), pa.amplitudes().data(), n.data(), static_cast<int>(z_dim),
          static_cast<int>(x_dim), static_cast<int>(y_dim), /*adjoint_a=*/true);
  ThinSvd sv = svd_thin(n.data(), static_cast<int>(z_dim), static_cast<int>(y_dim));

  UhlmannResult res;
  res.rows = z_dim;
  res.cols = y_dim;
  res.v.assign(static_cast<size_t>(z_dim) * y_dim, cplx(0.0));
  // V = conj(U) W^T attains Tr(V^T N) = sum of singular values.
  for (long z = 0; z < z_dim; ++z)
    for (long y = 0; y < y_dim; ++y) {
      cplx acc = 0.0;
      for (long k = 0; k < y_dim; ++k)
        acc += std::conj(sv.u[static_cast<size_t>(z) * y_dim + k]) *
               sv.v.at(static_cast<int>(y), static_cast<int>(k));
      res.v[static_cast<size_t>(z) * y_dim + y] = acc;
    }
  for (double s : sv.s) res.overlap += s;
  return res;
}

PureVector tensor(const PureVector& a, const PureVector& b) {
  std::vector<Register> regs = a.layout().registers();
  for (const auto& r : b.layout().registers()) regs.push_back(r);
  RegisterLayout layout(regs);
  std::vector<cplx> amp(layout.total_dim());
  const long db = b.dim();
  for (long i = 0; i < a.dim(); ++i)
    for (long j = 0; j < db; ++j) amp[i * db + j] = a.amplitudes()[i] * b.amplitudes()[j];
  return PureVector(layout, std::move(amp));
}

QuantumState tensor_states(const QuantumState& a, const QuantumState& b) {
  std::vector<Register> regs = a.layout().registers();
  for (const auto& r : b.layout().registers()) regs.push_back(r);
  return QuantumState(RegisterLayout(regs), tensor(a.matrix(), b.matrix()));
}

}  // namespace qsr
