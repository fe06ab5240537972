#include "qsr/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "qsr/eig.hpp"

namespace qsr {

namespace {

std::string idx_label(const std::string& base, long i) { return base + std::to_string(i); }

void check_unit_norm(const PureVector& v, const char* where) {
  if (std::abs(v.norm() - 1.0) > 1e-9)
    throw ContractError(std::string("global state norm drifted at step: ") + where);
}

long digit_of(const RegisterLayout& l, long idx, int pos) {
  long stride = 1;
  for (int i = l.size() - 1; i > pos; --i) stride *= l.reg(i).dim;
  return (idx / stride) % l.reg(pos).dim;
}

// Right singular pairs of a rows x cols buffer through its Gram matrix:
// kept columns of v span the row space, g = m * v.
struct RowSpace {
  std::vector<cplx> v;  // cols x r
  std::vector<cplx> g;  // rows x r
  int r = 0;
};

RowSpace row_space(const cplx* m, int rows, int cols) {
  std::vector<cplx> h(static_cast<size_t>(cols) * cols);
  mul_raw(m, m, h.data(), cols, rows, cols, true);
  ComplexMatrix hm(cols);
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j < cols; ++j) hm.at(i, j) = h[static_cast<size_t>(i) * cols + j];
  EigenDecomposition e = eig_hermitian(hermitize(hm, 1e-8));
  const double lmax = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
  const double cut = 1e-12 * std::max(lmax, 1.0);
  RowSpace out;
  for (int k = cols - 1; k >= 0; --k)
    if (e.eigenvalues[k] > cut) ++out.r;
  out.v.assign(static_cast<size_t>(cols) * out.r, cplx(0.0));
  int col = 0;
  for (int k = cols - 1; k >= 0; --k) {
    if (e.eigenvalues[k] <= cut) continue;
    for (int i = 0; i < cols; ++i) out.v[static_cast<size_t>(i) * out.r + col] = e.eigenvectors.at(i, k);
    ++col;
  }
  out.g.assign(static_cast<size_t>(rows) * out.r, cplx(0.0));
  mul_raw(m, out.v.data(), out.g.data(), rows, cols, out.r, false);
  return out;
}

struct MatchedState {
  PureVector state;  // on R, B, C1..Cn, J, A, L1..Ln
  double fidelity = 1.0;
};

// Builds the state after Alice's matching isometry without ever forming that
// isometry: the pre-step state factors as M_phi (x) M_sigma^(x)n across the
// (R,B,C1..Cn) | (A,C,L1..Ln) cut, so the optimal alignment with the target
// superposition can be computed in the (row space of M_phi) (x) (row space of
// M_sigma)^(x)n basis, whose dimension stays small.
MatchedState matched_state(const PureVector& phi, const std::vector<cplx>& m_sigma, int d_c,
                           int d_l, long n, bool inject_exact, long cap) {
  const int d_r = static_cast<int>(phi.layout().dim_of("R"));
  const int d_a = static_cast<int>(phi.layout().dim_of("A"));
  const int d_b = static_cast<int>(phi.layout().dim_of("B"));
  const int d_rb = d_r * d_b;
  const int d_ac = d_a * d_c;

  // m_phi[rb, (a,c)] from the R,B,A,C ordering of the amplitudes.
  std::vector<cplx> m_phi(static_cast<size_t>(d_rb) * d_ac);
  {
    PureVector q = permute_registers(phi, {"R", "B", "A", "C"});
    for (long i = 0; i < q.dim(); ++i) m_phi[i] = q.amplitudes()[i];
  }

  long pow_c = 1, pow_l = 1;
  for (long i = 0; i < n; ++i) {
    pow_c *= d_c;
    pow_l *= d_l;
  }
  const long dim_x = static_cast<long>(d_rb) * pow_c;
  const long dim_z = n * d_a * pow_l;
  if (dim_x > cap / std::max(dim_z, 1L))
    throw DimensionError("global state dimension exceeds cap for n = " + std::to_string(n));

  std::vector<Register> regs;
  regs.push_back({"R", d_r});
  regs.push_back({"B", d_b});
  for (long i = 1; i <= n; ++i) regs.push_back({idx_label("C", i), d_c});
  regs.push_back({"J", n});
  regs.push_back({"A", d_a});
  for (long i = 1; i <= n; ++i) regs.push_back({idx_label("L", i), d_l});
  RegisterLayout layout(regs);

  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  auto phi_amp = [&](int rb, int a, int c) {
    return m_phi[static_cast<size_t>(rb) * d_ac + a * d_c + c];
  };

  MatchedState out{PureVector(layout, std::vector<cplx>(dim_x * dim_z, cplx(0.0))), 1.0};
  std::vector<cplx>& amp = out.state.amplitudes();

  if (inject_exact) {
    // Target superposition directly: (1/sqrt n) sum_j |j> phi_{RBAC_j} |0>_{L_j}
    // prod_{i!=j} |sigma>_{L_i C_i}.
#pragma omp parallel for schedule(static)
    for (long x = 0; x < dim_x; ++x) {
      const int rb = static_cast<int>(x / pow_c);
      long crest = x % pow_c;
      std::vector<int> cs(n);
      for (long i = n - 1; i >= 0; --i) {
        cs[i] = static_cast<int>(crest % d_c);
        crest /= d_c;
      }
      for (long z = 0; z < dim_z; ++z) {
        const long j = z / (d_a * pow_l);
        const int a = static_cast<int>((z / pow_l) % d_a);
        long lrest = z % pow_l;
        cplx val = inv_sqrt_n * phi_amp(rb, a, cs[j]);
        for (long i = n - 1; i >= 0 && val != cplx(0.0); --i) {
          const int li = static_cast<int>(lrest % d_l);
          lrest /= d_l;
          if (i == j) {
            if (li != 0) val = 0.0;
          } else {
            val *= m_sigma[static_cast<size_t>(cs[i]) * d_l + li];
          }
        }
        amp[x * dim_z + z] = val;
      }
    }
    return out;
  }

  RowSpace rp = row_space(m_phi.data(), d_rb, d_ac);
  RowSpace rs = row_space(m_sigma.data(), d_c, d_l);
  long r_total = rp.r;
  for (long i = 0; i < n; ++i) r_total *= rs.r;
  if (dim_z < r_total)
    throw DimensionError("matching step target space smaller than source rank");

  // d[a, f, m] = sum_{rb,c} conj(m_phi[rb,(a,c)]) g_phi[rb,f] g_sigma[c,m]
  std::vector<cplx> dten(static_cast<size_t>(d_a) * rp.r * rs.r, cplx(0.0));
  for (int a = 0; a < d_a; ++a)
    for (int f = 0; f < rp.r; ++f)
      for (int m = 0; m < rs.r; ++m) {
        cplx acc = 0.0;
        for (int rb = 0; rb < d_rb; ++rb)
          for (int c = 0; c < d_c; ++c)
            acc += std::conj(phi_amp(rb, a, c)) * rp.g[static_cast<size_t>(rb) * rp.r + f] *
                   rs.g[static_cast<size_t>(c) * rs.r + m];
        dten[(static_cast<size_t>(a) * rp.r + f) * rs.r + m] = acc;
      }
  // q[l, m] = sum_c conj(m_sigma[c,l]) g_sigma[c,m]
  std::vector<cplx> q(static_cast<size_t>(d_l) * rs.r, cplx(0.0));
  for (int l = 0; l < d_l; ++l)
    for (int m = 0; m < rs.r; ++m) {
      cplx acc = 0.0;
      for (int c = 0; c < d_c; ++c)
        acc += std::conj(m_sigma[static_cast<size_t>(c) * d_l + l]) *
               rs.g[static_cast<size_t>(c) * rs.r + m];
      q[static_cast<size_t>(l) * rs.r + m] = acc;
    }

  // Cross operator between the target superposition and the compressed
  // pre-step state; its SVD yields both the best achievable overlap and the
  // aligned output state.
  std::vector<cplx> nc(static_cast<size_t>(dim_z) * r_total, cplx(0.0));
  long pow_r = r_total / rp.r;  // rs.r^n
#pragma omp parallel for schedule(static)
  for (long z = 0; z < dim_z; ++z) {
    const long j = z / (d_a * pow_l);
    const int a = static_cast<int>((z / pow_l) % d_a);
    std::vector<int> ls(n);
    long lrest = z % pow_l;
    for (long i = n - 1; i >= 0; --i) {
      ls[i] = static_cast<int>(lrest % d_l);
      lrest /= d_l;
    }
    if (ls[j] != 0) continue;
    std::vector<int> ms(n, 0);
    for (long y = 0; y < r_total; ++y) {
      const int f = static_cast<int>(y / pow_r);
      long mrest = y % pow_r;
      for (long i = n - 1; i >= 0; --i) {
        ms[i] = static_cast<int>(mrest % rs.r);
        mrest /= rs.r;
      }
      cplx val = inv_sqrt_n * dten[(static_cast<size_t>(a) * rp.r + f) * rs.r + ms[j]];
      for (long i = 0; i < n && val != cplx(0.0); ++i) {
        if (i == j) continue;
        val *= q[static_cast<size_t>(ls[i]) * rs.r + ms[i]];
      }
      nc[static_cast<size_t>(z) * r_total + y] = val;
    }
  }

  ThinSvd sv = svd_thin(nc.data(), static_cast<int>(dim_z), static_cast<int>(r_total));
  double fsum = 0.0;
  for (double s : sv.s) fsum += s;
  out.fidelity = std::min(fsum, 1.0);

  // ac[x, y] = g_phi[rb,f] prod_i g_sigma[c_i, m_i]  (compressed pre-step state)
  std::vector<cplx> ac(static_cast<size_t>(dim_x) * r_total);
#pragma omp parallel for schedule(static)
  for (long x = 0; x < dim_x; ++x) {
    const int rb = static_cast<int>(x / pow_c);
    std::vector<int> cs(n);
    long crest = x % pow_c;
    for (long i = n - 1; i >= 0; --i) {
      cs[i] = static_cast<int>(crest % d_c);
      crest /= d_c;
    }
    for (long y = 0; y < r_total; ++y) {
      const int f = static_cast<int>(y / pow_r);
      long mrest = y % pow_r;
      cplx val = rp.g[static_cast<size_t>(rb) * rp.r + f];
      for (long i = n - 1; i >= 0 && val != cplx(0.0); --i) {
        const int mi = static_cast<int>(mrest % rs.r);
        mrest /= rs.r;
        val *= rs.g[static_cast<size_t>(cs[i]) * rs.r + mi];
      }
      ac[static_cast<size_t>(x) * r_total + y] = val;
    }
  }
  std::vector<cplx> acv(static_cast<size_t>(dim_x) * r_total);
  mul_raw(ac.data(), sv.v.data(), acv.data(), static_cast<int>(dim_x),
          static_cast<int>(r_total), static_cast<int>(r_total), false);
  ac.clear();
  ac.shrink_to_fit();
#pragma omp parallel for schedule(static)
  for (long x = 0; x < dim_x; ++x)
    for (long z = 0; z < dim_z; ++z) {
      cplx acc = 0.0;
      for (long k = 0; k < r_total; ++k)
        acc += acv[static_cast<size_t>(x) * r_total + k] *
               std::conj(sv.u[static_cast<size_t>(z) * r_total + k]);
      amp[x * dim_z + z] = acc;
    }
  return out;
}

}  // namespace

QuantumState convex_split_state(const QuantumState& rho_pq, const std::string& q_label,
                                const QuantumState& sigma_q, long n) {
  if (n < 1) throw ParameterError("convex_split_state: n must be positive");
  const long d_q = rho_pq.layout().dim_of(q_label);
  if (sigma_q.layout().total_dim() != d_q)
    throw DimensionError("convex_split_state: sigma dimension mismatch");
  // supp(rho_Q) must sit inside supp(sigma_Q).
  {
    QuantumState rq = reduce(rho_pq, {q_label});
    ComplexMatrix psig = support_projector(sigma_q.matrix());
    ComplexMatrix comp = sub(ComplexMatrix::identity(static_cast<int>(d_q)), psig);
    if (trace(mul(comp, rq.matrix())).real() > 1e-8)
      throw InputError("convex_split_state: rho_Q support leaves supp(sigma_Q)");
  }
  std::vector<std::string> p_labels;
  long d_p = 1;
  for (const auto& r : rho_pq.layout().registers())
    if (r.label != q_label) {
      p_labels.push_back(r.label);
      d_p *= r.dim;
    }
  long total = d_p;
  for (long i = 0; i < n; ++i) {
    if (total > dim_cap() / d_q)
      throw DimensionError("convex_split_state: dimension cap exceeded for n = " +
                           std::to_string(n));
    total *= d_q;
  }

  std::vector<std::string> canon = p_labels;
  for (long i = 1; i <= n; ++i) canon.push_back(idx_label("Q", i));

  ComplexMatrix acc(static_cast<int>(total));
  std::vector<std::string> base_order = p_labels;
  base_order.push_back(q_label);
  QuantumState rho_sorted = permute_registers(rho_pq, base_order);
  for (long j = 1; j <= n; ++j) {
    ComplexMatrix m = rho_sorted.matrix();
    std::vector<Register> regs;
    for (const auto& lab : p_labels)
      regs.push_back({lab, rho_pq.layout().dim_of(lab)});
    regs.push_back({idx_label("Q", j), d_q});
    for (long i = 1; i <= n; ++i) {
      if (i == j) continue;
      m = tensor(m, sigma_q.matrix());
      regs.push_back({idx_label("Q", i), d_q});
    }
    QuantumState term = permute_registers(QuantumState(RegisterLayout(regs), std::move(m)), canon);
    acc = add(acc, term.matrix());
  }
  acc = scale(acc, 1.0 / static_cast<double>(n));
  std::vector<Register> out_regs;
  for (const auto& lab : p_labels) out_regs.push_back({lab, rho_pq.layout().dim_of(lab)});
  for (long i = 1; i <= n; ++i) out_regs.push_back({idx_label("Q", i), d_q});
  return QuantumState(RegisterLayout(out_regs), std::move(acc));
}

std::pair<long, long> index_split(long j, long n, long b) {
  if (j < 1 || j > n) throw ParameterError("index_split: j out of range");
  if (b < 1 || b > n) throw ParameterError("index_split: b out of range");
  const long j1 = (j - 1) / b;
  long j2 = j % b;
  if (j2 == 0) j2 = b;
  return {j1, j2};
}

long block_count_formula(double eps2, double dh) {
  return std::max(1L, static_cast<long>(std::ceil(eps2 * eps2 * std::exp2(dh))));
}

PositionOperators build_position_operators(const ComplexMatrix& pi_bc, int d_b, int d_c,
                                           int blocks) {
  if (pi_bc.dim() != d_b * d_c)
    throw DimensionError("build_position_operators: test operator dim mismatch");
  {
    EigenDecomposition e = eig_hermitian(hermitize(pi_bc, 1e-8));
    if (e.eigenvalues.front() < -1e-9 || e.eigenvalues.back() > 1.0 + 1e-9)
      throw ContractError("build_position_operators: test operator outside [0, I]");
  }
  long pow_c = 1;
  for (int i = 0; i < blocks; ++i) pow_c *= d_c;
  const long dim = d_b * pow_c;
  if (dim > 4096) throw DimensionError("build_position_operators: block space too large");

  PositionOperators out;
  out.pi_single = pi_bc;
  out.d_b = d_b;
  out.d_c = d_c;
  out.blocks = blocks;
  out.pi_sum = ComplexMatrix(static_cast<int>(dim));
  for (int j = 0; j < blocks; ++j) {
    ComplexMatrix pj(static_cast<int>(dim));
    for (long row = 0; row < dim; ++row) {
      const int beta = static_cast<int>(row / pow_c);
      for (long col = 0; col < dim; ++col) {
        const int betap = static_cast<int>(col / pow_c);
        long rr = row % pow_c, cc = col % pow_c;
        int cj = 0, cjp = 0;
        bool diag = true;
        for (int i = blocks - 1; i >= 0; --i) {
          const int ci = static_cast<int>(rr % d_c), cip = static_cast<int>(cc % d_c);
          rr /= d_c;
          cc /= d_c;
          if (i == j) {
            cj = ci;
            cjp = cip;
          } else if (ci != cip) {
            diag = false;
            break;
          }
        }
        if (!diag) continue;
        pj.at(static_cast<int>(row), static_cast<int>(col)) =
            pi_bc.at(beta * d_c + cj, betap * d_c + cjp);
      }
    }
    out.pi_sum = add(out.pi_sum, pj);
    out.pi_list.push_back(std::move(pj));
  }
  out.pi_support = support_projector(out.pi_sum);
  return out;
}

DecoderIsometry decoder_isometry(const PositionOperators& ops) {
  const int dim = ops.pi_sum.dim();
  const int blocks = ops.blocks;
  ComplexMatrix pinv_h = matrix_function(ops.pi_sum, MatrixFunc::InvSqrtOnSupport);
  std::vector<ComplexMatrix> s_blocks;
  ComplexMatrix accum(dim);
  for (int j = 0; j < blocks; ++j) {
    ComplexMatrix mj = hermitize(mul(mul(pinv_h, ops.pi_list[j]), pinv_h), 1e-7);
    ComplexMatrix sj = matrix_function(mj, MatrixFunc::Sqrt);
    accum = add(accum, mul(dagger(sj), sj));
    s_blocks.push_back(std::move(sj));
  }
  ComplexMatrix fail = matrix_function(
      sub(ComplexMatrix::identity(dim), ops.pi_support), MatrixFunc::Sqrt);
  accum = add(accum, mul(dagger(fail), fail));
  const double witness = max_abs_diff(accum, ComplexMatrix::identity(dim));
  if (witness > 1e-8)
    throw ConvergenceError("decoder_isometry: V^dagger V deviates from I by " +
                           std::to_string(witness));

  DecoderIsometry out;
  out.cols = dim;
  out.rows = static_cast<long>(dim) * (blocks + 1);
  out.v.assign(static_cast<size_t>(out.rows) * out.cols, cplx(0.0));
  for (int m = 0; m < dim; ++m)
    for (int mp = 0; mp < dim; ++mp) {
      out.v[(static_cast<size_t>(m) * (blocks + 1) + 0) * dim + mp] = fail.at(m, mp);
      for (int j = 0; j < blocks; ++j)
        out.v[(static_cast<size_t>(m) * (blocks + 1) + j + 1) * dim + mp] =
            s_blocks[j].at(m, mp);
    }
  return out;
}

PureVector block_superposition(const PureVector& phi, const QuantumState& sigma_c, long b) {
  PureVector p = permute_registers(phi, {"R", "A", "B", "C"});
  const int d_r = static_cast<int>(phi.layout().dim_of("R"));
  const int d_a = static_cast<int>(phi.layout().dim_of("A"));
  const int d_b = static_cast<int>(phi.layout().dim_of("B"));
  const int d_c = static_cast<int>(phi.layout().dim_of("C"));
  PureVector sig = purify(sigma_c, "_L");
  const int d_l = static_cast<int>(sig.layout().dim_of("_L"));

  std::vector<Register> regs{{"R", d_r}, {"B", d_b}, {"A", d_a}, {"J2", b}};
  for (long i = 1; i <= b; ++i) regs.push_back({idx_label("L", i), d_l});
  for (long i = 1; i <= b; ++i) regs.push_back({idx_label("C", i), d_c});
  RegisterLayout layout(regs);

  long pow_l = 1, pow_c = 1;
  for (long i = 0; i < b; ++i) {
    pow_l *= d_l;
    pow_c *= d_c;
  }
  auto phi_amp = [&](int r, int a, int bb, int c) {
    return p.amplitudes()[((static_cast<long>(r) * d_a + a) * d_b + bb) * d_c + c];
  };
  auto sigma_amp = [&](int c, int l) { return sig.amplitudes()[static_cast<long>(c) * d_l + l]; };

  std::vector<cplx> amp(layout.total_dim(), cplx(0.0));
  const double inv_sqrt_b = 1.0 / std::sqrt(static_cast<double>(b));
  const long total = layout.total_dim();
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    std::vector<int> cs(b), ls(b);
    for (long i = b - 1; i >= 0; --i) {
      cs[i] = static_cast<int>(rest % d_c);
      rest /= d_c;
    }
    for (long i = b - 1; i >= 0; --i) {
      ls[i] = static_cast<int>(rest % d_l);
      rest /= d_l;
    }
    const long j2 = rest % b;
    rest /= b;
    const int a = static_cast<int>(rest % d_a);
    rest /= d_a;
    const int bb = static_cast<int>(rest % d_b);
    rest /= d_b;
    const int r = static_cast<int>(rest);
    if (ls[j2] != 0) continue;
    cplx val = inv_sqrt_b * phi_amp(r, a, bb, cs[j2]);
    for (long i = 0; i < b && val != cplx(0.0); ++i) {
      if (i == j2) continue;
      val *= sigma_amp(cs[i], ls[i]);
    }
    amp[idx] = val;
  }
  return PureVector(layout, std::move(amp));
}

ProtocolTranscript run_protocol(const PureVector& phi, const ProtocolConfig& config) {
  for (const char* lab : {"R", "A", "B", "C"})
    if (!phi.layout().has(lab)) throw InputError(std::string("input state lacks register ") + lab);
  if (phi.layout().size() != 4) throw InputError("input state must have exactly R, A, B, C");
  if (config.eps1 <= 0.0 || config.eps1 >= 1.0 || config.eps2 <= 0.0 || config.eps2 >= 1.0)
    throw ParameterError("eps1 and eps2 must lie in (0,1)");
  const int d_c = static_cast<int>(phi.layout().dim_of("C"));
  const int d_b = static_cast<int>(phi.layout().dim_of("B"));
  if (config.sigma_c.layout().total_dim() != d_c)
    throw DimensionError("sigma_C dimension does not match register C");
  if (std::abs(phi.norm() - 1.0) > 1e-9) throw InputError("input state is not normalized");

  ProtocolTranscript tr;
  const ComplexMatrix& sig = config.sigma_c.matrix();

  // Entropic quantities driving the cost accounting.
  ComplexMatrix rho_rbc = reduce(phi, {"R", "B", "C"}).matrix();
  ComplexMatrix rho_rb = reduce(phi, {"R", "B"}).matrix();
  ComplexMatrix rho_bc = reduce(phi, {"B", "C"}).matrix();
  ComplexMatrix rho_b = reduce(phi, {"B"}).matrix();
  EntropyResult kres =
      config.smoothing_budget > 0
          ? smooth_dmax(rho_rbc, tensor(rho_rb, sig), config.eps1, config.smoothing_budget)
          : dmax(rho_rbc, tensor(rho_rb, sig));
  tr.k_infinite = kres.infinite;
  tr.k = kres.infinite ? 0.0 : kres.value;
  EntropyResult dh = dh_eps(rho_bc, tensor(rho_b, sig), config.eps2 * config.eps2);
  if (dh.infinite || !dh.certificate)
    throw InputError("run_protocol: degenerate test operator for the decoder");
  tr.dh_value = dh.value;

  long n = config.n, b = config.b;
  if (config.derive_parameters) {
    if (tr.k_infinite)
      throw InputError("run_protocol: cannot derive n from an infinite max-divergence");
    n = std::max(1L, static_cast<long>(std::ceil(std::exp2(tr.k) / (config.eps1 * config.eps1))));
    b = std::min(n, block_count_formula(config.eps2, tr.dh_value));
  }
  if (n < 1 || b < 1 || b > n) throw ParameterError("run_protocol: need 1 <= b <= n");
  tr.n = n;
  tr.b = b;
  tr.qubits_sent = 0.5 * std::log2(static_cast<double>(n / b));
  tr.guaranteed_P = 3.0 * config.eps1 + 6.0 * config.eps2;
  tr.guarantee_valid = config.derive_parameters && !tr.k_infinite && tr.guaranteed_P <= 1.0;

  const long cap = config.dim_cap > 0 ? config.dim_cap : dim_cap();

  // Steps 1-2: shared entanglement plus Alice's matching isometry.
  PureVector sig_pur = purify(config.sigma_c, "_L");
  const int d_l = static_cast<int>(sig_pur.layout().dim_of("_L"));
  std::vector<cplx> m_sigma(sig_pur.amplitudes());
  MatchedState ms =
      matched_state(phi, m_sigma, d_c, d_l, n, config.inject_exact_mu, cap);
  tr.convex_split_fidelity = ms.fidelity;
  PureVector g = std::move(ms.state);
  check_unit_norm(g, "matching");

  // Step 3: split the index register.
  const long d_j1 = (n - 1) / b + 1;
  {
    std::vector<cplx> w(static_cast<size_t>(d_j1 * b) * n, cplx(0.0));
    for (long j = 1; j <= n; ++j) {
      auto [j1, j2] = index_split(j, n, b);
      w[static_cast<size_t>(j1 * b + (j2 - 1)) * n + (j - 1)] = 1.0;
    }
    g = apply_on_registers(g, {"J"}, w.data(), d_j1 * b, n,
                           {{"J1", d_j1}, {"J2", b}});
  }
  check_unit_norm(g, "index split");

  // Steps 4-5: the J1 copy travels to Bob (accounted in qubits_sent);
  // both sides rotate block j1 into the front slots.
  g = controlled_swap(g, "J1", [&](long j1) {
    SwapPlan plan;
    for (long i = 1; i <= b; ++i) {
      const long src = b * j1 + i;
      if (src > n || src == i) continue;
      plan.push_back({idx_label("C", src), idx_label("C", i)});
      plan.push_back({idx_label("L", src), idx_label("L", i)});
    }
    return plan;
  });
  check_unit_norm(g, "block rotation");

  // Step 6: coherent position decoding on B, C1..Cb.
  PositionOperators ops =
      build_position_operators(*dh.certificate, d_b, d_c, static_cast<int>(b));
  DecoderIsometry dec = decoder_isometry(ops);
  {
    std::vector<std::string> labels{"B"};
    std::vector<Register> out_regs{{"B", d_b}};
    for (long i = 1; i <= b; ++i) {
      labels.push_back(idx_label("C", i));
      out_regs.push_back({idx_label("C", i), d_c});
    }
    out_regs.push_back({"J2p", b + 1});
    g = apply_on_registers(g, labels, dec.v.data(), dec.rows, dec.cols, out_regs);
  }
  check_unit_norm(g, "decoding");

  // Success statistics before the corrective swap: the decoded index should
  // match the actual block position.
  {
    const RegisterLayout& l = g.layout();
    const int p_j2 = l.position_of("J2");
    const int p_j2p = l.position_of("J2p");
    double succ = 0.0, fail = 0.0;
    for (long idx = 0; idx < l.total_dim(); ++idx) {
      const double w = std::norm(g.amplitudes()[idx]);
      if (w == 0.0) continue;
      const long v2 = digit_of(l, idx, p_j2), v2p = digit_of(l, idx, p_j2p);
      if (v2p == 0)
        fail += w;
      else if (v2p == v2 + 1)
        succ += w;
    }
    tr.decode_success_prob = succ;
    tr.fail_mass = fail;
  }

  g = controlled_swap(g, "J2p", [&](long v) {
    SwapPlan plan;
    if (v >= 2) plan.push_back({idx_label("C", v), "C1"});
    return plan;
  });
  check_unit_norm(g, "corrective swap");

  // Step 7: compare the RABC1 marginal against the input.
  QuantumState final_state = reduce(g, {"R", "A", "B", "C1"});
  PureVector target = permute_registers(phi, {"R", "A", "B", "C"});
  tr.measured_P =
      fidelity_and_distance(final_state.matrix(), target.density()).purified_distance;
  if (config.keep_final_state) tr.final_state = std::move(g);
  return tr;
}

ProtocolTranscript run_protocol_reversed(const PureVector& phi, const ProtocolConfig& config) {
  // Exchange the roles of A and B; the reversed protocol's cost is governed by
  // the A-side quantities, which the relabelled forward run computes.
  std::vector<Register> regs;
  for (const auto& r : phi.layout().registers()) {
    if (r.label == "A")
      regs.push_back({"B", r.dim});
    else if (r.label == "B")
      regs.push_back({"A", r.dim});
    else
      regs.push_back(r);
  }
  PureVector swapped(RegisterLayout(regs), phi.amplitudes());
  return run_protocol(swapped, config);
}

}  // namespace qsr
