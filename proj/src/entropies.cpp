#include "qsr/entropies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsr/eig.hpp"

namespace qsr {

namespace {

constexpr double kSupportTol = 1e-8;

double support_leak(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  ComplexMatrix p = support_projector(sigma);
  ComplexMatrix comp = sub(ComplexMatrix::identity(p.dim()), p);
  return trace(mul(comp, rho)).real();
}

bool cholesky_pd(const ComplexMatrix& m) {
  const int n = m.dim();
  std::vector<cplx> l(static_cast<size_t>(n) * n, cplx(0.0));
  for (int j = 0; j < n; ++j) {
    cplx diag = m.at(j, j);
    for (int k = 0; k < j; ++k) diag -= l[static_cast<size_t>(j) * n + k] * std::conj(l[static_cast<size_t>(j) * n + k]);
    const double d = diag.real();
    if (d <= 0.0) return false;
    const double lj = std::sqrt(d);
    l[static_cast<size_t>(j) * n + j] = lj;
    for (int i = j + 1; i < n; ++i) {
      cplx s = m.at(i, j);
      for (int k = 0; k < j; ++k)
        s -= l[static_cast<size_t>(i) * n + k] * std::conj(l[static_cast<size_t>(j) * n + k]);
      l[static_cast<size_t>(i) * n + j] = s / lj;
    }
  }
  return true;
}

std::vector<ComplexMatrix> hermitian_basis(int r) {
  std::vector<ComplexMatrix> basis;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < r; ++i) {
    ComplexMatrix e(r);
    e.at(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      ComplexMatrix e(r);
      e.at(i, j) = inv_sqrt2;
      e.at(j, i) = inv_sqrt2;
      basis.push_back(std::move(e));
      ComplexMatrix f(r);
      f.at(i, j) = cplx(0.0, inv_sqrt2);
      f.at(j, i) = cplx(0.0, -inv_sqrt2);
      basis.push_back(std::move(f));
    }
  return basis;
}

ComplexMatrix i_tensor(int d_a, const ComplexMatrix& x) {
  return tensor(ComplexMatrix::identity(d_a), x);
}

struct CoreSdp {
  ComplexMatrix x;  // optimal X (restricted basis)
  double trx = 0.0;
  SolverReport report;
};

// minimize Tr X subject to I_a (x) X >= m, via a log-det barrier Newton method.
// m must be Hermitian PSD of dim d_a * d_b with its B-marginal full rank.
CoreSdp min_trace_sdp(const ComplexMatrix& m, int d_a, int d_b) {
  const int ds = d_a * d_b;
  if (m.dim() != ds) throw DimensionError("min_trace_sdp: dim mismatch");
  EigenDecomposition em = eig_hermitian(m);
  const double lmax = em.eigenvalues.empty() ? 0.0 : em.eigenvalues.back();

  ComplexMatrix x = ComplexMatrix::identity(d_b);
  x = scale(x, lmax + 1.0);
  const auto basis = hermitian_basis(d_b);
  const int nb = static_cast<int>(basis.size());

  auto s_of = [&](const ComplexMatrix& xx) { return sub(i_tensor(d_a, xx), m); };
  auto obj = [&](double t, const ComplexMatrix& xx) {
    EigenDecomposition es = eig_hermitian(s_of(xx));
    double logdet = 0.0;
    for (double l : es.eigenvalues) {
      if (l <= 0.0) return 1e300;
      logdet += std::log(l);
    }
    return t * trace(xx).real() - logdet;
  };

  SolverReport rep;
  double t = 1.0;
  const int kIterCap = 500;
  const double kGapTol = 1e-10;
  while (true) {
    // Newton iterations at this barrier parameter.
    for (int inner = 0; inner < 50; ++inner) {
      if (rep.iterations >= kIterCap)
        throw ConvergenceError("min_trace_sdp: iteration cap reached");
      ++rep.iterations;
      ComplexMatrix s = s_of(x);
      ComplexMatrix sinv = inverse_hpd(s);
      std::vector<ComplexMatrix> tk;
      tk.reserve(nb);
      for (int k = 0; k < nb; ++k) tk.push_back(mul(sinv, i_tensor(d_a, basis[k])));
      std::vector<double> g(nb), h(static_cast<size_t>(nb) * nb);
      for (int k = 0; k < nb; ++k) g[k] = t * trace(basis[k]).real() - trace(tk[k]).real();
      for (int k = 0; k < nb; ++k)
        for (int l = k; l < nb; ++l) {
          const double v = trace(mul(tk[k], tk[l])).real();
          h[static_cast<size_t>(k) * nb + l] = v;
          h[static_cast<size_t>(l) * nb + k] = v;
        }
      std::vector<double> rhs(nb);
      for (int k = 0; k < nb; ++k) rhs[k] = -g[k];
      std::vector<double> step = solve_real(h, rhs, nb);
      double decrement2 = 0.0;
      for (int k = 0; k < nb; ++k) decrement2 += -g[k] * step[k];
      if (decrement2 < 1e-18) break;
      const double f0 = obj(t, x);
      double alpha = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt) {
        ComplexMatrix xn = x;
        for (int k = 0; k < nb; ++k) {
          ComplexMatrix delta = scale(basis[k], alpha * step[k]);
          xn = add(xn, delta);
        }
        if (cholesky_pd(s_of(xn)) && obj(t, xn) < f0 - 1e-15) {
          x = std::move(xn);
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
      if (decrement2 * 0.5 < 1e-12) break;
    }
    const double gap = static_cast<double>(ds) / t;
    if (gap <= kGapTol * std::max(trace(x).real(), 1e-6)) {
      rep.gap = gap / std::max(trace(x).real(), 1e-300);
      break;
    }
    t *= 10.0;
  }

  CoreSdp out;
  out.trx = trace(x).real();
  out.x = std::move(x);
  out.report = rep;
  return out;
}

// Restrict a bipartite operator to the support of its B-marginal.
// Returns the d_b x r support basis W (columns) and the compressed operator.
struct BRestriction {
  std::vector<cplx> w;  // d_b x r
  int r = 0;
  ComplexMatrix compressed;
};

BRestriction restrict_b_support(const ComplexMatrix& m, int d_a, int d_b) {
  ComplexMatrix mb = partial_trace(m, {d_a, d_b}, {1});
  EigenDecomposition eb = eig_hermitian(mb);
  const double lmax = eb.eigenvalues.empty() ? 0.0 : eb.eigenvalues.back();
  const double cut = 1e-10 * lmax;
  std::vector<int> kept;
  for (int i = 0; i < d_b; ++i)
    if (eb.eigenvalues[i] > cut) kept.push_back(i);
  BRestriction out;
  out.r = static_cast<int>(kept.size());
  out.w.assign(static_cast<size_t>(d_b) * out.r, cplx(0.0));
  for (int i = 0; i < d_b; ++i)
    for (int k = 0; k < out.r; ++k)
      out.w[static_cast<size_t>(i) * out.r + k] = eb.eigenvectors.at(i, kept[k]);
  // Build I_a (x) W and conjugate: compressed = (I (x) W)^dagger m (I (x) W).
  const int big_in = d_a * d_b, big_out = d_a * out.r;
  std::vector<cplx> iw(static_cast<size_t>(big_in) * big_out, cplx(0.0));
  for (int a = 0; a < d_a; ++a)
    for (int i = 0; i < d_b; ++i)
      for (int k = 0; k < out.r; ++k)
        iw[static_cast<size_t>(a * d_b + i) * big_out + a * out.r + k] =
            out.w[static_cast<size_t>(i) * out.r + k];
  std::vector<cplx> tmp(static_cast<size_t>(big_in) * big_out);
  mul_raw(m.data(), iw.data(), tmp.data(), big_in, big_in, big_out, false);
  ComplexMatrix comp(big_out);
  mul_raw(iw.data(), tmp.data(), comp.data(), big_out, big_in, big_out, true);
  out.compressed = hermitize(comp, 1e-8);
  return out;
}

ComplexMatrix expand_b(const BRestriction& br, const ComplexMatrix& x, int d_b) {
  // W X W^dagger
  std::vector<cplx> wx(static_cast<size_t>(d_b) * br.r);
  mul_raw(br.w.data(), x.data(), wx.data(), d_b, br.r, br.r, false);
  ComplexMatrix out(d_b);
  for (int i = 0; i < d_b; ++i)
    for (int j = 0; j < d_b; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < br.r; ++k)
        acc += wx[static_cast<size_t>(i) * br.r + k] *
               std::conj(br.w[static_cast<size_t>(j) * br.r + k]);
      out.at(i, j) = acc;
    }
  return out;
}

// Reorder the state so the `a` registers come first; returns (rho, d_a, d_b).
struct Bipartition {
  ComplexMatrix rho;
  int d_a = 1, d_b = 1;
};

Bipartition bipartition(const QuantumState& s, const std::vector<std::string>& a) {
  std::vector<std::string> order = a;
  for (const auto& r : s.layout().registers()) {
    bool in_a = false;
    for (const auto& lab : a)
      if (lab == r.label) in_a = true;
    if (!in_a) order.push_back(r.label);
  }
  QuantumState p = permute_registers(s, order);
  Bipartition out;
  out.rho = p.matrix();
  for (const auto& lab : a) out.d_a *= static_cast<int>(s.layout().dim_of(lab));
  out.d_b = static_cast<int>(s.layout().total_dim()) / out.d_a;
  return out;
}

double lambda_max(const ComplexMatrix& m) {
  EigenDecomposition e = eig_hermitian(m);
  return e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
}

}  // namespace

FidelityResult fidelity_and_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dims differ");
  ComplexMatrix sr = matrix_function(rho, MatrixFunc::Sqrt);
  ComplexMatrix ss = matrix_function(sigma, MatrixFunc::Sqrt);
  double f = trace_norm(mul(sr, ss));
  f = std::clamp(f, 0.0, 1.0);
  FidelityResult out;
  out.fidelity = f;
  out.purified_distance = std::sqrt(std::max(0.0, 1.0 - f * f));
  return out;
}

double von_neumann(const ComplexMatrix& rho) {
  EigenDecomposition e = eig_hermitian(rho);
  const double lmax = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
  const double cut = 1e-14 * std::max(1.0, lmax);
  double s = 0.0;
  for (double l : e.eigenvalues)
    if (l > cut) s -= l * std::log2(l);
  return s;
}

EntropyResult relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative_entropy: dims differ");
  EntropyResult out;
  if (support_leak(rho, sigma) > kSupportTol) {
    out.infinite = true;
    return out;
  }
  ComplexMatrix lr = matrix_function(rho, MatrixFunc::Log2OnSupport);
  ComplexMatrix ls = matrix_function(sigma, MatrixFunc::Log2OnSupport);
  out.value = trace(mul(rho, sub(lr, ls))).real();
  return out;
}

double mutual_information(const QuantumState& s, const std::vector<std::string>& a,
                          const std::vector<std::string>& b) {
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const double sa = von_neumann(reduce(s, a).matrix());
  const double sb = von_neumann(reduce(s, b).matrix());
  const double sab = von_neumann(reduce(s, ab).matrix());
  return sa + sb - sab;
}

double cond_mutual_information(const QuantumState& s, const std::vector<std::string>& a,
                               const std::vector<std::string>& b,
                               const std::vector<std::string>& c) {
  std::vector<std::string> ac = a, bc = b, abc = a;
  ac.insert(ac.end(), c.begin(), c.end());
  bc.insert(bc.end(), c.begin(), c.end());
  abc.insert(abc.end(), b.begin(), b.end());
  abc.insert(abc.end(), c.begin(), c.end());
  const double v = von_neumann(reduce(s, ac).matrix()) + von_neumann(reduce(s, bc).matrix()) -
                   von_neumann(reduce(s, c).matrix()) - von_neumann(reduce(s, abc).matrix());
  if (v < -1e-9) throw ContractError("conditional mutual information below -1e-9");
  return v;
}

EntropyResult dmax(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("dmax: dims differ");
  EntropyResult out;
  if (support_leak(rho, sigma) > kSupportTol) {
    out.infinite = true;
    return out;
  }
  ComplexMatrix sinv = matrix_function(sigma, MatrixFunc::InvSqrtOnSupport);
  ComplexMatrix m = hermitize(mul(mul(sinv, rho), sinv), 1e-8);
  EigenDecomposition e = eig_hermitian(m);
  const int top = m.dim() - 1;
  out.value = std::log2(std::max(e.eigenvalues[top], 1e-300));
  // Witness M = sigma^{-1/2} |v><v| sigma^{-1/2} for the top eigenvector v:
  // Tr(M rho) = lambda_max and Tr(M sigma) = 1, so M attains the ratio.
  std::vector<cplx> w(m.dim(), 0.0);
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) w[r] += sinv.at(r, c) * e.eigenvectors.at(c, top);
  ComplexMatrix wit(m.dim());
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) wit.at(r, c) = w[r] * std::conj(w[c]);
  out.certificate = std::move(wit);
  return out;
}

EntropyResult dh_eps(const ComplexMatrix& rho, const ComplexMatrix& sigma, double eps) {
  if (rho.dim() != sigma.dim()) throw DimensionError("dh_eps: dims differ");
  if (eps < 0.0 || eps >= 1.0) throw ParameterError("dh_eps: eps must lie in [0,1)");
  EntropyResult out;
  const int d = rho.dim();

  if (eps == 0.0) {
    ComplexMatrix pi = support_projector(rho);
    const double ts = trace(mul(pi, sigma)).real();
    if (ts <= 1e-300) {
      out.infinite = true;
      return out;
    }
    out.value = -std::log2(ts);
    out.certificate = std::move(pi);
    return out;
  }

  const double target = 1.0 - eps;
  // Mass of rho on the strictly positive part of (rho - t sigma).
  auto positive_mass = [&](double t) {
    ComplexMatrix delta = sub(rho, scale(sigma, t));
    EigenDecomposition e = eig_hermitian(delta);
    const double band = 1e-11 * std::max(1.0, max_abs(delta));
    double mass = 0.0;
    for (int k = 0; k < d; ++k) {
      if (e.eigenvalues[k] <= band) continue;
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          mass += (std::conj(e.eigenvectors.at(r, k)) * rho.at(r, c) * e.eigenvectors.at(c, k)).real();
    }
    return mass;
  };

  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (positive_mass(hi) >= target) {
    hi *= 4.0;
    if (++guard > 40) {
      // rho keeps mass >= 1-eps outside supp(sigma): the test costs nothing.
      out.infinite = true;
      return out;
    }
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (positive_mass(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  const double t = 0.5 * (lo + hi);

  // Assemble Pi = P_+ + x Z at the critical threshold; the zero band must be
  // wide enough to absorb the residual search width.
  ComplexMatrix delta = sub(rho, scale(sigma, t));
  EigenDecomposition e = eig_hermitian(delta);
  const double band = 1e-7 * std::max(1.0, max_abs(delta));
  ComplexMatrix p_pos(d), p_zero(d);
  for (int k = 0; k < d; ++k) {
    ComplexMatrix* dst = nullptr;
    if (e.eigenvalues[k] > band)
      dst = &p_pos;
    else if (e.eigenvalues[k] > -band)
      dst = &p_zero;
    else
      continue;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        dst->at(r, c) += e.eigenvectors.at(r, k) * std::conj(e.eigenvectors.at(c, k));
  }
  const double a = trace(mul(p_pos, rho)).real();
  const double z = trace(mul(p_zero, rho)).real();
  double x = 0.0;
  if (z > 1e-300) x = std::clamp((target - a) / z, 0.0, 1.0);
  if (std::abs(a + x * z - target) > 1e-8)
    throw ConvergenceError("dh_eps: threshold search failed to hit the mass target");
  ComplexMatrix pi = add(p_pos, scale(p_zero, x));
  const double ts = trace(mul(pi, sigma)).real();
  if (ts <= 1e-300) {
    out.infinite = true;
    return out;
  }
  out.value = -std::log2(ts);
  out.certificate = std::move(pi);
  return out;
}

EntropyResult d_half(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  EntropyResult out;
  const double f = fidelity_and_distance(rho, sigma).fidelity;
  if (f < 1e-12) {
    out.infinite = true;
    return out;
  }
  out.value = -2.0 * std::log2(f);
  return out;
}

EntropyResult hmin_cond(const QuantumState& s, const std::vector<std::string>& a) {
  Bipartition bp = bipartition(s, a);
  BRestriction br = restrict_b_support(bp.rho, bp.d_a, bp.d_b);
  CoreSdp core = min_trace_sdp(br.compressed, bp.d_a, br.r);
  EntropyResult out;
  out.value = -std::log2(core.trx);
  out.report = core.report;
  out.certificate = scale(expand_b(br, core.x, bp.d_b), 1.0 / core.trx);
  return out;
}

EntropyResult hmax_cond(const QuantumState& s, const std::vector<std::string>& a) {
  // Pick an ancilla label absent from the layout.
  std::string anc = "_purifier";
  while (s.layout().has(anc)) anc += "_";
  PureVector psi = purify(s, anc);
  std::vector<std::string> keep = a;
  keep.push_back(anc);
  QuantumState rho_ac = reduce(psi, keep);
  EntropyResult inner = hmin_cond(rho_ac, a);
  EntropyResult out;
  out.value = -inner.value;
  out.report = inner.report;
  out.certificate = psi.density();
  return out;
}

EntropyResult imax(const QuantumState& s, const std::vector<std::string>& a) {
  Bipartition bp = bipartition(s, a);
  ComplexMatrix rho_a = partial_trace(bp.rho, {bp.d_a, bp.d_b}, {0});
  ComplexMatrix ra_inv = matrix_function(rho_a, MatrixFunc::InvSqrtOnSupport);
  ComplexMatrix conj_op = tensor(ra_inv, ComplexMatrix::identity(bp.d_b));
  ComplexMatrix tilde = hermitize(mul(mul(conj_op, bp.rho), conj_op), 1e-8);
  BRestriction br = restrict_b_support(tilde, bp.d_a, bp.d_b);
  CoreSdp core = min_trace_sdp(br.compressed, bp.d_a, br.r);
  EntropyResult out;
  out.value = std::log2(core.trx);
  out.report = core.report;
  out.certificate = scale(expand_b(br, core.x, bp.d_b), 1.0 / core.trx);
  return out;
}

EntropyResult smooth_dmax(const ComplexMatrix& rho, const ComplexMatrix& sigma, double eps,
                          int ansatz_budget) {
  if (eps < 0.0 || eps >= 1.0) throw ParameterError("smooth_dmax: eps must lie in [0,1)");
  EntropyResult best = dmax(rho, sigma);
  best.certificate = rho;
  best.report.gap = 0.0;
  if (eps == 0.0 || ansatz_budget <= 0) return best;

  auto p_dist = [&](const ComplexMatrix& rp) {
    return fidelity_and_distance(rp, rho).purified_distance;
  };
  auto consider = [&](const ComplexMatrix& tau) {
    // Largest mixing weight keeping the candidate inside the eps-ball.
    double lo = 0.0, hi = 1.0;
    if (p_dist(add(scale(rho, 0.0), tau)) > eps) {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        ComplexMatrix cand = add(scale(rho, 1.0 - mid), scale(tau, mid));
        if (p_dist(cand) <= eps)
          lo = mid;
        else
          hi = mid;
      }
      hi = lo;
    }
    ComplexMatrix cand = add(scale(rho, 1.0 - hi), scale(tau, hi));
    const double pd = p_dist(cand);
    if (pd > eps + 1e-12) return;
    EntropyResult r = dmax(cand, sigma);
    if (r.infinite) return;
    if (best.infinite || r.value < best.value) {
      best.value = r.value;
      best.infinite = false;
      best.certificate = cand;
      best.report.gap = pd;
    }
  };

  consider(sigma);

  // Iteratively clip the direction attaining the max ratio.
  ComplexMatrix work = rho;
  for (int step = 0; step < ansatz_budget; ++step) {
    ComplexMatrix sinv = matrix_function(sigma, MatrixFunc::InvSqrtOnSupport);
    ComplexMatrix m = hermitize(mul(mul(sinv, work), sinv), 1e-6);
    EigenDecomposition e = eig_hermitian(m);
    const int top = m.dim() - 1;
    // Direction in state space: sigma^{-1/2} applied to the top eigenvector.
    std::vector<cplx> w(m.dim());
    double nrm = 0.0;
    for (int r = 0; r < m.dim(); ++r) {
      cplx acc = 0.0;
      for (int c = 0; c < m.dim(); ++c) acc += sinv.at(r, c) * e.eigenvectors.at(c, top);
      w[r] = acc;
      nrm += std::norm(acc);
    }
    nrm = std::sqrt(nrm);
    if (nrm < 1e-300) break;
    for (auto& v : w) v /= nrm;
    ComplexMatrix proj = ComplexMatrix::identity(m.dim());
    for (int r = 0; r < m.dim(); ++r)
      for (int c = 0; c < m.dim(); ++c) proj.at(r, c) -= w[r] * std::conj(w[c]);
    ComplexMatrix clipped = mul(mul(proj, work), proj);
    const double tr = trace(clipped).real();
    if (tr < 1e-12) break;
    clipped = scale(hermitize(clipped, 1e-8), 1.0 / tr);
    consider(clipped);
    work = clipped;
  }
  return best;
}

SpreadReport entanglement_spread(const ComplexMatrix& psi) {
  EigenDecomposition e = eig_hermitian(psi);
  const double lmax = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
  const double cut = 1e-10 * lmax;
  int rank = 0;
  for (double l : e.eigenvalues)
    if (l > cut) ++rank;
  SpreadReport out;
  out.h0 = std::log2(std::max(rank, 1));
  out.h_inf = -std::log2(std::max(lmax, 1e-300));
  out.spread = out.h0 - out.h_inf;
  if (out.spread < 0.0 && out.spread > -1e-12) out.spread = 0.0;
  return out;
}

SpreadReport spread_ks(const PureVector& phi, const std::string& r_label,
                       const std::string& c_label) {
  std::vector<std::string> rest;
  for (const auto& reg : phi.layout().registers())
    if (reg.label != r_label && reg.label != c_label) rest.push_back(reg.label);
  SpreadReport out = entanglement_spread(reduce(phi, rest).matrix());
  ComplexMatrix rho_rc = reduce(phi, {r_label, c_label}).matrix();
  ComplexMatrix rho_r = reduce(phi, {r_label}).matrix();
  ComplexMatrix rho_c = reduce(phi, {c_label}).matrix();
  EntropyResult k1 = dmax(rho_rc, tensor(rho_r, rho_c));
  out.k1 = k1.infinite ? std::numeric_limits<double>::infinity() : k1.value;
  out.k2 = -std::log2(std::max(lambda_max(rho_c), 1e-300));
  out.k3 = -std::log2(std::max(lambda_max(rho_r), 1e-300));
  out.k4 = -std::log2(std::max(lambda_max(rho_rc), 1e-300));
  out.has_ks = true;
  return out;
}

}  // namespace qsr
