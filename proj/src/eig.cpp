#include "qsr/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsr {

namespace {

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form (d, e), accumulating the unitary change of basis in q: on return
// a_original = q T q^dagger with T tridiagonal. Deterministic.
void tridiagonalize(ComplexMatrix& a, ComplexMatrix& q, std::vector<double>& d,
                    std::vector<double>& e) {
  const int n = a.dim();
  d.assign(n, 0.0);
  e.assign(n > 0 ? n - 1 : 0, 0.0);
  std::vector<cplx> v(n), p(n), w(n);
  for (int k = 0; k + 2 < n; ++k) {
    double xnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(a.at(i, k));
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm <= 1e-290) continue;
    const cplx x0 = a.at(k + 1, k);
    const cplx alpha = (std::abs(x0) > 0.0) ? -(x0 / std::abs(x0)) * xnorm : cplx(-xnorm, 0.0);
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) {
      v[i] = a.at(i, k);
      if (i == k + 1) v[i] -= alpha;
      vnorm2 += std::norm(v[i]);
    }
    if (vnorm2 <= 1e-290) continue;
    const double tau = 2.0 / vnorm2;
    // p = tau * A v on the trailing block; w = p - (tau/2)(v^dagger p) v.
    for (int i = k + 1; i < n; ++i) {
      cplx acc = 0.0;
      for (int j = k + 1; j < n; ++j) acc += a.at(i, j) * v[j];
      p[i] = tau * acc;
    }
    cplx kk = 0.0;
    for (int i = k + 1; i < n; ++i) kk += std::conj(v[i]) * p[i];
    kk *= 0.5 * tau;
    for (int i = k + 1; i < n; ++i) w[i] = p[i] - kk * v[i];
    // Rank-2 update A <- A - v w^dagger - w v^dagger on the trailing block.
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a.at(i, j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
    a.at(k + 1, k) = alpha;
    a.at(k, k + 1) = std::conj(alpha);
    for (int i = k + 2; i < n; ++i) {
      a.at(i, k) = 0.0;
      a.at(k, i) = 0.0;
    }
    // Accumulate Q <- Q H: Q - tau (Q v) v^dagger.
    for (int r = 0; r < n; ++r) {
      cplx acc = 0.0;
      for (int j = k + 1; j < n; ++j) acc += q.at(r, j) * v[j];
      acc *= tau;
      for (int j = k + 1; j < n; ++j) q.at(r, j) -= acc * std::conj(v[j]);
    }
  }
  // Make the subdiagonal real nonnegative by a diagonal phase change folded
  // into Q's columns.
  cplx phase = 1.0;
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      const cplx raw = a.at(i, i - 1);
      if (std::abs(raw) > 0.0) phase *= raw / std::abs(raw);
      e[i - 1] = std::abs(raw);
      for (int r = 0; r < n; ++r) q.at(r, i) *= phase;
    }
    d[i] = a.at(i, i).real();
  }
}

// Implicit-shift QL iteration on the real tridiagonal (d, e), rotations
// applied to the complex columns of q. Classic tql2 scheme.
void tql2(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& q) {
  const int n = static_cast<int>(d.size());
  if (n <= 1) return;
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-15 * dd + 1e-300) break;
      }
      if (m != l) {
        if (iter++ == 60) throw ConvergenceError("tridiagonal eigensolver did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int row = 0; row < n; ++row) {
            const cplx fv = q.at(row, i + 1);
            q.at(row, i + 1) = s * q.at(row, i) + c * fv;
            q.at(row, i) = c * q.at(row, i) - s * fv;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  e.pop_back();
}

void sort_and_fix_phases(std::vector<double>& vals, ComplexMatrix& vecs, bool ascending) {
  const int n = static_cast<int>(vals.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return ascending ? vals[i] < vals[j] : vals[i] > vals[j];
  });
  std::vector<double> sv(n);
  ComplexMatrix sm(vecs.dim());
  for (int k = 0; k < n; ++k) {
    sv[k] = vals[order[k]];
    int imax = 0;
    double amax = -1.0;
    for (int i = 0; i < vecs.dim(); ++i) {
      const double a = std::abs(vecs.at(i, order[k]));
      if (a > amax) {
        amax = a;
        imax = i;
      }
    }
    cplx phase = 1.0;
    if (amax > 0.0) phase = std::conj(vecs.at(imax, order[k])) / amax;
    for (int i = 0; i < vecs.dim(); ++i) sm.at(i, k) = vecs.at(i, order[k]) * phase;
  }
  vals = std::move(sv);
  vecs = std::move(sm);
}

}  // namespace

EigenDecomposition eig_hermitian(const ComplexMatrix& m) {
  const int n = m.dim();
  const double scale = std::max(1.0, max_abs(m));
  ComplexMatrix a = hermitize(m, 1e-9 * scale);
  ComplexMatrix v = ComplexMatrix::identity(n);
  if (n == 0) return {{}, v};

  std::vector<double> d, e;
  tridiagonalize(a, v, d, e);
  tql2(d, e, v);
  sort_and_fix_phases(d, v, /*ascending=*/true);
  return {std::move(d), std::move(v)};
}

ThinSvd svd_thin(const cplx* m, int rows, int cols) {
  if (rows < cols) throw DimensionError("svd_thin requires rows >= cols");
  // Gram matrix route: eig of M^dagger M, then left vectors by applying M.
  ComplexMatrix h(cols);
  mul_raw(m, m, h.data(), cols, rows, cols, /*adjoint_a=*/true);
  EigenDecomposition ed = eig_hermitian(h);
  std::vector<double> vals = ed.eigenvalues;
  ComplexMatrix w = ed.eigenvectors;
  sort_and_fix_phases(vals, w, /*ascending=*/false);

  ThinSvd out;
  out.s.resize(cols);
  out.v = ComplexMatrix(cols);
  out.u.assign(static_cast<size_t>(rows) * cols, cplx(0.0));
  double smax = 0.0;
  for (int i = 0; i < cols; ++i) smax = std::max(smax, std::sqrt(std::max(0.0, vals[i])));
  const double cut = 1e-8 * std::max(smax, 1e-300);
  std::vector<bool> filled(cols, false);
  auto project_out = [&](std::vector<cplx>& cand, int upto) {
    for (int j = 0; j < upto; ++j) {
      if (!filled[j]) continue;
      cplx ov = 0.0;
      for (int r = 0; r < rows; ++r)
        ov += std::conj(out.u[static_cast<size_t>(r) * cols + j]) * cand[r];
      for (int r = 0; r < rows; ++r) cand[r] -= ov * out.u[static_cast<size_t>(r) * cols + j];
    }
  };
  for (int k = 0; k < cols; ++k) {
    out.s[k] = std::sqrt(std::max(0.0, vals[k]));
    for (int i = 0; i < cols; ++i) out.v.at(i, k) = w.at(i, k);
    if (out.s[k] <= cut) {
      out.s[k] = std::max(out.s[k], 0.0);
      continue;
    }
    std::vector<cplx> cand(rows, cplx(0.0));
    for (int r = 0; r < rows; ++r) {
      cplx acc = 0.0;
      for (int i = 0; i < cols; ++i) acc += m[static_cast<size_t>(r) * cols + i] * w.at(i, k);
      cand[r] = acc / out.s[k];
    }
    // Small singular values give noisy left vectors; re-orthogonalize them.
    if (out.s[k] < 1e-4 * smax) project_out(cand, k);
    double nrm = 0.0;
    for (int r = 0; r < rows; ++r) nrm += std::norm(cand[r]);
    nrm = std::sqrt(nrm);
    if (nrm < 0.5) continue;  // numerically null: handled with the completion pass
    for (int r = 0; r < rows; ++r) out.u[static_cast<size_t>(r) * cols + k] = cand[r] / nrm;
    filled[k] = true;
  }
  // Complete the remaining columns to an orthonormal set from basis seeds.
  for (int k = 0; k < cols; ++k) {
    if (filled[k]) continue;
    std::vector<cplx> best;
    double best_nrm = 0.0;
    for (int seed = 0; seed < rows; ++seed) {
      std::vector<cplx> cand(rows, cplx(0.0));
      cand[seed] = 1.0;
      project_out(cand, cols);
      double nrm = 0.0;
      for (int r = 0; r < rows; ++r) nrm += std::norm(cand[r]);
      nrm = std::sqrt(nrm);
      if (nrm > best_nrm) {
        best_nrm = nrm;
        best = std::move(cand);
      }
      if (best_nrm > 0.5) break;
    }
    if (best_nrm < 1e-6)
      throw ConvergenceError("svd_thin: failed to complete an orthonormal basis");
    // One more sweep stabilizes candidates that started nearly dependent.
    project_out(best, cols);
    double nrm = 0.0;
    for (int r = 0; r < rows; ++r) nrm += std::norm(best[r]);
    nrm = std::sqrt(nrm);
    for (int r = 0; r < rows; ++r) out.u[static_cast<size_t>(r) * cols + k] = best[r] / nrm;
    filled[k] = true;
  }
  return out;
}

Svd svd(const ComplexMatrix& m) {
  ThinSvd t = svd_thin(m.data(), m.dim(), m.dim());
  Svd out;
  out.u = ComplexMatrix(m.dim(), std::move(t.u));
  out.s = std::move(t.s);
  out.v = std::move(t.v);
  return out;
}

double trace_norm(const ComplexMatrix& m) {
  Svd d = svd(m);
  double s = 0.0;
  for (double x : d.s) s += x;
  return s;
}

ComplexMatrix matrix_function(const ComplexMatrix& m, MatrixFunc f) {
  EigenDecomposition ed = eig_hermitian(m);
  const int n = m.dim();
  double lmax = 0.0;
  for (double l : ed.eigenvalues) lmax = std::max(lmax, l);
  const double clip = 1e-10 * std::max(1.0, lmax);
  const double support_cut = 1e-10 * std::max(lmax, 0.0);
  std::vector<double> fv(n);
  for (int i = 0; i < n; ++i) {
    double l = ed.eigenvalues[i];
    if (l < -clip) throw ContractError("matrix_function input is not PSD");
    if (l < 0.0) l = 0.0;
    // Spectral dust: a true zero eigenvalue is computed with absolute error
    // of a few ulps of lmax, and sqrt() would inflate it to ~1e-8. Zero it.
    if (l <= 1e-13 * std::max(lmax, 0.0)) l = 0.0;
    if (l <= support_cut) {
      fv[i] = (f == MatrixFunc::Sqrt) ? std::sqrt(l) : 0.0;
      continue;
    }
    switch (f) {
      case MatrixFunc::Sqrt: fv[i] = std::sqrt(l); break;
      case MatrixFunc::InvSqrtOnSupport: fv[i] = 1.0 / std::sqrt(l); break;
      case MatrixFunc::Log2OnSupport: fv[i] = std::log2(l); break;
    }
  }
  ComplexMatrix out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += ed.eigenvectors.at(r, k) * fv[k] * std::conj(ed.eigenvectors.at(c, k));
      out.at(r, c) = acc;
    }
  return out;
}

ComplexMatrix support_projector(const ComplexMatrix& m) {
  EigenDecomposition ed = eig_hermitian(m);
  const int n = m.dim();
  double lmax = 0.0;
  for (double l : ed.eigenvalues) lmax = std::max(lmax, l);
  const double cut = 1e-10 * std::max(lmax, 0.0);
  ComplexMatrix out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k)
        if (ed.eigenvalues[k] > cut)
          acc += ed.eigenvectors.at(r, k) * std::conj(ed.eigenvectors.at(c, k));
      out.at(r, c) = acc;
    }
  return out;
}

OperatorOrder operator_leq(const ComplexMatrix& a, const ComplexMatrix& b, double slack) {
  EigenDecomposition ed = eig_hermitian(sub(b, a));
  const double wmin = ed.eigenvalues.empty() ? 0.0 : ed.eigenvalues.front();
  return {wmin >= -slack, wmin};
}

ComplexMatrix inverse_hpd(const ComplexMatrix& m) {
  const int n = m.dim();
  // Cholesky m = L L^dagger.
  ComplexMatrix l(n);
  for (int j = 0; j < n; ++j) {
    cplx diag = m.at(j, j);
    for (int k = 0; k < j; ++k) diag -= l.at(j, k) * std::conj(l.at(j, k));
    const double dj = diag.real();
    if (dj <= 0.0) throw ContractError("inverse_hpd: matrix not positive definite");
    l.at(j, j) = std::sqrt(dj);
    for (int i = j + 1; i < n; ++i) {
      cplx acc = m.at(i, j);
      for (int k = 0; k < j; ++k) acc -= l.at(i, k) * std::conj(l.at(j, k));
      l.at(i, j) = acc / l.at(j, j).real();
    }
  }
  // Invert L (lower triangular), then m^-1 = L^-dagger L^-1.
  ComplexMatrix li(n);
  for (int j = 0; j < n; ++j) {
    li.at(j, j) = 1.0 / l.at(j, j).real();
    for (int i = j + 1; i < n; ++i) {
      cplx acc = 0.0;
      for (int k = j; k < i; ++k) acc += l.at(i, k) * li.at(k, j);
      li.at(i, j) = -acc / l.at(i, i).real();
    }
  }
  ComplexMatrix out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cplx acc = 0.0;
      for (int k = std::max(r, c); k < n; ++k) acc += std::conj(li.at(k, r)) * li.at(k, c);
      out.at(r, c) = acc;
    }
  return out;
}

std::vector<double> solve_real(std::vector<double> a, std::vector<double> b, int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-300) throw ConvergenceError("singular linear system");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] * inv;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r * n + c] * x[c];
    x[r] = acc / a[r * n + r];
  }
  return x;
}

}  // namespace qsr
