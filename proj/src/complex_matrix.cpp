#include "qsr/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace qsr {

long dim_cap() {
  static long cap = [] {
    const char* env = std::getenv("QSRLAB_DIM_CAP");
    if (env) {
      long v = std::atol(env);
      if (v > 0) return v;
    }
    return 65536L;
  }();
  return cap;
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diag(const std::vector<double>& d) {
  ComplexMatrix m(static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diag(const std::vector<cplx>& d) {
  ComplexMatrix m(static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

static void check_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("matrix dimensions differ");
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b);
  ComplexMatrix c(a.dim());
  const size_t n = static_cast<size_t>(a.dim()) * a.dim();
  for (size_t i = 0; i < n; ++i) c.data()[i] = a.data()[i] + b.data()[i];
  return c;
}

ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b);
  ComplexMatrix c(a.dim());
  const size_t n = static_cast<size_t>(a.dim()) * a.dim();
  for (size_t i = 0; i < n; ++i) c.data()[i] = a.data()[i] - b.data()[i];
  return c;
}

ComplexMatrix scale(const ComplexMatrix& a, cplx s) {
  ComplexMatrix c(a.dim());
  const size_t n = static_cast<size_t>(a.dim()) * a.dim();
  for (size_t i = 0; i < n; ++i) c.data()[i] = a.data()[i] * s;
  return c;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix c(a.dim());
  for (int r = 0; r < a.dim(); ++r)
    for (int col = 0; col < a.dim(); ++col) c.at(col, r) = std::conj(a.at(r, col));
  return c;
}

cplx trace(const ComplexMatrix& a) {
  cplx t = 0.0;
  for (int i = 0; i < a.dim(); ++i) t += a.at(i, i);
  return t;
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  const size_t n = static_cast<size_t>(a.dim()) * a.dim();
  for (size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a.data()[i]));
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b);
  double m = 0.0;
  const size_t n = static_cast<size_t>(a.dim()) * a.dim();
  for (size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  const size_t n = static_cast<size_t>(a.dim()) * a.dim();
  for (size_t i = 0; i < n; ++i) s += std::norm(a.data()[i]);
  return std::sqrt(s);
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  for (int r = 0; r < a.dim(); ++r)
    for (int c = r; c < a.dim(); ++c)
      if (std::abs(a.at(r, c) - std::conj(a.at(c, r))) > tol) return false;
  return true;
}

ComplexMatrix hermitize(const ComplexMatrix& a, double tol) {
  if (!is_hermitian(a, tol)) throw ContractError("matrix is not Hermitian within tolerance");
  ComplexMatrix h(a.dim());
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) h.at(r, c) = 0.5 * (a.at(r, c) + std::conj(a.at(c, r)));
  return h;
}

void mul_raw(const cplx* a, const cplx* b, cplx* c, int m, int k, int n, bool adjoint_a) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    cplx* ci = c + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) ci[j] = 0.0;
    for (int l = 0; l < k; ++l) {
      const cplx ail = adjoint_a ? std::conj(a[static_cast<size_t>(l) * m + i])
                                 : a[static_cast<size_t>(i) * k + l];
      if (ail == cplx(0.0)) continue;
      const cplx* bl = b + static_cast<size_t>(l) * n;
      for (int j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
  }
}

ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b);
  ComplexMatrix c(a.dim());
  mul_raw(a.data(), b.data(), c.data(), a.dim(), a.dim(), a.dim(), false);
  return c;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const long prod = static_cast<long>(a.dim()) * b.dim();
  if (prod > dim_cap()) throw DimensionError("tensor product dimension exceeds cap");
  const int da = a.dim(), db = b.dim(), d = static_cast<int>(prod);
  ComplexMatrix c(d);
#pragma omp parallel for schedule(static)
  for (int ra = 0; ra < da; ++ra)
    for (int ca = 0; ca < da; ++ca) {
      const cplx v = a.at(ra, ca);
      for (int rb = 0; rb < db; ++rb)
        for (int cb = 0; cb < db; ++cb) c.at(ra * db + rb, ca * db + cb) = v * b.at(rb, cb);
    }
  return c;
}

namespace {

struct TraceIndexing {
  std::vector<int> keep_dims, drop_dims;
  std::vector<int> keep_stride, drop_stride;  // strides in the full index space
  long keep_total = 1, drop_total = 1;
};

TraceIndexing plan_partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                                 const std::vector<int>& keep) {
  long prod = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("factor dims must be positive");
    prod *= d;
  }
  if (prod != m.dim()) throw DimensionError("product of factor dims does not match matrix dim");
  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) {
    if (k < 0 || static_cast<size_t>(k) >= dims.size())
      throw DimensionError("keep index out of range");
    kept[k] = true;
  }
  std::vector<long> stride(dims.size());
  long s = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    stride[i] = s;
    s *= dims[i];
  }
  TraceIndexing t;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (kept[i]) {
      t.keep_dims.push_back(dims[i]);
      t.keep_stride.push_back(static_cast<int>(stride[i]));
      t.keep_total *= dims[i];
    } else {
      t.drop_dims.push_back(dims[i]);
      t.drop_stride.push_back(static_cast<int>(stride[i]));
      t.drop_total *= dims[i];
    }
  }
  return t;
}

long expand(long packed, const std::vector<int>& dims, const std::vector<int>& strides) {
  long full = 0;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    full += (packed % dims[i]) * static_cast<long>(strides[i]);
    packed /= dims[i];
  }
  return full;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  const TraceIndexing t = plan_partial_trace(m, dims, keep);
  ComplexMatrix out(static_cast<int>(t.keep_total));
  std::vector<long> keep_full(t.keep_total), drop_full(t.drop_total);
  for (long i = 0; i < t.keep_total; ++i) keep_full[i] = expand(i, t.keep_dims, t.keep_stride);
  for (long i = 0; i < t.drop_total; ++i) drop_full[i] = expand(i, t.drop_dims, t.drop_stride);
  const int dim = m.dim();
#pragma omp parallel for schedule(static)
  for (long r = 0; r < t.keep_total; ++r)
    for (long c = 0; c < t.keep_total; ++c) {
      cplx acc = 0.0;
      for (long e = 0; e < t.drop_total; ++e)
        acc += m.data()[(keep_full[r] + drop_full[e]) * dim + keep_full[c] + drop_full[e]];
      out.at(static_cast<int>(r), static_cast<int>(c)) = acc;
    }
  return out;
}

namespace ref {

ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b);
  const int d = a.dim();
  ComplexMatrix c(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx acc = 0.0;
      for (int l = 0; l < d; ++l) acc += a.at(i, l) * b.at(l, j);
      c.at(i, j) = acc;
    }
  return c;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const long prod = static_cast<long>(a.dim()) * b.dim();
  if (prod > dim_cap()) throw DimensionError("tensor product dimension exceeds cap");
  const int da = a.dim(), db = b.dim();
  ComplexMatrix c(static_cast<int>(prod));
  for (int ra = 0; ra < da; ++ra)
    for (int rb = 0; rb < db; ++rb)
      for (int ca = 0; ca < da; ++ca)
        for (int cb = 0; cb < db; ++cb)
          c.at(ra * db + rb, ca * db + cb) = a.at(ra, ca) * b.at(rb, cb);
  return c;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  const TraceIndexing t = plan_partial_trace(m, dims, keep);
  ComplexMatrix out(static_cast<int>(t.keep_total));
  for (long r = 0; r < t.keep_total; ++r)
    for (long c = 0; c < t.keep_total; ++c) {
      cplx acc = 0.0;
      for (long e = 0; e < t.drop_total; ++e) {
        const long fr = expand(r, t.keep_dims, t.keep_stride) + expand(e, t.drop_dims, t.drop_stride);
        const long fc = expand(c, t.keep_dims, t.keep_stride) + expand(e, t.drop_dims, t.drop_stride);
        acc += m.data()[fr * m.dim() + fc];
      }
      out.at(static_cast<int>(r), static_cast<int>(c)) = acc;
    }
  return out;
}

}  // namespace ref

}  // namespace qsr
