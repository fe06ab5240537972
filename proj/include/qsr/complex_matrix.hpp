#pragma once

#include <complex>
#include <vector>

#include "qsr/errors.hpp"

namespace qsr {

using cplx = std::complex<double>;

// Global cap on matrix/vector dimensions, overridable via QSRLAB_DIM_CAP.
long dim_cap();

// Dense square complex matrix, row-major. The universal carrier for
// operators and density matrices in this project.
class ComplexMatrix {
public:
  ComplexMatrix() : dim_(0) {}
  explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
    if (dim < 0) throw DimensionError("negative matrix dimension");
  }
  ComplexMatrix(int dim, std::vector<cplx> entries) : dim_(dim), a_(std::move(entries)) {
    if (a_.size() != static_cast<size_t>(dim) * dim)
      throw DimensionError("entry count does not match dim^2");
  }

  int dim() const { return dim_; }
  cplx& at(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
  const cplx& at(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }
  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }
  const std::vector<cplx>& entries() const { return a_; }

  static ComplexMatrix identity(int dim);
  static ComplexMatrix diag(const std::vector<double>& d);
  static ComplexMatrix diag(const std::vector<cplx>& d);

private:
  int dim_;
  std::vector<cplx> a_;
};

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, cplx s);
ComplexMatrix dagger(const ComplexMatrix& a);
cplx trace(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol);
// (m + m^dagger)/2 after checking hermiticity within tol.
ComplexMatrix hermitize(const ComplexMatrix& a, double tol);

// OpenMP-parallel kernels. Serial reference versions live in qsr::ref and
// are kept for testing and benchmarking.
ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep);

// Rectangular matmul on raw row-major buffers: c[m x n] = op_a(a) * b,
// a is [m x k] (or its adjoint when adjoint_a), b is [k x n].
void mul_raw(const cplx* a, const cplx* b, cplx* c, int m, int k, int n, bool adjoint_a);

namespace ref {
ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep);
}  // namespace ref

}  // namespace qsr
