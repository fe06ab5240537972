#pragma once

#include <vector>

#include "qsr/complex_matrix.hpp"

namespace qsr {

// Eigenvalues ascending; eigenvectors are the matching columns, each with its
// largest-magnitude component made real positive so results are reproducible.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

// Cyclic Jacobi with threshold skipping, fixed sweep order.
EigenDecomposition eig_hermitian(const ComplexMatrix& m);

struct Svd {
  ComplexMatrix u;
  std::vector<double> s;  // descending, nonnegative
  ComplexMatrix v;        // m = u * diag(s) * v^dagger
};

Svd svd(const ComplexMatrix& m);

// Thin SVD of a rows x cols buffer (rows >= cols): u is rows x cols,
// v is cols x cols. Used for Uhlmann isometries on rectangular cross operators.
struct ThinSvd {
  std::vector<cplx> u;
  std::vector<double> s;
  ComplexMatrix v;
};
ThinSvd svd_thin(const cplx* m, int rows, int cols);

enum class MatrixFunc { Sqrt, InvSqrtOnSupport, Log2OnSupport };

// Spectral function of a Hermitian PSD matrix. Eigenvalues below the support
// cutoff (1e-10 * lambda_max) count as exactly zero; inv-sqrt and log2 map
// them to zero. Negative eigenvalues beyond the clip tolerance raise.
ComplexMatrix matrix_function(const ComplexMatrix& m, MatrixFunc f);

struct OperatorOrder {
  bool holds;
  double witness;  // min eigenvalue of b - a
};

// a <= b in the PSD order, up to slack on the minimum eigenvalue of b - a.
OperatorOrder operator_leq(const ComplexMatrix& a, const ComplexMatrix& b, double slack);

double trace_norm(const ComplexMatrix& m);

// Support projector of a Hermitian PSD matrix (cutoff 1e-10 * lambda_max).
ComplexMatrix support_projector(const ComplexMatrix& m);

// Inverse of a Hermitian positive definite matrix via Cholesky.
ComplexMatrix inverse_hpd(const ComplexMatrix& m);

// Dense real linear solve with partial pivoting (small Newton systems).
std::vector<double> solve_real(std::vector<double> a, std::vector<double> b, int n);

}  // namespace qsr
