// Compares the OpenMP kernels against the serial reference implementations
// (qsr::ref) on matrix multiply, Kronecker product, and partial trace.

#include <chrono>
#include <cstdio>
#include <random>

#include "qsr/complex_matrix.hpp"

using namespace qsr;

namespace {

ComplexMatrix random_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m.at(r, c) = cplx(gauss(rng), gauss(rng));
  return m;
}

template <typename F>
double time_ms(F&& f, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  const auto elapsed = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double, std::milli>(elapsed).count() / reps;
}

}  // namespace

int main() {
  std::mt19937_64 rng(12345);
  std::printf("%-14s %6s %6s %12s %12s %10s\n", "kernel", "dim", "reps", "parallel_ms",
              "serial_ms", "max_diff");

  for (int dim : {64, 128, 256}) {
    const ComplexMatrix a = random_matrix(dim, rng);
    const ComplexMatrix b = random_matrix(dim, rng);
    const int reps = dim <= 128 ? 20 : 5;
    ComplexMatrix rp, rs;
    const double tp = time_ms([&] { rp = mul(a, b); }, reps);
    const double ts = time_ms([&] { rs = ref::mul(a, b); }, reps);
    std::printf("%-14s %6d %6d %12.3f %12.3f %10.2e\n", "mul", dim, reps, tp, ts,
                max_abs_diff(rp, rs));
  }

  for (int dim : {32, 64}) {
    const ComplexMatrix a = random_matrix(dim, rng);
    const ComplexMatrix b = random_matrix(dim, rng);
    const int reps = 10;
    ComplexMatrix rp, rs;
    const double tp = time_ms([&] { rp = tensor(a, b); }, reps);
    const double ts = time_ms([&] { rs = ref::tensor(a, b); }, reps);
    std::printf("%-14s %6d %6d %12.3f %12.3f %10.2e\n", "tensor", dim * dim, reps, tp, ts,
                max_abs_diff(rp, rs));
  }

  for (int factor : {8, 16}) {
    const int dim = factor * factor * 4;
    const ComplexMatrix m = random_matrix(dim, rng);
    const std::vector<int> dims = {factor, factor, 4};
    const std::vector<int> keep = {0, 2};
    const int reps = 20;
    ComplexMatrix rp, rs;
    const double tp = time_ms([&] { rp = partial_trace(m, dims, keep); }, reps);
    const double ts = time_ms([&] { rs = ref::partial_trace(m, dims, keep); }, reps);
    std::printf("%-14s %6d %6d %12.3f %12.3f %10.2e\n", "partial_trace", dim, reps, tp, ts,
                max_abs_diff(rp, rs));
  }
  return 0;
}
