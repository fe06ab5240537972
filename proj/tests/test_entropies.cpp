#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qsr/eig.hpp"
#include "qsr/entropies.hpp"
#include "qsr/states.hpp"

using namespace qsr;

namespace {

ComplexMatrix random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g.at(r, c) = cplx(gauss(rng), gauss(rng));
  ComplexMatrix m = mul(g, dagger(g));
  return scale(m, 1.0 / std::real(trace(m)));
}

std::vector<double> random_distribution(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(dim);
  double sum = 0.0;
  for (double& v : p) sum += (v = u(rng));
  for (double& v : p) v /= sum;
  return p;
}

// Independent classical oracle for the hypothesis-testing divergence of two
// probability vectors: Neyman-Pearson says the optimal test takes the largest
// likelihood ratios first, with a fractional weight on the boundary outcome.
double classical_dh_oracle(std::vector<double> p, std::vector<double> q, double eps) {
  std::vector<size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) {
    const double ri = q[i] > 0 ? p[i] / q[i] : 1e300;
    const double rj = q[j] > 0 ? p[j] / q[j] : 1e300;
    return ri > rj;
  });
  double need = 1.0 - eps, beta = 0.0;
  for (size_t i : idx) {
    if (need <= 1e-15) break;
    const double take = std::min(1.0, p[i] > 0 ? need / p[i] : 1.0);
    beta += take * q[i];
    need -= take * p[i];
  }
  return -std::log2(beta);
}

}  // namespace

TEST_CASE("fidelity and purified distance") {
  std::mt19937_64 rng(50);
  const ComplexMatrix rho = random_density(4, rng);
  const FidelityResult same = fidelity_and_distance(rho, rho);
  CHECK(same.fidelity == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(same.purified_distance == doctest::Approx(0.0).epsilon(1e-5));

  const ComplexMatrix e0 = ComplexMatrix::diag(std::vector<double>{1, 0});
  const ComplexMatrix e1 = ComplexMatrix::diag(std::vector<double>{0, 1});
  const FidelityResult orth = fidelity_and_distance(e0, e1);
  CHECK(orth.fidelity == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(orth.purified_distance == doctest::Approx(1.0).epsilon(1e-12));

  // Commuting case: F = sum sqrt(p_i q_i).
  const ComplexMatrix a = ComplexMatrix::diag(std::vector<double>{0.7, 0.3});
  const ComplexMatrix b = ComplexMatrix::diag(std::vector<double>{0.4, 0.6});
  const double f_expect = std::sqrt(0.7 * 0.4) + std::sqrt(0.3 * 0.6);
  CHECK(fidelity_and_distance(a, b).fidelity == doctest::Approx(f_expect).epsilon(1e-12));
}

TEST_CASE("von Neumann and relative entropy") {
  CHECK(von_neumann(ComplexMatrix::diag(std::vector<double>{0.5, 0.5})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(von_neumann(ComplexMatrix::diag(std::vector<double>{1.0, 0.0})) ==
        doctest::Approx(0.0).epsilon(1e-10));

  // Diagonal oracle: sum p_i log2(p_i/q_i).
  const ComplexMatrix a = ComplexMatrix::diag(std::vector<double>{0.7, 0.3});
  const ComplexMatrix b = ComplexMatrix::diag(std::vector<double>{0.4, 0.6});
  const double expect = 0.7 * std::log2(0.7 / 0.4) + 0.3 * std::log2(0.3 / 0.6);
  const EntropyResult rel = relative_entropy(a, b);
  REQUIRE_FALSE(rel.infinite);
  CHECK(rel.value == doctest::Approx(expect).epsilon(1e-12));

  // Support violation is reported as infinite.
  const ComplexMatrix full = ComplexMatrix::diag(std::vector<double>{0.5, 0.5});
  const ComplexMatrix rank1 = ComplexMatrix::diag(std::vector<double>{1.0, 0.0});
  CHECK(relative_entropy(full, rank1).infinite);
  CHECK_FALSE(relative_entropy(rank1, full).infinite);
}

TEST_CASE("mutual information on product and Bell states") {
  const RegisterLayout lay({{"A", 2}, {"B", 2}});
  std::mt19937_64 rng(51);
  const ComplexMatrix pa = random_density(2, rng), pb = random_density(2, rng);
  const QuantumState prod(lay, tensor(pa, pb));
  CHECK(mutual_information(prod, {"A"}, {"B"}) == doctest::Approx(0.0).epsilon(1e-9));

  ComplexMatrix bell(4);
  bell.at(0, 0) = bell.at(0, 3) = bell.at(3, 0) = bell.at(3, 3) = 0.5;
  const QuantumState phi(lay, bell);
  CHECK(mutual_information(phi, {"A"}, {"B"}) == doctest::Approx(2.0).epsilon(1e-9));

  const RegisterLayout lay3({{"A", 2}, {"B", 2}, {"C", 2}});
  const QuantumState tri = random_state(lay3, RandomKind::MixedGinibre, 52);
  CHECK(cond_mutual_information(tri, {"A"}, {"B"}, {"C"}) >= -1e-9);
}

TEST_CASE("max-divergence against the max-ratio oracle on 200 diagonal pairs") {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> dim_pick(2, 8);
  for (int t = 0; t < 200; ++t) {
    const int dim = dim_pick(rng);
    const std::vector<double> p = random_distribution(dim, rng);
    const std::vector<double> q = random_distribution(dim, rng);
    double ratio = 0.0;
    for (int i = 0; i < dim; ++i) ratio = std::max(ratio, p[i] / q[i]);
    const EntropyResult dm = dmax(ComplexMatrix::diag(p), ComplexMatrix::diag(q));
    REQUIRE_FALSE(dm.infinite);
    REQUIRE(dm.value == doctest::Approx(std::log2(ratio)).epsilon(1e-10));
  }
  // Fixed instance used by the command-line contract.
  const EntropyResult fixed = dmax(ComplexMatrix::diag(std::vector<double>{0.7, 0.3}),
                                   ComplexMatrix::diag(std::vector<double>{0.4, 0.6}));
  CHECK(fixed.value == doctest::Approx(std::log2(1.75)).epsilon(1e-12));
}

TEST_CASE("max-divergence properties") {
  std::mt19937_64 rng(54);
  const ComplexMatrix rho = random_density(4, rng), sig = random_density(4, rng);
  CHECK(std::abs(dmax(rho, rho).value) < 1e-8);
  // dmax >= relative entropy >= 0 for normalized states.
  const double dm = dmax(rho, sig).value;
  const double rel = relative_entropy(rho, sig).value;
  CHECK(dm >= rel - 1e-9);
  CHECK(rel >= -1e-9);
  // Certificate: rank-one witness attains the ratio.
  const EntropyResult r = dmax(rho, sig);
  REQUIRE(r.certificate.has_value());
  const double num = std::real(trace(mul(*r.certificate, rho)));
  const double den = std::real(trace(mul(*r.certificate, sig)));
  CHECK(std::log2(num / den) == doctest::Approx(r.value).epsilon(1e-7));
  // Support violation.
  CHECK(dmax(ComplexMatrix::diag(std::vector<double>{0.5, 0.5}),
             ComplexMatrix::diag(std::vector<double>{1.0, 0.0}))
            .infinite);
}

TEST_CASE("hypothesis-testing divergence against the classical oracle") {
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> dim_pick(2, 8);
  for (int t = 0; t < 100; ++t) {
    const int dim = dim_pick(rng);
    const std::vector<double> p = random_distribution(dim, rng);
    const std::vector<double> q = random_distribution(dim, rng);
    const double eps = (t % 3 == 0) ? 0.1 : (t % 3 == 1 ? 0.3 : 0.5);
    const EntropyResult dh = dh_eps(ComplexMatrix::diag(p), ComplexMatrix::diag(q), eps);
    REQUIRE_FALSE(dh.infinite);
    REQUIRE(dh.value == doctest::Approx(classical_dh_oracle(p, q, eps)).epsilon(1e-8));
  }
  // Fixed instance: diag(0.7,0.3) vs diag(0.4,0.6), eps = 0.25 -> exactly 1.
  const EntropyResult fixed = dh_eps(ComplexMatrix::diag(std::vector<double>{0.7, 0.3}),
                                     ComplexMatrix::diag(std::vector<double>{0.4, 0.6}), 0.25);
  CHECK(fixed.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("hypothesis-testing divergence properties") {
  std::mt19937_64 rng(56);
  const ComplexMatrix rho = random_density(4, rng), sig = random_density(4, rng);

  // Monotone in eps.
  double prev = -1e300;
  for (double eps : {0.0, 0.1, 0.3, 0.5, 0.7}) {
    const double v = dh_eps(rho, sig, eps).value;
    REQUIRE(v >= prev - 1e-9);
    prev = v;
  }

  // The certificate reproduces both traces.
  for (double eps : {0.1, 0.35}) {
    const EntropyResult r = dh_eps(rho, sig, eps);
    REQUIRE(r.certificate.has_value());
    const double alpha = std::real(trace(mul(*r.certificate, rho)));
    const double beta = std::real(trace(mul(*r.certificate, sig)));
    REQUIRE(alpha == doctest::Approx(1.0 - eps).epsilon(1e-8));
    REQUIRE(-std::log2(beta) == doctest::Approx(r.value).epsilon(1e-8));
    // 0 <= Pi <= I.
    REQUIRE(operator_leq(ComplexMatrix(4), *r.certificate, 1e-9).holds);
    REQUIRE(operator_leq(*r.certificate, ComplexMatrix::identity(4), 1e-9).holds);
  }

  // eps = 0 uses the support projector of rho.
  const EntropyResult zero = dh_eps(rho, sig, 0.0);
  REQUIRE(zero.certificate.has_value());
  CHECK(max_abs_diff(*zero.certificate, support_projector(rho)) < 1e-8);

  // Data processing: discarding a subsystem cannot increase the divergence.
  const RegisterLayout lay({{"A", 2}, {"B", 2}});
  for (std::uint64_t t = 0; t < 20; ++t) {
    const QuantumState r2 = random_state(lay, RandomKind::MixedGinibre, 600 + t);
    const QuantumState s2 = random_state(lay, RandomKind::MixedGinibre, 700 + t);
    const double joint = dh_eps(r2.matrix(), s2.matrix(), 0.2).value;
    const double marg =
        dh_eps(reduce(r2, {"A"}).matrix(), reduce(s2, {"A"}).matrix(), 0.2).value;
    REQUIRE(marg <= joint + 1e-8);
  }

  CHECK_THROWS_AS(dh_eps(rho, sig, 1.5), ParameterError);
  CHECK_THROWS_AS(dh_eps(rho, sig, -0.1), ParameterError);
}

TEST_CASE("Renyi-1/2 divergence equals -2 log2 fidelity") {
  std::mt19937_64 rng(57);
  const ComplexMatrix rho = random_density(3, rng), sig = random_density(3, rng);
  const double f = fidelity_and_distance(rho, sig).fidelity;
  CHECK(d_half(rho, sig).value == doctest::Approx(-2.0 * std::log2(f)).epsilon(1e-10));
}

TEST_CASE("conditional min-entropy: duality oracle on pure states") {
  // For a pure bipartite state, H_min(A|B) = -2 log2 Tr sqrt(rho_A).
  const RegisterLayout lay({{"A", 2}, {"B", 2}});
  for (std::uint64_t t = 0; t < 30; ++t) {
    const QuantumState psi = random_state(lay, RandomKind::PureHaar, 800 + t);
    const ComplexMatrix rho_a = reduce(psi, {"A"}).matrix();
    const double oracle =
        -2.0 * std::log2(std::real(trace(matrix_function(rho_a, MatrixFunc::Sqrt))));
    const EntropyResult h = hmin_cond(psi, {"A"});
    REQUIRE(h.value == doctest::Approx(oracle).epsilon(1e-6));
  }

  // Bell state: exactly -1.
  ComplexMatrix bell(4);
  bell.at(0, 0) = bell.at(0, 3) = bell.at(3, 0) = bell.at(3, 3) = 0.5;
  const QuantumState phi(lay, bell);
  CHECK(hmin_cond(phi, {"A"}).value == doctest::Approx(-1.0).epsilon(1e-6));

  // Product state: H_min(A|B) = -log2 lambda_max(rho_A).
  std::mt19937_64 rng(58);
  const ComplexMatrix pa = random_density(2, rng), pb = random_density(2, rng);
  const QuantumState prod(lay, tensor(pa, pb));
  const EigenDecomposition ea = eig_hermitian(pa);
  CHECK(hmin_cond(prod, {"A"}).value ==
        doctest::Approx(-std::log2(ea.eigenvalues.back())).epsilon(1e-6));

  // Certificate is a normalized state achieving the bound:
  // rho_AB <= 2^{-hmin} I_A (x) sigma_B.
  const QuantumState mixed = random_state(lay, RandomKind::MixedGinibre, 59);
  const EntropyResult h = hmin_cond(mixed, {"A"});
  REQUIRE(h.certificate.has_value());
  CHECK(std::abs(trace(*h.certificate) - 1.0) < 1e-6);
  const ComplexMatrix bound =
      scale(tensor(ComplexMatrix::identity(2), *h.certificate), std::exp2(-h.value));
  CHECK(operator_leq(mixed.matrix(), bound, 1e-6).holds);
}

TEST_CASE("conditional max-entropy and the min/max ordering") {
  const RegisterLayout lay({{"A", 2}, {"B", 2}});
  // Bell: H_max(A|B) = -1; product pure: 0.
  ComplexMatrix bell(4);
  bell.at(0, 0) = bell.at(0, 3) = bell.at(3, 0) = bell.at(3, 3) = 0.5;
  CHECK(hmax_cond(QuantumState(lay, bell), {"A"}).value == doctest::Approx(-1.0).epsilon(1e-6));

  for (std::uint64_t t = 0; t < 15; ++t) {
    const QuantumState s = random_state(lay, RandomKind::MixedGinibre, 900 + t);
    const double lo = hmin_cond(s, {"A"}).value;
    const double hi = hmax_cond(s, {"A"}).value;
    REQUIRE(lo <= hi + 1e-6);
  }
}

TEST_CASE("max-information") {
  const RegisterLayout lay({{"A", 2}, {"B", 2}});
  std::mt19937_64 rng(60);
  const QuantumState prod(lay, tensor(random_density(2, rng), random_density(2, rng)));
  CHECK(std::abs(imax(prod, {"A"}).value) < 1e-5);

  ComplexMatrix bell(4);
  bell.at(0, 0) = bell.at(0, 3) = bell.at(3, 0) = bell.at(3, 3) = 0.5;
  CHECK(imax(QuantumState(lay, bell), {"A"}).value == doctest::Approx(2.0).epsilon(1e-5));

  // I_max >= I (mutual information) on random states.
  const QuantumState s = random_state(lay, RandomKind::MixedGinibre, 61);
  CHECK(imax(s, {"A"}).value >= mutual_information(s, {"A"}, {"B"}) - 1e-6);
}

TEST_CASE("smoothed max-divergence upper bound") {
  std::mt19937_64 rng(62);
  const ComplexMatrix rho = random_density(3, rng), sig = random_density(3, rng);
  const double exact = dmax(rho, sig).value;
  const EntropyResult sm = smooth_dmax(rho, sig, 0.1, 4);
  REQUIRE_FALSE(sm.infinite);
  // Never larger than the unsmoothed value, and the chosen state stays
  // within the purified-distance budget (recorded in the solver gap).
  CHECK(sm.value <= exact + 1e-9);
  CHECK(sm.report.gap <= 0.1 + 1e-9);
  REQUIRE(sm.certificate.has_value());
  CHECK(std::abs(trace(*sm.certificate) - 1.0) < 1e-8);
  // eps = 0 budget collapses to the exact value.
  CHECK(smooth_dmax(rho, sig, 0.0, 2).value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("entanglement spread") {
  // Pure-state marginal of a Bell pair: h0 = 1, h_inf = 1, spread 0.
  const SpreadReport flat = entanglement_spread(scale(ComplexMatrix::identity(2), 0.5));
  CHECK(flat.h0 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(flat.h_inf == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(flat.spread == doctest::Approx(0.0).epsilon(1e-10));

  const SpreadReport skew =
      entanglement_spread(ComplexMatrix::diag(std::vector<double>{0.75, 0.25}));
  CHECK(skew.h0 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(skew.h_inf == doctest::Approx(std::log2(4.0 / 3.0)).epsilon(1e-10));

  // Bell(R:C) with trivial third register: k1 = 2, k2 = k3 = 1, k4 = 0.
  const RegisterLayout lay({{"R", 2}, {"E", 1}, {"C", 2}});
  std::vector<cplx> amp = {1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0)};
  const SpreadReport ks = spread_ks(PureVector(lay, amp), "R", "C");
  REQUIRE(ks.has_ks);
  CHECK(ks.k1 == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(ks.k2 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(ks.k3 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(ks.k4 == doctest::Approx(0.0).epsilon(1e-8));
}
