#include <doctest.h>

#include <cmath>

#include "ji/error.hpp"
#include "ji/green_weyl.hpp"
#include "ji/inverse_solver.hpp"
#include "support.hpp"

using namespace ji;
using support::code_of;

namespace {

const cplx I(0.0, 1.0);

cplx random_z(oracle::SplitMix& rng) {
  const double im = rng.uniform(0.1, 10.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
  return {rng.uniform(-6.0, 6.0), im};
}

oracle::Tri sub(const JacobiMatrix& J, std::size_t first, std::size_t last) {
  return support::tri(J.block(first, last));
}

}  // namespace

TEST_CASE("weyl_m against the resolvent") {
  const JacobiMatrix J({0, 0}, {1});
  for (cplx z : {cplx(0, 1), cplx(2, 0.5), cplx(-1, -3)}) {
    CHECK(oracle::rel_err(weyl_m(J, z), -z / (z * z - 1.0)) <= 1e-14);
  }
  CHECK(oracle::rel_err(weyl_m(JacobiMatrix({3}, {}), 2.0 * I), 1.0 / (3.0 - 2.0 * I)) <= 1e-15);
  CHECK(code_of([&] { weyl_m(J, 1.0); }) == ErrorCode::PoleHit);
  CHECK(std::isfinite(weyl_m(J, 0.5).real()));

  oracle::SplitMix rng{21};
  for (int trial = 0; trial < 30; ++trial) {
    const JacobiMatrix R = support::random_jacobi(1 + rng.next() % 12, rng);
    const cplx z = random_z(rng);
    CHECK(oracle::rel_err(weyl_m(R, z), oracle::resolvent_entry(support::tri(R), 0, 0, z)) <= 1e-11);
    const cplx up(z.real(), std::abs(z.imag()));
    CHECK(weyl_m(R, up).imag() > 0.0);
  }
}

TEST_CASE("submatrices and their m-functions") {
  const JacobiMatrix J({1, 2, 3, 4}, {0.5, 0.6, 0.7});
  CHECK(support::vec(submatrix_plus(J, 2).diag()) == std::vector<double>{3, 4});
  CHECK(support::vec(submatrix_minus(J, 3).diag()) == std::vector<double>{1, 2});
  CHECK(code_of([&] { submatrix_minus(J, 1); }) == ErrorCode::InvalidInput);
  CHECK(code_of([&] { submatrix_plus(J, 4); }) == ErrorCode::InvalidInput);

  CHECK(weyl_m_minus(J, 1, I) == cplx(0.0));
  CHECK(weyl_m_plus(J, 4, I) == cplx(0.0));
  // J_3^- anchored at its last coordinate.
  const cplx z(0.3, 0.8);
  CHECK(oracle::rel_err(weyl_m_minus(J, 3, z), oracle::resolvent_entry(sub(J, 1, 2), 1, 1, z)) <= 1e-13);
  CHECK(oracle::rel_err(weyl_m_plus(J, 2, z), oracle::resolvent_entry(sub(J, 3, 4), 0, 0, z)) <= 1e-13);
  CHECK(oracle::rel_err(weyl_m_minus(J, 2, z), 1.0 / (1.0 - z)) <= 1e-15);
}

TEST_CASE("green: formula, eigen-expansion and resolvent agree") {
  const JacobiMatrix two({0, 0}, {1});
  const cplx z = 2.0 * I;
  CHECK(oracle::rel_err(green(two, 1, z), weyl_m(two, z)) <= 1e-15);
  CHECK(oracle::rel_err(green(two, 1, z), oracle::resolvent_entry(support::tri(two), 0, 0, z)) <= 1e-14);
  CHECK(oracle::rel_err(green_spectral(two, 1, z), green(two, 1, z)) <= 1e-14);

  oracle::SplitMix rng{33};
  for (int trial = 0; trial < 50; ++trial) {
    const JacobiMatrix J = support::random_jacobi(1 + rng.next() % 15, rng);
    const EigenDecomposition eig = eigensystem(J);
    for (std::size_t n = 1; n <= J.size(); ++n) {
      const cplx w = random_z(rng);
      const cplx g = green(J, n, w);
      CHECK(oracle::rel_err(green_spectral(eig, n, w), g) <= 1e-10);
      CHECK(oracle::rel_err(g, oracle::resolvent_entry(support::tri(J), n - 1, n - 1, w)) <= 1e-10);
      if (w.imag() > 0) CHECK(g.imag() > 0.0);
    }
  }
}

TEST_CASE("green behaves like -1/z at infinity") {
  oracle::SplitMix rng{5};
  const JacobiMatrix J = support::random_jacobi(10, rng);
  for (std::size_t n : {1u, 4u, 10u}) {
    for (double y : {1e3, 1e4, 1e5, 1e6}) {
      const cplx z(0.0, y);
      CHECK(std::abs((-1.0 / z) / green(J, n, z) - 1.0) <= 10.0 / y);
    }
  }
}

TEST_CASE("green reports poles and zeros") {
  const JacobiMatrix J({0, 0}, {1});
  CHECK(code_of([&] { green_spectral(J, 1, 1.0); }) == ErrorCode::PoleHit);
  // G(z, 1) = -z/(z^2 - 1): a zero at the eigenvalue 0 of J_1^+, poles at +-1.
  CHECK(green(J, 1, 0.0) == cplx(0.0));
  CHECK(code_of([&] { green(J, 1, 1.0); }) == ErrorCode::DenominatorZero);
}

TEST_CASE("partial fractions of -1/G") {
  const JacobiMatrix J({-2, -2, -2}, {1, 1});
  const GreenInversePF pf = green_inverse_partial_fractions(J, 2);
  REQUIRE(pf.function.poles.size() == 1);
  CHECK(pf.function.poles[0] == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(pf.function.residues[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(pf.merged == std::vector<std::size_t>{0});
  CHECK(pf.function.linear == 1.0);
  CHECK(pf.function.constant == 2.0);

  const GreenInversePF first = green_inverse_partial_fractions(J, 1);
  CHECK(first.function.poles.size() == 2);
  CHECK(first.function.constant == 2.0);
  CHECK(first.function.residues[0] + first.function.residues[1] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(first.merged.empty());

  oracle::SplitMix rng{44};
  for (int trial = 0; trial < 30; ++trial) {
    const JacobiMatrix R = support::random_jacobi(2 + rng.next() % 12, rng);
    for (std::size_t n = 1; n <= R.size(); ++n) {
      const GreenInversePF f = green_inverse_partial_fractions(R, n);
      double total = 0.0;
      for (double eta : f.function.residues) total += eta;
      CHECK(std::abs(total - (R.b(n - 1) * R.b(n - 1) + R.b(n) * R.b(n))) <= 1e-12 * (1 + total));
      CHECK(check_green_candidate(f.function, n).pass());
      for (int s = 0; s < 20; ++s) {
        const cplx z = random_z(rng);
        const cplx ref = -1.0 / oracle::resolvent_entry(support::tri(R), n - 1, n - 1, z);
        CHECK(oracle::rel_err(f.function(z), ref) <= 1e-9);
      }
      // Zeros of G strictly interlace its (nonzero-weight) poles.
      const GreenFunction g = green_function(R, n);
      CHECK_NOTHROW(krein_pair_count(g.zeros, g.poles));
      for (double r : g.residues_at_poles()) CHECK(r < 0.0);
    }
  }
}

TEST_CASE("Krein product for the 2x2 m-function") {
  const std::vector<double> zeros{0.0};
  const std::vector<double> poles{-1.0, 1.0};
  const JacobiMatrix J({0, 0}, {1});
  const cplx z0(0.4, 1.3);
  const double C = (weyl_m(J, z0) / krein_product_eval(zeros, poles, 1.0, z0)).real();
  CHECK(C == doctest::Approx(-1.0).epsilon(1e-14));
  for (cplx z : {cplx(0, 1), cplx(3, -2), cplx(-0.5, 0.1)}) {
    CHECK(oracle::rel_err(krein_product_eval(zeros, poles, C, z), weyl_m(J, z)) <= 1e-14);
  }
  const std::vector<double> eta{2.0};
  const std::vector<double> lam{1.0};
  const cplx z(0.5, 0.5);
  CHECK(oracle::rel_err(krein_product_eval(eta, lam, 3.0, z), 3.0 * (1.0 - z / 2.0) / (1.0 - z)) <= 1e-15);
  CHECK(krein_pair_count(eta, lam) == 1);

  const std::vector<double> bad_zeros{0.0, 0.5};
  CHECK(code_of([&] { krein_product_eval(bad_zeros, poles, 1.0, z); }) == ErrorCode::InterlacingViolation);
}

TEST_CASE("Krein product matches m on random matrices") {
  oracle::SplitMix rng{55};
  for (int trial = 0; trial < 20; ++trial) {
    const JacobiMatrix J = support::random_jacobi(2 + rng.next() % 9, rng);
    const std::vector<double> poles = oracle::char_poly_roots(support::tri(J));
    const std::vector<double> zeros = oracle::char_poly_roots(sub(J, 2, J.size()));
    const cplx z0(0.1, 2.0);
    const cplx C = oracle::resolvent_entry(support::tri(J), 0, 0, z0) / krein_product_eval(zeros, poles, 1.0, z0);
    CHECK(std::abs(C.imag()) <= 1e-9 * std::abs(C));
    for (int s = 0; s < 5; ++s) {
      const cplx z = random_z(rng);
      CHECK(oracle::rel_err(krein_product_eval(zeros, poles, C.real(), z), weyl_m(J, z)) <= 1e-8);
    }
  }
}

TEST_CASE("inner Krein truncation converges") {
  // Growing spectrum: nodes near k^2 with weights ~ 1/k^2, so the outer
  // pairs sit close together and far from the origin.
  oracle::SplitMix rng{60};
  SpectralMeasure m;
  double total = 0.0;
  for (int k = 1; k <= 60; ++k) {
    m.nodes.push_back(k * k + 0.4 * k * (rng.uniform() - 0.5));
    m.weights.push_back((1.0 + 0.5 * rng.uniform()) / (k * k));
    total += m.weights.back();
  }
  for (double& w : m.weights) w /= total;
  const JacobiMatrix J = jacobi_from_measure(m);
  REQUIRE(J.size() == 60);
  const std::vector<double> poles = eigenvalues(J);
  const std::vector<double> zeros = eigenvalues(submatrix_plus(J, 1));
  const std::size_t pairs = krein_pair_count(zeros, poles);
  const cplx full = krein_product_eval(zeros, poles, 1.0, I);
  CHECK(std::abs(krein_product_truncated(zeros, poles, 1.0, I, pairs) - full) == 0.0);
  CHECK(std::abs(krein_product_truncated(zeros, poles, 1.0, I, 40) - full) < 1e-3 * std::abs(full));
}

TEST_CASE("check_green_candidate flags") {
  oracle::SplitMix rng{2};
  const JacobiMatrix J = support::random_jacobi(6, rng);
  HerglotzRational f = green_inverse_partial_fractions(J, 3).function;
  CHECK(check_green_candidate(f, 3).pass());

  HerglotzRational neg = f;
  neg.residues[1] = -neg.residues[1];
  const GreenCandidateReport r1 = check_green_candidate(neg, 3);
  CHECK_FALSE(r1.herglotz);
  CHECK(r1.normalized);
  CHECK(r1.min_residue < 0.0);

  HerglotzRational two = f;
  two.linear = 2.0;
  CHECK_FALSE(check_green_candidate(two, 3).normalized);

  const GreenCandidateReport few = check_green_candidate(f, f.poles.size() + 2);
  CHECK_FALSE(few.cardinality);
  CHECK(few.required_poles == f.poles.size() + 1);
}
