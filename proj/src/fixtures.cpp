#include "ji/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ji/error.hpp"
#include "ji/inverse_solver.hpp"
#include "ji/tridiag_eig.hpp"

namespace ji {

FixtureKind parse_fixture_kind(const std::string& name) {
  if (name == "uniform") return FixtureKind::Uniform;
  if (name == "random-loguniform") return FixtureKind::RandomLogUniform;
  if (name == "palindromic") return FixtureKind::Palindromic;
  if (name == "common-spectrum") return FixtureKind::CommonSpectrum;
  fail(ErrorCode::InvalidInput, "unknown fixture kind '" + name +
                                    "' (uniform, random-loguniform, palindromic, common-spectrum)");
}

std::string to_string(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::Uniform: return "uniform";
    case FixtureKind::RandomLogUniform: return "random-loguniform";
    case FixtureKind::Palindromic: return "palindromic";
    case FixtureKind::CommonSpectrum: return "common-spectrum";
  }
  return "uniform";
}

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

MassSpringChain random_chain(std::size_t size, Rng& rng, double lo, double hi) {
  std::vector<double> m(size);
  std::vector<double> k(size + 1);
  for (double& x : m) x = rng.log_uniform(lo, hi);
  for (double& x : k) x = rng.log_uniform(lo, hi);
  return MassSpringChain(std::move(m), std::move(k));
}

std::size_t common_spectrum_site(std::size_t size) { return std::max<std::size_t>(2, size / 2); }

namespace {

MassSpringChain palindromic(std::size_t size, Rng& rng) {
  std::vector<double> m(size);
  std::vector<double> k(size + 1);
  for (std::size_t j = 0; j < (size + 1) / 2; ++j) m[j] = m[size - 1 - j] = rng.log_uniform(0.5, 2.0);
  for (std::size_t j = 0; j < (size + 2) / 2; ++j) k[j] = k[size - j] = rng.log_uniform(0.5, 2.0);
  return MassSpringChain(std::move(m), std::move(k));
}

// Rebuilds J_n^+ with one node moved onto an eigenvalue of J_n^-, then shifts
// the whole matrix down until it is a chain again.
MassSpringChain common_spectrum(std::size_t size, Rng& rng) {
  if (size < 3) fail(ErrorCode::InvalidInput, "common-spectrum fixture needs N >= 3");
  const std::size_t n = common_spectrum_site(size);
  const MassSpringChain base = random_chain(size, rng);
  const JacobiMatrix J = chain_to_jacobi(base);

  const std::vector<double> minus = eigenvalues(J.leading(n - 1));
  const double target = minus[(minus.size() - 1) / 2];
  SpectralMeasure plus = spectral_measure(J.block(n + 1, size));
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < plus.size(); ++i) {
    if (std::abs(plus.nodes[i] - target) < std::abs(plus.nodes[nearest] - target)) nearest = i;
  }
  plus.nodes[nearest] = target;
  std::vector<std::size_t> order(plus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return plus.nodes[a] < plus.nodes[b]; });
  SpectralMeasure sorted;
  for (std::size_t i : order) {
    sorted.nodes.push_back(plus.nodes[i]);
    sorted.weights.push_back(plus.weights[i]);
  }
  const JacobiMatrix Jp = jacobi_from_measure(sorted);

  std::vector<double> diag(J.diag().begin(), J.diag().begin() + static_cast<long>(n));
  diag.insert(diag.end(), Jp.diag().begin(), Jp.diag().end());
  std::vector<double> off(J.offdiag().begin(), J.offdiag().begin() + static_cast<long>(n));
  off.insert(off.end(), Jp.offdiag().begin(), Jp.offdiag().end());

  const double scale = spectral_scale(J);
  double shift = 0.0;
  for (int attempt = 0; attempt < 60; ++attempt) {
    std::vector<double> d = diag;
    for (double& q : d) q -= shift;
    try {
      return jacobi_to_chain(JacobiMatrix(d, off), base.mass(1), base.spring(1));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonPhysical) throw;
    }
    shift = shift == 0.0 ? 0.125 * scale : 2.0 * shift;
  }
  fail(ErrorCode::NonPhysical, "could not realise the common-spectrum matrix as a chain");
}

}  // namespace

MassSpringChain make_fixture(FixtureKind kind, std::size_t size, std::uint64_t seed) {
  if (size < 1) fail(ErrorCode::InvalidInput, "fixture size must be >= 1");
  Rng rng(seed);
  switch (kind) {
    case FixtureKind::Uniform:
      return MassSpringChain(std::vector<double>(size, 1.0), std::vector<double>(size + 1, 1.0));
    case FixtureKind::RandomLogUniform: return random_chain(size, rng);
    case FixtureKind::Palindromic: return palindromic(size, rng);
    case FixtureKind::CommonSpectrum: return common_spectrum(size, rng);
  }
  fail(ErrorCode::InvalidInput, "unknown fixture kind");
}

}  // namespace ji
