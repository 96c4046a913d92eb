// Helpers shared by the test binaries.
#pragma once

#include <span>
#include <vector>

#include "ji/chain_model.hpp"
#include "ji/error.hpp"
#include "oracles.hpp"

namespace support {

inline oracle::Tri tri(const ji::JacobiMatrix& J) {
  return {std::vector<double>(J.diag().begin(), J.diag().end()),
          std::vector<double>(J.offdiag().begin(), J.offdiag().end())};
}

// Random Jacobi matrix with q in [-3, 3] and b in [0.2, 2].
inline ji::JacobiMatrix random_jacobi(std::size_t n, oracle::SplitMix& rng) {
  std::vector<double> q(n);
  std::vector<double> b(n > 0 ? n - 1 : 0);
  for (double& x : q) x = rng.uniform(-3.0, 3.0);
  for (double& x : b) x = rng.uniform(0.2, 2.0);
  return ji::JacobiMatrix(q, b);
}

// Random chain with masses and springs in [0.5, 2].
inline ji::MassSpringChain random_chain(std::size_t n, oracle::SplitMix& rng) {
  std::vector<double> m(n);
  std::vector<double> k(n + 1);
  for (double& x : m) x = rng.uniform(0.5, 2.0);
  for (double& x : k) x = rng.uniform(0.5, 2.0);
  return ji::MassSpringChain(m, k);
}

// Code of the ji::Error thrown by f, or ErrorCode{} when nothing is thrown.
inline ji::ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const ji::Error& e) {
    return e.code();
  }
  return ji::ErrorCode{};
}

inline std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? d : 1e300;
}

}  // namespace support
