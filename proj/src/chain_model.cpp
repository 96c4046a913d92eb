#include "ji/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ji/error.hpp"

namespace ji {

namespace {

bool all_positive_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; });
}

std::string index_message(const char* what, std::size_t index, double value) {
  std::ostringstream os;
  os << what << " " << index << " = " << value;
  return os.str();
}

}  // namespace

MassSpringChain::MassSpringChain(std::vector<double> masses, std::vector<double> springs)
    : masses_(std::move(masses)), springs_(std::move(springs)) {
  if (masses_.empty()) fail(ErrorCode::InvalidInput, "chain needs at least one mass");
  if (springs_.size() != masses_.size() + 1) {
    fail(ErrorCode::InvalidInput, "chain with " + std::to_string(masses_.size()) +
                                      " masses needs " + std::to_string(masses_.size() + 1) +
                                      " springs, got " + std::to_string(springs_.size()));
  }
  if (!all_positive_finite(masses_)) fail(ErrorCode::InvalidInput, "masses must be positive");
  if (!all_positive_finite(springs_)) fail(ErrorCode::InvalidInput, "springs must be positive");
}

JacobiMatrix::JacobiMatrix(std::vector<double> diag, std::vector<double> offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
  if (diag_.empty()) fail(ErrorCode::InvalidInput, "Jacobi matrix must be at least 1x1");
  if (offdiag_.size() + 1 != diag_.size()) {
    fail(ErrorCode::InvalidInput, "off-diagonal of a " + std::to_string(diag_.size()) +
                                      "x" + std::to_string(diag_.size()) + " matrix needs " +
                                      std::to_string(diag_.size() - 1) + " entries");
  }
  for (std::size_t j = 0; j < diag_.size(); ++j) {
    if (!std::isfinite(diag_[j])) fail(ErrorCode::InvalidInput, index_message("q", j + 1, diag_[j]));
  }
  for (std::size_t j = 0; j < offdiag_.size(); ++j) {
    if (!(std::isfinite(offdiag_[j]) && offdiag_[j] > 0.0)) {
      fail(ErrorCode::InvalidInput, index_message("b", j + 1, offdiag_[j]) + " must be > 0");
    }
  }
}

JacobiMatrix JacobiMatrix::leading(std::size_t k) const { return block(1, k); }

JacobiMatrix JacobiMatrix::block(std::size_t first, std::size_t last) const {
  if (first < 1 || last < first || last > size()) {
    fail(ErrorCode::InvalidInput, "block [" + std::to_string(first) + ", " +
                                      std::to_string(last) + "] outside 1.." +
                                      std::to_string(size()));
  }
  std::vector<double> d(diag_.begin() + static_cast<std::ptrdiff_t>(first - 1),
                        diag_.begin() + static_cast<std::ptrdiff_t>(last));
  std::vector<double> b(offdiag_.begin() + static_cast<std::ptrdiff_t>(first - 1),
                        offdiag_.begin() + static_cast<std::ptrdiff_t>(last - 1));
  return JacobiMatrix(std::move(d), std::move(b));
}

JacobiMatrix JacobiMatrix::reversed() const {
  return JacobiMatrix(std::vector<double>(diag_.rbegin(), diag_.rend()),
                      std::vector<double>(offdiag_.rbegin(), offdiag_.rend()));
}

double JacobiMatrix::norm() const noexcept {
  double best = 0.0;
  for (std::size_t j = 1; j <= size(); ++j) {
    best = std::max(best, std::abs(q(j)) + b(j - 1) + b(j));
  }
  return best;
}

void Perturbation::validate() const {
  if (site < 1) fail(ErrorCode::InvalidInput, "perturbation site must be >= 1");
  if (!(std::isfinite(theta) && theta > 0.0)) {
    fail(ErrorCode::InvalidInput, "theta must be positive, got " + std::to_string(theta));
  }
  if (!std::isfinite(h)) fail(ErrorCode::InvalidInput, "h must be finite");
}

double Perturbation::gamma() const { return gamma_of(theta, h); }

JacobiMatrix chain_to_jacobi(const MassSpringChain& chain) {
  const std::size_t n = chain.size();
  std::vector<double> q(n);
  std::vector<double> b(n - 1);
  for (std::size_t j = 1; j <= n; ++j) {
    q[j - 1] = -(chain.spring(j + 1) + chain.spring(j)) / chain.mass(j);
    if (j < n) b[j - 1] = chain.spring(j + 1) / std::sqrt(chain.mass(j) * chain.mass(j + 1));
  }
  return JacobiMatrix(std::move(q), std::move(b));
}

MassSpringChain jacobi_to_chain(const JacobiMatrix& J, double m1, double k1) {
  if (!(m1 > 0.0 && k1 > 0.0 && std::isfinite(m1) && std::isfinite(k1))) {
    fail(ErrorCode::InvalidInput, "normalization constants m1, k1 must be positive");
  }
  const std::size_t n = J.size();
  std::vector<double> masses(n);
  std::vector<double> springs(n + 1);
  masses[0] = m1;
  springs[0] = k1;
  for (std::size_t j = 1; j <= n; ++j) {
    const double k_next = -J.q(j) * masses[j - 1] - springs[j - 1];
    if (!(k_next > 0.0)) fail(ErrorCode::NonPhysical, index_message("recovered k", j + 1, k_next));
    springs[j] = k_next;
    if (j < n) {
      const double ratio = k_next / J.b(j);
      const double m_next = ratio * ratio / masses[j - 1];
      if (!(m_next > 0.0) || !std::isfinite(m_next)) {
        fail(ErrorCode::NonPhysical, index_message("recovered m", j + 1, m_next));
      }
      masses[j] = m_next;
    }
  }
  return MassSpringChain(std::move(masses), std::move(springs));
}

JacobiMatrix apply_perturbation(const JacobiMatrix& J, const Perturbation& p) {
  p.validate();
  if (p.site > J.size() - 1 || J.size() < 2) {
    fail(ErrorCode::InvalidInput, "perturbation site " + std::to_string(p.site) +
                                      " needs b_n; matrix size is " + std::to_string(J.size()));
  }
  std::vector<double> d(J.diag().begin(), J.diag().end());
  std::vector<double> b(J.offdiag().begin(), J.offdiag().end());
  const std::size_t n = p.site;
  if (n >= 2) b[n - 2] *= p.theta;
  d[n - 1] = p.theta * p.theta * (d[n - 1] + p.h);
  b[n - 1] *= p.theta;
  return JacobiMatrix(std::move(d), std::move(b));
}

PhysicalIncrement perturbation_physics(const Perturbation& p, double mass_n) {
  if (!(p.theta > 0.0)) fail(ErrorCode::InvalidInput, "theta must be positive");
  return {mass_n * (1.0 / (p.theta * p.theta) - 1.0), -p.h * mass_n};
}

double gamma_of(double theta, double shift) {
  if (theta == 1.0) fail(ErrorCode::ThetaOne, "gamma is undefined for theta = 1");
  const double t2 = theta * theta;
  return t2 * shift / (1.0 - t2);
}

}  // namespace ji
