#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ji {

// Finite mass-spring chain anchored to a wall at the left. A chain of N
// masses carries N+1 springs: springs[0] anchors m_1 to the wall and
// springs[N] closes the truncation on the right.
class MassSpringChain {
 public:
  MassSpringChain(std::vector<double> masses, std::vector<double> springs);

  std::size_t size() const noexcept { return masses_.size(); }
  std::span<const double> masses() const noexcept { return masses_; }
  std::span<const double> springs() const noexcept { return springs_; }

  // 1-based, as in m_j and k_j.
  double mass(std::size_t j) const { return masses_.at(j - 1); }
  double spring(std::size_t j) const { return springs_.at(j - 1); }

  bool operator==(const MassSpringChain&) const = default;

 private:
  std::vector<double> masses_;
  std::vector<double> springs_;
};

// Symmetric tridiagonal matrix with strictly positive off-diagonal.
class JacobiMatrix {
 public:
  JacobiMatrix(std::vector<double> diag, std::vector<double> offdiag);

  std::size_t size() const noexcept { return diag_.size(); }
  std::span<const double> diag() const noexcept { return diag_; }
  std::span<const double> offdiag() const noexcept { return offdiag_; }

  // 1-based accessors q_j, b_j. b(0) and b(N) are 0 (no coupling).
  double q(std::size_t j) const { return diag_.at(j - 1); }
  double b(std::size_t j) const {
    return (j == 0 || j >= diag_.size()) ? 0.0 : offdiag_[j - 1];
  }

  // Leading k x k block.
  JacobiMatrix leading(std::size_t k) const;
  // Rows/columns first..last (1-based, inclusive).
  JacobiMatrix block(std::size_t first, std::size_t last) const;
  // Matrix with the basis order reversed, so the last coordinate becomes the first.
  JacobiMatrix reversed() const;

  // Infinity norm (max absolute row sum).
  double norm() const noexcept;

  bool operator==(const JacobiMatrix&) const = default;

 private:
  std::vector<double> diag_;
  std::vector<double> offdiag_;
};

// Interior perturbation at site n: b_{n-1} -> theta b_{n-1},
// q_n -> theta^2 (q_n + h), b_n -> theta b_n.
struct Perturbation {
  std::size_t site = 1;
  double theta = 1.0;
  double h = 0.0;

  // Throws InvalidInput unless site >= 1, theta > 0 and both finite.
  void validate() const;
  // theta^2 h / (1 - theta^2); throws ThetaOne when theta == 1.
  double gamma() const;
};

struct PhysicalIncrement {
  double delta_m;
  double delta_k;
};

JacobiMatrix chain_to_jacobi(const MassSpringChain& chain);

// Inverts chain_to_jacobi given the two normalization constants m_1, k_1.
// Throws NonPhysical if some recovered spring or mass is not positive.
MassSpringChain jacobi_to_chain(const JacobiMatrix& J, double m1 = 1.0, double k1 = 1.0);

JacobiMatrix apply_perturbation(const JacobiMatrix& J, const Perturbation& p);

// Mass and grounded-spring increments at site n realising the perturbation.
PhysicalIncrement perturbation_physics(const Perturbation& p, double mass_n);

double gamma_of(double theta, double shift);

}  // namespace ji
