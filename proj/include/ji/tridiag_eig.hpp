#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ji/chain_model.hpp"

namespace ji {

using cplx = std::complex<double>;

// Discrete measure: strictly increasing nodes with positive weights.
struct SpectralMeasure {
  std::vector<double> nodes;
  std::vector<double> weights;

  double total() const noexcept;
  std::size_t size() const noexcept { return nodes.size(); }
};

// Eigenvalues (ascending) and orthonormal eigenvectors of a Jacobi matrix.
// Each eigenvector is signed so that its first component is positive.
class EigenDecomposition {
 public:
  EigenDecomposition(std::vector<double> values, std::vector<double> vectors);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> eigenvalues() const noexcept { return values_; }
  std::span<const double> eigenvector(std::size_t k) const;

  // Entry `site` (1-based) of every normalized eigenvector.
  std::vector<double> nth_components(std::size_t site) const;
  std::vector<double> first_components() const { return nth_components(1); }

 private:
  std::vector<double> values_;
  std::vector<double> vectors_;  // column k holds eigenvector k
};

struct EigenOptions {
  // Inverse-iteration sweeps allowed per eigenvalue.
  int max_sweeps = 50;
};

// Weights at or below this value are treated as exact zeros (pi_n(t) = 0).
inline constexpr double kZeroWeight = 1e-20;

// Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
std::size_t sturm_count(const JacobiMatrix& J, double x);

// Eigenvalues only, by bisection.
std::vector<double> eigenvalues(const JacobiMatrix& J);

EigenDecomposition eigensystem(const JacobiMatrix& J, const EigenOptions& options = {});

SpectralMeasure spectral_measure(const JacobiMatrix& J);
SpectralMeasure spectral_measure(const EigenDecomposition& eig);

// Measure pi_n^2 d rho anchored at delta_n; nodes where pi_n vanishes are dropped.
SpectralMeasure site_measure(const JacobiMatrix& J, std::size_t site);
SpectralMeasure site_measure(const EigenDecomposition& eig, std::size_t site);

// pi_1(z) .. pi_upto(z): polynomials of the first kind (pi_1 = 1).
std::vector<cplx> eval_first_kind(const JacobiMatrix& J, cplx z, std::size_t upto);
// xi_1(z) .. xi_upto(z): polynomials of the second kind (xi_1 = 0, xi_2 = 1/b_1).
std::vector<cplx> eval_second_kind(const JacobiMatrix& J, cplx z, std::size_t upto);

// max - min of a non-empty list, or 1 when the list is degenerate.
double spread(std::span<const double> values) noexcept;

// Scale used for relative spectral tolerances: spread of the Gershgorin
// enclosure, or 1 for degenerate (zero-width) cases.
double spectral_scale(const JacobiMatrix& J) noexcept;

// True when J has an eigenvalue within `radius` of the real point x.
bool has_eigenvalue_near(const JacobiMatrix& J, double x, double radius);

}  // namespace ji
