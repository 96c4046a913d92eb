#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ji/chain_model.hpp"
#include "ji/tridiag_eig.hpp"

namespace ji {

// f(z) = linear*z + constant + sum_j residues[j] / (poles[j] - z).
// With positive residues and linear >= 0 this is a Herglotz function.
struct HerglotzRational {
  std::vector<double> poles;
  std::vector<double> residues;
  double linear = 0.0;
  double constant = 0.0;

  cplx operator()(cplx z) const;
};

// n-th Green function in partial-fraction form:
//   G(z) = sum_j weights[j] / (poles[j] - z),  weights = pi_n^2 rho > 0,
// so the residue of G at poles[j] is -weights[j]. `zeros` and
// `zero_residues` describe -1/G = z - q_n + sum eta_k / (alpha_k - z).
struct GreenFunction {
  std::size_t site = 1;
  std::vector<double> poles;
  std::vector<double> weights;
  std::vector<double> zeros;
  std::vector<double> zero_residues;

  cplx operator()(cplx z) const;
  std::vector<double> residues_at_poles() const;
};

// m(z) = <delta_1, (J - z)^{-1} delta_1>, by backward continued fraction.
// Throws PoleHit when z is (numerically) an eigenvalue of J.
cplx weyl_m(const JacobiMatrix& J, cplx z);

// Rows/columns n+1..N.
JacobiMatrix submatrix_plus(const JacobiMatrix& J, std::size_t site);
// Leading (n-1) x (n-1) block; rejects n = 1.
JacobiMatrix submatrix_minus(const JacobiMatrix& J, std::size_t site);

// m-function of J_n^- anchored at delta_{n-1}; identically 0 for n = 1.
cplx weyl_m_minus(const JacobiMatrix& J, std::size_t site, cplx z);
// m-function of J_n^+ anchored at delta_{n+1}; 0 for n = N (no coupling).
cplx weyl_m_plus(const JacobiMatrix& J, std::size_t site, cplx z);

// G(z, n) = -1 / (b_n^2 m_n^+ + b_{n-1}^2 m_n^- + z - q_n).
cplx green(const JacobiMatrix& J, std::size_t site, cplx z);
// G(z, n) = sum_j pi_n^2(t_j) rho{t_j} / (t_j - z) from the eigen-decomposition.
cplx green_spectral(const JacobiMatrix& J, std::size_t site, cplx z);
cplx green_spectral(const EigenDecomposition& eig, std::size_t site, cplx z);

// -G(z,n)^{-1} as z - q_n + sum eta_k / (alpha_k - z). Poles of J_n^- and J_n^+
// closer than merge_rel * scale are summed into one pole; their indices are
// reported in `merged`.
struct GreenInversePF {
  HerglotzRational function;
  std::vector<std::size_t> merged;
  SpectralMeasure minus;  // b_{n-1}^2-scaled contribution of J_n^-
  SpectralMeasure plus;   // b_n^2-scaled contribution of J_n^+
};

GreenInversePF green_inverse_partial_fractions(const JacobiMatrix& J, std::size_t site,
                                               double merge_rel = 1e-9);

// Full pole/zero data of G(., n) for a concrete matrix.
GreenFunction green_function(const JacobiMatrix& J, std::size_t site, double merge_rel = 1e-9);

// C * prod over interlacing zero/pole pairs, using (z - eta)/(z - lambda) for a
// pair that contains 0 and (1 - z/eta)/(1 - z/lambda) otherwise. Unpaired end
// points contribute 1/(z - lambda) or (z - eta). Throws InterlacingViolation
// unless zeros and poles strictly alternate.
cplx krein_product_eval(std::span<const double> zeros, std::span<const double> poles, double C,
                        cplx z);

// Same as krein_product_eval but keeps only the `keep` pairs closest to the
// origin (unpaired end points are always kept).
cplx krein_product_truncated(std::span<const double> zeros, std::span<const double> poles,
                             double C, cplx z, std::size_t keep);

// Number of zero/pole pairs formed by krein_product_eval.
std::size_t krein_pair_count(std::span<const double> zeros, std::span<const double> poles);

// Diagnostic of whether the data of -G^{-1} can belong to an n-th Green function.
struct GreenCandidateReport {
  bool herglotz = false;    // all eta_k >= 0
  bool normalized = false;  // linear coefficient 1
  bool cardinality = false; // at least n - 1 poles available for the J_n^- block
  double min_residue = 0.0;
  double linear_coeff = 0.0;
  std::size_t pole_count = 0;
  std::size_t required_poles = 0;

  bool pass() const noexcept { return herglotz && normalized && cardinality; }
};

GreenCandidateReport check_green_candidate(const HerglotzRational& inverse_green,
                                           std::size_t site);

}  // namespace ji
