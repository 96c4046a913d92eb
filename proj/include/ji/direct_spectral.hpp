#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ji/chain_model.hpp"
#include "ji/tridiag_eig.hpp"

namespace ji {

// sigma(J) vs sigma(J~_n): common part, noncommon parts and their pairing
// around gamma. pairing[k] = (index into lambda_noncommon, index into mu_noncommon).
struct TwoSpectraData {
  std::vector<double> spectrum_J;
  std::vector<double> spectrum_Jt;
  std::vector<double> common;
  std::vector<double> lambda_noncommon;
  std::vector<double> mu_noncommon;
  std::vector<std::pair<std::size_t, std::size_t>> pairing;
  double gamma = 0.0;
  double theta = 1.0;
  std::size_t site = 1;
  // Noncommon eigenvalues whose gap does not hold exactly one partner.
  std::size_t violations = 0;
  // max pi_n(c)^2 rho{c} over common c away from gamma; G(c, n) = 0 makes this ~0.
  double common_weight_max = 0.0;

  std::vector<double> paired_lambdas() const;
  std::vector<double> paired_mus() const;
};

struct SpectraSplit {
  std::vector<double> common;
  std::vector<double> lambda_noncommon;
  std::vector<double> mu_noncommon;
};

// Matches the two sorted lists within `tol`; matched values go to `common`.
SpectraSplit split_spectra(std::span<const double> lambdas, std::span<const double> mus,
                           double tol);

struct GammaPairing {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t violations = 0;
  // Gap of the first violation, for error messages.
  double bad_lo = 0.0;
  double bad_hi = 0.0;
};

// For theta < 1 each lambda below gamma owns the gap toward gamma on its
// right, each lambda above gamma the gap on its left. For theta > 1 the
// gaps point away from gamma. Pairs are by rank; violations are counted.
GammaPairing gamma_pairing(std::span<const double> lambdas, std::span<const double> mus,
                           double gamma, double theta);

// G(z, n) / G~(z, n).
cplx ratio_M(const JacobiMatrix& J, const Perturbation& p, cplx z);

// |M_n(z) - theta^2 - (1 - theta^2)(gamma - z) G(z, n)|.
double master_formula_residual(const JacobiMatrix& J, const Perturbation& p, cplx z);

TwoSpectraData classify_two_spectra(const JacobiMatrix& J, const Perturbation& p,
                                    double common_rel = 1e-9);

// prod_k (z - mu_k)/(z - lambda_k) over the pairing.
cplx product_form_eval(const TwoSpectraData& data, cplx z);

struct EigenDerivatives {
  double dlambda_dtheta;
  double dlambda_dh;
};

// Derivatives of the k-th (0-based, ascending) eigenvalue of J~_n in theta and h.
EigenDerivatives eigenvalue_derivatives(const JacobiMatrix& J, const Perturbation& p,
                                        std::size_t k);

struct ShiftSum {
  std::size_t size;
  double sum;   // sum |mu_k - lambda_k| over the pairing
  double tail;  // the same over the top quartile of pair indices
  std::size_t pairs;
};

// Runs the comparison on the leading blocks of J of the given sizes.
std::vector<ShiftSum> shift_sum_diagnostic(const JacobiMatrix& J, const Perturbation& p,
                                           std::span<const std::size_t> sizes);

// prod_k (lam - mu_k)/(lam - lambda_k); equals theta^2 at gamma and at common points.
double mass_ratio_at(const TwoSpectraData& data, double lam);

}  // namespace ji
