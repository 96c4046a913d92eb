#include "ji/direct_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ji/error.hpp"
#include "ji/green_weyl.hpp"

namespace ji {

std::vector<double> TwoSpectraData::paired_lambdas() const {
  std::vector<double> out;
  out.reserve(pairing.size());
  for (const auto& [i, j] : pairing) out.push_back(lambda_noncommon[i]);
  return out;
}

std::vector<double> TwoSpectraData::paired_mus() const {
  std::vector<double> out;
  out.reserve(pairing.size());
  for (const auto& [i, j] : pairing) out.push_back(mu_noncommon[j]);
  return out;
}

SpectraSplit split_spectra(std::span<const double> lambdas, std::span<const double> mus,
                           double tol) {
  SpectraSplit out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < lambdas.size() && j < mus.size()) {
    const double d = lambdas[i] - mus[j];
    if (std::abs(d) <= tol) {
      out.common.push_back(lambdas[i]);
      ++i;
      ++j;
    } else if (d < 0) {
      out.lambda_noncommon.push_back(lambdas[i++]);
    } else {
      out.mu_noncommon.push_back(mus[j++]);
    }
  }
  for (; i < lambdas.size(); ++i) out.lambda_noncommon.push_back(lambdas[i]);
  for (; j < mus.size(); ++j) out.mu_noncommon.push_back(mus[j]);
  return out;
}

GammaPairing gamma_pairing(std::span<const double> lambdas, std::span<const double> mus,
                           double gamma, double theta) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  GammaPairing out;
  const std::size_t count = std::min(lambdas.size(), mus.size());
  for (std::size_t k = 0; k < count; ++k) out.pairs.emplace_back(k, k);
  if (theta == 1.0) return out;

  const bool attractor = theta < 1.0;
  const std::size_t p = lambdas.size();
  for (std::size_t i = 0; i < p; ++i) {
    const double lam = lambdas[i];
    const double prev = i == 0 ? -inf : lambdas[i - 1];
    const double next = i + 1 == p ? inf : lambdas[i + 1];
    double lo;
    double hi;
    if (lam < gamma) {
      lo = attractor ? lam : prev;
      hi = attractor ? std::min(next, gamma) : lam;
    } else {
      lo = attractor ? std::max(prev, gamma) : lam;
      hi = attractor ? lam : next;
    }
    const auto first = std::upper_bound(mus.begin(), mus.end(), lo);
    const auto last = std::lower_bound(mus.begin(), mus.end(), hi);
    const long inside = std::max<long>(0, last - first);
    const bool ok = inside == 1 && i < mus.size() && mus[i] > lo && mus[i] < hi;
    if (!ok) {
      if (out.violations == 0) {
        out.bad_lo = lo;
        out.bad_hi = hi;
      }
      ++out.violations;
    }
  }
  if (mus.size() != p) ++out.violations;
  return out;
}

cplx ratio_M(const JacobiMatrix& J, const Perturbation& p, cplx z) {
  const JacobiMatrix Jt = apply_perturbation(J, p);
  return green(J, p.site, z) / green(Jt, p.site, z);
}

double master_formula_residual(const JacobiMatrix& J, const Perturbation& p, cplx z) {
  const double gamma = p.gamma();
  const double t2 = p.theta * p.theta;
  const cplx M = ratio_M(J, p, z);
  return std::abs(M - t2 - (1.0 - t2) * (gamma - z) * green(J, p.site, z));
}

TwoSpectraData classify_two_spectra(const JacobiMatrix& J, const Perturbation& p,
                                    double common_rel) {
  TwoSpectraData d;
  d.gamma = p.gamma();
  d.theta = p.theta;
  d.site = p.site;
  const EigenDecomposition eig = eigensystem(J);
  const auto values = eig.eigenvalues();
  d.spectrum_J.assign(values.begin(), values.end());
  d.spectrum_Jt = eigenvalues(apply_perturbation(J, p));

  std::vector<double> all = d.spectrum_J;
  all.insert(all.end(), d.spectrum_Jt.begin(), d.spectrum_Jt.end());
  const double tol = common_rel * spread(all);
  SpectraSplit s = split_spectra(d.spectrum_J, d.spectrum_Jt, tol);
  d.common = std::move(s.common);
  d.lambda_noncommon = std::move(s.lambda_noncommon);
  d.mu_noncommon = std::move(s.mu_noncommon);

  GammaPairing gp = gamma_pairing(d.lambda_noncommon, d.mu_noncommon, d.gamma, d.theta);
  d.pairing = std::move(gp.pairs);
  d.violations = gp.violations;

  const std::vector<double> comps = eig.nth_components(p.site);
  for (double c : d.common) {
    if (std::abs(c - d.gamma) <= tol) continue;
    const auto it = std::lower_bound(values.begin(), values.end(), c - tol);
    if (it == values.end()) continue;
    const double w = comps[static_cast<std::size_t>(it - values.begin())];
    d.common_weight_max = std::max(d.common_weight_max, w * w);
  }
  return d;
}

cplx product_form_eval(const TwoSpectraData& data, cplx z) {
  cplx value = 1.0;
  for (const auto& [i, j] : data.pairing) {
    value *= (z - data.mu_noncommon[j]) / (z - data.lambda_noncommon[i]);
  }
  return value;
}

EigenDerivatives eigenvalue_derivatives(const JacobiMatrix& J, const Perturbation& p,
                                        std::size_t k) {
  const JacobiMatrix Jt = apply_perturbation(J, p);
  if (k >= Jt.size()) fail(ErrorCode::InvalidInput, "eigen index out of range");
  const EigenDecomposition eig = eigensystem(Jt);
  const auto values = eig.eigenvalues();
  const double gap_tol = 1e-13 * spread(values);
  if ((k > 0 && values[k] - values[k - 1] <= gap_tol) ||
      (k + 1 < values.size() && values[k + 1] - values[k] <= gap_tol)) {
    fail(ErrorCode::DegenerateEigenvalue, "eigenvalue " + std::to_string(k) + " is not simple");
  }
  // pi = v / v_1 and ||pi||^2 = 1 / v_1^2, so pi_j pi_l / ||pi||^2 = v_j v_l.
  const auto v = eig.eigenvector(k);
  const std::size_t n = p.site;
  const double vn = v[n - 1];
  const double vprev = n >= 2 ? v[n - 2] : 0.0;
  const double vnext = n < v.size() ? v[n] : 0.0;
  EigenDerivatives d;
  d.dlambda_dtheta = 2.0 * vn * (J.b(n - 1) * vprev + J.b(n) * vnext + vn * p.theta * (J.q(n) + p.h));
  d.dlambda_dh = p.theta * p.theta * vn * vn;
  return d;
}

std::vector<ShiftSum> shift_sum_diagnostic(const JacobiMatrix& J, const Perturbation& p,
                                           std::span<const std::size_t> sizes) {
  std::vector<ShiftSum> out;
  for (std::size_t size : sizes) {
    if (size > J.size()) {
      fail(ErrorCode::InvalidInput, "truncation size " + std::to_string(size) + " exceeds N = " +
                                        std::to_string(J.size()));
    }
    const JacobiMatrix Jk = J.leading(size);
    const std::vector<double> lam = eigenvalues(Jk);
    const std::vector<double> mu = eigenvalues(apply_perturbation(Jk, p));
    std::vector<double> all = lam;
    all.insert(all.end(), mu.begin(), mu.end());
    const SpectraSplit s = split_spectra(lam, mu, 1e-9 * spread(all));
    const std::size_t pairs = std::min(s.lambda_noncommon.size(), s.mu_noncommon.size());
    ShiftSum row{size, 0.0, 0.0, pairs};
    const std::size_t tail_from = pairs - pairs / 4;
    for (std::size_t k = 0; k < pairs; ++k) {
      const double shift = std::abs(s.mu_noncommon[k] - s.lambda_noncommon[k]);
      row.sum += shift;
      if (k >= tail_from) row.tail += shift;
    }
    out.push_back(row);
  }
  return out;
}

double mass_ratio_at(const TwoSpectraData& data, double lam) {
  const double tol = 1e-12 * spread(data.spectrum_J);
  double value = 1.0;
  for (const auto& [i, j] : data.pairing) {
    const double l = data.lambda_noncommon[i];
    if (std::abs(lam - l) <= tol) {
      fail(ErrorCode::PoleHit, "point " + std::to_string(lam) + " is a noncommon eigenvalue");
    }
    value *= (lam - data.mu_noncommon[j]) / (lam - l);
  }
  return value;
}

}  // namespace ji
