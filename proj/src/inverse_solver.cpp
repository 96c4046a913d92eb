#include "ji/inverse_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ji/direct_spectral.hpp"
#include "ji/error.hpp"

namespace ji {

namespace {

constexpr int kBisectionIters = 200;
constexpr double kBisectionRel = 1e-13;

std::string gap_text(double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << lo << ", " << hi << ")";
  return os.str();
}

bool strictly_increasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i - 1] < v[i])) return false;
  }
  return true;
}

double binomial(std::size_t m, std::size_t k) {
  if (k > m) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(m - k + i) / static_cast<double>(i);
  return std::round(r);
}

bool next_combination(std::vector<std::size_t>& c, std::size_t m) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < m - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

bool next_tuple(std::vector<std::size_t>& t, std::size_t base) {
  for (std::size_t i = t.size(); i-- > 0;) {
    if (++t[i] < base) return true;
    t[i] = 0;
  }
  return false;
}

double all_spread(std::span<const double> a, std::span<const double> b) {
  std::vector<double> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return spread(all);
}

}  // namespace

cplx NFunction::operator()(cplx z) const {
  cplx v = 1.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) v *= (z - mus[k]) / (z - lambdas[k]);
  return v;
}

double NFunction::value(double x) const {
  double v = 1.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) v *= (x - mus[k]) / (x - lambdas[k]);
  return v;
}

double NFunction::derivative(double x) const {
  const std::size_t K = lambdas.size();
  std::vector<double> prefix(K + 1, 1.0);
  std::vector<double> suffix(K + 1, 1.0);
  for (std::size_t k = 0; k < K; ++k) prefix[k + 1] = prefix[k] * (x - mus[k]) / (x - lambdas[k]);
  for (std::size_t k = K; k-- > 0;) suffix[k] = suffix[k + 1] * (x - mus[k]) / (x - lambdas[k]);
  double d = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double den = x - lambdas[k];
    d += (mus[k] - lambdas[k]) / (den * den) * prefix[k] * suffix[k + 1];
  }
  return d;
}

double NFunction::residue(std::size_t k) const {
  const double x = lambdas.at(k);
  double r = x - mus[k];
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    if (j != k) r *= (x - mus[j]) / (x - lambdas[j]);
  }
  return r;
}

NFunction build_N(std::span<const double> lambdas, std::span<const double> mus, double gamma) {
  if (lambdas.size() != mus.size()) {
    fail(ErrorCode::InterlacingViolation,
         "noncommon sets differ in size: " + std::to_string(lambdas.size()) + " vs " +
             std::to_string(mus.size()));
  }
  if (!strictly_increasing(lambdas) || !strictly_increasing(mus)) {
    fail(ErrorCode::InvalidInput, "eigenvalue lists must be strictly increasing");
  }
  const GammaPairing gp = gamma_pairing(lambdas, mus, gamma, 0.5);
  if (gp.violations > 0) {
    fail(ErrorCode::InterlacingViolation,
         "gap " + gap_text(gp.bad_lo, gp.bad_hi) + " does not hold exactly one perturbed eigenvalue");
  }
  NFunction N;
  N.lambdas.assign(lambdas.begin(), lambdas.end());
  N.mus.assign(mus.begin(), mus.end());
  N.gamma = gamma;
  return N;
}

double recover_theta(const NFunction& N) {
  const double tol = 1e-12 * spread(N.lambdas);
  for (double l : N.lambdas) {
    if (std::abs(l - N.gamma) <= tol) {
      fail(ErrorCode::GammaIsPole, "gamma = " + std::to_string(N.gamma) + " is an eigenvalue of J");
    }
  }
  const double v = N.value(N.gamma);
  if (!(v > 0.0)) fail(ErrorCode::InterlacingViolation, "N(gamma) is not positive");
  return std::sqrt(v);
}

cplx ReconstructedGreen::operator()(cplx z) const {
  const double t2 = theta * theta;
  return (N(z) - t2) / ((t2 - 1.0) * (z - N.gamma));
}

double ReconstructedGreen::real_value(double x) const {
  double g = 0.0;
  for (std::size_t j = 0; j < poles.size(); ++j) g += weights[j] / (poles[j] - x);
  return g;
}

double ReconstructedGreen::weight_total() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

ReconstructedGreen reconstruct_green(const NFunction& N, double theta) {
  if (N.lambdas.empty()) fail(ErrorCode::ThetaOne, "empty pairing: no perturbation is visible");
  if (!(theta > 0.0 && theta < 1.0)) {
    fail(ErrorCode::InvalidInput, "theta must lie in (0, 1), got " + std::to_string(theta));
  }
  ReconstructedGreen G;
  G.N = N;
  G.theta = theta;
  const double t2 = theta * theta;
  const double Ng = N.value(N.gamma);
  if (t2 > Ng * (1.0 + 1e-12)) {
    fail(ErrorCode::InvalidInput, "theta^2 exceeds N(gamma) = " + std::to_string(Ng));
  }
  G.gamma_pole = Ng - t2 > 1e-12 * std::max(1.0, Ng);

  struct Pole {
    double t;
    double w;
  };
  std::vector<Pole> poles;
  for (std::size_t k = 0; k < N.lambdas.size(); ++k) {
    const double l = N.lambdas[k];
    poles.push_back({l, -N.residue(k) / ((t2 - 1.0) * (l - N.gamma))});
  }
  if (G.gamma_pole) poles.push_back({N.gamma, (Ng - t2) / (1.0 - t2)});
  std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) { return a.t < b.t; });
  for (const Pole& p : poles) {
    if (!(p.w > 0.0)) {
      fail(ErrorCode::NegativeResidue,
           "G has a non-negative residue at " + std::to_string(p.t) + " (weight " + std::to_string(p.w) + ")");
    }
    G.poles.push_back(p.t);
    G.weights.push_back(p.w);
  }

  for (std::size_t j = 0; j + 1 < G.poles.size(); ++j) {
    const double a = G.poles[j];
    const double b = G.poles[j + 1];
    double lo = a;
    double hi = b;
    // Run to full precision: a zero hugging a light pole needs every bit of
    // alpha - t to get eta right.
    for (int it = 0; it < kBisectionIters; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (G.real_value(mid) < 0.0 ? lo : hi) = mid;
    }
    const double alpha = 0.5 * (lo + hi);
    if (!(alpha > a && alpha < b) || hi - lo > kBisectionRel * (b - a)) {
      fail(ErrorCode::RootNotBracketed, "no sign change of G inside " + gap_text(a, b));
    }
    double dG = 0.0;
    for (std::size_t i = 0; i < G.poles.size(); ++i) {
      const double d = G.poles[i] - alpha;
      dG += G.weights[i] / (d * d);
    }
    G.zeros.push_back(alpha);
    G.etas.push_back(1.0 / dG);
  }
  return G;
}

HerglotzRational extract_pf_data(const ReconstructedGreen& G) {
  HerglotzRational f;
  f.linear = 1.0;
  double first_moment = 0.0;
  for (std::size_t j = 0; j < G.poles.size(); ++j) first_moment += G.weights[j] * G.poles[j];
  f.constant = -first_moment;
  for (std::size_t j = 0; j < G.zeros.size(); ++j) {
    if (!(G.etas[j] > 0.0)) {
      fail(ErrorCode::NegativeResidue, "eta at " + std::to_string(G.zeros[j]) + " is not positive");
    }
  }
  f.poles = G.zeros;
  f.residues = G.etas;
  return f;
}

SplitEnumeration enumerate_splits(const HerglotzRational& pf, std::size_t site,
                                  std::span<const std::size_t> common,
                                  std::span<const double> beta_samples, std::size_t cap) {
  if (site < 1) fail(ErrorCode::InvalidInput, "site must be >= 1");
  const std::size_t want = site - 1;
  if (common.size() > want) {
    fail(ErrorCode::InvalidInput, std::to_string(common.size()) +
                                      " common eigenvalues exceed n - 1 = " + std::to_string(want));
  }
  for (double b : beta_samples) {
    if (!(b > 0.0 && b < 1.0)) fail(ErrorCode::InvalidInput, "beta samples must lie in (0, 1)");
  }
  if (!common.empty() && beta_samples.empty()) {
    fail(ErrorCode::InvalidInput, "common poles need at least one beta sample");
  }
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < pf.poles.size(); ++i) {
    if (std::find(common.begin(), common.end(), i) == common.end()) free.push_back(i);
  }
  const std::size_t k = want - common.size();
  if (free.size() < k || (common.empty() && free.size() == k)) {
    fail(ErrorCode::TooFewPoles, std::to_string(pf.poles.size()) + " poles cannot fill J_n^- of size " +
                                     std::to_string(want) + " and a nonempty J_n^+");
  }

  SplitEnumeration out;
  const double total = binomial(free.size(), k) * std::pow(static_cast<double>(beta_samples.size()),
                                                           static_cast<double>(common.size()));
  out.total = total >= 1e18 ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(total);

  std::vector<std::size_t> comb(k);
  std::iota(comb.begin(), comb.end(), std::size_t{0});
  do {
    std::vector<std::size_t> tuple(common.size(), 0);
    do {
      if (out.splits.size() == cap) {
        out.truncated = true;
        return out;
      }
      Split s;
      for (std::size_t c : comb) s.F.push_back(free[c]);
      s.common.assign(common.begin(), common.end());
      for (std::size_t t : tuple) s.betas.push_back(beta_samples[t]);
      out.splits.push_back(std::move(s));
    } while (next_tuple(tuple, beta_samples.size()));
  } while (next_combination(comb, free.size()));
  return out;
}

Split split_from_nodes(const HerglotzRational& pf, std::span<const double> minus_nodes,
                       std::span<const std::size_t> common, std::span<const double> betas,
                       double tol) {
  Split s;
  s.common.assign(common.begin(), common.end());
  s.betas.assign(betas.begin(), betas.end());
  for (std::size_t i = 0; i < pf.poles.size(); ++i) {
    if (std::find(common.begin(), common.end(), i) != common.end()) continue;
    for (double x : minus_nodes) {
      if (std::abs(pf.poles[i] - x) <= tol) {
        s.F.push_back(i);
        break;
      }
    }
  }
  return s;
}

JacobiMatrix jacobi_from_measure(const SpectralMeasure& measure) {
  const std::size_t K = measure.size();
  if (K == 0 || measure.weights.size() != K) {
    fail(ErrorCode::InvalidInput, "measure must have matching, nonempty nodes and weights");
  }
  if (!strictly_increasing(measure.nodes)) {
    fail(ErrorCode::InvalidInput, "measure nodes must be distinct and increasing");
  }
  double total = 0.0;
  for (double w : measure.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) fail(ErrorCode::InvalidInput, "measure weights must be positive");
    total += w;
  }
  const double scale = std::max({std::abs(measure.nodes.front()), std::abs(measure.nodes.back()),
                                 spread(measure.nodes)});

  std::vector<std::vector<double>> Q;
  Q.reserve(K);
  std::vector<double> q(K);
  for (std::size_t i = 0; i < K; ++i) q[i] = std::sqrt(measure.weights[i] / total);
  std::vector<double> diag;
  std::vector<double> off;
  double beta_prev = 0.0;
  for (std::size_t j = 0; j < K; ++j) {
    Q.push_back(q);
    std::vector<double> r(K);
    for (std::size_t i = 0; i < K; ++i) r[i] = measure.nodes[i] * q[i];
    if (j > 0) {
      const std::vector<double>& qp = Q[j - 1];
      for (std::size_t i = 0; i < K; ++i) r[i] -= beta_prev * qp[i];
    }
    double alpha = 0.0;
    for (std::size_t i = 0; i < K; ++i) alpha += q[i] * r[i];
    diag.push_back(alpha);
    if (j + 1 == K) break;
    for (std::size_t i = 0; i < K; ++i) r[i] -= alpha * q[i];
    for (int pass = 0; pass < 2; ++pass) {
      for (const std::vector<double>& v : Q) {
        double dot = 0.0;
        for (std::size_t i = 0; i < K; ++i) dot += v[i] * r[i];
        for (std::size_t i = 0; i < K; ++i) r[i] -= dot * v[i];
      }
    }
    double beta = 0.0;
    for (double x : r) beta += x * x;
    beta = std::sqrt(beta);
    if (!(beta > 1e-13 * scale)) {
      fail(ErrorCode::NumericalBreakdown,
           "Lanczos step " + std::to_string(j + 1) + " lost positivity (beta = " + std::to_string(beta) + ")");
    }
    off.push_back(beta);
    for (std::size_t i = 0; i < K; ++i) q[i] = r[i] / beta;
    beta_prev = beta;
  }
  return JacobiMatrix(std::move(diag), std::move(off));
}

SolutionCandidate assemble_candidate(const HerglotzRational& pf, const Split& split,
                                     std::size_t site, const ReconstructedGreen& G) {
  if (split.betas.size() != split.common.size()) {
    fail(ErrorCode::InvalidInput, "one beta per common pole is required");
  }
  SpectralMeasure minus;
  SpectralMeasure plus;
  for (std::size_t i = 0; i < pf.poles.size(); ++i) {
    const double x = pf.poles[i];
    const double eta = pf.residues[i];
    const auto c = std::find(split.common.begin(), split.common.end(), i);
    if (c != split.common.end()) {
      const double beta = split.betas[static_cast<std::size_t>(c - split.common.begin())];
      minus.nodes.push_back(x);
      minus.weights.push_back(beta * eta);
      plus.nodes.push_back(x);
      plus.weights.push_back((1.0 - beta) * eta);
    } else if (std::find(split.F.begin(), split.F.end(), i) != split.F.end()) {
      minus.nodes.push_back(x);
      minus.weights.push_back(eta);
    } else {
      plus.nodes.push_back(x);
      plus.weights.push_back(eta);
    }
  }
  if (minus.size() != site - 1) {
    fail(ErrorCode::InvalidInput, "split assigns " + std::to_string(minus.size()) +
                                      " poles to J_n^-, expected " + std::to_string(site - 1));
  }
  if (plus.size() == 0) fail(ErrorCode::InvalidInput, "split leaves J_n^+ empty");

  std::vector<double> diag;
  std::vector<double> off;
  if (site > 1) {
    const JacobiMatrix Jm = jacobi_from_measure(minus).reversed();
    diag.assign(Jm.diag().begin(), Jm.diag().end());
    off.assign(Jm.offdiag().begin(), Jm.offdiag().end());
    off.push_back(std::sqrt(minus.total()));
  }
  diag.push_back(-pf.constant);
  off.push_back(std::sqrt(plus.total()));
  const JacobiMatrix Jp = jacobi_from_measure(plus);
  diag.insert(diag.end(), Jp.diag().begin(), Jp.diag().end());
  off.insert(off.end(), Jp.offdiag().begin(), Jp.offdiag().end());

  SolutionCandidate c{JacobiMatrix(std::move(diag), std::move(off)), split, 0.0, {}};
  const double lo = G.poles.front();
  const double hi = G.poles.back();
  const double s = std::max(hi - lo, 1.0);
  for (int k = 0; k < 10; ++k) {
    const cplx z(lo + (hi - lo) * k / 9.0, s * (0.1 + 0.2 * k) * (k % 2 == 0 ? 1.0 : -1.0));
    const cplx ref = G(z);
    c.green_residual = std::max(c.green_residual, std::abs(green(c.J, site, z) - ref) / std::abs(ref));
  }
  return c;
}

double hausdorff(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  }
  auto directed = [](std::span<const double> x, std::span<const double> y) {
    double worst = 0.0;
    for (double u : x) {
      double best = std::numeric_limits<double>::infinity();
      for (double v : y) best = std::min(best, std::abs(u - v));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

VerifyReport verify_candidate(const JacobiMatrix& J, std::size_t site, double theta,
                              double gamma, std::span<const double> spectrum,
                              std::span<const double> spectrum_t, double rel_tol) {
  VerifyReport r;
  const double h = gamma * (1.0 / (theta * theta) - 1.0);
  const std::vector<double> s = eigenvalues(J);
  const std::vector<double> st = eigenvalues(apply_perturbation(J, Perturbation{site, theta, h}));
  r.dist_J = hausdorff(s, spectrum);
  r.dist_Jt = hausdorff(st, spectrum_t);
  r.tolerance = rel_tol * all_spread(spectrum, spectrum_t);
  r.pass = r.dist_J < r.tolerance && r.dist_Jt < r.tolerance && s.size() == spectrum.size() &&
           st.size() == spectrum_t.size();
  return r;
}

InverseMode parse_inverse_mode(const std::string& name) {
  if (name == "disjoint") return InverseMode::Disjoint;
  if (name == "common") return InverseMode::Common;
  if (name == "gamma-in-spectrum") return InverseMode::GammaInSpectrum;
  fail(ErrorCode::InvalidInput, "unknown mode '" + name + "' (disjoint, common, gamma-in-spectrum)");
}

std::string to_string(InverseMode mode) {
  switch (mode) {
    case InverseMode::Disjoint: return "disjoint";
    case InverseMode::Common: return "common";
    case InverseMode::GammaInSpectrum: return "gamma-in-spectrum";
  }
  return "disjoint";
}

NSReport check_ns_conditions(std::span<const double> lambdas, std::span<const double> mus,
                             double gamma, std::size_t site, InverseMode mode,
                             double common_rel) {
  NSReport r;
  r.caveat =
      "finite truncation: series convergence is reported as a magnitude only and the density "
      "condition is replaced by a pole count";
  const double tol = common_rel * all_spread(lambdas, mus);
  const SpectraSplit s = split_spectra(lambdas, mus, tol);

  const GammaPairing gp = gamma_pairing(s.lambda_noncommon, s.mu_noncommon, gamma, 0.5);
  r.violations = gp.violations;
  r.interlacing = gp.violations == 0;
  if (!r.interlacing) r.bad_gap = gap_text(gp.bad_lo, gp.bad_hi);
  const std::size_t pairs = std::min(s.lambda_noncommon.size(), s.mu_noncommon.size());
  for (std::size_t k = 0; k < pairs; ++k) r.shift_sum += std::abs(s.mu_noncommon[k] - s.lambda_noncommon[k]);

  NFunction N;
  N.lambdas.assign(s.lambda_noncommon.begin(), s.lambda_noncommon.begin() + static_cast<long>(pairs));
  N.mus.assign(s.mu_noncommon.begin(), s.mu_noncommon.begin() + static_cast<long>(pairs));
  N.gamma = gamma;

  bool gamma_common = false;
  std::vector<double> others;
  for (double c : s.common) {
    if (std::abs(c - gamma) <= tol) {
      gamma_common = true;
    } else {
      others.push_back(c);
    }
  }
  bool gamma_on_lambda = false;
  for (double l : s.lambda_noncommon) gamma_on_lambda = gamma_on_lambda || std::abs(l - gamma) <= tol;

  r.constancy = true;
  if (mode == InverseMode::GammaInSpectrum) {
    if (!gamma_common) {
      r.constancy = false;
      r.bad_gap = "gamma is not a common eigenvalue";
    } else if (!others.empty()) {
      const double ref = N.value(others.front());
      for (double c : others) r.constancy_deviation = std::max(r.constancy_deviation, std::abs(N.value(c) - ref));
      const double Ng = N.value(gamma);
      r.constancy_deviation = std::max(r.constancy_deviation, ref - Ng);
    }
  } else if (gamma_common || gamma_on_lambda) {
    r.constancy = false;
    r.bad_gap = "gamma lies in sigma(J)";
  } else {
    const double Ng = N.value(gamma);
    for (double c : others) r.constancy_deviation = std::max(r.constancy_deviation, std::abs(N.value(c) - Ng));
  }
  r.constancy = r.constancy && r.constancy_deviation <= 1e-8;

  r.required_poles = site >= 1 ? site - 1 : 0;
  const std::size_t zeros = pairs + (mode == InverseMode::GammaInSpectrum ? 1 : 0);
  r.available_poles = zeros >= 1 ? zeros - 1 : 0;
  r.cardinality = r.available_poles >= r.required_poles;
  return r;
}

InverseResult solve_inverse(const InverseProblem& problem, const InverseOptions& options) {
  if (problem.site < 1) fail(ErrorCode::InvalidInput, "site must be >= 1");
  if (problem.lambdas.size() != problem.mus.size()) {
    fail(ErrorCode::InvalidInput, "the two spectra must have the same length");
  }
  std::vector<double> S = problem.lambdas;
  std::vector<double> St = problem.mus;
  std::sort(S.begin(), S.end());
  std::sort(St.begin(), St.end());
  if (!strictly_increasing(S) || !strictly_increasing(St)) {
    fail(ErrorCode::InvalidInput, "spectra must consist of distinct eigenvalues");
  }
  if (problem.site >= S.size()) {
    fail(ErrorCode::InvalidInput, "site must be at most N - 1 = " + std::to_string(S.size() - 1));
  }

  const double tol = options.common_rel * all_spread(S, St);
  SpectraSplit s = split_spectra(S, St, tol);
  std::vector<double> others;
  bool gamma_common = false;
  for (double c : s.common) {
    if (std::abs(c - problem.gamma) <= tol) {
      gamma_common = true;
    } else {
      others.push_back(c);
    }
  }

  InverseResult out;
  out.common = s.common;
  out.conditions = check_ns_conditions(S, St, problem.gamma, problem.site, problem.mode, options.common_rel);

  switch (problem.mode) {
    case InverseMode::Disjoint:
      if (!s.common.empty()) {
        fail(ErrorCode::InvalidInput, std::to_string(s.common.size()) +
                                          " common eigenvalues found; use mode 'common'");
      }
      [[fallthrough]];
    case InverseMode::Common:
      if (gamma_common) {
        fail(ErrorCode::GammaIsPole, "gamma is a common eigenvalue; use mode 'gamma-in-spectrum'");
      }
      break;
    case InverseMode::GammaInSpectrum:
      if (!gamma_common) {
        fail(ErrorCode::InvalidInput, "gamma-in-spectrum mode needs gamma in both spectra");
      }
      break;
  }

  const NFunction N = build_N(s.lambda_noncommon, s.mu_noncommon, problem.gamma);
  if (problem.mode == InverseMode::GammaInSpectrum) {
    const double Ng = N.value(problem.gamma);
    double t2;
    if (!others.empty()) {
      t2 = N.value(others.front());
      if (problem.theta && std::abs(*problem.theta * *problem.theta - t2) > 1e-8) {
        fail(ErrorCode::InvalidInput, "theta^2 must equal N at the other common eigenvalues (" +
                                          std::to_string(t2) + ")");
      }
    } else if (problem.theta) {
      t2 = *problem.theta * *problem.theta;
    } else {
      fail(ErrorCode::InvalidInput, "gamma-in-spectrum mode needs theta");
    }
    const bool flat = std::abs(N.derivative(problem.gamma)) <= 1e-9 * std::max(1.0, Ng);
    if (!(t2 > 0.0) || t2 > Ng * (1.0 + 1e-12) ||
        (!flat && std::abs(t2 - Ng) <= 1e-12 * std::max(1.0, Ng))) {
      fail(ErrorCode::InvalidInput, "theta^2 must lie in (0, N(gamma)) with N(gamma) = " + std::to_string(Ng) +
                                        (flat ? " (endpoint allowed: N'(gamma) = 0)" : ""));
    }
    out.theta = std::sqrt(std::min(t2, Ng));
  } else {
    out.theta = recover_theta(N);
  }
  out.h = problem.gamma * (1.0 / (out.theta * out.theta) - 1.0);

  out.green = reconstruct_green(N, out.theta);
  out.pf = extract_pf_data(out.green);

  for (double c : s.common) {
    if (std::abs(c - problem.gamma) <= tol && out.green.gamma_pole) continue;
    const auto& z = out.pf.poles;
    std::size_t best = z.size();
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (std::abs(z[i] - c) < dist) {
        dist = std::abs(z[i] - c);
        best = i;
      }
    }
    if (best == z.size() || dist > std::max(tol, 1e-9 * all_spread(S, St))) {
      fail(ErrorCode::InvalidInput, "common eigenvalue " + std::to_string(c) + " is not a zero of G");
    }
    out.common_poles.push_back(best);
  }
  std::sort(out.common_poles.begin(), out.common_poles.end());

  out.splits = enumerate_splits(out.pf, problem.site, out.common_poles, options.beta_samples, options.cap);
  for (const Split& split : out.splits.splits) {
    SolutionCandidate c = assemble_candidate(out.pf, split, problem.site, out.green);
    c.verify = verify_candidate(c.J, problem.site, out.theta, problem.gamma, S, St, options.verify_rel);
    out.candidates.push_back(std::move(c));
  }
  return out;
}

}  // namespace ji
