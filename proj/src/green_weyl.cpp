#include "ji/green_weyl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ji/error.hpp"

namespace ji {

namespace {

// Real points closer than this fraction of the spectral scale count as poles.
constexpr double kPoleRadius = 1e-12;

bool is_real_point(cplx z, double scale) { return std::abs(z.imag()) <= kPoleRadius * scale; }

// Backward continued fraction m = 1/(q_1 - z - b_1^2/(q_2 - z - ...)).
cplx continued_fraction(const JacobiMatrix& J, cplx z) {
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(J.norm(), 1e-300);
  cplx w = 0.0;
  for (std::size_t k = J.size(); k >= 1; --k) {
    const double b = J.b(k);
    cplx den = J.q(k) - z - b * b * w;
    if (den == cplx{}) {
      if (k == 1) fail(ErrorCode::PoleHit, "continued fraction denominator vanished");
      den = tiny;
    }
    w = 1.0 / den;
  }
  return w;
}

void check_site(const JacobiMatrix& J, std::size_t site) {
  if (site < 1 || site > J.size()) {
    fail(ErrorCode::InvalidInput, "site " + std::to_string(site) + " outside 1.." +
                                      std::to_string(J.size()));
  }
}

enum class PointKind { Zero, Pole };

struct KreinPoint {
  double x;
  PointKind kind;
};

struct KreinFactor {
  // Either a pair (zero, pole) or a single unpaired point.
  bool paired;
  double zero;
  double pole;
  PointKind single_kind;
  double magnitude;
};

std::vector<KreinFactor> krein_factors(std::span<const double> zeros,
                                       std::span<const double> poles) {
  std::vector<KreinPoint> pts;
  pts.reserve(zeros.size() + poles.size());
  for (double x : zeros) pts.push_back({x, PointKind::Zero});
  for (double x : poles) pts.push_back({x, PointKind::Pole});
  std::sort(pts.begin(), pts.end(), [](const KreinPoint& a, const KreinPoint& b) { return a.x < b.x; });
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].kind == pts[i + 1].kind || !(pts[i].x < pts[i + 1].x)) {
      fail(ErrorCode::InterlacingViolation,
           "zeros and poles do not strictly alternate near " + std::to_string(pts[i].x) + " and " +
               std::to_string(pts[i + 1].x));
    }
  }
  std::vector<KreinFactor> out;
  std::size_t i = 0;
  for (; i + 1 < pts.size(); i += 2) {
    const KreinPoint& a = pts[i];
    const KreinPoint& b = pts[i + 1];
    const double zero = a.kind == PointKind::Zero ? a.x : b.x;
    const double pole = a.kind == PointKind::Pole ? a.x : b.x;
    out.push_back({true, zero, pole, PointKind::Zero, std::max(std::abs(zero), std::abs(pole))});
  }
  if (i < pts.size()) {
    out.push_back({false, pts[i].x, pts[i].x, pts[i].kind, std::abs(pts[i].x)});
  }
  return out;
}

cplx krein_factor_value(const KreinFactor& f, cplx z) {
  if (!f.paired) return f.single_kind == PointKind::Zero ? (z - f.zero) : 1.0 / (z - f.pole);
  if (f.zero == 0.0 || f.pole == 0.0) return (z - f.zero) / (z - f.pole);
  return (1.0 - z / f.zero) / (1.0 - z / f.pole);
}

}  // namespace

cplx HerglotzRational::operator()(cplx z) const {
  cplx sum = linear * z + constant;
  for (std::size_t j = 0; j < poles.size(); ++j) sum += residues[j] / (poles[j] - z);
  return sum;
}

cplx GreenFunction::operator()(cplx z) const {
  cplx sum = 0.0;
  for (std::size_t j = 0; j < poles.size(); ++j) sum += weights[j] / (poles[j] - z);
  return sum;
}

std::vector<double> GreenFunction::residues_at_poles() const {
  std::vector<double> r(weights.size());
  std::transform(weights.begin(), weights.end(), r.begin(), [](double w) { return -w; });
  return r;
}

cplx weyl_m(const JacobiMatrix& J, cplx z) {
  const double scale = spectral_scale(J);
  if (is_real_point(z, scale) && has_eigenvalue_near(J, z.real(), kPoleRadius * scale)) {
    fail(ErrorCode::PoleHit, "z = " + std::to_string(z.real()) + " is an eigenvalue");
  }
  return continued_fraction(J, z);
}

JacobiMatrix submatrix_plus(const JacobiMatrix& J, std::size_t site) {
  if (site < 1 || site + 1 > J.size()) {
    fail(ErrorCode::InvalidInput, "J_n^+ needs 1 <= n <= N-1, got n = " + std::to_string(site));
  }
  return J.block(site + 1, J.size());
}

JacobiMatrix submatrix_minus(const JacobiMatrix& J, std::size_t site) {
  if (site < 2 || site > J.size()) {
    fail(ErrorCode::InvalidInput,
         "J_n^- needs 2 <= n <= N, got n = " + std::to_string(site) + " (m_1^- is identically 0)");
  }
  return J.leading(site - 1);
}

cplx weyl_m_minus(const JacobiMatrix& J, std::size_t site, cplx z) {
  check_site(J, site);
  if (site == 1) return 0.0;
  return weyl_m(submatrix_minus(J, site).reversed(), z);
}

cplx weyl_m_plus(const JacobiMatrix& J, std::size_t site, cplx z) {
  check_site(J, site);
  if (site == J.size()) return 0.0;
  return weyl_m(submatrix_plus(J, site), z);
}

cplx green(const JacobiMatrix& J, std::size_t site, cplx z) {
  check_site(J, site);
  const double bp = J.b(site);
  const double bm = J.b(site - 1);
  cplx den;
  try {
    den = bp * bp * weyl_m_plus(J, site, z) + bm * bm * weyl_m_minus(J, site, z) + z - J.q(site);
  } catch (const Error& e) {
    // z is an eigenvalue of J_n^- or J_n^+, i.e. a zero of G.
    if (e.code() == ErrorCode::PoleHit) return 0.0;
    throw;
  }
  const double scale = spectral_scale(J);
  if (den == cplx{} ||
      (is_real_point(z, scale) && has_eigenvalue_near(J, z.real(), kPoleRadius * scale))) {
    fail(ErrorCode::DenominatorZero, "z = " + std::to_string(z.real()) + " is a pole of G(., " +
                                         std::to_string(site) + ")");
  }
  return -1.0 / den;
}

cplx green_spectral(const EigenDecomposition& eig, std::size_t site, cplx z) {
  const std::vector<double> comps = eig.nth_components(site);
  const auto values = eig.eigenvalues();
  const double scale = spread(values);
  cplx sum = 0.0;
  for (std::size_t k = 0; k < eig.size(); ++k) {
    const double w = comps[k] * comps[k];
    if (w <= kZeroWeight) continue;
    if (is_real_point(z, scale) && std::abs(z.real() - values[k]) <= kPoleRadius * scale) {
      fail(ErrorCode::PoleHit, "z = " + std::to_string(z.real()) + " is a pole of G");
    }
    sum += w / (values[k] - z);
  }
  return sum;
}

cplx green_spectral(const JacobiMatrix& J, std::size_t site, cplx z) {
  check_site(J, site);
  return green_spectral(eigensystem(J), site, z);
}

GreenInversePF green_inverse_partial_fractions(const JacobiMatrix& J, std::size_t site,
                                               double merge_rel) {
  check_site(J, site);
  GreenInversePF out;
  if (site >= 2) {
    out.minus = spectral_measure(submatrix_minus(J, site).reversed());
    const double b2 = J.b(site - 1) * J.b(site - 1);
    for (double& w : out.minus.weights) w *= b2;
  }
  if (site < J.size()) {
    out.plus = spectral_measure(submatrix_plus(J, site));
    const double b2 = J.b(site) * J.b(site);
    for (double& w : out.plus.weights) w *= b2;
  }

  struct Node {
    double x;
    double w;
  };
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < out.minus.size(); ++i) nodes.push_back({out.minus.nodes[i], out.minus.weights[i]});
  for (std::size_t i = 0; i < out.plus.size(); ++i) nodes.push_back({out.plus.nodes[i], out.plus.weights[i]});
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.x < b.x; });

  const double tol = merge_rel * spectral_scale(J);
  HerglotzRational& f = out.function;
  f.linear = 1.0;
  f.constant = -J.q(site);
  for (const Node& node : nodes) {
    if (!f.poles.empty() && node.x - f.poles.back() <= tol) {
      // Common eigenvalue of J_n^- and J_n^+: one pole carrying both residues.
      const double wsum = f.residues.back() + node.w;
      f.poles.back() = (f.poles.back() * f.residues.back() + node.x * node.w) / wsum;
      f.residues.back() = wsum;
      if (out.merged.empty() || out.merged.back() != f.poles.size() - 1) {
        out.merged.push_back(f.poles.size() - 1);
      }
      continue;
    }
    f.poles.push_back(node.x);
    f.residues.push_back(node.w);
  }
  return out;
}

GreenFunction green_function(const JacobiMatrix& J, std::size_t site, double merge_rel) {
  check_site(J, site);
  const EigenDecomposition eig = eigensystem(J);
  const SpectralMeasure m = site_measure(eig, site);
  GreenFunction g;
  g.site = site;
  g.poles = m.nodes;
  g.weights = m.weights;
  const GreenInversePF pf = green_inverse_partial_fractions(J, site, merge_rel);
  g.zeros = pf.function.poles;
  g.zero_residues = pf.function.residues;
  return g;
}

cplx krein_product_eval(std::span<const double> zeros, std::span<const double> poles, double C,
                        cplx z) {
  cplx value = C;
  for (const KreinFactor& f : krein_factors(zeros, poles)) value *= krein_factor_value(f, z);
  return value;
}

cplx krein_product_truncated(std::span<const double> zeros, std::span<const double> poles,
                             double C, cplx z, std::size_t keep) {
  std::vector<KreinFactor> factors = krein_factors(zeros, poles);
  std::stable_sort(factors.begin(), factors.end(), [](const KreinFactor& a, const KreinFactor& b) {
    return a.magnitude < b.magnitude;
  });
  cplx value = C;
  std::size_t kept = 0;
  for (const KreinFactor& f : factors) {
    if (f.paired) {
      if (kept == keep) continue;
      ++kept;
    }
    value *= krein_factor_value(f, z);
  }
  return value;
}

std::size_t krein_pair_count(std::span<const double> zeros, std::span<const double> poles) {
  const auto factors = krein_factors(zeros, poles);
  return static_cast<std::size_t>(
      std::count_if(factors.begin(), factors.end(), [](const KreinFactor& f) { return f.paired; }));
}

GreenCandidateReport check_green_candidate(const HerglotzRational& inverse_green,
                                           std::size_t site) {
  GreenCandidateReport r;
  r.pole_count = inverse_green.poles.size();
  r.required_poles = site >= 1 ? site - 1 : 0;
  r.min_residue = inverse_green.residues.empty()
                      ? 0.0
                      : *std::min_element(inverse_green.residues.begin(), inverse_green.residues.end());
  r.herglotz = std::all_of(inverse_green.residues.begin(), inverse_green.residues.end(),
                           [](double eta) { return eta >= 0.0; });
  r.linear_coeff = inverse_green.linear;
  r.normalized = std::abs(inverse_green.linear - 1.0) <= 1e-12;
  r.cardinality = r.pole_count >= r.required_poles;
  return r;
}

}  // namespace ji
