#include "ji/tridiag_eig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "ji/error.hpp"

namespace ji {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Eigenvalues closer than this fraction of ||J|| share an orthogonalization group.
constexpr double kClusterFraction = 1e-3;

double pivot_floor(const JacobiMatrix& J) {
  double bmax = 0.0;
  for (double b : J.offdiag()) bmax = std::max(bmax, b * b);
  return std::numeric_limits<double>::min() * std::max(1.0, bmax);
}

struct Bounds {
  double lo;
  double hi;
};

Bounds gershgorin(const JacobiMatrix& J) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t j = 1; j <= J.size(); ++j) {
    const double r = J.b(j - 1) + J.b(j);
    lo = std::min(lo, J.q(j) - r);
    hi = std::max(hi, J.q(j) + r);
  }
  const double pad = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + 4.0 * pivot_floor(J);
  return {lo - pad, hi + pad};
}

std::size_t sturm_count_impl(const JacobiMatrix& J, double x, double pivmin) {
  std::size_t count = 0;
  double d = J.q(1) - x;
  if (std::abs(d) < pivmin) d = -pivmin;
  if (d < 0.0) ++count;
  for (std::size_t i = 2; i <= J.size(); ++i) {
    const double b = J.b(i - 1);
    d = (J.q(i) - x) - b * b / d;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

// LU factorization with partial pivoting of the tridiagonal J - shift*I,
// following the layout of LAPACK dgttrf (U has two superdiagonals).
class ShiftedTridiagLU {
 public:
  ShiftedTridiagLU(const JacobiMatrix& J, double shift) : n_(J.size()) {
    dl_.assign(J.offdiag().begin(), J.offdiag().end());
    du_ = dl_;
    du2_.assign(n_ > 2 ? n_ - 2 : 0, 0.0);
    d_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) d_[i] = J.diag()[i] - shift;
    swapped_.assign(n_ > 0 ? n_ - 1 : 0, false);

    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n_) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    const double floor = kEps * std::max(J.norm(), std::numeric_limits<double>::min());
    for (double& p : d_) {
      if (std::abs(p) < floor) p = std::copysign(floor, p == 0.0 ? 1.0 : p);
    }
  }

  void solve(std::vector<double>& x) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (!swapped_[i]) {
        x[i + 1] -= dl_[i] * x[i];
      } else {
        const double temp = x[i];
        x[i] = x[i + 1];
        x[i + 1] = temp - dl_[i] * x[i];
      }
    }
    x[n_ - 1] /= d_[n_ - 1];
    if (n_ > 1) x[n_ - 2] = (x[n_ - 2] - du_[n_ - 2] * x[n_ - 1]) / d_[n_ - 2];
    for (std::size_t i = n_ >= 3 ? n_ - 2 : 0; i-- > 0;) {
      x[i] = (x[i] - du_[i] * x[i + 1] - du2_[i] * x[i + 2]) / d_[i];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<bool> swapped_;
};

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double residual_norm(const JacobiMatrix& J, double lambda, std::span<const double> v) {
  double sum = 0.0;
  const std::size_t n = J.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = (J.diag()[i] - lambda) * v[i];
    if (i > 0) r += J.offdiag()[i - 1] * v[i - 1];
    if (i + 1 < n) r += J.offdiag()[i] * v[i + 1];
    sum += r * r;
  }
  return std::sqrt(sum);
}

// Deterministic start vector in (-1, 1)^n.
void seed_vector(std::vector<double>& x, std::uint64_t salt) {
  std::uint64_t state = 0x9E3779B97F4A7C15ULL ^ (salt * 0xBF58476D1CE4E5B9ULL);
  for (double& v : x) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    v = static_cast<double>(state >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }
}

}  // namespace

double SpectralMeasure::total() const noexcept {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

EigenDecomposition::EigenDecomposition(std::vector<double> values, std::vector<double> vectors)
    : values_(std::move(values)), vectors_(std::move(vectors)) {
  if (vectors_.size() != values_.size() * values_.size()) {
    fail(ErrorCode::InvalidInput, "eigenvector storage does not match eigenvalue count");
  }
}

std::span<const double> EigenDecomposition::eigenvector(std::size_t k) const {
  if (k >= size()) fail(ErrorCode::InvalidInput, "eigen index out of range");
  return std::span<const double>(vectors_).subspan(k * size(), size());
}

std::vector<double> EigenDecomposition::nth_components(std::size_t site) const {
  if (site < 1 || site > size()) {
    fail(ErrorCode::InvalidInput, "site " + std::to_string(site) + " outside 1.." +
                                      std::to_string(size()));
  }
  std::vector<double> out(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = vectors_[k * size() + site - 1];
  return out;
}

std::size_t sturm_count(const JacobiMatrix& J, double x) {
  return sturm_count_impl(J, x, pivot_floor(J));
}

std::vector<double> eigenvalues(const JacobiMatrix& J) {
  const std::size_t n = J.size();
  if (n == 1) return {J.q(1)};
  const double pivmin = pivot_floor(J);
  const Bounds box = gershgorin(J);
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    double lo = box.lo;
    double hi = box.hi;
    // Narrow with the previous eigenvalue: lambda_k >= lambda_{k-1}.
    if (k > 0) lo = std::max(lo, values[k - 1] - 2.0 * kEps * std::abs(values[k - 1]) - pivmin);
    for (int it = 0; it < 2000; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + pivmin) break;
      if (sturm_count_impl(J, mid, pivmin) <= k) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    values[k] = 0.5 * (lo + hi);
  }
  return values;
}

EigenDecomposition eigensystem(const JacobiMatrix& J, const EigenOptions& options) {
  const std::size_t n = J.size();
  std::vector<double> values = eigenvalues(J);
  std::vector<double> vectors(n * n, 0.0);
  if (n == 1) {
    vectors[0] = 1.0;
    return EigenDecomposition(std::move(values), std::move(vectors));
  }

  const double jnorm = J.norm();
  const double cluster_gap = kClusterFraction * jnorm;
  std::size_t cluster_start = 0;
  std::vector<double> x(n);

  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = values[k];
    if (k > 0 && values[k] - values[k - 1] > cluster_gap) cluster_start = k;
    const ShiftedTridiagLU lu(J, lambda);
    const double tol = 1e-12 * (std::abs(lambda) + jnorm);

    seed_vector(x, k + 1);
    bool converged = false;
    for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
      lu.solve(x);
      // Two passes of modified Gram-Schmidt against the cluster.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = cluster_start; j < k; ++j) {
          std::span<const double> v(vectors.data() + j * n, n);
          const double c = dot(v, x);
          for (std::size_t i = 0; i < n; ++i) x[i] -= c * v[i];
        }
      }
      const double norm = std::sqrt(dot(x, x));
      if (!(norm > 0.0) || !std::isfinite(norm)) {
        seed_vector(x, k + 1 + 7919 * static_cast<std::uint64_t>(sweep));
        continue;
      }
      for (double& v : x) v /= norm;
      if (sweep >= 2 && residual_norm(J, lambda, x) <= tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      fail(ErrorCode::ConvergenceFailure,
           "inverse iteration for eigenvalue " + std::to_string(k) + " did not converge in " +
               std::to_string(options.max_sweeps) + " sweeps");
    }
    if (x[0] < 0.0) {
      for (double& v : x) v = -v;
    }
    std::copy(x.begin(), x.end(), vectors.begin() + static_cast<std::ptrdiff_t>(k * n));
  }
  return EigenDecomposition(std::move(values), std::move(vectors));
}

SpectralMeasure spectral_measure(const EigenDecomposition& eig) {
  SpectralMeasure m;
  m.nodes.assign(eig.eigenvalues().begin(), eig.eigenvalues().end());
  m.weights = eig.first_components();
  for (double& w : m.weights) w *= w;
  return m;
}

SpectralMeasure spectral_measure(const JacobiMatrix& J) { return spectral_measure(eigensystem(J)); }

SpectralMeasure site_measure(const EigenDecomposition& eig, std::size_t site) {
  const std::vector<double> comps = eig.nth_components(site);
  SpectralMeasure m;
  for (std::size_t k = 0; k < eig.size(); ++k) {
    const double w = comps[k] * comps[k];
    if (w <= kZeroWeight) continue;
    m.nodes.push_back(eig.eigenvalues()[k]);
    m.weights.push_back(w);
  }
  return m;
}

SpectralMeasure site_measure(const JacobiMatrix& J, std::size_t site) {
  if (site < 1 || site > J.size()) {
    fail(ErrorCode::InvalidInput, "site " + std::to_string(site) + " outside 1.." +
                                      std::to_string(J.size()));
  }
  return site_measure(eigensystem(J), site);
}

namespace {

std::vector<cplx> run_recurrence(const JacobiMatrix& J, cplx z, std::size_t upto, cplx f1, cplx f2) {
  if (upto > J.size()) {
    fail(ErrorCode::InvalidInput, "polynomial index " + std::to_string(upto) +
                                      " exceeds matrix size " + std::to_string(J.size()));
  }
  std::vector<cplx> f;
  f.reserve(upto);
  if (upto >= 1) f.push_back(f1);
  if (upto >= 2) f.push_back(f2);
  for (std::size_t k = 2; k < upto; ++k) {
    // b_{k-1} f_{k-1} + q_k f_k + b_k f_{k+1} = z f_k
    f.push_back(((z - J.q(k)) * f[k - 1] - J.b(k - 1) * f[k - 2]) / J.b(k));
  }
  return f;
}

}  // namespace

std::vector<cplx> eval_first_kind(const JacobiMatrix& J, cplx z, std::size_t upto) {
  const cplx f2 = J.size() >= 2 ? (z - J.q(1)) / J.b(1) : cplx{};
  return run_recurrence(J, z, upto, 1.0, f2);
}

std::vector<cplx> eval_second_kind(const JacobiMatrix& J, cplx z, std::size_t upto) {
  const cplx f2 = J.size() >= 2 ? 1.0 / J.b(1) : 0.0;
  return run_recurrence(J, z, upto, 0.0, f2);
}

double spread(std::span<const double> values) noexcept {
  if (values.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double s = *hi - *lo;
  if (s > 0.0) return s;
  return std::max(1.0, std::abs(*hi));
}

double spectral_scale(const JacobiMatrix& J) noexcept {
  const Bounds box = gershgorin(J);
  const double s = box.hi - box.lo;
  if (s > 0.0) return s;
  return std::max(1.0, std::abs(J.q(1)));
}

bool has_eigenvalue_near(const JacobiMatrix& J, double x, double radius) {
  return sturm_count(J, x + radius) > sturm_count(J, x - radius);
}

}  // namespace ji
