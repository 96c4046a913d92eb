#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ji/chain_model.hpp"
#include "ji/green_weyl.hpp"
#include "ji/tridiag_eig.hpp"

namespace ji {

// N(z) = prod_k (z - mu_k)/(z - lambda_k) over paired noncommon eigenvalues.
struct NFunction {
  std::vector<double> lambdas;
  std::vector<double> mus;
  double gamma = 0.0;

  cplx operator()(cplx z) const;
  double value(double x) const;
  double derivative(double x) const;
  // Residue of N at lambdas[k].
  double residue(std::size_t k) const;
};

// Validates the attractor interlacing around gamma; throws InterlacingViolation
// naming the first bad gap.
NFunction build_N(std::span<const double> lambdas, std::span<const double> mus, double gamma);

// +sqrt(N(gamma)); throws GammaIsPole when gamma sits on some lambda.
double recover_theta(const NFunction& N);

// G(z) = (N(z) - theta^2) / ((theta^2 - 1)(z - gamma)) with its pole/zero data.
struct ReconstructedGreen {
  NFunction N;
  double theta = 1.0;
  std::vector<double> poles;    // lambdas, plus gamma when it carries weight
  std::vector<double> weights;  // -Res G at each pole
  std::vector<double> zeros;    // alpha_j, one per gap between consecutive poles
  std::vector<double> etas;     // 1 / G'(alpha_j)
  bool gamma_pole = false;

  cplx operator()(cplx z) const;
  // Partial-fraction value sum_j w_j / (t_j - x) on the real line.
  double real_value(double x) const;
  double weight_total() const;
};

// `theta` must satisfy theta^2 <= N(gamma); strict inequality puts a pole at gamma.
ReconstructedGreen reconstruct_green(const NFunction& N, double theta);

// -G^{-1} = z - q_n + sum eta_j / (alpha_j - z), with q_n the first moment of G's poles.
// Throws NegativeResidue when some eta_j is not positive.
HerglotzRational extract_pf_data(const ReconstructedGreen& G);

// Assignment of the poles of -G^{-1} to J_n^- (F, plus the fraction beta of each
// common pole) and J_n^+ (the rest).
struct Split {
  std::vector<std::size_t> F;
  std::vector<std::size_t> common;
  std::vector<double> betas;
};

struct SplitEnumeration {
  std::vector<Split> splits;
  std::size_t total = 0;  // size of the whole family before the cap
  bool truncated = false;
};

// Subsets of size n-1-|common| of the non-common poles in lexicographic order,
// each combined with every beta tuple. Throws TooFewPoles.
SplitEnumeration enumerate_splits(const HerglotzRational& pf, std::size_t site,
                                  std::span<const std::size_t> common,
                                  std::span<const double> beta_samples, std::size_t cap = 64);

// Split whose F consists of the poles matching `minus_nodes` (the J_n^- spectrum).
Split split_from_nodes(const HerglotzRational& pf, std::span<const double> minus_nodes,
                       std::span<const std::size_t> common, std::span<const double> betas,
                       double tol);

// Lanczos on diag(nodes) started from sqrt(weights), full reorthogonalization.
JacobiMatrix jacobi_from_measure(const SpectralMeasure& measure);

struct VerifyReport {
  double dist_J = 0.0;
  double dist_Jt = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SolutionCandidate {
  JacobiMatrix J;
  Split split;
  double green_residual = 0.0;
  VerifyReport verify;
};

// [reversed J_n^- | q_n | J_n^+] built from the split; green_residual compares
// G(., n) of the result against `G` at 10 off-axis points.
SolutionCandidate assemble_candidate(const HerglotzRational& pf, const Split& split,
                                     std::size_t site, const ReconstructedGreen& G);

// Symmetric Hausdorff distance between two finite point sets.
double hausdorff(std::span<const double> a, std::span<const double> b);

VerifyReport verify_candidate(const JacobiMatrix& J, std::size_t site, double theta,
                              double gamma, std::span<const double> spectrum,
                              std::span<const double> spectrum_t, double rel_tol = 1e-7);

enum class InverseMode { Disjoint, Common, GammaInSpectrum };

InverseMode parse_inverse_mode(const std::string& name);
std::string to_string(InverseMode mode);

struct NSReport {
  bool interlacing = false;
  std::size_t violations = 0;
  std::string bad_gap;
  double shift_sum = 0.0;
  bool constancy = false;
  double constancy_deviation = 0.0;
  bool cardinality = false;
  std::size_t available_poles = 0;
  std::size_t required_poles = 0;
  std::string caveat;

  bool pass() const noexcept { return interlacing && constancy && cardinality; }
};

NSReport check_ns_conditions(std::span<const double> lambdas, std::span<const double> mus,
                             double gamma, std::size_t site, InverseMode mode,
                             double common_rel = 1e-9);

struct InverseProblem {
  std::vector<double> lambdas;  // sigma(J)
  std::vector<double> mus;      // sigma(J~_n)
  double gamma = 0.0;
  std::size_t site = 1;
  InverseMode mode = InverseMode::Disjoint;
  std::optional<double> theta;
};

struct InverseOptions {
  std::size_t cap = 64;
  std::vector<double> beta_samples{0.25, 0.5, 0.75};
  double common_rel = 1e-9;
  double verify_rel = 1e-7;
};

struct InverseResult {
  double theta = 1.0;
  double h = 0.0;
  std::vector<double> common;
  std::vector<std::size_t> common_poles;  // indices into pf.poles
  ReconstructedGreen green;
  HerglotzRational pf;
  SplitEnumeration splits;
  std::vector<SolutionCandidate> candidates;
  NSReport conditions;
};

InverseResult solve_inverse(const InverseProblem& problem, const InverseOptions& options = {});

}  // namespace ji
