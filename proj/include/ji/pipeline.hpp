#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ji/chain_model.hpp"
#include "ji/inverse_solver.hpp"
#include "ji/json_io.hpp"

namespace ji {

struct Tolerances {
  double common_rel = 1e-9;   // common-eigenvalue matching, relative to spread
  double merge_rel = 1e-9;    // pole merging in -G^{-1}
  double verify_rel = 1e-7;   // candidate spectra vs inputs
  double master_rel = 1e-9;   // master identity, relative to 1 + |M|
  double product_rel = 1e-8;  // product form vs M
};

struct RunConfig {
  std::size_t size = 8;
  std::uint64_t seed = 1;
  std::size_t cap = 64;
  std::vector<double> beta_samples{0.25, 0.5, 0.75};
  Tolerances tol;
  std::size_t threads = 0;  // 0: hardware concurrency

  // Throws InvalidInput unless N >= 2, tolerances > 0 and betas in (0, 1).
  void validate() const;
};

// Reads {"size","seed","cap","beta_samples","threads","tolerances":{name: value}};
// missing keys keep their defaults.
RunConfig config_from_json(const json& j);
void set_tolerance(Tolerances& tol, const std::string& name, double value);

struct ForwardOutput {
  json forward;
  json two_spectra;
};

ForwardOutput run_forward(const MassSpringChain& chain, const Perturbation& p,
                          const RunConfig& config = {});

InverseProblem inverse_problem_from_json(const json& j);

struct InverseOutput {
  json candidates;
  json report;
  std::vector<std::string> warnings;
};

InverseOutput run_inverse(const json& spectra, const RunConfig& config = {});

json run_check(const json& spectra, const RunConfig& config = {});

struct SweepGrid {
  std::vector<double> theta;
  std::vector<double> h;
  std::vector<std::size_t> site;

  std::size_t points() const noexcept { return theta.size() * h.size() * site.size(); }
};

SweepGrid grid_from_json(const json& j);

struct SweepOutput {
  std::string rows_csv;   // one row per grid point
  std::string pairs_csv;  // one row per (grid point, eigenvalue pair)
  std::size_t rows = 0;
};

// Grid points run on a bounded worker pool; rows keep grid order
// (theta slowest, site fastest).
SweepOutput run_sweep(const MassSpringChain& chain, const SweepGrid& grid,
                      const RunConfig& config = {});

}  // namespace ji
