#include "ji/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>
#include <thread>

#include "ji/direct_spectral.hpp"
#include "ji/error.hpp"
#include "ji/green_weyl.hpp"
#include "ji/tridiag_eig.hpp"

namespace ji {

void RunConfig::validate() const {
  if (size < 2) fail(ErrorCode::InvalidInput, "truncation size must be >= 2");
  for (double t : {tol.common_rel, tol.merge_rel, tol.verify_rel, tol.master_rel, tol.product_rel}) {
    if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::InvalidInput, "tolerances must be positive");
  }
  for (double b : beta_samples) {
    if (!(b > 0.0 && b < 1.0)) fail(ErrorCode::InvalidInput, "beta samples must lie in (0, 1)");
  }
  if (cap == 0) fail(ErrorCode::InvalidInput, "candidate cap must be positive");
}

void set_tolerance(Tolerances& tol, const std::string& name, double value) {
  if (name == "common_rel") {
    tol.common_rel = value;
  } else if (name == "merge_rel") {
    tol.merge_rel = value;
  } else if (name == "verify_rel") {
    tol.verify_rel = value;
  } else if (name == "master_rel") {
    tol.master_rel = value;
  } else if (name == "product_rel") {
    tol.product_rel = value;
  } else {
    fail(ErrorCode::InvalidInput, "unknown tolerance '" + name + "'");
  }
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) fail(ErrorCode::InvalidInput, "config must be a JSON object");
  const auto count = [&](const char* key) {
    const double v = number_field(j, key);
    if (v < 0 || v != std::floor(v)) fail(ErrorCode::InvalidInput, std::string(key) + " must be a count");
    return v;
  };
  if (j.contains("size")) c.size = static_cast<std::size_t>(count("size"));
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) fail(ErrorCode::InvalidInput, "seed must be an unsigned integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("cap")) c.cap = static_cast<std::size_t>(count("cap"));
  if (j.contains("threads")) c.threads = static_cast<std::size_t>(count("threads"));
  if (j.contains("beta_samples")) c.beta_samples = number_list(j, "beta_samples");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) fail(ErrorCode::InvalidInput, "tolerances must be an object");
    for (const auto& [name, value] : t.items()) {
      if (!value.is_number()) fail(ErrorCode::InvalidInput, "tolerance '" + name + "' must be a number");
      set_tolerance(c.tol, name, value.get<double>());
    }
  }
  c.validate();
  return c;
}

namespace {

std::vector<cplx> probe_points(const JacobiMatrix& J, int count) {
  const auto lam = eigenvalues(J);
  const double lo = lam.front();
  const double hi = lam.back();
  const double s = spectral_scale(J);
  std::vector<cplx> z;
  for (int k = 0; k < count; ++k) {
    const double x = count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (count - 1);
    const double y = s * (0.05 + 0.25 * k) * (k % 2 == 0 ? 1.0 : -1.0);
    z.emplace_back(x, y);
  }
  return z;
}

std::string inverse_mode_for(const TwoSpectraData& d, double tol) {
  for (double c : d.common) {
    if (std::abs(c - d.gamma) <= tol) return "gamma-in-spectrum";
  }
  return d.common.empty() ? "disjoint" : "common";
}

}  // namespace

ForwardOutput run_forward(const MassSpringChain& chain, const Perturbation& p, const RunConfig& config) {
  config.validate();
  p.validate();
  const JacobiMatrix J = chain_to_jacobi(chain);
  const JacobiMatrix Jt = apply_perturbation(J, p);
  const double gamma = p.gamma();
  const PhysicalIncrement inc = perturbation_physics(p, chain.mass(p.site));
  const TwoSpectraData data = classify_two_spectra(J, p, config.tol.common_rel);

  json points = json::array();
  json residuals = json::array();
  double worst_master = 0.0;
  double worst_product = 0.0;
  for (const cplx z : probe_points(J, 8)) {
    const cplx M = ratio_M(J, p, z);
    const double r = master_formula_residual(J, p, z) / (1.0 + std::abs(M));
    worst_master = std::max(worst_master, r);
    worst_product = std::max(worst_product, std::abs(product_form_eval(data, z) - M) / std::abs(M));
    points.push_back({z.real(), z.imag()});
    residuals.push_back(r);
  }

  const double t2 = p.theta * p.theta;
  std::vector<double> all = data.spectrum_J;
  all.insert(all.end(), data.spectrum_Jt.begin(), data.spectrum_Jt.end());
  const double tol = config.tol.common_rel * spread(all);
  const double ratio = mass_ratio_at(data, gamma);

  ForwardOutput out;
  out.forward = json{
      {"chain", to_json(chain)},
      {"perturbation", to_json(p)},
      {"matrix", to_json(J)},
      {"perturbed_matrix", to_json(Jt)},
      {"spectrum_J", data.spectrum_J},
      {"spectrum_Jt", data.spectrum_Jt},
      {"gamma", gamma},
      {"delta_m", inc.delta_m},
      {"delta_k", inc.delta_k},
      {"theta_squared", t2},
      {"mass_ratio_at_gamma", ratio},
      {"mass_ratio_error", std::abs(ratio - t2)},
      {"pairing_violations", data.violations},
      {"master_report",
       {{"points", points},
        {"residuals", residuals},
        {"max_residual", worst_master},
        {"tolerance", config.tol.master_rel},
        {"pass", worst_master <= config.tol.master_rel}}},
      {"product_form",
       {{"max_error", worst_product},
        {"tolerance", config.tol.product_rel},
        {"pass", worst_product <= config.tol.product_rel}}},
  };

  const std::string mode = inverse_mode_for(data, tol);
  json ts = json{{"lambdas", data.spectrum_J}, {"mus", data.spectrum_Jt}, {"gamma", gamma},
                 {"n", p.site},           {"mode", mode}};
  if (mode == "gamma-in-spectrum") ts["theta"] = p.theta;
  json pairs = json::array();
  for (const auto& [i, j] : data.pairing) pairs.push_back({i, j});
  ts["common"] = data.common;
  ts["lambda_noncommon"] = data.lambda_noncommon;
  ts["mu_noncommon"] = data.mu_noncommon;
  ts["pairing"] = pairs;
  ts["violations"] = data.violations;
  out.two_spectra = std::move(ts);
  return out;
}

InverseProblem inverse_problem_from_json(const json& j) {
  InverseProblem p;
  p.lambdas = number_list(j, "lambdas");
  p.mus = number_list(j, "mus");
  p.gamma = number_field(j, "gamma");
  const double n = number_field(j, "n");
  if (n < 1 || n != std::floor(n)) fail(ErrorCode::InvalidInput, "n must be a positive integer");
  p.site = static_cast<std::size_t>(n);
  if (j.contains("mode")) {
    if (!j.at("mode").is_string()) fail(ErrorCode::InvalidInput, "mode must be a string");
    p.mode = parse_inverse_mode(j.at("mode").get<std::string>());
  }
  if (j.contains("theta") && !j.at("theta").is_null()) p.theta = number_field(j, "theta");
  return p;
}

InverseOutput run_inverse(const json& spectra, const RunConfig& config) {
  config.validate();
  const InverseProblem problem = inverse_problem_from_json(spectra);
  InverseOptions options;
  options.cap = config.cap;
  options.beta_samples = config.beta_samples;
  options.common_rel = config.tol.common_rel;
  options.verify_rel = config.tol.verify_rel;
  const InverseResult r = solve_inverse(problem, options);

  InverseOutput out;
  out.candidates = json::array();
  bool all_pass = true;
  for (const SolutionCandidate& c : r.candidates) {
    json item = to_json(c.J);
    item["split"] = c.split.F;
    item["common"] = c.split.common;
    item["betas"] = c.split.betas;
    item["residuals"] = json{{"green", c.green_residual},
                             {"dist_J", c.verify.dist_J},
                             {"dist_Jt", c.verify.dist_Jt},
                             {"tolerance", c.verify.tolerance},
                             {"pass", c.verify.pass}};
    try {
      item["chain"] = to_json(jacobi_to_chain(c.J, 1.0, 1.0));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonPhysical) throw;
      item["chain"] = nullptr;
    }
    all_pass = all_pass && c.verify.pass;
    out.candidates.push_back(std::move(item));
  }
  if (r.splits.truncated) {
    out.warnings.push_back("candidate cap " + std::to_string(config.cap) + " reached: emitted " +
                           std::to_string(r.candidates.size()) + " of " + std::to_string(r.splits.total) +
                           " splits");
  }
  double eta_sum = 0.0;
  for (double eta : r.pf.residues) eta_sum += eta;
  out.report = json{
      {"mode", to_string(problem.mode)},
      {"n", problem.site},
      {"gamma", problem.gamma},
      {"theta", r.theta},
      {"h", r.h},
      {"q_n", -r.pf.constant},
      {"eta_sum", eta_sum},
      {"common", r.common},
      {"common_poles", r.common_poles},
      {"green",
       {{"poles", r.green.poles},
        {"weights", r.green.weights},
        {"zeros", r.green.zeros},
        {"gamma_pole", r.green.gamma_pole},
        {"weight_total", r.green.weight_total()}}},
      {"inverse_green", to_json(r.pf)},
      {"green_check", to_json(check_green_candidate(r.pf, problem.site))},
      {"conditions", to_json(r.conditions)},
      {"splits_total", r.splits.total},
      {"candidates_emitted", r.candidates.size()},
      {"truncated", r.splits.truncated},
      {"all_pass", all_pass},
      {"warnings", out.warnings},
  };
  return out;
}

json run_check(const json& spectra, const RunConfig& config) {
  config.validate();
  const InverseProblem p = inverse_problem_from_json(spectra);
  return to_json(check_ns_conditions(p.lambdas, p.mus, p.gamma, p.site, p.mode, config.tol.common_rel));
}

SweepGrid grid_from_json(const json& j) {
  SweepGrid g;
  g.theta = number_list(j, "theta");
  g.h = number_list(j, "h");
  for (double s : number_list(j, "site")) {
    if (s < 1 || s != std::floor(s)) fail(ErrorCode::InvalidInput, "grid sites must be positive integers");
    g.site.push_back(static_cast<std::size_t>(s));
  }
  if (g.points() == 0) fail(ErrorCode::InvalidInput, "sweep grid is empty");
  return g;
}

namespace {

struct SweepPoint {
  std::string row;
  std::string pairs;
};

SweepPoint sweep_point(const JacobiMatrix& J, const Perturbation& p, const Tolerances& tol) {
  const TwoSpectraData d = classify_two_spectra(J, p, tol.common_rel);
  const std::size_t pairs = d.pairing.size();
  const std::size_t tail_from = pairs - pairs / 4;
  double sum = 0.0;
  double tail = 0.0;
  std::ostringstream pr;
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto [i, j] = d.pairing[k];
    const double lam = d.lambda_noncommon[i];
    const double mu = d.mu_noncommon[j];
    sum += std::abs(mu - lam);
    if (k >= tail_from) tail += std::abs(mu - lam);
    const auto idx = static_cast<std::size_t>(
        std::lower_bound(d.spectrum_Jt.begin(), d.spectrum_Jt.end(), mu) - d.spectrum_Jt.begin());
    const EigenDerivatives der = eigenvalue_derivatives(J, p, idx);
    pr << format17(p.theta) << ',' << format17(p.h) << ',' << p.site << ',' << (k + 1) << ','
       << format17(lam) << ',' << format17(mu) << ',' << format17(mu - lam) << ','
       << format17(der.dlambda_dtheta) << ',' << format17(der.dlambda_dh) << '\n';
  }
  const double ratio = mass_ratio_at(d, d.gamma);
  std::ostringstream row;
  row << format17(p.theta) << ',' << format17(p.h) << ',' << p.site << ',' << format17(d.gamma) << ','
      << d.common.size() << ',' << pairs << ',' << format17(sum) << ',' << format17(tail) << ','
      << format17(ratio) << ',' << format17(p.theta * p.theta) << ',' << d.violations << '\n';
  return {row.str(), pr.str()};
}

}  // namespace

SweepOutput run_sweep(const MassSpringChain& chain, const SweepGrid& grid, const RunConfig& config) {
  config.validate();
  const JacobiMatrix J = chain_to_jacobi(chain);
  std::vector<Perturbation> points;
  for (double theta : grid.theta) {
    for (double h : grid.h) {
      for (std::size_t site : grid.site) {
        Perturbation p{site, theta, h};
        p.validate();
        if (site + 1 > J.size()) fail(ErrorCode::InvalidInput, "grid site " + std::to_string(site) + " exceeds N - 1");
        p.gamma();
        points.push_back(p);
      }
    }
  }

  std::vector<std::optional<SweepPoint>> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        results[i] = sweep_point(J, points[i], config.tol);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, points.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepOutput out;
  out.rows_csv = "theta,h,n,gamma,common,pairs,shift_sum,shift_tail,mass_ratio,theta_sq,violations\n";
  out.pairs_csv = "theta,h,n,k,lambda_k,mu_k,shift,dmu_dtheta,dmu_dh\n";
  for (const auto& r : results) {
    out.rows_csv += r->row;
    out.pairs_csv += r->pairs;
  }
  out.rows = results.size();
  return out;
}

}  // namespace ji
