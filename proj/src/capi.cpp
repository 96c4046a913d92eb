#include "ji/ji.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "ji/chain_model.hpp"
#include "ji/error.hpp"
#include "ji/fixtures.hpp"
#include "ji/green_weyl.hpp"
#include "ji/json_io.hpp"
#include "ji/pipeline.hpp"
#include "ji/tridiag_eig.hpp"

struct ji_matrix {
  ji::JacobiMatrix value;
};

struct ji_chain {
  ji::MassSpringChain value;
};

namespace {

thread_local std::string g_last_error;

template <class F>
ji_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return JI_OK;
  } catch (const ji::Error& e) {
    g_last_error = e.what();
    return static_cast<ji_status>(static_cast<int>(e.code()));
  } catch (const ji::IoError& e) {
    g_last_error = e.what();
    return e.kind() == ji::IoError::Kind::Io ? JI_ERR_IO : JI_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return JI_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return JI_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return JI_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) ji::fail(ji::ErrorCode::InvalidInput, std::string(what) + " is NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

ji::RunConfig config_of(const char* config_json) {
  if (config_json == nullptr) return {};
  return ji::config_from_json(ji::parse_json(config_json, "<config>"));
}

}  // namespace

extern "C" {

const char* ji_last_error(void) { return g_last_error.c_str(); }

const char* ji_status_name(ji_status status) {
  switch (status) {
    case JI_OK: return "Ok";
    case JI_ERR_IO: return "IoError";
    case JI_ERR_PARSE: return "ParseError";
    case JI_ERR_INTERNAL: return "InternalError";
    default: break;
  }
  const int v = static_cast<int>(status);
  if (v >= 1 && v <= 13) return ji::to_string(static_cast<ji::ErrorCode>(v));
  return "Unknown";
}

int ji_exit_code(ji_status status) {
  if (status == JI_OK) return 0;
  if (status == JI_ERR_IO || status == JI_ERR_PARSE) return 1;
  if (status == JI_ERR_INTERNAL) return 3;
  return ji::is_numerical(static_cast<ji::ErrorCode>(static_cast<int>(status))) ? 3 : 2;
}

const char* ji_version(void) { return "0.1.0"; }

void ji_string_free(char* s) { std::free(s); }

ji_status ji_matrix_create(const double* diag, size_t n, const double* offdiag, ji_matrix** out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) require(diag, "diag");
    if (n > 1) require(offdiag, "offdiag");
    std::vector<double> d(diag, diag + n);
    std::vector<double> o;
    if (n > 1) o.assign(offdiag, offdiag + n - 1);
    *out = new ji_matrix{ji::JacobiMatrix(std::move(d), std::move(o))};
  });
}

void ji_matrix_free(ji_matrix* m) { delete m; }

size_t ji_matrix_size(const ji_matrix* m) { return m ? m->value.size() : 0; }

ji_status ji_matrix_get(const ji_matrix* m, double* diag, double* offdiag) {
  return guarded([&] {
    require(m, "matrix");
    require(diag, "diag");
    std::copy(m->value.diag().begin(), m->value.diag().end(), diag);
    if (m->value.size() > 1) {
      require(offdiag, "offdiag");
      std::copy(m->value.offdiag().begin(), m->value.offdiag().end(), offdiag);
    }
  });
}

ji_status ji_chain_create(const double* masses, size_t n, const double* springs, ji_chain** out) {
  return guarded([&] {
    require(out, "out");
    require(springs, "springs");
    if (n > 0) require(masses, "masses");
    *out = new ji_chain{ji::MassSpringChain(std::vector<double>(masses, masses + n),
                                            std::vector<double>(springs, springs + n + 1))};
  });
}

void ji_chain_free(ji_chain* c) { delete c; }

size_t ji_chain_size(const ji_chain* c) { return c ? c->value.size() : 0; }

ji_status ji_chain_get(const ji_chain* c, double* masses, double* springs) {
  return guarded([&] {
    require(c, "chain");
    require(masses, "masses");
    require(springs, "springs");
    std::copy(c->value.masses().begin(), c->value.masses().end(), masses);
    std::copy(c->value.springs().begin(), c->value.springs().end(), springs);
  });
}

ji_status ji_chain_to_jacobi(const ji_chain* c, ji_matrix** out) {
  return guarded([&] {
    require(c, "chain");
    require(out, "out");
    *out = new ji_matrix{ji::chain_to_jacobi(c->value)};
  });
}

ji_status ji_jacobi_to_chain(const ji_matrix* m, double m1, double k1, ji_chain** out) {
  return guarded([&] {
    require(m, "matrix");
    require(out, "out");
    *out = new ji_chain{ji::jacobi_to_chain(m->value, m1, k1)};
  });
}

ji_status ji_perturb(const ji_matrix* m, size_t site, double theta, double h, ji_matrix** out) {
  return guarded([&] {
    require(m, "matrix");
    require(out, "out");
    *out = new ji_matrix{ji::apply_perturbation(m->value, ji::Perturbation{site, theta, h})};
  });
}

ji_status ji_gamma(double theta, double h, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ji::gamma_of(theta, h);
  });
}

ji_status ji_eigenvalues(const ji_matrix* m, double* values) {
  return guarded([&] {
    require(m, "matrix");
    require(values, "values");
    const std::vector<double> v = ji::eigenvalues(m->value);
    std::copy(v.begin(), v.end(), values);
  });
}

ji_status ji_weyl_m(const ji_matrix* m, double re, double im, double* out_re, double* out_im) {
  return guarded([&] {
    require(m, "matrix");
    require(out_re, "out_re");
    require(out_im, "out_im");
    const ji::cplx v = ji::weyl_m(m->value, ji::cplx(re, im));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

ji_status ji_green(const ji_matrix* m, size_t site, double re, double im, double* out_re, double* out_im) {
  return guarded([&] {
    require(m, "matrix");
    require(out_re, "out_re");
    require(out_im, "out_im");
    const ji::cplx v = ji::green(m->value, site, ji::cplx(re, im));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

ji_status ji_fixture_json(const char* kind, size_t n, uint64_t seed, char** chain_json) {
  return guarded([&] {
    require(kind, "kind");
    require(chain_json, "chain_json");
    const ji::MassSpringChain c = ji::make_fixture(ji::parse_fixture_kind(kind), n, seed);
    *chain_json = copy_string(ji::dump17(ji::to_json(c)));
  });
}

ji_status ji_forward_json(const char* chain_json, size_t site, double theta, double h,
                          const char* config_json, char** forward_json, char** two_spectra_json) {
  return guarded([&] {
    require(chain_json, "chain_json");
    require(forward_json, "forward_json");
    require(two_spectra_json, "two_spectra_json");
    const ji::MassSpringChain chain = ji::chain_from_json(ji::parse_json(chain_json, "<chain>"));
    const ji::ForwardOutput r = ji::run_forward(chain, ji::Perturbation{site, theta, h}, config_of(config_json));
    std::string a = ji::dump17(r.forward);
    std::string b = ji::dump17(r.two_spectra);
    *forward_json = copy_string(a);
    *two_spectra_json = copy_string(b);
  });
}

ji_status ji_inverse_json(const char* spectra_json, const char* config_json, char** candidates_json,
                          char** report_json) {
  return guarded([&] {
    require(spectra_json, "spectra_json");
    require(candidates_json, "candidates_json");
    require(report_json, "report_json");
    const ji::InverseOutput r = ji::run_inverse(ji::parse_json(spectra_json, "<spectra>"), config_of(config_json));
    std::string a = ji::dump17(r.candidates);
    std::string b = ji::dump17(r.report);
    *candidates_json = copy_string(a);
    *report_json = copy_string(b);
  });
}

ji_status ji_check_json(const char* spectra_json, const char* config_json, char** report_json) {
  return guarded([&] {
    require(spectra_json, "spectra_json");
    require(report_json, "report_json");
    const ji::json r = ji::run_check(ji::parse_json(spectra_json, "<spectra>"), config_of(config_json));
    *report_json = copy_string(ji::dump17(r));
  });
}

ji_status ji_sweep_csv(const char* chain_json, const char* grid_json, const char* config_json,
                       char** rows_csv, char** pairs_csv) {
  return guarded([&] {
    require(chain_json, "chain_json");
    require(grid_json, "grid_json");
    require(rows_csv, "rows_csv");
    require(pairs_csv, "pairs_csv");
    const ji::MassSpringChain chain = ji::chain_from_json(ji::parse_json(chain_json, "<chain>"));
    const ji::SweepGrid grid = ji::grid_from_json(ji::parse_json(grid_json, "<grid>"));
    const ji::SweepOutput r = ji::run_sweep(chain, grid, config_of(config_json));
    std::string a = r.rows_csv;
    *rows_csv = copy_string(a);
    *pairs_csv = copy_string(r.pairs_csv);
  });
}

}  // extern "C"
