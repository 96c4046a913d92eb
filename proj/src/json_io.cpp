#include "ji/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ji/error.hpp"

namespace ji {

namespace {

std::size_t line_of(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < end; ++i) line += text[i] == '\n' ? 1 : 0;
  return line;
}

void emit(const json& v, int indent, int depth, std::string& out) {
  const auto pad = [&](int d) {
    if (indent > 0) out += '\n' + std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        out += json(key).dump();
        out += indent > 0 ? ": " : ":";
        emit(item, indent, depth + 1, out);
      }
      pad(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const json& item : v) {
        if (!first) out += flat && indent > 0 ? ", " : ",";
        first = false;
        if (!flat) pad(depth + 1);
        emit(item, indent, depth + 1, out);
      }
      if (!flat) pad(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: out += format17(v.get<double>()); return;
    default: out += v.dump(); return;
  }
}

}  // namespace

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    const auto cut = what.find("parse error");
    if (cut != std::string::npos) what = what.substr(cut);
    throw IoError(IoError::Kind::Parse,
                  origin + ":" + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + what);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoError::Kind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(IoError::Kind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError(IoError::Kind::Io, "write failed for '" + path + "'");
}

std::string format17(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::InvalidInput, "cannot serialize a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump17(const json& value, int indent) {
  std::string out;
  emit(value, indent, 0, out);
  if (indent > 0) out += '\n';
  return out;
}

json to_json(const MassSpringChain& chain) {
  return json{{"masses", std::vector<double>(chain.masses().begin(), chain.masses().end())},
              {"springs", std::vector<double>(chain.springs().begin(), chain.springs().end())}};
}

json to_json(const JacobiMatrix& J) {
  return json{{"diag", std::vector<double>(J.diag().begin(), J.diag().end())},
              {"offdiag", std::vector<double>(J.offdiag().begin(), J.offdiag().end())}};
}

json to_json(const Perturbation& p) {
  return json{{"site", p.site}, {"theta", p.theta}, {"h", p.h}};
}

json to_json(const SpectralMeasure& m) {
  return json{{"nodes", m.nodes}, {"weights", m.weights}};
}

json to_json(const HerglotzRational& f) {
  return json{{"a", f.linear}, {"b", f.constant}, {"poles", f.poles}, {"residues", f.residues}};
}

json to_json(const TwoSpectraData& d) {
  json pairs = json::array();
  for (const auto& [i, j] : d.pairing) pairs.push_back({i, j});
  return json{{"spectrum_J", d.spectrum_J},
              {"spectrum_Jt", d.spectrum_Jt},
              {"common", d.common},
              {"lambda_noncommon", d.lambda_noncommon},
              {"mu_noncommon", d.mu_noncommon},
              {"pairing", pairs},
              {"gamma", d.gamma},
              {"theta", d.theta},
              {"n", d.site},
              {"violations", d.violations},
              {"common_weight_max", d.common_weight_max}};
}

json to_json(const Split& s) {
  std::vector<std::size_t> common = s.common;
  return json{{"split", s.F}, {"common", common}, {"betas", s.betas}};
}

json to_json(const VerifyReport& r) {
  return json{{"dist_J", r.dist_J}, {"dist_Jt", r.dist_Jt}, {"tolerance", r.tolerance}, {"pass", r.pass}};
}

json to_json(const NSReport& r) {
  return json{{"interlacing", r.interlacing},
              {"violations", r.violations},
              {"bad_gap", r.bad_gap},
              {"shift_sum", r.shift_sum},
              {"constancy", r.constancy},
              {"constancy_deviation", r.constancy_deviation},
              {"cardinality", r.cardinality},
              {"available_poles", r.available_poles},
              {"required_poles", r.required_poles},
              {"pass", r.pass()},
              {"caveat", r.caveat}};
}

json to_json(const GreenCandidateReport& r) {
  return json{{"herglotz", r.herglotz},
              {"normalized", r.normalized},
              {"cardinality", r.cardinality},
              {"min_residue", r.min_residue},
              {"linear_coeff", r.linear_coeff},
              {"pole_count", r.pole_count},
              {"required_poles", r.required_poles},
              {"pass", r.pass()}};
}

std::vector<double> number_list(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
    fail(ErrorCode::InvalidInput, std::string("expected a number list under \"") + key + "\"");
  }
  std::vector<double> out;
  for (const json& v : j.at(key)) {
    if (!v.is_number()) fail(ErrorCode::InvalidInput, std::string("non-numeric entry in \"") + key + "\"");
    out.push_back(v.get<double>());
  }
  return out;
}

double number_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
    fail(ErrorCode::InvalidInput, std::string("expected a number under \"") + key + "\"");
  }
  return j.at(key).get<double>();
}

MassSpringChain chain_from_json(const json& j) {
  return MassSpringChain(number_list(j, "masses"), number_list(j, "springs"));
}

JacobiMatrix matrix_from_json(const json& j) {
  return JacobiMatrix(number_list(j, "diag"), number_list(j, "offdiag"));
}

Perturbation perturbation_from_json(const json& j) {
  Perturbation p;
  const double site = number_field(j, "site");
  if (site < 1 || site != std::floor(site)) fail(ErrorCode::InvalidInput, "site must be a positive integer");
  p.site = static_cast<std::size_t>(site);
  p.theta = number_field(j, "theta");
  p.h = number_field(j, "h");
  p.validate();
  return p;
}

SpectralMeasure measure_from_json(const json& j) {
  SpectralMeasure m{number_list(j, "nodes"), number_list(j, "weights")};
  if (m.nodes.size() != m.weights.size()) fail(ErrorCode::InvalidInput, "nodes and weights differ in length");
  return m;
}

}  // namespace ji
