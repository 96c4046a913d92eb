#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ji/chain_model.hpp"
#include "ji/direct_spectral.hpp"
#include "ji/green_weyl.hpp"
#include "ji/inverse_solver.hpp"
#include "ji/tridiag_eig.hpp"

namespace ji {

using json = nlohmann::ordered_json;

// File and syntax failures, kept apart from the domain ErrorCode set.
class IoError : public std::runtime_error {
 public:
  enum class Kind { Io, Parse };
  IoError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Parses text; syntax errors report "<origin>:<line>: ...".
json parse_json(const std::string& text, const std::string& origin = "<input>");
json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Serializes with every floating-point number printed as %.17g. Throws
// InvalidInput on non-finite numbers.
std::string dump17(const json& value, int indent = 2);
std::string format17(double x);

json to_json(const MassSpringChain& chain);
json to_json(const JacobiMatrix& J);
json to_json(const Perturbation& p);
json to_json(const SpectralMeasure& m);
json to_json(const HerglotzRational& f);
json to_json(const TwoSpectraData& d);
json to_json(const Split& s);
json to_json(const VerifyReport& r);
json to_json(const NSReport& r);
json to_json(const GreenCandidateReport& r);

MassSpringChain chain_from_json(const json& j);
JacobiMatrix matrix_from_json(const json& j);
Perturbation perturbation_from_json(const json& j);
SpectralMeasure measure_from_json(const json& j);

// Reads a list of numbers under `key`; InvalidInput if absent or malformed.
std::vector<double> number_list(const json& j, const char* key);
double number_field(const json& j, const char* key);

}  // namespace ji
