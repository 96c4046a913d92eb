// Command-line front end over the C API in ji.h.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ji/ji.h"

namespace {

using json = nlohmann::ordered_json;

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level() {
  const char* env = std::getenv("JI_LOG");
  if (env == nullptr) return Level::Warn;
  const std::string v = env;
  if (v == "error") return Level::Error;
  if (v == "info") return Level::Info;
  if (v == "debug") return Level::Debug;
  return Level::Warn;
}

void log(Level level, const std::string& msg) {
  static const Level threshold = log_level();
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (level <= threshold) std::cerr << "ji: " << names[static_cast<int>(level)] << ": " << msg << '\n';
}

// Failure carrying the process exit code.
struct Exit {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{1, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Exit{1, "cannot write '" + path.string() + "'"};
  log(Level::Info, "wrote " + path.string());
}

std::filesystem::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Exit{1, "cannot create directory '" + dir + "': " + ec.message()};
  return dir;
}

void check(ji_status s) {
  if (s != JI_OK) throw Exit{ji_exit_code(s), ji_last_error()};
}

// Takes ownership of a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  ji_string_free(s);
  return out;
}

json parse_or_exit(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) line += text[i] == '\n';
    throw Exit{1, origin + ":" + std::to_string(line) + ": " + e.what()};
  }
}

struct Options {
  std::string input;
  std::string out;
  std::string config_file;
  std::string grid_file;
  std::string kind = "random-loguniform";
  std::optional<std::size_t> size;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
  std::optional<std::size_t> site;
  std::optional<double> theta;
  std::optional<double> h;
  std::optional<double> gamma;
  std::optional<std::string> mode;
};

std::string config_json(const Options& o) {
  json c = o.config_file.empty() ? json::object() : parse_or_exit(read_file(o.config_file), o.config_file);
  if (o.size) c["size"] = *o.size;
  if (o.seed) c["seed"] = *o.seed;
  if (o.cap) c["cap"] = *o.cap;
  return c.dump();
}

std::string spectra_with_overrides(const Options& o) {
  json s = parse_or_exit(read_file(o.input), o.input);
  if (!s.is_object()) throw Exit{2, "InvalidInput: spectra file must hold a JSON object"};
  if (o.gamma) s["gamma"] = *o.gamma;
  if (o.site) s["n"] = *o.site;
  if (o.mode) s["mode"] = *o.mode;
  if (o.theta) s["theta"] = *o.theta;
  return s.dump();
}

std::string chain_text(const Options& o) {
  if (!o.input.empty()) {
    // Parse here first so syntax errors carry the file name.
    std::string text = read_file(o.input);
    parse_or_exit(text, o.input);
    return text;
  }
  char* chain = nullptr;
  check(ji_fixture_json(o.kind.c_str(), o.size.value_or(8), o.seed.value_or(1), &chain));
  return take(chain);
}

int cmd_fixture(const Options& o) {
  char* chain = nullptr;
  check(ji_fixture_json(o.kind.c_str(), o.size.value_or(8), o.seed.value_or(1), &chain));
  const std::string text = take(chain);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(prepare_dir(o.out) / "chain.json", text);
  }
  return 0;
}

int cmd_forward(const Options& o) {
  if (o.out.empty()) throw Exit{2, "InvalidInput: --out is required"};
  const std::string chain = chain_text(o);
  const std::string cfg = config_json(o);
  char* fwd = nullptr;
  char* two = nullptr;
  check(ji_forward_json(chain.c_str(), o.site.value_or(1), o.theta.value_or(0.5), o.h.value_or(0.0), cfg.c_str(),
                        &fwd, &two));
  const std::string forward = take(fwd);
  const std::string spectra = take(two);
  const auto dir = prepare_dir(o.out);
  write_file(dir / "forward.json", forward);
  write_file(dir / "two_spectra.json", spectra);
  const json f = json::parse(forward);
  std::cout << "gamma " << f["gamma"].dump() << ", master identity "
            << (f["master_report"]["pass"].get<bool>() ? "pass" : "FAIL") << ", product form "
            << (f["product_form"]["pass"].get<bool>() ? "pass" : "FAIL") << '\n';
  return 0;
}

int cmd_inverse(const Options& o) {
  if (o.out.empty()) throw Exit{2, "InvalidInput: --out is required"};
  const std::string spectra = spectra_with_overrides(o);
  const std::string cfg = config_json(o);
  char* cands = nullptr;
  char* rep = nullptr;
  check(ji_inverse_json(spectra.c_str(), cfg.c_str(), &cands, &rep));
  const std::string candidates = take(cands);
  const std::string report = take(rep);
  const auto dir = prepare_dir(o.out);
  write_file(dir / "candidates.json", candidates);
  write_file(dir / "report.json", report);
  const json r = json::parse(report);
  for (const auto& w : r["warnings"]) log(Level::Warn, w.get<std::string>());
  std::cout << r["candidates_emitted"].get<std::size_t>() << " candidates, theta " << r["theta"].dump() << ", "
            << (r["all_pass"].get<bool>() ? "all verified" : "SOME FAILED VERIFICATION") << '\n';
  return 0;
}

int cmd_check(const Options& o) {
  const std::string spectra = spectra_with_overrides(o);
  const std::string cfg = config_json(o);
  char* rep = nullptr;
  check(ji_check_json(spectra.c_str(), cfg.c_str(), &rep));
  const std::string report = take(rep);
  if (o.out.empty()) {
    std::cout << report;
  } else {
    write_file(prepare_dir(o.out) / "check.json", report);
  }
  return 0;
}

int cmd_sweep(const Options& o) {
  if (o.out.empty()) throw Exit{2, "InvalidInput: --out is required"};
  if (o.grid_file.empty()) throw Exit{2, "InvalidInput: --grid is required"};
  const std::string chain = chain_text(o);
  const std::string grid = read_file(o.grid_file);
  const std::string cfg = config_json(o);
  char* rows = nullptr;
  char* pairs = nullptr;
  check(ji_sweep_csv(chain.c_str(), grid.c_str(), cfg.c_str(), &rows, &pairs));
  const std::string rows_csv = take(rows);
  const std::string pairs_csv = take(pairs);
  const auto dir = prepare_dir(o.out);
  write_file(dir / "sweep.csv", rows_csv);
  write_file(dir / "sweep_pairs.csv", pairs_csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward and inverse two-spectra toolkit for mass-spring chains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ji_version());
  // Long-only help: --h is the perturbation shift.
  app.set_help_flag("--help", "Print this help message and exit");
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--config", o.config_file, "Run configuration JSON");
    sub->add_option("--size", o.size, "Truncation size N");
    sub->add_option("--seed", o.seed, "Random seed");
  };

  auto* fixture = app.add_subcommand("fixture", "Generate a chain fixture");
  add_common(fixture);
  fixture->add_option("--kind", o.kind, "uniform | random-loguniform | palindromic | common-spectrum");

  auto* forward = app.add_subcommand("forward", "Spectra of J and the perturbed J, with identity checks");
  add_common(forward);
  forward->add_option("chain", o.input, "Chain JSON (omit to generate a fixture)");
  forward->add_option("--kind", o.kind, "Fixture kind when no chain file is given");
  forward->add_option("--site", o.site, "Perturbed site n");
  forward->add_option("--theta", o.theta, "Perturbation factor theta");
  forward->add_option("--h", o.h, "Perturbation shift h");

  auto* inverse = app.add_subcommand("inverse", "Reconstruct candidate matrices from two spectra");
  add_common(inverse);
  inverse->add_option("spectra", o.input, "Two-spectra JSON")->required();
  inverse->add_option("--gamma", o.gamma, "Override gamma");
  inverse->add_option("--site", o.site, "Override n");
  inverse->add_option("--mode", o.mode, "disjoint | common | gamma-in-spectrum");
  inverse->add_option("--theta", o.theta, "theta for gamma-in-spectrum mode");
  inverse->add_option("--cap", o.cap, "Maximum number of candidates");

  auto* check_cmd = app.add_subcommand("check", "Necessary-and-sufficient condition report");
  add_common(check_cmd);
  check_cmd->add_option("spectra", o.input, "Two-spectra JSON")->required();
  check_cmd->add_option("--gamma", o.gamma, "Override gamma");
  check_cmd->add_option("--site", o.site, "Override n");
  check_cmd->add_option("--mode", o.mode, "disjoint | common | gamma-in-spectrum");

  auto* sweep = app.add_subcommand("sweep", "Shift sums, derivatives and mass ratios over a (theta, h, n) grid");
  add_common(sweep);
  sweep->add_option("chain", o.input, "Chain JSON (omit to generate a fixture)");
  sweep->add_option("--kind", o.kind, "Fixture kind when no chain file is given");
  sweep->add_option("--grid", o.grid_file, "Grid JSON {\"theta\":[..],\"h\":[..],\"site\":[..]}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*fixture) return cmd_fixture(o);
    if (*forward) return cmd_forward(o);
    if (*inverse) return cmd_inverse(o);
    if (*check_cmd) return cmd_check(o);
    if (*sweep) return cmd_sweep(o);
  } catch (const Exit& e) {
    log(Level::Error, e.message);
    return e.code;
  } catch (const std::exception& e) {
    log(Level::Error, e.what());
    return 3;
  }
  return 2;
}
