#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "ji/chain_model.hpp"

namespace ji {

enum class FixtureKind { Uniform, RandomLogUniform, Palindromic, CommonSpectrum };

FixtureKind parse_fixture_kind(const std::string& name);
std::string to_string(FixtureKind kind);

// mt19937_64 with a fixed double conversion so streams match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi);
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Random masses and springs drawn log-uniformly from [lo, hi].
MassSpringChain random_chain(std::size_t size, Rng& rng, double lo = 0.5, double hi = 2.0);

// Site at which the common-spectrum fixture makes J_n^- and J_n^+ share an eigenvalue.
std::size_t common_spectrum_site(std::size_t size);

MassSpringChain make_fixture(FixtureKind kind, std::size_t size, std::uint64_t seed);

}  // namespace ji
