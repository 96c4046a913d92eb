#include <doctest.h>

#include <cmath>
#include <string>

#include "ji/direct_spectral.hpp"
#include "ji/error.hpp"
#include "ji/fixtures.hpp"
#include "ji/json_io.hpp"
#include "ji/pipeline.hpp"
#include "support.hpp"

using namespace ji;
using support::code_of;

TEST_CASE("fixtures are deterministic") {
  for (FixtureKind kind : {FixtureKind::Uniform, FixtureKind::RandomLogUniform, FixtureKind::Palindromic,
                           FixtureKind::CommonSpectrum}) {
    const std::string a = dump17(to_json(make_fixture(kind, 9, 42)));
    const std::string b = dump17(to_json(make_fixture(kind, 9, 42)));
    CHECK(a == b);
    CHECK(parse_fixture_kind(to_string(kind)) == kind);
  }
  CHECK(make_fixture(FixtureKind::RandomLogUniform, 9, 1) != make_fixture(FixtureKind::RandomLogUniform, 9, 2));
  CHECK(code_of([] { parse_fixture_kind("zigzag"); }) == ErrorCode::InvalidInput);

  Rng r1(5);
  Rng r2(5);
  for (int i = 0; i < 100; ++i) {
    const double u = r1.uniform();
    CHECK(u == r2.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("fixture shapes") {
  const MassSpringChain u = make_fixture(FixtureKind::Uniform, 5, 3);
  for (double m : u.masses()) CHECK(m == 1.0);
  for (double k : u.springs()) CHECK(k == 1.0);
  CHECK(u.springs().size() == 6);

  const MassSpringChain r = make_fixture(FixtureKind::RandomLogUniform, 30, 3);
  for (double m : r.masses()) CHECK((m >= 0.5 && m <= 2.0));

  const MassSpringChain p = make_fixture(FixtureKind::Palindromic, 8, 3);
  for (std::size_t j = 1; j <= 8; ++j) CHECK(p.mass(j) == p.mass(9 - j));
  for (std::size_t j = 1; j <= 9; ++j) CHECK(p.spring(j) == p.spring(10 - j));

  for (std::size_t N : {3u, 4u, 8u, 20u}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const MassSpringChain c = make_fixture(FixtureKind::CommonSpectrum, N, seed);
      const TwoSpectraData d = classify_two_spectra(chain_to_jacobi(c), {common_spectrum_site(N), 0.5, 0.25});
      CHECK(d.common.size() >= 1);
    }
  }
}

TEST_CASE("17-digit JSON round trip") {
  oracle::SplitMix rng{77};
  const MassSpringChain c = support::random_chain(12, rng);
  const std::string text = dump17(to_json(c));
  CHECK(chain_from_json(parse_json(text)) == c);
  CHECK(text.back() == '\n');
  CHECK(format17(0.1) == "0.10000000000000001");
  CHECK(format17(2.0) == "2.0");
  CHECK(format17(1e300) == "1.0000000000000001e+300");

  const JacobiMatrix J = support::random_jacobi(7, rng);
  CHECK(matrix_from_json(parse_json(dump17(to_json(J)))) == J);
  const Perturbation p{3, 0.3, -1.0 / 3.0};
  const Perturbation back = perturbation_from_json(parse_json(dump17(to_json(p))));
  CHECK(back.site == 3);
  CHECK(back.theta == p.theta);
  CHECK(back.h == p.h);

  const SpectralMeasure m = spectral_measure(J);
  const SpectralMeasure mb = measure_from_json(parse_json(dump17(to_json(m))));
  CHECK(mb.nodes == m.nodes);
  CHECK(mb.weights == m.weights);

  // Emitted JSON re-parses into an equal value.
  const json two = to_json(classify_two_spectra(J, p));
  CHECK(parse_json(dump17(two)) == two);

  CHECK(code_of([] { dump17(json{{"x", std::nan("")}}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_json("{\n  \"masses\": [1, 2],\n  \"springs\": [1, 2,, 3]\n}", "chain.json");
    FAIL("no exception");
  } catch (const IoError& e) {
    CHECK(e.kind() == IoError::Kind::Parse);
    CHECK(std::string(e.what()).rfind("chain.json:3:", 0) == 0);
  }
  try {
    read_json_file("/nonexistent/dir/chain.json");
    FAIL("no exception");
  } catch (const IoError& e) {
    CHECK(e.kind() == IoError::Kind::Io);
    CHECK(std::string(e.what()).find("/nonexistent/dir/chain.json") != std::string::npos);
  }
}

TEST_CASE("schema readers reject bad input") {
  CHECK(code_of([] { chain_from_json(parse_json(R"({"masses":[1],"springs":[1]})")); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { chain_from_json(parse_json(R"({"masses":[1,-1],"springs":[1,1,1]})")); }) ==
        ErrorCode::InvalidInput);
  CHECK(code_of([] { matrix_from_json(parse_json(R"({"diag":[0,0],"offdiag":[0]})")); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { number_list(parse_json(R"({"x":[1,"a"]})"), "x"); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { number_field(parse_json(R"({})"), "x"); }) == ErrorCode::InvalidInput);
}

TEST_CASE("run configuration") {
  const RunConfig d = config_from_json(json());
  CHECK(d.size == 8);
  CHECK(d.cap == 64);

  const RunConfig c = config_from_json(parse_json(
      R"({"size": 12, "seed": 9, "cap": 10, "beta_samples": [0.5], "tolerances": {"verify_rel": 1e-6}})"));
  CHECK(c.size == 12);
  CHECK(c.seed == 9);
  CHECK(c.cap == 10);
  CHECK(c.beta_samples == std::vector<double>{0.5});
  CHECK(c.tol.verify_rel == 1e-6);
  CHECK(c.tol.common_rel == 1e-9);

  CHECK(code_of([] { config_from_json(parse_json(R"({"size": 1})")); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { config_from_json(parse_json(R"({"beta_samples": [1.0]})")); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { config_from_json(parse_json(R"({"tolerances": {"verify_rel": 0}})")); }) ==
        ErrorCode::InvalidInput);
  CHECK(code_of([] { config_from_json(parse_json(R"({"tolerances": {"bogus": 1}})")); }) == ErrorCode::InvalidInput);
}
