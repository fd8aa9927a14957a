#include <doctest.h>

#include <random>

#include "ergokit/serialization.hpp"

using namespace ergokit;

TEST_CASE("spectrum round-trips bit-exact through JSON and CSV") {
  std::mt19937_64 rng(157);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> levels(4);
    for (double& v : levels) v = u(rng);
    const Spectrum spec(levels);
    const auto via_json = spectrum_from_json(to_json(spec));
    CHECK(via_json.levels() == spec.levels());
    const auto via_csv = spectrum_from_csv(to_csv(spec));
    CHECK(via_csv.levels() == spec.levels());
  }
}

TEST_CASE("spectrum parsing accepts the inline example") {
  const auto spec = spectrum_from_json("[0, 0.6, 2]");
  CHECK(spec.levels() == std::vector<double>{0.0, 0.6, 2.0});
  CHECK_THROWS_AS(spectrum_from_json("{\"nope\":1}"), std::invalid_argument);
  CHECK_THROWS_AS(spectrum_from_json("[]"), std::invalid_argument);
  CHECK_THROWS_AS(spectrum_from_csv("not a number\n"), std::exception);
}

TEST_CASE("state JSON distinguishes matrices from probability vectors") {
  const auto diag = state_from_json("[0.2, 0.3, 0.5]");
  REQUIRE(std::holds_alternative<DiagonalState>(diag));
  CHECK(std::get<DiagonalState>(diag).prob(2) == 0.5);

  const std::string matrix_text =
      "{\"re\": [[0.5,0,0.5],[0,0,0],[0.5,0,0.5]], \"im\": [[0,0,0],[0,0,0],[0,0,0]]}";
  const auto matrix = state_from_json(matrix_text);
  REQUIRE(std::holds_alternative<DensityMatrix>(matrix));
  CHECK(std::get<DensityMatrix>(matrix).matrix()(0, 2).real() == 0.5);

  // The parser names the violated invariant.
  CHECK_THROWS_WITH_AS(
      state_from_json("{\"re\": [[1,0],[0,0.5]], \"im\": [[0,0],[0,0]]}"),
      doctest::Contains("trace"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(state_from_json("[0.7, 0.7]"), doctest::Contains("trace"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(state_from_json("[1.3, -0.3]"), doctest::Contains("positivity"),
                       std::invalid_argument);
  CHECK_THROWS_AS(state_from_json("{\"re\": [[1]]}"), std::invalid_argument);
}

TEST_CASE("density matrix JSON round-trip") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = 0.7;
  m(1, 1) = 0.3;
  m(0, 1) = std::complex<double>(0.1, 0.2);
  m(1, 0) = std::conj(m(0, 1));
  const DensityMatrix rho(m);
  const auto back = state_from_json(to_json(rho));
  REQUIRE(std::holds_alternative<DensityMatrix>(back));
  CHECK((std::get<DensityMatrix>(back).matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("curve serialization") {
  const auto curve = min_ergotropy_curve(Spectrum({0.0, 1.5, 2.0}));
  const std::string json = to_json(curve);
  CHECK(json ==
        "{\"mode\":\"extract\",\"breakpoints\":[[1.1666666666666667,0],[1.75,1],[2,2]]}");
  const std::string csv = to_csv(curve);
  CHECK(csv == "E,value\n1.1666666666666667,0\n1.75,1\n2,2\n");
}

TEST_CASE("channel serialization round-trip") {
  const auto channel = qutrit_random_unitary_channel(1.0, 0.5, 1.4, 0.3, 0.7, -0.2);
  const auto back = channel_from_json(to_json(channel));
  REQUIRE(back.members().size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.members()[i].weight == 0.5);
    CHECK((back.members()[i].unitary.matrix() - channel.members()[i].unitary.matrix())
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(channel_from_json("{\"members\": []}"), std::invalid_argument);
  CHECK_THROWS_AS(channel_from_json("{}"), std::invalid_argument);
}

TEST_CASE("report serialization carries all fields") {
  const ErgotropyReport rep{0.6, 0.0, 0.25, 0.0, 1.18};
  CHECK(to_json(rep) ==
        "{\"ergotropy\":0.59999999999999998,\"anti_ergotropy\":0,"
        "\"coherent_ergotropy\":0.25,\"coherent_anti_ergotropy\":0,"
        "\"mean_energy\":1.1799999999999999}");

  const OracleReport oracle{0.5, 0.5, 0.0, "demo", 42};
  CHECK(to_json(oracle) ==
        "{\"method\":\"demo\",\"oracle_value\":0.5,\"analytic_value\":0.5,"
        "\"abs_gap\":0,\"samples_or_cells\":42}");
}
