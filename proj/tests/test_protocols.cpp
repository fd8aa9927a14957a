#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ergokit/oracle.hpp"
#include "test_helpers.hpp"
#include "ergokit/protocols.hpp"

using namespace ergokit;

namespace {

DensityMatrix diag3(double a, double b, double c) {
  return DensityMatrix(DiagonalState({a, b, c}));
}

}  // namespace

TEST_CASE("channel construction and application") {
  const auto flip = population_reversal(2);
  CHECK(flip.matrix()(0, 1).real() == 1.0);
  CHECK(flip.matrix()(1, 0).real() == 1.0);
  CHECK(flip.matrix()(0, 0).real() == 0.0);

  const auto rev = population_reversal(3);
  CHECK(rev.matrix()(2, 0).real() == 1.0);
  CHECK(rev.matrix()(1, 1).real() == 1.0);
  CHECK(rev.matrix()(0, 2).real() == 1.0);

  // Involution.
  CHECK((rev.matrix() * rev.matrix() - Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);

  const auto rho = diag3(0.2, 0.3, 0.5);
  const auto flipped = apply(rev, rho);
  CHECK(flipped.matrix()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(flipped.matrix()(2, 2).real() == doctest::Approx(0.2).epsilon(1e-15));

  const UnitaryChannel id(Eigen::MatrixXcd::Identity(3, 3));
  CHECK((apply(id, rho).matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);

  // Equal-weight two-member channel averages the two conjugations.
  const RandomUnitaryChannel mix({{0.5, id}, {0.5, rev}});
  const auto averaged = apply(mix, rho);
  const Eigen::MatrixXcd expected =
      0.5 * rho.matrix() + 0.5 * (rev.matrix() * rho.matrix() * rev.matrix().adjoint());
  CHECK((averaged.matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::MatrixXcd not_unitary = Eigen::MatrixXcd::Identity(2, 2) * 1.5;
  CHECK_THROWS_AS((UnitaryChannel(not_unitary)), std::invalid_argument);
  CHECK_THROWS_AS((RandomUnitaryChannel({{0.6, id}, {0.6, rev}})), std::invalid_argument);
}

TEST_CASE("energy variation under channels") {
  const Spectrum spec({0.0, 0.6, 2.0});
  const auto rev = population_reversal(3);
  const UnitaryChannel id(Eigen::MatrixXcd::Identity(3, 3));

  CHECK(delta_E(diag3(0.2, 0.3, 0.5), id, spec) == 0.0);
  CHECK(delta_E(diag3(0.2, 0.3, 0.5), rev, spec) == doctest::Approx(0.6).epsilon(1e-12));

  // Mixture response is the weighted member response.
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    const auto rho = sample_state_at_energy(spec, 2.0 * u(rng), rng());
    const RandomUnitaryChannel mix({{0.25, id}, {0.75, rev}});
    const double direct = delta_E(rho, mix, spec);
    const double weighted = 0.25 * delta_E(rho, id, spec) + 0.75 * delta_E(rho, rev, spec);
    CHECK(direct == doctest::Approx(weighted).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("reversal on antisymmetric spectra extracts 2(E - eps_mean) from every state") {
  const Spectrum spec({0.0, 0.6, 2.0, 3.4, 4.0});
  const auto rev = population_reversal(5);
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 200; ++i) {
    const double e = 4.0 * u(rng);
    const auto rho = sample_state_at_energy(spec, e, rng());
    CHECK(delta_E(rho, rev, spec) ==
          doctest::Approx(2.0 * (mean_energy(rho, spec) - 2.0)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("worst case via the dual scan") {
  SUBCASE("identity channel is exactly zero") {
    const Spectrum spec({0.0, 0.6, 2.0});
    const RandomUnitaryChannel id{UnitaryChannel(Eigen::MatrixXcd::Identity(3, 3))};
    const auto res = worst_case_delta_E(id, spec, 1.2, Mode::Extract);
    CHECK(res.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(mean_energy(res.witness_state, spec) == doctest::Approx(1.2).epsilon(1e-8));
  }

  SUBCASE("antisymmetric reversal saturates the closed form") {
    const Spectrum spec({0.0, 0.6, 2.0, 3.4, 4.0});
    const RandomUnitaryChannel rev{population_reversal(5)};
    for (double e : {2.2, 2.8, 3.3, 3.9}) {
      const auto res = worst_case_delta_E(rev, spec, e, Mode::Extract);
      CHECK(res.value == doctest::Approx(2.0 * (e - 2.0)).epsilon(1e-8));
      CHECK(delta_E(res.witness_state, rev, spec) == doctest::Approx(res.value).epsilon(1e-8));
      CHECK(mean_energy(res.witness_state, spec) == doctest::Approx(e).epsilon(1e-8));
    }
    for (double e : {0.5, 1.2, 1.9}) {
      const auto res = worst_case_delta_E(rev, spec, e, Mode::Inject);
      CHECK(res.value == doctest::Approx(2.0 * (2.0 - e)).epsilon(1e-8));
    }
  }

  SUBCASE("detuned qutrit reversal matches the piecewise closed form") {
    for (double delta : {-0.4, 0.0, 0.5}) {
      const auto spec = qutrit_spectrum(1.0, delta);
      const RandomUnitaryChannel rev{population_reversal(3)};
      for (int i = 1; i < 20; ++i) {
        const double e = 2.0 * i / 20.0;
        const auto res = worst_case_delta_E(rev, spec, e, Mode::Extract);
        const double clamped = std::max(0.0, res.value);
        CHECK(clamped ==
              doctest::Approx(qutrit_worst_rev(1.0, delta, e)).epsilon(1e-8).scale(1.0));
        CHECK(delta_E(res.witness_state, rev, spec) ==
              doctest::Approx(res.value).epsilon(1e-8).scale(1.0));
        CHECK(mean_energy(res.witness_state, spec) == doctest::Approx(e).epsilon(1e-8));
      }
    }
  }

  SUBCASE("boundary energies evaluate directly") {
    const Spectrum spec({0.0, 0.6, 2.0});
    const RandomUnitaryChannel rev{population_reversal(3)};
    const auto bottom = worst_case_delta_E(rev, spec, 0.0, Mode::Extract);
    CHECK(bottom.value == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(mean_energy(bottom.witness_state, spec) == doctest::Approx(0.0).scale(1.0));
    const auto top = worst_case_delta_E(rev, spec, 2.0, Mode::Extract);
    CHECK(top.value == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("dual value stays below every sampled state") {
    std::mt19937_64 rng(103);
    const auto spec = qutrit_spectrum(1.0, 0.5);
    const RandomUnitaryChannel rev{population_reversal(3)};
    for (double e : {1.3, 1.6, 1.9}) {
      const auto res = worst_case_delta_E(rev, spec, e, Mode::Extract);
      const double sampled = worst_case_sampling_oracle(rev, spec, e, 300, rng());
      CHECK(sampled >= res.value - 1e-8);
    }
  }

  SUBCASE("worst case never exceeds the minimum curve") {
    const auto spec = qutrit_spectrum(1.0, -0.4);
    const auto curve = min_ergotropy_curve(spec);
    const RandomUnitaryChannel rev{population_reversal(3)};
    for (int i = 1; i < 10; ++i) {
      const double e = 0.2 * i;
      const auto res = worst_case_delta_E(rev, spec, e, Mode::Extract);
      CHECK(res.value <= curve.evaluate(e) + 1e-8);
    }
  }
}

TEST_CASE("qutrit reversal closed form") {
  CHECK(qutrit_worst_rev(1.0, -0.4, 1.3) == doctest::Approx(0.6).epsilon(1e-13));
  CHECK(qutrit_worst_rev(1.0, -0.4, 0.9) == 0.0);
  CHECK(qutrit_worst_rev(1.0, 0.5, 1.75) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(qutrit_worst_rev(1.0, 0.5, 7.0 / 6.0) == 0.0);  // eps_mean
  CHECK(qutrit_worst_rev(1.0, -0.4, 13.0 / 15.0) == 0.0);
  CHECK_THROWS_AS(qutrit_worst_rev(1.0, 0.0, 2.5), std::invalid_argument);
}

TEST_CASE("diagonal-optimal unitary extracts the curve value from diagonal states") {
  std::mt19937_64 rng(107);
  for (double delta : {-0.7, -0.4, 0.0, 0.3, 0.5}) {
    const auto spec = qutrit_spectrum(1.0, delta);
    const auto curve = min_ergotropy_curve(spec);
    const auto st = spec.stats();
    const double seg_hi = (delta >= 0.0) ? 1.5 * st.eps_mean : 2.0;
    for (int i = 0; i <= 10; ++i) {
      const double e = st.eps_mean + (seg_hi - st.eps_mean) * i / 10.0;
      const auto u = qutrit_diag_optimal_unitary(1.0, delta, e, 0.3, 0.9, -0.4);
      for (int s = 0; s < 20; ++s) {
        const auto probs = sample_diagonal_state_at_energy(spec, e, rng());
        const double de = delta_E(DensityMatrix(probs), u, spec);
        CHECK(de == doctest::Approx(curve.evaluate(e)).epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("phases do not change diagonal-state performance") {
  std::mt19937_64 rng(109);
  const auto spec = qutrit_spectrum(1.0, 0.5);
  const double e = 1.4;
  const auto probs = sample_diagonal_state_at_energy(spec, e, rng());
  const double base =
      delta_E(DensityMatrix(probs), qutrit_diag_optimal_unitary(1.0, 0.5, e, 0, 0, 0), spec);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    const auto u = qutrit_diag_optimal_unitary(1.0, 0.5, e, angle(rng), angle(rng), angle(rng));
    CHECK(delta_E(DensityMatrix(probs), u, spec) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("balanced spacing reduces to the reversal") {
  const auto spec = qutrit_spectrum(1.0, 0.0);
  const auto rev = population_reversal(3);
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 30; ++i) {
    const double e = 1.0 + u(rng);  // above eps_mean
    const auto uq = qutrit_diag_optimal_unitary(1.0, 0.0, e, 0.4, 1.1, 0.2);
    const auto rho = sample_state_at_energy(spec, e, rng());
    CHECK(delta_E(rho, uq, spec) ==
          doctest::Approx(delta_E(rho, rev, spec)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("coherence penalty closed forms") {
  // Values frozen from the closed-form arithmetic done independently.
  CHECK(qutrit_coherence_penalty(1.0, 0.5, 1.4) ==
        doctest::Approx(0.5887840577551898).epsilon(1e-12));
  CHECK(qutrit_coherence_penalty(1.0, 0.5, 1.72) ==
        doctest::Approx(0.7231676351797199).epsilon(1e-12));
  CHECK(qutrit_coherence_penalty(1.0, -0.4, 1.3) ==
        doctest::Approx(0.27665825920717285).epsilon(1e-12));
  CHECK(qutrit_coherence_penalty(1.0, 0.0, 1.5) == 0.0);
  CHECK(qutrit_coherence_penalty(1.0, -0.4, 2.0) == doctest::Approx(0.0).scale(1.0));

  // Continuity across the f(E) branch point.
  const double crossover = 1.5 * 2.0 / 1.75;
  const double below = qutrit_coherence_penalty(1.0, 0.5, crossover - 1e-9);
  const double above = qutrit_coherence_penalty(1.0, 0.5, crossover + 1e-9);
  CHECK(below == doctest::Approx(above).epsilon(1e-6));

  CHECK_THROWS_AS(qutrit_coherence_penalty(1.0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(qutrit_coherence_penalty(1.0, 0.5, 1.9), std::invalid_argument);
  CHECK_THROWS_AS(qutrit_coherence_penalty(1.0, -0.4, 0.5), std::invalid_argument);
}

TEST_CASE("adversarial states saturate the penalty") {
  for (double delta : {-0.6, -0.4, 0.3, 0.5}) {
    const auto spec = qutrit_spectrum(1.0, delta);
    const auto curve = min_ergotropy_curve(spec);
    const auto st = spec.stats();
    const double seg_hi = (delta >= 0.0) ? 1.5 * st.eps_mean : 2.0;
    const double alpha = 0.7, theta = -0.3;
    for (int i = 1; i <= 10; ++i) {
      const double e = st.eps_mean + (seg_hi - st.eps_mean) * i / 11.0;
      const auto rho = adversarial_coherent_state(1.0, delta, e, alpha, theta);
      CHECK(mean_energy(rho, spec) == doctest::Approx(e).epsilon(1e-12));
      const auto u = qutrit_diag_optimal_unitary(1.0, delta, e, alpha, theta, 0.0);
      const double expected = curve.evaluate(e) - qutrit_coherence_penalty(1.0, delta, e);
      CHECK(delta_E(rho, u, spec) == doctest::Approx(expected).epsilon(1e-9).scale(1.0));

      // Opposite phase flips the coherent contribution.
      const auto u_flip =
          qutrit_diag_optimal_unitary(1.0, delta, e, alpha + std::numbers::pi, theta, 0.0);
      const double flipped = curve.evaluate(e) + qutrit_coherence_penalty(1.0, delta, e);
      CHECK(delta_E(rho, u_flip, spec) == doctest::Approx(flipped).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("two-phase random unitary channel restores the curve value for every state") {
  std::mt19937_64 rng(127);
  for (double delta : {-0.4, 0.0, 0.5}) {
    const auto spec = qutrit_spectrum(1.0, delta);
    const auto curve = min_ergotropy_curve(spec);
    const auto st = spec.stats();
    const double seg_hi = (delta >= 0.0) ? 1.5 * st.eps_mean : 2.0;
    for (int i = 1; i <= 5; ++i) {
      const double e = st.eps_mean + (seg_hi - st.eps_mean) * i / 6.0;
      const auto channel = qutrit_random_unitary_channel(1.0, delta, e, 0.4, 1.2, -0.8);
      const double target = curve.evaluate(e);
      for (int s = 0; s < 40; ++s) {
        const auto rho = sample_state_at_energy(spec, e, rng());
        CHECK(delta_E(rho, channel, spec) == doctest::Approx(target).epsilon(1e-9).scale(1.0));
      }
      const auto adv = adversarial_coherent_state(1.0, delta, e, 0.4, 1.2);
      CHECK(delta_E(adv, channel, spec) == doctest::Approx(target).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("dual scan agrees with the analytic worst case of the diagonal-optimal unitary") {
  for (double delta : {-0.4, 0.5}) {
    const auto spec = qutrit_spectrum(1.0, delta);
    const auto curve = min_ergotropy_curve(spec);
    const auto st = spec.stats();
    const double seg_hi = (delta >= 0.0) ? 1.5 * st.eps_mean : 2.0;
    for (int i = 1; i < 6; ++i) {
      const double e = st.eps_mean + (seg_hi - st.eps_mean) * i / 6.0;
      const auto u = qutrit_diag_optimal_unitary(1.0, delta, e, 0.0, 0.0, 0.0);
      const auto res = worst_case_delta_E(RandomUnitaryChannel(u), spec, e, Mode::Extract);
      const double analytic = curve.evaluate(e) - qutrit_coherence_penalty(1.0, delta, e);
      CHECK(res.value == doctest::Approx(analytic).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("dual scan on random channels: witness consistency and sampled dominance") {
  std::mt19937_64 rng(167);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const auto spec = ergokit::testing::random_gapped_spectrum(d, rng);
    Eigen::MatrixXcd g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(g).householderQ();
    const RandomUnitaryChannel channel{UnitaryChannel(q)};
    const double e = spec.stats().eps_min + u(rng) * spec.span();
    const Mode mode = (rng() % 2 == 0) ? Mode::Extract : Mode::Inject;

    const auto res = worst_case_delta_E(channel, spec, e, mode);
    const double de = delta_E(res.witness_state, channel, spec);
    const double witness_value = (mode == Mode::Extract) ? de : -de;
    CHECK(std::abs(witness_value - res.value) <= 1e-8);
    CHECK(std::abs(mean_energy(res.witness_state, spec) - e) <= 1e-8);
    CHECK(worst_case_sampling_oracle(channel, spec, e, 60, rng(), mode) >= res.value - 1e-8);
  }
}

TEST_CASE("gibbs state solver") {
  const Spectrum qubit({0.0, 1.0});
  const auto half = gibbs_state(qubit, 0.5);
  CHECK(half.prob(0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(half.prob(1) == doctest::Approx(0.5).epsilon(1e-13));

  const Spectrum spec({0.0, 0.6, 2.0});
  const auto uniform = gibbs_state(spec, 13.0 / 15.0);
  for (int k = 0; k < 3; ++k) CHECK(uniform.prob(k) == doctest::Approx(1.0 / 3).epsilon(1e-13));

  // Negative-beta branch; weights frozen from an independent bisection run.
  const auto hot = gibbs_state(spec, 1.5);
  CHECK(hot.prob(0) == doctest::Approx(0.11343265).epsilon(1e-6));
  CHECK(hot.prob(1) == doctest::Approx(0.19509622).epsilon(1e-6));
  CHECK(hot.prob(2) == doctest::Approx(0.69147113).epsilon(1e-6));
  CHECK(mean_energy(hot, spec) == doctest::Approx(1.5).epsilon(1e-12));

  for (double e : {0.2, 0.5, 1.0, 1.8, 1.95}) {
    const auto g = gibbs_state(spec, e);
    CHECK(std::abs(mean_energy(g, spec) - e) <= 3e-12);
  }

  CHECK_THROWS_AS(gibbs_state(spec, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gibbs_state(spec, 2.0), std::invalid_argument);
}

TEST_CASE("pinsker lower bound") {
  const Spectrum spec({0.0, 0.6, 2.0});
  const auto st = spec.stats();

  // At eps_mean the curve vanishes and the Gibbs state is uniform.
  const double at_mean = pinsker_lower_bound(spec, st.eps_mean, Mode::Extract);
  CHECK(at_mean == doctest::Approx(-2.964607614735022).epsilon(1e-12));

  // Approaching the top the entropy term dies and the bound tends to the curve.
  const auto curve = min_ergotropy_curve(spec);
  const double near_top = pinsker_lower_bound(spec, 1.999999, Mode::Extract);
  CHECK(near_top > curve.evaluate(1.999999) - 2e-2);

  // Every sampled state beats the bound under the diagonal-optimal unitary.
  std::mt19937_64 rng(131);
  for (double e : {1.0, 1.1, 1.25}) {
    const double bound = pinsker_lower_bound(spec, e, Mode::Extract);
    const auto u = qutrit_diag_optimal_unitary(1.0, -0.4, e, 0.0, 0.0, 0.0);
    for (int i = 0; i < 100; ++i) {
      const auto rho = sample_state_at_energy(spec, e, rng());
      CHECK(delta_E(rho, u, spec) >= bound - 1e-9);
    }
  }
}
