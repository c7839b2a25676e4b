#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fracstab/stabilizer.hpp"

namespace fd = fracstab::fdesolver;
namespace sp = fracstab::spectral;
namespace st = fracstab::stabilizer;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

sp::SpectralSystem reference_system() { return sp::build_sine_1d(kPi2, 64); }

sp::StateCoefficients reference_state(const sp::SpectralSystem& sys) {
  return sp::project_initial_state(sys, sp::Polynomial{{0, 0, -1, 1}});
}
}  // namespace

TEST_CASE("stabilization loop terminates on the reference problem",
          "[stabilizer]") {
  const auto sys = reference_system();
  const auto fb = sp::FeedbackLaw::uniform(-kPi, sys.modes.size(), kPi);
  const auto c0 = reference_state(sys);
  const auto times = fd::make_time_grid(20.0, 0.1);
  const auto rep = st::run_algorithm(sys, fb, c0, 0.9, 5e-3, times);
  CHECK(rep.verdict.kind == sp::VerdictKind::MittagLefflerStable);
  CHECK_THAT(rep.verdict.xi, WithinRel(kPi2, 1e-15));
  REQUIRE(rep.terminated);
  CHECK(rep.t_hit < 20.0);
  CHECK(rep.final_gradient_norm < 5e-3);
  // gradient norms decrease along the whole closed-loop trajectory
  for (std::size_t i = 1; i < rep.gradient_norms.size(); ++i)
    CHECK(rep.gradient_norms[i] <= rep.gradient_norms[i - 1] + 1e-12);
}

TEST_CASE("zero initial state terminates immediately", "[stabilizer]") {
  const auto sys = reference_system();
  const auto fb = sp::FeedbackLaw::uniform(-kPi, sys.modes.size(), kPi);
  const sp::StateCoefficients c0(sys.modes.size(), 0.0);
  const auto rep =
      st::run_algorithm(sys, fb, c0, 0.5, 1e-6, {0.0, 1.0, 2.0});
  REQUIRE(rep.terminated);
  CHECK(rep.t_hit == 0.0);
  CHECK(rep.final_gradient_norm == 0.0);
}

TEST_CASE("open loop does not terminate", "[stabilizer]") {
  const auto sys = reference_system();
  const auto fb = sp::FeedbackLaw::uniform(0.0, sys.modes.size(), kPi);
  const auto c0 = reference_state(sys);
  const auto times = fd::make_time_grid(20.0, 0.5);
  const auto rep = st::run_algorithm(sys, fb, c0, 0.9, 5e-3, times);
  CHECK(rep.verdict.kind == sp::VerdictKind::CriteriaNotSatisfied);
  CHECK(rep.verdict.has_witness);
  CHECK(rep.verdict.witness == 0.0);
  CHECK_FALSE(rep.terminated);
  // the lambda = 0 mode freezes c_1, so the gradient norm plateaus
  CHECK(rep.final_gradient_norm >= std::fabs(c0[0]) * kPi);
}

TEST_CASE("feedback enters only through the product L_scale * gain",
          "[stabilizer]") {
  const auto sys = reference_system();
  const auto c0 = reference_state(sys);
  const auto times = fd::make_time_grid(5.0, 0.5);
  const auto a = st::run_algorithm(
      sys, sp::FeedbackLaw::uniform(-kPi, sys.modes.size(), kPi), c0, 0.7,
      5e-3, times);
  const auto b = st::run_algorithm(
      sys, sp::FeedbackLaw::uniform(-kPi2, sys.modes.size(), 1.0), c0, 0.7,
      5e-3, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t n = 0; n < c0.size(); ++n)
      CHECK(a.trajectory.coeffs[i][n] == b.trajectory.coeffs[i][n]);
  CHECK(a.t_hit == b.t_hit);
}

TEST_CASE("decomposition feedback matches the direct closed loop",
          "[stabilizer][decomposition]") {
  const auto sys = reference_system();
  const auto c0 = reference_state(sys);
  const auto decomp = sp::decompose(sys, 3.0 * kPi2);
  REQUIRE(decomp.l == 1);
  const auto times = fd::make_time_grid(20.0, 0.5);
  const auto rep =
      st::run_decomposition_feedback(decomp, {-kPi}, kPi, c0, 0.9, 5e-3, times);
  const auto direct = st::run_algorithm(
      sys, sp::FeedbackLaw::unstable_only({-kPi}, sys.modes.size(), kPi), c0,
      0.9, 5e-3, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t n = 0; n < c0.size(); ++n) {
      const double d = direct.trajectory.coeffs[i][n];
      const double r = rep.trajectory.coeffs[i][n];
      CHECK(std::fabs(r - d) <= 1e-5 * std::max(1e-300, std::fabs(d)));
    }
  CHECK(rep.verdict.kind == sp::VerdictKind::MittagLefflerStable);
  CHECK(rep.terminated == direct.terminated);
}

TEST_CASE("decomposition feedback rejects bad designs",
          "[stabilizer][decomposition]") {
  const auto sys = reference_system();
  const auto c0 = reference_state(sys);
  const auto decomp = sp::decompose(sys, 3.0 * kPi2);
  CHECK_THROWS_AS(st::run_decomposition_feedback(decomp, {1.0}, kPi, c0, 0.9,
                                                 5e-3, {0.0, 1.0}),
                  fracstab::DesignError);
  CHECK_THROWS_AS(st::run_decomposition_feedback(decomp, {-kPi, -kPi}, kPi,
                                                 c0, 0.9, 5e-3, {0.0, 1.0}),
                  fracstab::DomainError);
  CHECK_THROWS_AS(st::run_decomposition_feedback(decomp, {-kPi}, kPi,
                                                 {1.0, 2.0}, 0.9, 5e-3,
                                                 {0.0, 1.0}),
                  fracstab::DomainError);
}

TEST_CASE("reference experiment table", "[stabilizer][table1]") {
  const auto rows = st::table1_experiment(st::section4_experiment());
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].has_paper_value);
    if (i > 0) {
      CHECK(rows[i].q > rows[i - 1].q);
      CHECK(rows[i].gradient_error < rows[i - 1].gradient_error);
    }
  }
  CHECK(rows[0].q == 0.1);
  CHECK(rows[0].paper_value == 1.9142);
  CHECK_THAT(rows[0].gradient_error, WithinRel(0.0192030006414, 1e-9));
  CHECK_THAT(rows[2].gradient_error, WithinRel(0.00372660467044, 1e-9));
  CHECK_THAT(rows[5].gradient_error, WithinRel(0.000211878785748, 1e-9));
  CHECK(rows[5].paper_value == 3.2e-3);

  CHECK_THROWS_AS(st::table1_experiment({}), fracstab::DomainError);
}

TEST_CASE("table1 reference lookup", "[stabilizer][table1]") {
  double v = 0.0;
  CHECK(st::table1_reference(0.23, v));
  CHECK(v == 8.718e-1);
  CHECK_FALSE(st::table1_reference(0.42, v));
}

TEST_CASE("gradient norm at the published termination instant",
          "[stabilizer]") {
  const auto sys = reference_system();
  const auto fb = sp::FeedbackLaw::uniform(-kPi, sys.modes.size(), kPi);
  const auto c0 = reference_state(sys);
  const auto rep = st::run_algorithm(sys, fb, c0, 0.9, 1e-12, {15.0});
  CHECK_THAT(rep.final_gradient_norm, WithinRel(0.000275412177401, 1e-9));
}
