#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "opvar/error.hpp"
#include "opvar/quadrature.hpp"
#include "oracles.hpp"

using namespace opvar;
using std::numbers::pi;

namespace {

ComplexMatrix rotation_mean_over_0_pi() {
  ComplexMatrix m(2, 2);
  m << 0, 2, -2, 0;
  return m / pi;
}

double weight_sum(const SampledField& sf) {
  return std::accumulate(sf.weights().values().begin(), sf.weights().values().end(), 0.0);
}

}  // namespace

TEST_CASE("rule parsing") {
  CHECK(parse_rule("midpoint") == QuadratureRule::Midpoint);
  CHECK(parse_rule("trapezoid") == QuadratureRule::Trapezoid);
  CHECK_THROWS_AS(parse_rule("simpson"), Error);
}

TEST_CASE("discretize constant field") {
  std::mt19937_64 rng(127);
  const auto c = oracle::random_matrix(rng, 3, 3);
  const auto f = constant_field(c, -1.0, 2.0);
  for (auto rule : {QuadratureRule::Midpoint, QuadratureRule::Trapezoid}) {
    for (int n : {1, 2, 7}) {
      const auto sf = discretize_field(f.spec, n, rule);
      for (const auto& m : sf.matrices()) CHECK(m == c);
      CHECK(weight_sum(sf) == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(oracle::max_entry(bochner_integral(sf) - c) <= 1e-14 * (1 + oracle::max_entry(c)));
      CHECK(integral_identity_check(sf).value <= 1e-13 * (1 + oracle::opnorm(c) * oracle::opnorm(c)));
    }
  }
}

TEST_CASE("midpoint nodes and weights") {
  const auto sf = discretize_field(constant_field(ComplexMatrix::Identity(1, 1), 0, 1).spec, 2, QuadratureRule::Midpoint);
  REQUIRE(sf.nodes.size() == 2);
  CHECK(sf.nodes[0] == 0.25);
  CHECK(sf.nodes[1] == 0.75);
  CHECK(sf.weights()[0] == 0.5);
  CHECK(sf.weights()[1] == 0.5);
}

TEST_CASE("trapezoid nodes and weights") {
  const auto sf = discretize_field(constant_field(ComplexMatrix::Identity(1, 1), 0, 1).spec, 4, QuadratureRule::Trapezoid);
  REQUIRE(sf.nodes.size() == 5);
  CHECK(sf.nodes.front() == 0.0);
  CHECK(sf.nodes.back() == 1.0);
  CHECK(sf.weights()[0] == doctest::Approx(0.125));
  CHECK(sf.weights()[2] == doctest::Approx(0.25));
  for (std::size_t k = 1; k < sf.nodes.size(); ++k) CHECK(sf.nodes[k] > sf.nodes[k - 1]);
}

TEST_CASE("non-uniform density is renormalized") {
  auto spec = constant_field(ComplexMatrix::Identity(1, 1), 0, 1).spec;
  spec.density = [](double t) { return 2.0 * t; };
  const auto sf = discretize_field(spec, 4, QuadratureRule::Midpoint);
  // hand arithmetic: t_k = 1/8, 3/8, 5/8, 7/8 -> weights proportional to 1, 3, 5, 7
  const double expected[] = {0.0625, 0.1875, 0.3125, 0.4375};
  for (int k = 0; k < 4; ++k) CHECK(sf.weights()[k] == doctest::Approx(expected[k]).epsilon(1e-15));
}

TEST_CASE("bochner integral examples") {
  const auto lin = linear_field(ComplexMatrix::Identity(2, 2), 0, 1);
  for (int n : {1, 3, 10}) {
    const auto sf = discretize_field(lin.spec, n, QuadratureRule::Trapezoid);
    CHECK(oracle::max_entry(bochner_integral(sf) - 0.5 * ComplexMatrix::Identity(2, 2)) <= 1e-15);
  }
  const auto rot = rotation_field(0, pi);
  CHECK(oracle::max_entry(rot.exact_mean - rotation_mean_over_0_pi()) <= 1e-15);
  const auto sf = discretize_field(rot.spec, 256, QuadratureRule::Midpoint);
  CHECK(oracle::max_entry(bochner_integral(sf) - rotation_mean_over_0_pi()) <= 1e-4);
}

TEST_CASE("bochner integral commutes with linear functionals") {
  std::mt19937_64 rng(131);
  const auto c0 = oracle::random_matrix(rng, 3, 3);
  const auto c1 = oracle::random_matrix(rng, 3, 3);
  OperatorFieldSpec spec{0, 2, [&](double t) -> ComplexMatrix { return c0 + std::sin(t) * c1; }, {}, true};
  const auto sf = discretize_field(spec, 33, QuadratureRule::Trapezoid);
  const auto integral = bochner_integral(sf);
  Complex tr_sum{0, 0}, entry_sum{0, 0};
  for (std::size_t k = 0; k < sf.matrices().size(); ++k) {
    tr_sum += sf.weights()[k] * sf.matrices()[k].trace();
    entry_sum += sf.weights()[k] * sf.matrices()[k](1, 2);
  }
  CHECK(std::abs(integral.trace() - tr_sum) <= 1e-12 * (1 + std::abs(tr_sum)));
  CHECK(std::abs(integral(1, 2) - entry_sum) <= 1e-12 * (1 + std::abs(entry_sum)));
}

TEST_CASE("integral identity is exact per discretization") {
  const auto rot = rotation_field(0, pi);
  const auto coarse = discretize_field(rot.spec, 8, QuadratureRule::Midpoint);
  const auto fine = discretize_field(rot.spec, 512, QuadratureRule::Midpoint);
  CHECK(integral_identity_check(coarse).value <= 1e-12);
  CHECK(integral_identity_check(fine).value <= 1e-12);
  CHECK(oracle::opnorm(bochner_integral(coarse) - bochner_integral(fine)) > 1e-3);
}

TEST_CASE("refinement: trapezoid on t^2 I") {
  // trapezoid error on int_0^1 t^2 with h = 1/n is h^2 / 6
  const auto f = polynomial_field({0, 0, 1}, 2, 0, 1);
  CHECK(f.exact_mean(0, 0).real() == doctest::Approx(1.0 / 3.0));
  const auto levels = refinement_study(f.spec, {4, 8, 16}, QuadratureRule::Trapezoid, f.exact_mean);
  const double expected[] = {1.0 / 96, 1.0 / 384, 1.0 / 1536};
  for (int k = 0; k < 3; ++k) {
    CHECK(levels[k].passed);
    CHECK(levels[k].detail("integral_error") == doctest::Approx(expected[k]).epsilon(1e-10));
  }
  for (int k = 1; k < 3; ++k) {
    const double ratio = levels[k - 1].detail("integral_error") / levels[k].detail("integral_error");
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.2));
  }
}

TEST_CASE("refinement: rotation field, midpoint") {
  // frozen from the closed form |1 / (n sin(pi / 2n)) - 2 / pi| (40-digit evaluation)
  const double expected_error[] = {0.0041090895677952016, 0.0010238049685641392, 0.00025573535417220763,
                                   6.3920358400970612e-5};
  const auto rot = rotation_field(0, pi);
  const auto levels = refinement_study(rot.spec, {8, 16, 32, 64}, QuadratureRule::Midpoint, rot.exact_mean);
  for (int k = 0; k < 4; ++k) CHECK(levels[k].detail("integral_error") == doctest::Approx(expected_error[k]).epsilon(1e-9));
  for (int k = 1; k < 4; ++k) CHECK(levels[k].detail("empirical_order") >= 1.8);
  CHECK(levels[1].detail("empirical_order") == doctest::Approx(2.0048778650513554).epsilon(1e-6));
}

TEST_CASE("refinement without a reference uses the finest level") {
  const auto f = constant_field(ComplexMatrix::Identity(2, 2), 0, 1);
  const auto levels = refinement_study(f.spec, {2, 4, 8}, QuadratureRule::Midpoint);
  for (const auto& l : levels) CHECK(l.detail("integral_error") == 0.0);
}

TEST_CASE("empirical orders from synthetic errors") {
  const auto orders = empirical_orders({10, 20, 40}, {1.0, 0.25, 0.0625});
  CHECK(orders[0] == doctest::Approx(2.0));
  CHECK(orders[1] == doctest::Approx(2.0));
}

TEST_CASE("discretize errors") {
  OperatorFieldSpec drifting{0, 1, [](double t) -> ComplexMatrix {
                               return t < 0.5 ? ComplexMatrix::Identity(2, 2) : ComplexMatrix::Identity(3, 3);
                             }, {}, false};
  try {
    discretize_field(drifting, 4, QuadratureRule::Midpoint);
    FAIL("expected drift error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EvaluatorDimensionDrift);
  }
  auto negative = constant_field(ComplexMatrix::Identity(1, 1), 0, 1).spec;
  negative.density = [](double t) { return t - 0.5; };
  try {
    discretize_field(negative, 4, QuadratureRule::Midpoint);
    FAIL("expected density error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeDensity);
  }
  CHECK_THROWS_AS(discretize_field(negative, 0, QuadratureRule::Midpoint), Error);
  CHECK_THROWS_AS(refinement_study(constant_field(ComplexMatrix::Identity(1, 1), 0, 1).spec, {8, 4},
                                   QuadratureRule::Midpoint),
                  Error);
}
