#include <cmath>
#include <random>

#include "doctest.h"
#include "opvar/ensembles.hpp"
#include "opvar/error.hpp"
#include "opvar/variance.hpp"
#include "oracles.hpp"

using namespace opvar;
using oracle::diag;
using oracle::mat2;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an opvar::Error");
  return ErrorKind::InvalidArgument;
}

WeightedFamily nilpotent_pair() {
  return WeightedFamily(ProbabilityWeights({0.5, 0.5}), {mat2(0, 1, 0, 0), mat2(0, 0, 1, 0)});
}

WeightedFamily random_family(Rng& rng, int dim, int n) {
  std::vector<ComplexMatrix> as;
  for (int i = 0; i < n; ++i) as.push_back(ginibre(rng, dim, dim));
  return WeightedFamily(random_weights(rng, n, 0.2), std::move(as));
}

}  // namespace

TEST_CASE("ProbabilityWeights invariants") {
  CHECK_NOTHROW(ProbabilityWeights({0.25, 0.75}));
  CHECK_NOTHROW(ProbabilityWeights({1.0, 0.0}));
  CHECK(kind_of([] { ProbabilityWeights({0.5, 0.6}); }) == ErrorKind::BadWeights);
  CHECK(kind_of([] { ProbabilityWeights({1.5, -0.5}); }) == ErrorKind::BadWeights);
  CHECK(kind_of([] { ProbabilityWeights(std::vector<double>{}); }) == ErrorKind::BadWeights);
  CHECK(kind_of([] { ProbabilityWeights::normalized({0.0, 0.0}); }) == ErrorKind::BadWeights);
  const auto t = ProbabilityWeights::normalized({1, 3});
  CHECK(t[0] == 0.25);
  CHECK(t[1] == 0.75);
  CHECK(ProbabilityWeights::uniform(3).size() == 3);
}

TEST_CASE("WeightedFamily validation") {
  CHECK(kind_of([] { WeightedFamily(ProbabilityWeights({1.0}), {ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)}); }) ==
        ErrorKind::BadWeights);
  CHECK(kind_of([] { WeightedFamily::uniform({ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(3, 3)}); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { WeightedFamily::uniform({ComplexMatrix::Zero(2, 3)}); }) == ErrorKind::NotSquare);
}

TEST_CASE("weighted_mean examples") {
  std::mt19937_64 rng(71);
  const auto a = oracle::random_matrix(rng, 3, 3);
  CHECK(weighted_mean(WeightedFamily(ProbabilityWeights({1.0}), {a})) == a);
  CHECK(oracle::max_entry(weighted_mean(WeightedFamily::uniform({a, ComplexMatrix(-a)}))) == 0.0);
  CHECK(weighted_mean(nilpotent_pair()) == mat2(0, 0.5, 0.5, 0));
}

TEST_CASE("variance_sides hand cases") {
  const auto sides = variance_sides(nilpotent_pair());
  CHECK(oracle::max_entry(sides.lhs - diag({0.25, 0.25})) <= 1e-13);
  CHECK(oracle::max_entry(sides.rhs - diag({0.25, 0.25})) <= 1e-13);
  CHECK(sides.report.passed);

  std::mt19937_64 rng(73);
  const auto a = oracle::random_matrix(rng, 3, 3);
  const auto same = variance_sides(WeightedFamily(ProbabilityWeights({0.2, 0.3, 0.5}), {a, a, a}));
  CHECK(oracle::max_entry(same.lhs) <= 1e-14);
  CHECK(oracle::max_entry(same.rhs) <= 1e-12 * (1 + oracle::opnorm(a) * oracle::opnorm(a)));

  const auto single = variance_sides(WeightedFamily(ProbabilityWeights({1.0}), {a}));
  CHECK(oracle::max_entry(single.lhs) == 0.0);
  CHECK(single.report.passed);
}

TEST_CASE("variance identity over 500 random families") {
  Rng rng(79);
  std::uniform_int_distribution<int> dim(1, 8), n(1, 6);
  for (int trial = 0; trial < 500; ++trial) {
    const auto fam = random_family(rng, dim(rng), n(rng));
    const auto r = variance_sides(fam).report;
    CHECK_MESSAGE(r.passed, "trial " << trial << " residual " << r.value);
    CHECK(r.tolerance == doctest::Approx(1e-11 * fam.scale()));
  }
  // quasi-degenerate weights
  for (int trial = 0; trial < 50; ++trial) {
    auto fam = random_family(rng, 4, 3);
    WeightedFamily skew(ProbabilityWeights::normalized({1.0 - 1e-9, 5e-10, 5e-10}), fam.matrices());
    CHECK(variance_sides(skew).report.passed);
  }
}

TEST_CASE("translation covariance and scaling") {
  Rng rng(83);
  for (int trial = 0; trial < 50; ++trial) {
    const auto fam = random_family(rng, 4, 4);
    const auto base = variance_sides(fam);
    const auto c = ginibre(rng, 4, 4);
    const Complex k(1.5, -0.7);
    std::vector<ComplexMatrix> shifted, scaled;
    for (const auto& a : fam.matrices()) {
      shifted.push_back(a + c);
      scaled.push_back(k * a);
    }
    const auto moved = variance_sides(WeightedFamily(fam.weights(), shifted));
    CHECK(oracle::opnorm(moved.lhs - base.lhs) <= 1e-11 * fam.scale() * (1 + oracle::opnorm(c)));
    const auto grown = variance_sides(WeightedFamily(fam.weights(), scaled));
    const double factor = std::norm(k);
    CHECK(oracle::opnorm(grown.lhs - factor * base.lhs) <= 1e-11 * factor * fam.scale());
    CHECK(oracle::opnorm(grown.rhs - factor * base.rhs) <= 1e-11 * factor * fam.scale());
  }
}

TEST_CASE("uniform weights reproduce the unweighted form") {
  Rng rng(89);
  for (int n = 1; n <= 6; ++n) {
    std::vector<ComplexMatrix> as;
    for (int i = 0; i < n; ++i) as.push_back(ginibre(rng, 3, 3));
    const auto fam = WeightedFamily::uniform(as);
    const auto sides = variance_sides(fam);
    // sum |A_i - mean|^2 = sum |A_i|^2 - n |mean|^2, computed directly
    ComplexMatrix mean = ComplexMatrix::Zero(3, 3);
    for (const auto& a : as) mean += a;
    mean /= n;
    ComplexMatrix lhs = ComplexMatrix::Zero(3, 3), rhs = -double(n) * mean.adjoint() * mean;
    for (const auto& a : as) {
      lhs += (a - mean).adjoint() * (a - mean);
      rhs += a.adjoint() * a;
    }
    CHECK(oracle::opnorm(double(n) * sides.lhs - lhs) <= 1e-11 * n * fam.scale());
    CHECK(oracle::opnorm(double(n) * sides.rhs - rhs) <= 1e-11 * n * fam.scale());
  }
}

TEST_CASE("AM-QM margin") {
  std::mt19937_64 rng(97);
  const auto a = oracle::random_matrix(rng, 3, 3);
  const auto equal = am_qm_margin(WeightedFamily::uniform({a, a}));
  CHECK(std::abs(equal.value) <= 1e-12 * (1 + oracle::opnorm(a) * oracle::opnorm(a)));
  CHECK(equal.passed);

  const auto pair = am_qm_margin(nilpotent_pair());
  CHECK(pair.value == doctest::Approx(0.25).epsilon(1e-13));

  Rng r(101);
  std::uniform_int_distribution<int> dim(1, 8), n(1, 6);
  for (int trial = 0; trial < 200; ++trial) CHECK(am_qm_margin(random_family(r, dim(r), n(r))).passed);
}

TEST_CASE("sandwich constants follow the printed alpha/beta") {
  // t = (1/2, 1/2), m = (1, 2), M = (3, 5): sum t m = 1.5, sum t M = 4
  const auto c = sandwich_constants(ProbabilityWeights({0.5, 0.5}), ScalarBounds{{1, 2}, {3, 5}});
  CHECK(c.alpha[0] == doctest::Approx(3.0));  // max(|3 - 1.5|, |1 - 4|)
  CHECK(c.beta[0] == doctest::Approx(1.5));
  CHECK(c.alpha[1] == doctest::Approx(3.5));  // max(|5 - 1.5|, |2 - 4|)
  CHECK(c.beta[1] == doctest::Approx(2.0));
  CHECK(c.upper == doctest::Approx(0.5 * 9 + 0.5 * 12.25));
  CHECK(c.lower == doctest::Approx(0.5 * 2.25 + 0.5 * 4));
}

TEST_CASE("variance_bounds on scalar multiples of the identity") {
  const std::vector<double> cs = {0.5, 1.0, 3.0};
  std::vector<ComplexMatrix> as;
  for (double c : cs) as.push_back(c * ComplexMatrix::Identity(3, 3));
  const ProbabilityWeights t({0.2, 0.3, 0.5});
  const auto r = variance_bounds(WeightedFamily(t, as), ScalarBounds{cs, cs});
  CHECK(r.passed);
  CHECK(r.detail("lower_margin") >= -1e-12);
  CHECK(r.detail("upper_margin") >= -1e-12);
  // collapses to the scalar variance
  const double mean = 0.2 * 0.5 + 0.3 * 1.0 + 0.5 * 3.0;
  const double var = 0.2 * 0.25 + 0.3 * 1.0 + 0.5 * 9.0 - mean * mean;
  CHECK(r.detail("lower_bound") == doctest::Approx(var));
  CHECK(r.detail("upper_bound") == doctest::Approx(var));

  const auto single = variance_bounds(WeightedFamily(ProbabilityWeights({1.0}), {2.0 * ComplexMatrix::Identity(2, 2)}),
                                      ScalarBounds{{2.0}, {2.0}});
  CHECK(single.passed);
  CHECK(single.detail("lower_bound") == 0.0);
  CHECK(single.detail("upper_bound") == 0.0);
  CHECK(std::abs(single.value) <= 1e-15);
}

TEST_CASE("variance_difference matches a scalar brute force on diagonals") {
  Rng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 5;
    const int dim = 1 + trial % 4;
    std::vector<ComplexMatrix> as;
    for (int i = 0; i < n; ++i) as.push_back(diagonal_in_range(rng, dim, 0.0, 3.0));
    const auto t = random_weights(rng, n);
    const auto d = variance_difference(WeightedFamily(t, as));
    for (int k = 0; k < dim; ++k) {
      double m1 = 0, m2 = 0;
      for (int i = 0; i < n; ++i) {
        const double a = as[i](k, k).real();
        m1 += t[i] * a;
        m2 += t[i] * a * a;
      }
      CHECK(std::abs(d(k, k).real() - (m2 - m1 * m1)) <= 1e-12 * (1 + m2));
    }
    CHECK(oracle::max_entry(d - ComplexMatrix(d.diagonal().asDiagonal())) == 0.0);
  }
}

TEST_CASE("variance_bounds upper side holds on random diagonal families") {
  Rng rng(107);
  std::uniform_real_distribution<double> range(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    ScalarBounds b;
    std::vector<ComplexMatrix> as;
    for (int i = 0; i < n; ++i) {
      double lo = range(rng), hi = range(rng);
      if (lo > hi) std::swap(lo, hi);
      b.lower.push_back(lo);
      b.upper.push_back(hi);
      as.push_back(diagonal_in_range(rng, 3, lo, hi));
    }
    const auto r = variance_bounds(WeightedFamily(random_weights(rng, n), as), b);
    CHECK(r.detail("upper_margin") >= -r.tolerance);
  }
}

TEST_CASE("printed lower bound fails for a single operator with a wide interval") {
  // n = 1, A = diag(0, 1) in [0, 1]: D = 0 but beta_1^2 = 1.
  const auto r = variance_bounds(WeightedFamily(ProbabilityWeights({1.0}), {diag({0, 1})}), ScalarBounds{{0}, {1}});
  CHECK(r.detail("lower_bound") == 1.0);
  CHECK(r.detail("lower_margin") == doctest::Approx(-1.0));
  CHECK(r.detail("straddling_indices") == 1.0);
  CHECK_FALSE(r.passed);
}

TEST_CASE("variance_bounds validation") {
  const auto fam = WeightedFamily::uniform({diag({1, 2}), diag({2, 3})});
  CHECK(kind_of([&] { variance_bounds(fam, ScalarBounds{{1}, {2}}); }) == ErrorKind::BadBounds);
  CHECK(kind_of([&] { variance_bounds(fam, ScalarBounds{{2, 2}, {1, 3}}); }) == ErrorKind::BadBounds);
  CHECK(kind_of([&] { variance_bounds(fam, ScalarBounds{{1, 2.5}, {2, 3}}); }) == ErrorKind::BoundsViolated);
  CHECK(kind_of([&] { variance_bounds(WeightedFamily::uniform({mat2(0, 1, 0, 0)}), ScalarBounds{{0}, {1}}); }) ==
        ErrorKind::NotHermitian);

  const auto negative = WeightedFamily::uniform({diag({-1, 0}), diag({0, 1})});
  const ScalarBounds b{{-1, 0}, {0, 1}};
  CHECK(kind_of([&] { variance_bounds(negative, b); }) == ErrorKind::BadBounds);
  CHECK_NOTHROW(variance_bounds(negative, b, BoundsMode::Relaxed));
}

TEST_CASE("vector variance identity") {
  Vector x(2);
  x << 1, 0;
  const auto same = vector_variance_identity({x, x, x}, ProbabilityWeights::uniform(3));
  CHECK(same.passed);
  CHECK(same.detail("lhs") == 0.0);

  Vector e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  const auto half = vector_variance_identity({e1, e2}, ProbabilityWeights({0.5, 0.5}));
  CHECK(half.detail("lhs") == doctest::Approx(0.5));
  CHECK(half.detail("rhs") == doctest::Approx(0.5));
  CHECK(half.detail("lhs_embedded") == doctest::Approx(0.5));
  CHECK(half.passed);

  Rng rng(109);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vector> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(ginibre_vector(rng, 6));
    const auto t = random_weights(rng, 5);
    const auto r = vector_variance_identity(xs, t);
    CHECK(r.passed);
    CHECK(r.detail("agreement") <= 1e-12 * r.detail("scale"));
    // any nonzero e gives the same scalars
    const auto other = vector_variance_identity(xs, t, ginibre_vector(rng, 6));
    CHECK(other.passed);
    CHECK(std::abs(other.detail("lhs_embedded") - r.detail("lhs_embedded")) <= 1e-11 * r.detail("scale"));
  }

  CHECK(kind_of([&] { vector_variance_identity({e1, Vector::Zero(3)}, ProbabilityWeights::uniform(2)); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([&] { vector_variance_identity({e1}, ProbabilityWeights({1.0}), Vector::Zero(2)); }) ==
        ErrorKind::ZeroVector);
}

TEST_CASE("normalized trace identity") {
  const auto scalar = normalized_trace_identity(Complex(2, 1) * ComplexMatrix::Identity(4, 4));
  CHECK(scalar.passed);
  CHECK(std::abs(scalar.detail("lhs")) <= 1e-14);

  const auto d = normalized_trace_identity(diag({1, -1}));
  CHECK(std::abs(d.detail("lhs") - 2.0) <= 1e-13);
  CHECK(std::abs(d.detail("rhs") - 2.0) <= 1e-13);
  CHECK(d.detail("normalized_trace_re") == 0.0);

  Rng rng(113);
  for (int dim : {1, 2, 7, 20, 50}) CHECK(normalized_trace_identity(ginibre(rng, dim, dim)).passed);
  CHECK(kind_of([] { normalized_trace_identity(ComplexMatrix::Zero(2, 3)); }) == ErrorKind::NotSquare);
}
