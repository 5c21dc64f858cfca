#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "asynczoo/error.hpp"
#include "asynczoo/problems.hpp"
#include "asynczoo/rng.hpp"
#include "asynczoo/verification.hpp"
#include "asynczoo/zeroth_order.hpp"
#include "test_problems.hpp"

using namespace asynczoo;
using test_support::LambdaProblem;

namespace {

// f(x) = x0^2 + x1^2.
LambdaProblem sum_of_squares() {
  return LambdaProblem(
      2, 1, [](std::span<const double> x, std::size_t) { return x[0] * x[0] + x[1] * x[1]; },
      {}, LipschitzInfo(2.0, {2.0, 2.0}, Provenance::analytic));
}

}  // namespace

TEST(EstimateBlock, SingleCoordinateOnSumOfSquares) {
  auto p = sum_of_squares();
  const Vector x{1, 1};
  const std::vector<std::size_t> s{0};
  const auto g = estimate_block(p, x, 0, s, MuVector::uniform(2, 0.1));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.indices[0], 0u);
  EXPECT_NEAR(g.values[0], 4.0, 1e-12);
}

TEST(EstimateBlock, FullBlockOnSumOfSquares) {
  auto p = sum_of_squares();
  const std::vector<std::size_t> s{1, 0};
  const auto g = estimate_block(p, Vector{1, 1}, 0, s, MuVector::uniform(2, 0.1));
  ASSERT_EQ(g.indices, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(g.values[0], 2.0, 1e-12);
  EXPECT_NEAR(g.values[1], 2.0, 1e-12);
}

TEST(EstimateBlock, SymmetricPointGivesZero) {
  auto p = sum_of_squares();
  const std::vector<std::size_t> s{1};
  const auto g = estimate_block(p, Vector{0.7, 0.0}, 0, s, MuVector::uniform(2, 0.3));
  EXPECT_EQ(g.values[0], 0.0);
}

TEST(EstimateBlock, Validation) {
  auto p = sum_of_squares();
  const Vector x{1, 1};
  const std::vector<std::size_t> empty, dup{0, 0}, bad{2};
  const auto mu = MuVector::uniform(2, 0.1);
  EXPECT_THROW(estimate_block(p, x, 0, empty, mu), ValidationError);
  EXPECT_THROW(estimate_block(p, x, 0, dup, mu), ValidationError);
  EXPECT_THROW(estimate_block(p, x, 0, bad, mu), IndexError);
  EXPECT_THROW(MuVector({0.1, 0.0}), ValidationError);
  EXPECT_THROW(MuVector({-1.0}), ValidationError);
}

TEST(EstimateBlock, MakesExactlyTwoCallsPerCoordinate) {
  auto q = make_quadratic(10, 1, 10.0, 3);
  test_support::CountingProblem p(*q);
  const std::vector<std::size_t> s{1, 4, 7};
  estimate_block(p, q->initial_point(), 2, s, MuVector::uniform(10, 0.01));
  EXPECT_EQ(p.calls(), 6u);
}

TEST(EstimateBlockInto, RestoresPointBitwise) {
  auto q = make_quadratic(6, 2, 10.0, 3);
  RngStream rng(1);
  Vector x(6);
  for (double& v : x) v = rng.normal();
  const Vector before = x;
  SparseGradEstimate out;
  const std::vector<std::size_t> s{0, 3, 5};
  estimate_block_into(*q, x, 1, s, MuVector::uniform(6, 0.37), out);
  EXPECT_EQ(x, before);
  const auto ref = estimate_block(*q, before, 1, s, MuVector::uniform(6, 0.37));
  EXPECT_EQ(out.values, ref.values);
}

TEST(EstimateCoord, QuadraticExampleAndScale) {
  auto p = sum_of_squares();
  const auto g = estimate_coord(p, Vector{1, 1}, 0, 0, 0.1);
  EXPECT_NEAR(g.values[0], 4.0, 1e-12);
  EXPECT_NEAR(smoothed_grad_coord(p, Vector{1, 1}, 0, 0, 0.1), 2.0, 1e-12);
}

TEST(EstimateCoord, ErrorOnQuarticShrinksQuadratically) {
  // f(x) = x^4 at x = 1: central difference is 4 + 4 mu^2, so the error
  // against N f'(x) = 4 is exactly 4 mu^2.
  LambdaProblem p(
      1, 1, [](std::span<const double> x, std::size_t) { return std::pow(x[0], 4); }, {},
      LipschitzInfo(12.0, {12.0}, Provenance::analytic));
  double prev = 0.0;
  for (double mu : {1e-2, 1e-3}) {
    const double err = std::abs(estimate_coord(p, Vector{1.0}, 0, 0, mu).values[0] - 4.0);
    EXPECT_NEAR(err, 4 * mu * mu, 4 * mu * mu * 1e-3 + 1e-10);
    if (prev > 0) EXPECT_NEAR(prev / err, 100.0, 1.0);
    prev = err;
  }
  // At mu = 1e-4 the error is 4e-8, at the level of cancellation noise.
  EXPECT_LT(std::abs(estimate_coord(p, Vector{1.0}, 0, 0, 1e-4).values[0] - 4.0), 1e-6);
}

TEST(EstimateCoord, CoordinateMinimumGivesZero) {
  auto p = sum_of_squares();
  EXPECT_EQ(estimate_coord(p, Vector{0.0, 3.0}, 0, 0, 0.2).values[0], 0.0);
}

TEST(EstimateCoord, EqualsNTimesSmoothedGradient) {
  auto q = make_quadratic(5, 3, 10.0, 4);
  RngStream rng(2);
  for (int t = 0; t < 50; ++t) {
    Vector x(5);
    for (double& v : x) v = rng.normal();
    const std::size_t i = rng.below(5), xi = rng.below(4);
    const double mu = rng.uniform(1e-3, 1.0);
    const double expect = 5.0 * smoothed_grad_coord(*q, x, xi, i, mu);
    EXPECT_NEAR(estimate_coord(*q, x, xi, i, mu).values[0], expect, 1e-13 * (1 + std::abs(expect)));
  }
}

TEST(SmoothedValue, SquareAtOriginWithUnitStep) {
  const ScalarField p = [](std::span<const double> x) { return x[0] * x[0]; };
  EXPECT_NEAR(smoothed_value(p, Vector{0.0}, 0, 1.0), 1.0 / 3.0, 1e-14);
}

TEST(SmoothedValue, LinearIsUnchanged) {
  const ScalarField p = [](std::span<const double> x) { return 3 * x[0] - 2 * x[1] + 1; };
  const Vector x{0.4, -1.3};
  EXPECT_NEAR(smoothed_value(p, x, 0, 0.7), p(x), 1e-14);
  EXPECT_NEAR(smoothed_value(p, x, 1, 0.7), p(x), 1e-14);
}

TEST(SmoothedValue, NodeCountValidation) {
  const ScalarField p = [](std::span<const double> x) { return x[0]; };
  EXPECT_THROW(smoothed_value(p, Vector{0.0}, 0, 1.0, 4), ValidationError);
  EXPECT_THROW(smoothed_value(p, Vector{0.0}, 0, 1.0, 1), ValidationError);
}

TEST(SmoothingBounds, HoldOnRandomSmoothFunctions) {
  for (const CheckResult& c : check_smoothing_bounds({})) {
    EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  }
}

TEST(Omega, Formula) {
  LipschitzInfo lip(2.0, {2.0, 2.0}, Provenance::analytic);
  EXPECT_NEAR(omega(lip, MuVector::uniform(2, 0.1)), 0.04, 1e-15);
  const std::vector<double> zeros{0.0, 0.0};
  EXPECT_EQ(omega(lip, zeros), 0.0);
  const std::vector<double> mu{0.1, 0.3}, mu3{0.3, 0.9};
  EXPECT_NEAR(omega(lip, mu3), 9.0 * omega(lip, mu), 1e-14);
}

TEST(SampleCoordinates, FullBlockIsEverything) {
  RngStream rng(1);
  const auto before = rng.counter();
  std::vector<std::size_t> pool, out;
  sample_coordinates(rng, 5, 5, pool, out);
  EXPECT_EQ(out, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(rng.counter(), before);
}

TEST(SampleCoordinates, SortedDistinctInRange) {
  RngStream rng(2);
  std::vector<std::size_t> pool, out;
  for (int t = 0; t < 1000; ++t) {
    sample_coordinates(rng, 20, 6, pool, out);
    ASSERT_EQ(out.size(), 6u);
    ASSERT_TRUE(std::is_sorted(out.begin(), out.end()));
    ASSERT_EQ(std::set<std::size_t>(out.begin(), out.end()).size(), 6u);
    ASSERT_LT(out.back(), 20u);
  }
}
