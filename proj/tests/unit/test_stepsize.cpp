#include <gtest/gtest.h>

#include <cmath>

#include "asynczoo/error.hpp"
#include "asynczoo/problems.hpp"
#include "asynczoo/rng.hpp"
#include "asynczoo/stepsize.hpp"
#include "asynczoo/verification.hpp"

using namespace asynczoo;

namespace {

// N = 2, Y = 1, T = 0, every Lipschitz constant 2, f0 - f* = 1.
RunConfig small_config() {
  RunConfig c;
  c.dim = 2;
  c.block = 1;
  c.iterations = 1000;
  c.staleness = 0;
  c.f0_minus_fstar = 1.0;
  c.lipschitz_global = c.lipschitz_block = c.lipschitz_staleness = c.lipschitz_max = 2.0;
  return c;
}

RunConfig larger_config() {
  RunConfig c;
  c.dim = 100;
  c.block = 4;
  c.iterations = 100000;
  c.staleness = 8;
  c.sigma2 = 0.5;
  c.omega = 1e-4;
  c.f0_minus_fstar = 20.0;
  c.lipschitz_max = 1.5;
  c.lipschitz_block = 4.0;
  c.lipschitz_staleness = 6.0;
  c.lipschitz_global = 10.0;
  return c;
}

// Theta written out directly, with the sum over the T steps expanded.
double theta_oracle(const RunConfig& c, double g) {
  const double n = c.dim, y = c.block, t = c.staleness;
  const double ly = c.lipschitz_block, lt = c.lipschitz_staleness;
  double sum = 0.0;
  for (std::uint64_t nu = 1; nu <= c.staleness; ++nu) {
    sum += g * (g * y + std::pow(y, 1.5) * (t - 1) * g / std::sqrt(n));
  }
  return n * g / 2 - 2 * g * g * (ly / y) * n * n - 2 * lt * lt * (n * n / (y * y)) * g * sum;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(Constants, ZeroStalenessGivesAlpha1Four) {
  RunConfig c = larger_config();
  c.staleness = 0;
  EXPECT_DOUBLE_EQ(constants(c).alpha1, 4.0);
}

TEST(Constants, Alpha2Example) { EXPECT_DOUBLE_EQ(constants(small_config()).alpha2, 0.25); }

TEST(Constants, Alpha3IsFourWithoutNoise) {
  RunConfig c = small_config();
  for (std::uint64_t k : {1u, 10u, 100000u}) {
    c.iterations = k;
    EXPECT_DOUBLE_EQ(constants(c).alpha3, 4.0);
  }
}

TEST(Constants, MatchDirectFormulas) {
  const RunConfig c = larger_config();
  const double n = 100, y = 4, t = 8, ly = 4, lt = 6, k = 1e5;
  const double q = n * c.omega + c.sigma2;
  const double a1 = 4 + 4 * (t * y + std::pow(y, 1.5) * t * t / std::sqrt(n)) * lt * lt / (ly * ly * n);
  const double a2 = y / (20.0 * ly * n);
  const double a3 = (k * q * a2 + 4) * ly * ly / (lt * lt);
  const Constants got = constants(c);
  EXPECT_LT(rel(got.alpha1, a1), 1e-14);
  EXPECT_LT(rel(got.alpha2, a2), 1e-14);
  EXPECT_LT(rel(got.alpha3, a3), 1e-14);
}

TEST(Constants, Validation) {
  RunConfig c = small_config();
  c.f0_minus_fstar = 0.0;
  EXPECT_THROW(constants(c), ValidationError);
  c = small_config();
  c.lipschitz_block = 3.0;  // above L
  EXPECT_THROW(constants(c), ValidationError);
  c = small_config();
  c.block = 3;
  EXPECT_THROW(constants(c), ValidationError);
}

TEST(StepSize, CoordinateDescentLimitIsOneSixteenth) {
  EXPECT_DOUBLE_EQ(generic_step_size(small_config()), 1.0 / 16.0);
}

TEST(StepSize, IndependentOfKWithoutNoise) {
  RunConfig a = larger_config(), b = larger_config();
  a.sigma2 = b.sigma2 = a.omega = b.omega = 0.0;
  b.iterations = 4 * a.iterations;
  EXPECT_DOUBLE_EQ(generic_step_size(a), generic_step_size(b));
}

TEST(StepSize, ShrinksLikeInverseSqrtKWithNoise) {
  RunConfig c = larger_config();
  double prev_gamma = 0.0, prev_scaled = 0.0;
  for (std::uint64_t k : {100000ull, 400000ull, 1600000ull, 6400000ull}) {
    c.iterations = k;
    const double g = generic_step_size(c);
    const double scaled = g * std::sqrt(static_cast<double>(k));
    if (prev_gamma > 0) {
      EXPECT_LT(g, prev_gamma);
      EXPECT_GT(scaled, prev_scaled);  // approaches its limit from below
    }
    prev_gamma = g;
    prev_scaled = scaled;
  }
  // Limit of gamma sqrt(K): Y / (2 L_Y N sqrt(q alpha2)).
  const double q = 100 * c.omega + c.sigma2, a2 = constants(c).alpha2;
  const double limit = 4.0 / (2 * 4.0 * 100 * std::sqrt(q * a2));
  EXPECT_LT(prev_scaled, limit);
  EXPECT_GT(prev_scaled, 0.95 * limit);
}

TEST(StepSize, FactoredFormAgrees) {
  const RunConfig c = larger_config();
  EXPECT_LT(rel(generic_step_size(c), step_size_from_chi(c, balanced_chi(c))), 1e-12);
}

TEST(Chi, NoNoiseIsSqrtAlpha1) {
  RunConfig c = larger_config();
  c.sigma2 = c.omega = 0.0;
  EXPECT_LT(rel(balanced_chi(c), std::sqrt(constants(c).alpha1)), 1e-14);
}

TEST(Chi, SquareDominatesAlpha1AndAsymptote) {
  RunConfig c = larger_config();
  RngStream rng(3);
  for (int t = 0; t < 200; ++t) {
    c.iterations = 1 + rng.below(10000000);
    c.sigma2 = rng.uniform(0.0, 5.0);
    const double chi = balanced_chi(c);
    ASSERT_GE(chi * chi, constants(c).alpha1 * (1 - 1e-14));
  }
  c.iterations = 1'000'000'000'000ull;
  c.sigma2 = 1.0;
  const double q = 100 * c.omega + c.sigma2;
  const double tail = std::sqrt(static_cast<double>(c.iterations) * q * constants(c).alpha2);
  EXPECT_NEAR(balanced_chi(c) / tail, 1.0, 1e-3);
}

TEST(ChiFloor, ZeroStalenessIsTwo) {
  RunConfig c = larger_config();
  c.staleness = 0;
  EXPECT_DOUBLE_EQ(chi_floor(c), 2.0);
  // gamma at the floor is the T = 0 admissibility limit Y / (4 L_Y N).
  EXPECT_DOUBLE_EQ(step_size_from_chi(c, 2.0), 4.0 / (4 * 4.0 * 100));
}

TEST(ChiFloor, BelowFloorThrowsAndFloorIsAdmissible) {
  const RunConfig c = larger_config();
  const double floor = chi_floor(c);
  EXPECT_THROW(step_size_from_chi(c, floor * 0.999), ValidationError);
  EXPECT_TRUE(step_size_admissible(c, step_size_from_chi(c, floor)));
  EXPECT_DOUBLE_EQ(step_size_from_chi(c, 2 * floor), step_size_from_chi(c, floor) / 2);
}

TEST(MaxStaleness, CoordinateDescentForm) {
  RunConfig c = larger_config();
  c.block = 1;
  c.sigma2 = c.omega = 0.0;
  c.lipschitz_block = c.lipschitz_max;
  const double n = 100, lmax = 1.5, lt = 6.0;
  const double expect = std::sqrt(n) / 2 * (std::sqrt(1 + 16 * (lmax * lmax / (lt * lt)) * std::sqrt(n)) - 1);
  EXPECT_LT(rel(max_staleness(c), expect), 1e-14);
}

TEST(MaxStaleness, OneDimensional) {
  RunConfig c = small_config();
  c.dim = 1;
  c.sigma2 = 0.3;
  const double a3 = constants(c).alpha3;
  EXPECT_LT(rel(max_staleness(c), 0.5 * (std::sqrt(1 + 4 * a3) - 1)), 1e-14);
}

TEST(MaxStaleness, IncreasesWithKUnderNoise) {
  RunConfig c = larger_config();
  double prev = 0.0;
  for (std::uint64_t k : {1000ull, 10000ull, 100000ull}) {
    c.iterations = k;
    const double t = max_staleness(c);
    EXPECT_GT(t, prev);
    prev = t;
  }
}

TEST(Theta, MatchesExpandedSum) {
  RngStream rng(11);
  for (int t = 0; t < 500; ++t) {
    const RunConfig c = random_run_config(rng);
    const double g = generic_step_size(c) * rng.uniform(0.5, 3.0);
    const double a = theta_margin(c, g), b = theta_oracle(c, g);
    ASSERT_LE(std::abs(a - b), 1e-12 * c.dim * g);
  }
}

TEST(Theta, ZeroStalenessBoundary) {
  RunConfig c = larger_config();
  c.staleness = 0;
  const double edge = 4.0 / (4 * 4.0 * 100);
  EXPECT_TRUE(step_size_admissible(c, edge));
  EXPECT_TRUE(step_size_admissible(c, edge * 0.5));
  EXPECT_FALSE(step_size_admissible(c, edge * 1.001));
}

TEST(Theta, TenfoldStepFailsWithLargeStaleness) {
  RunConfig c = larger_config();
  c.staleness = static_cast<std::uint64_t>(max_staleness(c));
  const double g = generic_step_size(c);
  EXPECT_TRUE(step_size_admissible(c, g));
  EXPECT_FALSE(step_size_admissible(c, 10 * g));
}

TEST(Theta, TheoryHoldsOverRandomConfigs) {
  const CheckResult r = check_step_size_theory(1000, 5);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(RateBound, MatchesDirectFormula) {
  const RunConfig c = larger_config();
  const Constants k = constants(c);
  const double n = 100, y = 4, kk = 1e5, ly = 4, lt = 6;
  const double q = n * c.omega + c.sigma2;
  const double expect =
      20 / (kk * k.alpha2) +
      ((lt * lt / (ly * ly)) * (std::sqrt(1 + 4 * std::sqrt(n / y) * k.alpha3) - 1) / std::sqrt(n / y) +
       11 * std::sqrt(q) * std::sqrt(kk * k.alpha2)) /
          (kk * k.alpha2) +
      n * c.omega;
  EXPECT_LT(rel(rate_bound(c), expect), 1e-14);
}

TEST(RateBound, HalvesWhenKDoublesWithoutNoise) {
  RunConfig c = larger_config();
  c.sigma2 = c.omega = 0.0;
  const double a = rate_bound(c);
  c.iterations *= 2;
  EXPECT_LT(rel(rate_bound(c), a / 2), 1e-14);
}

TEST(RateBound, NonincreasingInKWithoutOmega) {
  RunConfig c = larger_config();
  c.omega = 0.0;
  double prev = INFINITY;
  for (std::uint64_t k = 100; k <= 10000000; k *= 10) {
    c.iterations = k;
    const double b = rate_bound(c);
    EXPECT_LE(b, prev);
    prev = b;
  }
}

TEST(RateBound, StalenessAboveCeilingThrows) {
  RunConfig c = larger_config();
  c.staleness = static_cast<std::uint64_t>(max_staleness(c)) + 1;
  EXPECT_THROW(rate_bound(c), PrerequisiteViolated);
}

namespace {

PlanRequest quadratic_request(Variant v, std::uint64_t k = 10000, std::uint64_t t = 0) {
  auto p = make_quadratic(20, 1, 10.0, 5);
  return request_for(*p, v, k, t, 0.7);
}

}  // namespace

TEST(Plan, CoordinateDescentForcesNoNoise) {
  const StepPlan p = make_plan(quadratic_request(Variant::ascd));
  EXPECT_EQ(p.config.sigma2, 0.0);
  EXPECT_EQ(p.config.omega, 0.0);
  EXPECT_EQ(p.config.block, 1u);
  EXPECT_FALSE(p.zeroth_order());
  EXPECT_FALSE(p.warnings.empty());
}

TEST(Plan, CoordinateDescentStepIdentity) {
  const StepPlan p = make_plan(quadratic_request(Variant::ascd, 50000, 3));
  const double expect =
      1.0 / (2 * p.config.lipschitz_max * p.config.dim * std::sqrt(p.alpha1));
  EXPECT_LT(rel(p.gamma, expect), 1e-12);
}

TEST(Plan, VariantsFixBlockSize) {
  EXPECT_EQ(make_plan(quadratic_request(Variant::asgd_consistent)).config.block, 20u);
  EXPECT_EQ(make_plan(quadratic_request(Variant::asgd_inconsistent)).config.block, 1u);
  EXPECT_EQ(make_plan(quadratic_request(Variant::aszd)).config.block, 1u);
  PlanRequest g = quadratic_request(Variant::generic);
  g.block = 5;
  EXPECT_EQ(make_plan(g).config.block, 5u);
  PlanRequest bad = quadratic_request(Variant::asgd_consistent);
  bad.block = 3;
  EXPECT_THROW(make_plan(bad), ValidationError);
}

TEST(Plan, MuRejectedForFirstOrderVariants) {
  for (Variant v : {Variant::ascd, Variant::asgd_consistent, Variant::asgd_inconsistent}) {
    PlanRequest r = quadratic_request(v);
    r.mu = MuVector::uniform(20, 0.1);
    EXPECT_THROW(make_plan(r), ValidationError) << to_string(v);
  }
}

TEST(Plan, ZerothOrderDefaultsAndOmega) {
  const StepPlan p = make_plan(quadratic_request(Variant::aszd, 10000));
  ASSERT_TRUE(p.zeroth_order());
  EXPECT_DOUBLE_EQ((*p.mu)[0], 0.01);
  EXPECT_DOUBLE_EQ(p.config.omega, omega(request_for(*make_quadratic(20, 1, 10.0, 5),
                                                     Variant::aszd, 1, 0, 0)
                                             .lipschitz,
                                         *p.mu));
}

TEST(Plan, LargeMuWarns) {
  PlanRequest r = quadratic_request(Variant::aszd);
  r.mu = MuVector::uniform(20, 10 * zeroth_order_step_bound(20, 10000, 0.7));
  const StepPlan p = make_plan(r);
  bool found = false;
  for (const auto& w : p.warnings) found = found || w.find("exceeds the zeroth-order") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Plan, ZeroStalenessAlwaysAdmissible) {
  for (Variant v : {Variant::generic, Variant::ascd, Variant::asgd_consistent,
                    Variant::asgd_inconsistent, Variant::aszd}) {
    EXPECT_TRUE(make_plan(quadratic_request(v)).theta_ok) << to_string(v);
  }
}

TEST(Plan, GammaOverride) {
  PlanRequest r = quadratic_request(Variant::ascd);
  r.gamma = 1e6;
  const StepPlan p = make_plan(r);
  EXPECT_TRUE(p.gamma_overridden);
  EXPECT_FALSE(p.theta_ok);
  r.gamma = -1.0;
  EXPECT_THROW(make_plan(r), ValidationError);
}

TEST(Plan, StalenessBeyondCeilingHasNoRate) {
  const double t_max = make_plan(quadratic_request(Variant::ascd)).t_max;
  const StepPlan p = make_plan(
      quadratic_request(Variant::ascd, 10000, static_cast<std::uint64_t>(t_max) + 5));
  EXPECT_TRUE(std::isinf(p.rate_bound));
}

TEST(Variant, NamesRoundTrip) {
  for (Variant v : {Variant::generic, Variant::ascd, Variant::asgd_consistent,
                    Variant::asgd_inconsistent, Variant::aszd}) {
    EXPECT_EQ(parse_variant(to_string(v)), v);
  }
  EXPECT_THROW(parse_variant("sgd"), ValidationError);
}
