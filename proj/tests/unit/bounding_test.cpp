// Copyright 2026 The infocalc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

#include "infocalc/bounding.hpp"

namespace infocalc {
namespace {

using EBF = ExactBoundingFunction;

EBF exp_bf(int a, int b) { return EBF::exponential(Rational(a), Rational(b)); }

TEST(BfConvolve, ExponentialClosedForm) {
  EXPECT_EQ(bf_convolve(exp_bf(1, 1), exp_bf(4, 4)), exp_bf(5, 5));
  EXPECT_EQ(bf_convolve(exp_bf(1, 1), exp_bf(1, 1)), exp_bf(2, 2));
}

TEST(BfConvolve, ZeroIsNeutral) {
  EXPECT_EQ(bf_convolve(EBF::zero(), exp_bf(3, 3)), exp_bf(3, 3));
  EXPECT_EQ(bf_convolve(exp_bf(3, 3), EBF::zero()), exp_bf(3, 3));
}

TEST(BfConvolve, ExactFlagSamplesTheInfimum) {
  const auto f = BoundingFunction::exponential(1, 1);
  const auto g = BoundingFunction::exponential(2, 2);
  const auto exact = bf_convolve(f, g, true);
  const auto closed = bf_convolve(f, g);
  ASSERT_NE(exact.numeric_samples(), nullptr);
  for (double x : {0.0, 0.5, 2.0, 7.0, 20.0}) {
    EXPECT_LE(exact(x), closed(x) + 1e-12);
    // Split-point brute force.
    double best = 1e300;
    for (int i = 0; i <= 200000; ++i) {
      const double s = x * i / 200000.0;
      best = std::min(best, f(s) + g(x - s));
    }
    EXPECT_NEAR(exact(x), best, 1e-6) << x;
  }
}

TEST(BfConvolve, ClosedFormIsTheObjectiveAtTheProportionalSplit) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.1, 10.0), ub(0.1, 10.0), ux(0.0, 60.0);
  for (int i = 0; i < 500; ++i) {
    const double a1 = ua(rng), b1 = ub(rng), a2 = ua(rng), b2 = ub(rng), x = ux(rng);
    const auto f = BoundingFunction::exponential(a1, b1);
    const auto g = BoundingFunction::exponential(a2, b2);
    const double closed = bf_convolve(f, g)(x);
    const double s = b1 * x / (b1 + b2);
    EXPECT_NEAR(closed, f(s) + g(x - s), 1e-12 * (1 + closed));
    double grid_inf = 1e300;
    for (int k = 0; k <= 2000; ++k) {
      const double t = x * k / 2000.0;
      grid_inf = std::min(grid_inf, f(t) + g(x - t));
    }
    const double exact = detail::exponential_convolution_at(a1, b1, 0, a2, b2, 0, x);
    EXPECT_GE(closed, exact - 1e-12);
    EXPECT_LE(exact, grid_inf + 1e-12);
  }
}

TEST(BfConvolve, ResultsAreNonIncreasing) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(0.1, 5.0), ux(0.0, 40.0);
  const auto grid = GridOptions::defaults();
  for (int i = 0; i < 20; ++i) {
    const auto f = BoundingFunction::exponential(ua(rng), ua(rng));
    const auto g = BoundingFunction::numeric(0.0, 0.05, {ua(rng), 1.0, 0.5, 0.2, 0.1, 0.0});
    const auto closed = bf_convolve(f, f);
    const auto numeric = bf_convolve(f, g, false, grid);
    for (int k = 0; k < 50; ++k) {
      double x1 = ux(rng), x2 = ux(rng);
      if (x1 > x2) std::swap(x1, x2);
      EXPECT_GE(closed(x1), closed(x2));
      EXPECT_GE(numeric(x1), numeric(x2));
    }
  }
}

TEST(BfConvolve, NumericMatchesExactInfimum) {
  const auto f = BoundingFunction::exponential(1, 1);
  const auto g = BoundingFunction::exponential(4, 4);
  auto grid = GridOptions::defaults();
  grid.x_max = 20.0;
  const auto fs = sample(f, grid, 1u << 20);
  const auto r = bf_convolve(fs, g, false, grid);
  for (double x : {0.0, 1.0, 5.0, 10.0}) {
    const double exact = detail::exponential_convolution_at(1, 1, 0, 4, 4, 0, x);
    EXPECT_GE(r(x), exact - 1e-12) << x;
    EXPECT_NEAR(r(x), exact, 1e-2) << x;
  }
}

TEST(BfInfsum, ZeroLowerBoundGivesZero) {
  EXPECT_TRUE(bf_infsum(exp_bf(1, 1), LowerBoundingFunction::zero()).is_zero());
}

TEST(BfInfsum, ConstantLowerBound) {
  const auto f = BoundingFunction::exponential(1, 1);
  const auto r = bf_infsum(f, LowerBoundingFunction::constant(1.0));
  EXPECT_LE(r(0.0), 1.0);
  for (double x : {0.0, 0.5, 3.0}) {
    double best = 1e300;
    for (int i = 0; i <= 50000; ++i) best = std::min(best, f(x + i * 1e-3) + 1.0);
    EXPECT_NEAR(r(x), best, 1e-3) << x;
  }
}

TEST(BfInfsum, DeterministicUpperBoundTakesLowerBoundAtOrigin) {
  const auto r = bf_infsum(BoundingFunction::zero(), LowerBoundingFunction::constant(0.3));
  EXPECT_NEAR(r(0.0), 0.3, 1e-12);
  EXPECT_NEAR(r(5.0), 0.3, 1e-12);
}

TEST(BfInvert, Examples) {
  const auto f = BoundingFunction::exponential(14, 14);
  const double x = bf_invert(f, 1e-3);
  EXPECT_NEAR(x, 14 * std::log(14000.0), 1e-9);
  EXPECT_NEAR(f(x), 1e-3, 1e-12 * 1e-3 * 10);
  EXPECT_EQ(bf_invert(BoundingFunction::zero(), 0.2), 0.0);
  const auto g = BoundingFunction::exponential(6, 6);
  EXPECT_NEAR(g(24), 6 * std::exp(-4.0), 1e-15);
  EXPECT_NEAR(g(24), 0.1099, 1e-4);
  EXPECT_NEAR(bf_invert(g, g(24)), 24.0, 1e-9);
}

TEST(BfInvert, RoundTripsOnExponentials) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(1.0, 20.0), ux(0.0, 100.0);
  for (int i = 0; i < 500; ++i) {
    const auto f = BoundingFunction::exponential(ua(rng), ua(rng));
    const double x = ux(rng);
    if (f(x) >= f(0.0)) continue;
    EXPECT_NEAR(bf_invert(f, f(x)), x, 1e-9 * (1 + x));
  }
}

TEST(BfInvert, UnreachableProbability) {
  const auto f = BoundingFunction::numeric(0.0, 1.0, {1.0, 0.5, 0.25});
  try {
    (void)bf_invert(f, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnreachableProbability);
  }
  EXPECT_THROW((void)bf_invert(f, 0.0), Error);
}

TEST(BoundingFunction, NumericTakesNonIncreasingMajorant) {
  const auto f = BoundingFunction::numeric(0.0, 1.0, {0.5, 0.7, 0.2});
  EXPECT_DOUBLE_EQ(f(0.0), 0.7);
  EXPECT_DOUBLE_EQ(f(1.5), 0.7);
  EXPECT_DOUBLE_EQ(f(2.5), 0.2);
}

TEST(BoundingFunction, ShiftMovesTheArgument) {
  const auto f = BoundingFunction::exponential(2, 3).shifted(5);
  EXPECT_DOUBLE_EQ(f(4), 2.0);
  EXPECT_NEAR(f(8), 2 * std::exp(-1.0), 1e-15);
}

TEST(GridOptions, EnvironmentOverride) {
  ::setenv("INFOCALC_GRID_STEP", "0.01", 1);
  EXPECT_DOUBLE_EQ(GridOptions::defaults().step, 0.01);
  for (const char* bad : {"abc", "-1", "0", "1e-3x"}) {
    ::setenv("INFOCALC_GRID_STEP", bad, 1);
    try {
      (void)GridOptions::defaults();
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kConfigError);
    }
  }
  ::unsetenv("INFOCALC_GRID_STEP");
  EXPECT_DOUBLE_EQ(GridOptions::defaults().step, 1e-3);
}

}  // namespace
}  // namespace infocalc
