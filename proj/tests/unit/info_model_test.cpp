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
#include <numbers>

#include <gtest/gtest.h>

#include "infocalc/info_model.hpp"

namespace infocalc {
namespace {

SourceModel calibrated(const std::string& id, const std::string& group, double rate = 2330) {
  return {id, calibrate_sigma2(rate, 0.1, 100), 100, 0.1, group};
}

SpatialModel case_study_spatial() {
  SpatialModel m;
  for (const char* g : {"1", "2", "3"}) {
    m.set(g, 2, 1.8);
    m.set(g, 3, 2.4);
  }
  return m;
}

TEST(GaussianArrival, CalibratedRateAndOffset) {
  const auto s = calibrated("A1.1", "1");
  EXPECT_NEAR(information_rate(s), 2330.0, 1e-9);
  const auto a = gaussian_arrival_curve(s);
  EXPECT_TRUE(a.bounding.is_zero());
  const double tail_offset = a.curve(1.0) - 2330.0 * 1.0;
  EXPECT_NEAR(tail_offset, -0.5 * std::log2(1 - std::exp(-0.02)), 1e-9);
  EXPECT_NEAR(tail_offset, 2.83, 5e-3);
  // Per-sample entropy in the stationary regime.
  EXPECT_NEAR(a.curve(0.3) - a.curve(0.2), 233.0, 1e-9);
}

TEST(GaussianArrival, DegenerateVariance) {
  SourceModel s{"x", 0.0, 100, 0.1, "g"};
  try {
    (void)gaussian_arrival_curve(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateVariance);
  }
  // Correlation so strong that the innovation entropy turns negative.
  s.sigma2 = 1.0;
  s.eta = 1e6;
  EXPECT_THROW((void)gaussian_arrival_curve(s), Error);
}

TEST(GaussianArrival, DefinitionProperties) {
  for (double rate : {10.0, 500.0, 2330.0}) {
    const auto c = gaussian_arrival_curve(calibrated("s", "g", rate)).curve;
    EXPECT_EQ(c(0.0), 0.0);
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double t = i * 0.01;
      EXPECT_GE(c(t), prev);
      prev = c(t);
    }
  }
}

TEST(GaussianArrival, NatsScaleBits) {
  const auto s = calibrated("s", "g");
  EXPECT_NEAR(information_rate(s, InfoUnit::kNats), 2330.0 * std::numbers::ln2, 1e-9);
}

TEST(BlockEntropy, ScalarAndPair) {
  SourceModel s{"s", 1.0, 100, 0.1, "g"};
  const double two_pi_e = 2 * std::numbers::pi * std::numbers::e;
  EXPECT_NEAR(entropy_of_gaussian_block(s, 1), 0.5 * std::log2(two_pi_e), 1e-12);
  EXPECT_NEAR(entropy_of_gaussian_block(s, 2),
              0.5 * std::log2(two_pi_e * two_pi_e * (1 - std::exp(-0.02))), 1e-12);
}

TEST(BlockEntropy, AgreesWithArrivalCurveAtSampleTimes) {
  const auto s = calibrated("s", "g");
  const auto c = gaussian_arrival_curve(s).curve;
  for (int t = 1; t <= 12; ++t) {
    const double h = entropy_of_gaussian_block(s, t);
    EXPECT_NEAR(h, c(t * s.delta), 1e-9 * h) << t;
  }
}

TEST(BlockEntropy, LengthLimit) {
  const auto s = calibrated("s", "g");
  try {
    (void)entropy_of_gaussian_block(s, 65);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumericalSingularity);
  }
}

TEST(GroupInformation, TripleCoefficient) {
  std::vector<SourceModel> group{calibrated("a", "1"), calibrated("b", "1"), calibrated("c", "1")};
  EXPECT_NEAR(joint_information_rate(group, case_study_spatial()), 5592.0, 1e-6);
  EXPECT_NEAR(joint_information_rate({group[0]}, case_study_spatial()), 2330.0, 1e-9);
}

TEST(GroupInformation, CaseStudyTotal) {
  std::vector<SourceModel> all;
  for (int g = 1; g <= 3; ++g) {
    for (int k = 1; k <= 3; ++k) {
      all.push_back(calibrated("A" + std::to_string(g) + "." + std::to_string(k), std::to_string(g)));
    }
  }
  EXPECT_NEAR(joint_information_rate(all, case_study_spatial()), 16776.0, 20.0);
}

TEST(GroupInformation, InconsistentGroup) {
  std::vector<SourceModel> group{calibrated("a", "1"), calibrated("b", "1", 1000)};
  try {
    (void)group_information(group, case_study_spatial());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInconsistentGroup);
  }
}

TEST(GroupInformation, MonotoneInSubsets) {
  const auto spatial = case_study_spatial();
  std::vector<SourceModel> members;
  Curve prev = Curve::zero();
  for (int k = 1; k <= 3; ++k) {
    members.push_back(calibrated("s" + std::to_string(k), "2"));
    const auto c = group_information(members, spatial).curve;
    for (int i = 0; i <= 100; ++i) EXPECT_GE(c(i * 0.01), prev(i * 0.01));
    prev = c;
  }
}

TEST(SpatialModel, RedundancyBetweenZeroAndSingleSource) {
  const auto spatial = case_study_spatial();
  spatial.validate();
  for (const auto& [group, coeffs] : spatial.table()) {
    for (const auto& [k, c] : coeffs) {
      const double redundancy = k - c;  // in multiples of one source
      EXPECT_GE(redundancy, 0.0) << group << " " << k;
      EXPECT_LE(redundancy, 1.0) << group << " " << k;
    }
  }
}

TEST(SpatialModel, Validation) {
  SpatialModel m;
  m.set("g", 2, 0.5);
  EXPECT_THROW(m.validate(), Error);
  SpatialModel dec;
  dec.set("g", 2, 1.9);
  dec.set("g", 3, 1.5);
  EXPECT_THROW(dec.validate(), Error);
  EXPECT_THROW((void)SpatialModel().coefficient("g", 2), Error);
  EXPECT_EQ(SpatialModel().coefficient("g", 1), 1.0);
  EXPECT_THROW(m.set("g", 1, 1.0), Error);
}

}  // namespace
}  // namespace infocalc
