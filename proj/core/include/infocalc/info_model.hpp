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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "infocalc/calculus.hpp"

namespace infocalc {

enum class InfoUnit { kBits, kNats };

std::string to_string(InfoUnit unit);
/// Logarithm in the base matching `unit`.
double log_in(InfoUnit unit, double v);

/// Stationary Gaussian source sampled every `delta` seconds with
/// covariance sigma2 * exp(-|lag| / eta) between consecutive samples.
struct SourceModel {
  std::string id;
  double sigma2 = 1.0;
  double eta = 1.0;
  double delta = 1.0;
  std::string group;
};

/// Deterministic information arrival curve (bounding function is zero).
Isa gaussian_arrival_curve(const SourceModel& source, InfoUnit unit = InfoUnit::kBits);

/// Long-run information rate of the source.
double information_rate(const SourceModel& source, InfoUnit unit = InfoUnit::kBits);

/// Joint differential entropy of `samples` consecutive samples.
double entropy_of_gaussian_block(const SourceModel& source, int samples,
                                 InfoUnit unit = InfoUnit::kBits);

/// sigma2 that makes the long-run information rate equal `target_rate`.
double calibrate_sigma2(double target_rate, double delta, double eta,
                        InfoUnit unit = InfoUnit::kBits);

/// Joint information of k co-located sources as a multiple of one
/// source's curve, per group.
class SpatialModel {
 public:
  void set(const std::string& group, int k, double coefficient);
  /// 1 for k = 1; throws Error(kValidationError) when unknown.
  double coefficient(const std::string& group, int k) const;
  /// Checks 1 <= c(k) <= k and monotonicity in k.
  void validate() const;
  const std::map<std::string, std::map<int, double>>& table() const { return table_; }

 private:
  std::map<std::string, std::map<int, double>> table_;
};

/// Joint information of a set of sources: sources in one group are fused
/// with the spatial coefficient; distinct groups add. Throws
/// Error(kInconsistentGroup) if a group mixes source parameters.
Isa group_information(const std::vector<SourceModel>& sources, const SpatialModel& spatial,
                      InfoUnit unit = InfoUnit::kBits);

/// Long-run joint information rate of a source set.
double joint_information_rate(const std::vector<SourceModel>& sources, const SpatialModel& spatial,
                              InfoUnit unit = InfoUnit::kBits);

}  // namespace infocalc
