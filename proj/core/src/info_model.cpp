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

#include "infocalc/info_model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace infocalc {
namespace {

constexpr int kMaxBlock = 64;

double two_pi_e() { return 2.0 * std::numbers::pi * std::numbers::e; }

void check_source(const SourceModel& s) {
  if (!(s.sigma2 > 0) || !std::isfinite(s.sigma2)) {
    throw Error(ErrorKind::kDegenerateVariance, "source " + s.id + " has non-positive variance");
  }
  if (!(s.eta > 0) || !(s.delta > 0)) {
    throw Error(ErrorKind::kInvalidArgument, "source " + s.id + " needs positive eta and delta");
  }
}

double correlation_factor(double eta) { return 1.0 - std::exp(-2.0 / eta); }

bool same_parameters(const SourceModel& a, const SourceModel& b) {
  const auto close = [](double x, double y) {
    return std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y));
  };
  return close(a.sigma2, b.sigma2) && close(a.eta, b.eta) && close(a.delta, b.delta);
}

}  // namespace

std::string to_string(InfoUnit unit) { return unit == InfoUnit::kBits ? "bits" : "nats"; }

double log_in(InfoUnit unit, double v) { return unit == InfoUnit::kBits ? std::log2(v) : std::log(v); }

Isa gaussian_arrival_curve(const SourceModel& source, InfoUnit unit) {
  check_source(source);
  const double rho = correlation_factor(source.eta);
  const double first = log_in(unit, two_pi_e() * source.sigma2) / (2.0 * source.delta);
  const double rest = log_in(unit, two_pi_e() * source.sigma2 * rho) / (2.0 * source.delta);
  if (first < 0 || rest < 0) {
    throw Error(ErrorKind::kDegenerateVariance,
                "source " + source.id + " has a negative entropy rate; increase sigma2");
  }
  const double at_delta = first * source.delta;
  return {BoundingFunction::zero(),
          Curve({{0.0, first, 0.0}, {source.delta, rest, at_delta}})};
}

double information_rate(const SourceModel& source, InfoUnit unit) {
  return gaussian_arrival_curve(source, unit).asymptotic_rate();
}

double entropy_of_gaussian_block(const SourceModel& source, int samples, InfoUnit unit) {
  check_source(source);
  if (samples < 1 || samples > kMaxBlock) {
    throw Error(ErrorKind::kNumericalSingularity,
                "block length must be between 1 and " + std::to_string(kMaxBlock));
  }
  Eigen::MatrixXd cov(samples, samples);
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < samples; ++j) {
      cov(i, j) = source.sigma2 * std::exp(-std::abs(i - j) / source.eta);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumericalSingularity, "covariance matrix is not positive definite");
  }
  double log_det = 0.0;
  const auto& l = llt.matrixL();
  for (int i = 0; i < samples; ++i) log_det += 2.0 * std::log(l(i, i));
  const double nats = 0.5 * (samples * std::log(two_pi_e()) + log_det);
  return unit == InfoUnit::kBits ? nats / std::numbers::ln2 : nats;
}

double calibrate_sigma2(double target_rate, double delta, double eta, InfoUnit unit) {
  if (!(target_rate > 0) || !(delta > 0) || !(eta > 0)) {
    throw Error(ErrorKind::kInvalidArgument, "calibration needs positive rate, delta and eta");
  }
  const double exponent = 2.0 * delta * target_rate;
  const double scale = unit == InfoUnit::kBits ? std::exp2(exponent) : std::exp(exponent);
  const double sigma2 = scale / (two_pi_e() * correlation_factor(eta));
  if (!std::isfinite(sigma2)) {
    throw Error(ErrorKind::kDegenerateVariance, "calibrated variance is not representable");
  }
  return sigma2;
}

void SpatialModel::set(const std::string& group, int k, double coefficient) {
  if (k < 2) throw Error(ErrorKind::kValidationError, "spatial coefficients start at k = 2");
  table_[group][k] = coefficient;
}

double SpatialModel::coefficient(const std::string& group, int k) const {
  if (k == 1) return 1.0;
  const auto g = table_.find(group);
  if (g != table_.end()) {
    const auto it = g->second.find(k);
    if (it != g->second.end()) return it->second;
  }
  throw Error(ErrorKind::kValidationError, "spatial model has no coefficient for " +
                                               std::to_string(k) + " sources in group " + group);
}

void SpatialModel::validate() const {
  for (const auto& [group, coeffs] : table_) {
    double prev = 1.0;
    for (const auto& [k, c] : coeffs) {
      if (!(c >= 1.0) || c > static_cast<double>(k)) {
        throw Error(ErrorKind::kValidationError,
                    "spatial coefficient for group " + group + ", k = " + std::to_string(k) +
                        " must lie in [1, k]");
      }
      if (c < prev) {
        throw Error(ErrorKind::kValidationError,
                    "spatial coefficients for group " + group + " must not decrease");
      }
      prev = c;
    }
  }
}

Isa group_information(const std::vector<SourceModel>& sources, const SpatialModel& spatial,
                      InfoUnit unit) {
  std::map<std::string, std::vector<const SourceModel*>> groups;
  for (const auto& s : sources) groups[s.group].push_back(&s);
  Curve total = Curve::zero();
  for (const auto& [group, members] : groups) {
    for (const auto* m : members) {
      if (!same_parameters(*m, *members.front())) {
        throw Error(ErrorKind::kInconsistentGroup,
                    "sources " + members.front()->id + " and " + m->id + " in group " + group +
                        " have different parameters");
      }
    }
    const double c = spatial.coefficient(group, static_cast<int>(members.size()));
    total = add(total, scale(gaussian_arrival_curve(*members.front(), unit).curve, c));
  }
  return {BoundingFunction::zero(), total};
}

double joint_information_rate(const std::vector<SourceModel>& sources, const SpatialModel& spatial,
                              InfoUnit unit) {
  return group_information(sources, spatial, unit).asymptotic_rate();
}

}  // namespace infocalc
