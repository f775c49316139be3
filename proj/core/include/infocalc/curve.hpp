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

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "infocalc/error.hpp"
#include "infocalc/rational.hpp"

namespace infocalc {

/// Continuous, non-decreasing, piecewise-linear function on [0, inf).
/// Values may be negative at the origin ("unclipped" curves such as
/// r*(t - d) without the positive-part operator).
template <class T>
class BasicCurve {
 public:
  struct Segment {
    T start;
    T slope;
    T value;  // value at `start`
    friend bool operator==(const Segment&, const Segment&) = default;
  };

  BasicCurve() : segments_{Segment{T(0), T(0), T(0)}} {}

  /// Validates and normalizes. Throws Error(kInvalidCurve).
  explicit BasicCurve(std::vector<Segment> segments);

  static BasicCurve zero() { return BasicCurve(); }
  static BasicCurve constant(T v) { return BasicCurve({Segment{T(0), T(0), v}}); }
  /// rate * t + value_at_zero for all t >= 0.
  static BasicCurve affine(T rate, T value_at_zero) {
    return BasicCurve({Segment{T(0), rate, value_at_zero}});
  }
  /// max(0, rate * (t - latency)).
  static BasicCurve rate_latency(T rate, T latency);

  T operator()(const T& t) const;
  T value_at_zero() const { return segments_.front().value; }
  T asymptotic_rate() const { return segments_.back().slope; }
  bool unclipped() const { return segments_.front().value < T(0); }
  std::span<const Segment> segments() const { return segments_; }
  std::vector<T> breakpoints() const;

  template <class U, class Conv>
  BasicCurve<U> convert(Conv conv) const {
    std::vector<typename BasicCurve<U>::Segment> out;
    out.reserve(segments_.size());
    for (const auto& s : segments_) out.push_back({conv(s.start), conv(s.slope), conv(s.value)});
    return BasicCurve<U>(std::move(out));
  }

  friend bool operator==(const BasicCurve&, const BasicCurve&) = default;

 private:
  std::vector<Segment> segments_;
};

using Curve = BasicCurve<double>;
using ExactCurve = BasicCurve<Rational>;

Curve to_double(const ExactCurve& c);
ExactCurve to_exact(const Curve& c);
std::string describe(const Curve& c);
std::string describe(const ExactCurve& c);

template <class T>
BasicCurve<T>::BasicCurve(std::vector<Segment> segments) {
  if (segments.empty()) throw Error(ErrorKind::kInvalidCurve, "curve has no segments");
  if (segments.front().start != T(0)) {
    throw Error(ErrorKind::kInvalidCurve, "first segment must start at 0");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    auto& s = segments[i];
    if (s.slope < T(0)) {
      if (!ScalarTraits<T>::kExact && approx_equal(s.slope, T(0))) {
        s.slope = T(0);
      } else {
        throw Error(ErrorKind::kInvalidCurve, "negative slope in segment " + std::to_string(i));
      }
    }
    if (i == 0) continue;
    const auto& p = segments[i - 1];
    if (!(p.start < s.start)) {
      throw Error(ErrorKind::kInvalidCurve, "segment starts must strictly increase");
    }
    const T expected = p.value + p.slope * (s.start - p.start);
    if constexpr (ScalarTraits<T>::kExact) {
      if (expected != s.value) {
        throw Error(ErrorKind::kInvalidCurve, "curve is discontinuous at segment " + std::to_string(i));
      }
    } else {
      const T scale = T(1) + abs_value(expected) + abs_value(s.value);
      if (abs_value(expected - s.value) > 1e-9 * scale) {
        throw Error(ErrorKind::kInvalidCurve, "curve is discontinuous at segment " + std::to_string(i));
      }
    }
  }
  // Merge collinear neighbours.
  segments_.reserve(segments.size());
  for (const auto& s : segments) {
    if (!segments_.empty() && approx_equal(segments_.back().slope, s.slope)) continue;
    segments_.push_back(s);
  }
}

template <class T>
BasicCurve<T> BasicCurve<T>::rate_latency(T rate, T latency) {
  if (latency < T(0)) throw Error(ErrorKind::kInvalidCurve, "negative latency");
  if (latency == T(0)) return affine(rate, T(0));
  return BasicCurve({Segment{T(0), T(0), T(0)}, Segment{latency, rate, T(0)}});
}

template <class T>
T BasicCurve<T>::operator()(const T& t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](const T& v, const Segment& s) { return v < s.start; });
  if (it == segments_.begin()) {
    return segments_.front().value + segments_.front().slope * (t - segments_.front().start);
  }
  --it;
  return it->value + it->slope * (t - it->start);
}

template <class T>
std::vector<T> BasicCurve<T>::breakpoints() const {
  std::vector<T> out;
  out.reserve(segments_.size());
  for (const auto& s : segments_) out.push_back(s.start);
  return out;
}

}  // namespace infocalc
