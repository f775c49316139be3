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

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "infocalc/error.hpp"
#include "infocalc/rational.hpp"

namespace infocalc {

/// Sampling parameters for numeric bounding-function operations.
struct GridOptions {
  double step = 1e-3;
  /// Upper end of the sampled domain; 0 picks one from the operands.
  double x_max = 0.0;
  /// Cap on grid points for quadratic-cost operations (convolution,
  /// inf-sum); the step is coarsened to respect it.
  std::size_t max_points = 4096;
  /// Cap on grid points for linear-cost sampling.
  std::size_t max_linear_points = std::size_t{1} << 20;

  /// Defaults, with the step overridden by INFOCALC_GRID_STEP if set.
  static GridOptions defaults();
};

/// Non-increasing sampled function; value on [origin + i*step, origin +
/// (i+1)*step) is values[i], values.front() before origin and
/// values.back() after the last sample.
struct NumericSamples {
  double origin = 0.0;
  double step = 1e-3;
  std::vector<double> values;

  friend bool operator==(const NumericSamples&, const NumericSamples&) = default;
};

/// Non-increasing bound on a violation probability, f(x) for x >= 0.
template <class T>
class BasicBoundingFunction {
 public:
  /// 0 for x >= shift, 1 below.
  struct Zero {
    T shift{};
    friend bool operator==(const Zero&, const Zero&) = default;
  };
  /// a * exp(-(x - x0) / b) for x >= x0, a below.
  struct Exponential {
    T a{};
    T b{};
    T x0{};
    friend bool operator==(const Exponential&, const Exponential&) = default;
  };
  using Variant = std::variant<Zero, Exponential, NumericSamples>;

  BasicBoundingFunction() : v_(Zero{}) {}

  static BasicBoundingFunction zero(T shift = T(0)) { return BasicBoundingFunction(Zero{shift}); }
  static BasicBoundingFunction exponential(T a, T b, T x0 = T(0)) {
    if (a < T(0)) throw Error(ErrorKind::kInvalidArgument, "exponential bound needs a >= 0");
    if (!(b > T(0))) throw Error(ErrorKind::kInvalidArgument, "exponential bound needs b > 0");
    return BasicBoundingFunction(Exponential{a, b, x0});
  }
  /// Samples are replaced by their smallest non-increasing majorant.
  static BasicBoundingFunction numeric(double origin, double step, std::vector<double> values) {
    if (values.empty() || !(step > 0)) {
      throw Error(ErrorKind::kInvalidArgument, "numeric bound needs samples and a positive step");
    }
    for (std::size_t i = values.size() - 1; i-- > 0;) values[i] = std::max(values[i], values[i + 1]);
    return BasicBoundingFunction(NumericSamples{origin, step, std::move(values)});
  }

  double operator()(double x) const {
    if (const auto* z = std::get_if<Zero>(&v_)) return x >= to_double(z->shift) ? 0.0 : 1.0;
    if (const auto* e = std::get_if<Exponential>(&v_)) {
      const double a = to_double(e->a);
      const double x0 = to_double(e->x0);
      if (x < x0) return a;
      return a * std::exp(-(x - x0) / to_double(e->b));
    }
    const auto& n = std::get<NumericSamples>(v_);
    if (x < n.origin) return n.values.front();
    const double idx = std::floor((x - n.origin) / n.step);
    if (idx >= static_cast<double>(n.values.size())) return n.values.back();
    return n.values[static_cast<std::size_t>(idx)];
  }

  double clamped(double x) const { return std::min(1.0, (*this)(x)); }

  const Variant& variant() const { return v_; }
  bool is_zero() const { return std::holds_alternative<Zero>(v_); }
  const Zero* zero_params() const { return std::get_if<Zero>(&v_); }
  const Exponential* exponential_params() const { return std::get_if<Exponential>(&v_); }
  const NumericSamples* numeric_samples() const { return std::get_if<NumericSamples>(&v_); }

  /// g(x) = f(x - s).
  BasicBoundingFunction shifted(const T& s) const {
    if (const auto* z = std::get_if<Zero>(&v_)) return zero(z->shift + s);
    if (const auto* e = std::get_if<Exponential>(&v_)) return exponential(e->a, e->b, e->x0 + s);
    auto n = std::get<NumericSamples>(v_);
    n.origin += to_double(s);
    return BasicBoundingFunction(std::move(n));
  }

  /// Point past which the function is negligible (below ~1e-21 of its peak).
  double support_end() const {
    if (const auto* z = std::get_if<Zero>(&v_)) return std::max(0.0, to_double(z->shift));
    if (const auto* e = std::get_if<Exponential>(&v_)) {
      return std::max(0.0, to_double(e->x0) + 50.0 * to_double(e->b));
    }
    const auto& n = std::get<NumericSamples>(v_);
    return std::max(0.0, n.origin + n.step * static_cast<double>(n.values.size()));
  }

  template <class U, class Conv>
  BasicBoundingFunction<U> convert(Conv conv) const {
    using R = BasicBoundingFunction<U>;
    if (const auto* z = std::get_if<Zero>(&v_)) return R::zero(conv(z->shift));
    if (const auto* e = std::get_if<Exponential>(&v_)) return R::exponential(conv(e->a), conv(e->b), conv(e->x0));
    const auto& n = std::get<NumericSamples>(v_);
    return R::numeric(n.origin, n.step, n.values);
  }

  friend bool operator==(const BasicBoundingFunction&, const BasicBoundingFunction&) = default;

 private:
  explicit BasicBoundingFunction(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

using BoundingFunction = BasicBoundingFunction<double>;
using ExactBoundingFunction = BasicBoundingFunction<Rational>;

BoundingFunction to_double(const ExactBoundingFunction& f);
std::string describe(const BoundingFunction& f);
std::string describe(const ExactBoundingFunction& f);

/// Non-decreasing bound with values in [0, 1], used for redundancy lower
/// bounds. Sampled values are read at the next grid point.
class LowerBoundingFunction {
 public:
  LowerBoundingFunction() = default;
  static LowerBoundingFunction zero() { return {}; }
  static LowerBoundingFunction constant(double v);
  static LowerBoundingFunction numeric(double origin, double step, std::vector<double> values);

  double operator()(double s) const;
  bool is_zero() const { return values_.empty(); }

 private:
  double origin_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
};

namespace detail {

// inf over 0 <= s <= x of e1(s) + e2(x - s), evaluated exactly.
double exponential_convolution_at(double a1, double b1, double s1, double a2, double b2, double s2,
                                  double x);

}  // namespace detail

/// Sampled copy of f on [0, x_max].
template <class T>
BoundingFunction sample(const BasicBoundingFunction<T>& f, const GridOptions& grid,
                        std::size_t max_points) {
  const double x_max = grid.x_max > 0 ? grid.x_max : f.support_end();
  std::size_t n = static_cast<std::size_t>(std::ceil(x_max / grid.step)) + 1;
  double step = grid.step;
  if (n > max_points) {
    n = max_points;
    step = x_max / static_cast<double>(n - 1);
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = f(static_cast<double>(i) * step);
  return BoundingFunction::numeric(0.0, step, std::move(values));
}

BoundingFunction numeric_convolve(const BoundingFunction& f, const BoundingFunction& g,
                                  const GridOptions& grid);
BoundingFunction numeric_infsum(const BoundingFunction& f, const LowerBoundingFunction& theta,
                                const GridOptions& grid);

/// (f (x) g)(x) = inf_{0<=s<=x} f(s) + g(x - s). Exponential pairs use the
/// closed-form upper bound (a1+a2) exp(-x/(b1+b2)) unless `exact` asks for
/// the sampled exact infimum.
template <class T>
BasicBoundingFunction<T> bf_convolve(const BasicBoundingFunction<T>& f,
                                     const BasicBoundingFunction<T>& g, bool exact = false,
                                     const GridOptions& grid = GridOptions::defaults()) {
  using BF = BasicBoundingFunction<T>;
  if (const auto* z = f.zero_params()) return g.shifted(z->shift);
  if (const auto* z = g.zero_params()) return f.shifted(z->shift);
  const auto* e1 = f.exponential_params();
  const auto* e2 = g.exponential_params();
  if (e1 && e2) {
    if (!exact) return BF::exponential(e1->a + e2->a, e1->b + e2->b, e1->x0 + e2->x0);
    const double x_max = grid.x_max > 0 ? grid.x_max : f.support_end() + g.support_end();
    std::size_t n = static_cast<std::size_t>(std::ceil(x_max / grid.step)) + 1;
    double step = grid.step;
    if (n > grid.max_linear_points) {
      n = grid.max_linear_points;
      step = x_max / static_cast<double>(n - 1);
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = detail::exponential_convolution_at(
          to_double(e1->a), to_double(e1->b), to_double(e1->x0), to_double(e2->a),
          to_double(e2->b), to_double(e2->x0), static_cast<double>(i) * step);
    }
    return BF::numeric(0.0, step, std::move(values));
  }
  const auto conv = [](const T& v) { return to_double(v); };
  const auto r = numeric_convolve(f.template convert<double>(conv), g.template convert<double>(conv), grid);
  return BF::numeric(r.numeric_samples()->origin, r.numeric_samples()->step,
                     r.numeric_samples()->values);
}

/// (f (.) theta)(x) = inf_{s>=0} f(x + s) + theta(s).
template <class T>
BasicBoundingFunction<T> bf_infsum(const BasicBoundingFunction<T>& f,
                                   const LowerBoundingFunction& theta,
                                   const GridOptions& grid = GridOptions::defaults()) {
  using BF = BasicBoundingFunction<T>;
  if (theta.is_zero()) return BF::zero();
  const auto conv = [](const T& v) { return to_double(v); };
  const auto r = numeric_infsum(f.template convert<double>(conv), theta, grid);
  return BF::numeric(r.numeric_samples()->origin, r.numeric_samples()->step,
                     r.numeric_samples()->values);
}

/// Smallest x >= 0 with f(x) <= p. Throws Error(kUnreachableProbability)
/// if p <= 0 or the bound never drops to p.
template <class T>
double bf_invert(const BasicBoundingFunction<T>& f, double p) {
  if (!(p > 0)) throw Error(ErrorKind::kUnreachableProbability, "violation probability must be positive");
  if (f(0.0) <= p) return 0.0;
  if (const auto* z = f.zero_params()) return std::max(0.0, to_double(z->shift));
  if (const auto* e = f.exponential_params()) {
    return to_double(e->x0) + to_double(e->b) * std::log(to_double(e->a) / p);
  }
  const auto& n = *f.numeric_samples();
  for (std::size_t i = 0; i < n.values.size(); ++i) {
    if (n.values[i] <= p) return std::max(0.0, n.origin + static_cast<double>(i) * n.step);
  }
  throw Error(ErrorKind::kUnreachableProbability, "bound never reaches the requested probability");
}

}  // namespace infocalc
