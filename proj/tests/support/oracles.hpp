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

// Brute-force reference implementations used by the test suites. They share
// no code with the library beyond the curve container.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "infocalc/curve.hpp"

namespace infocalc::oracle {

// Dense grid step. Dyadic, so lattice points and curve values are exact.
inline constexpr double kGridStep = 1.0 / 8192.0;
// Breakpoints are placed on multiples of this.
inline constexpr double kLattice = 1.0 / 8.0;
// Grid for the deviation oracle. Critical points of lattice curves with
// power-of-two slopes fall on multiples of 1/64, so this grid is exact.
inline constexpr double kDeviationStep = 1.0 / 1024.0;

struct Seg {
  double start, slope, value;
};

inline double eval(const std::vector<Seg>& segs, double t) {
  const Seg* cur = &segs.front();
  for (const auto& s : segs) {
    if (s.start <= t) cur = &s;
  }
  return cur->value + cur->slope * (t - cur->start);
}

inline std::vector<Seg> segs_of(const Curve& c) {
  std::vector<Seg> out;
  for (const auto& s : c.segments()) out.push_back({s.start, s.slope, s.value});
  return out;
}

inline double last_break(const std::vector<Seg>& s) { return s.back().start; }

// Random continuous piecewise-affine curve with breakpoints on the lattice,
// slopes drawn from `slopes` and a tail slope drawn from `tail_slopes`.
template <class Rng>
std::vector<Seg> random_lattice_curve(Rng& rng, const std::vector<double>& slopes,
                                      const std::vector<double>& tail_slopes, double min_start,
                                      int max_segments = 4) {
  std::uniform_int_distribution<int> nseg(1, max_segments);
  std::uniform_int_distribution<int> gap(1, 3);
  std::uniform_int_distribution<int> start_value(static_cast<int>(min_start * 8), 24);
  std::uniform_int_distribution<std::size_t> pick(0, slopes.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_tail(0, tail_slopes.size() - 1);
  const int n = nseg(rng);
  std::vector<Seg> segs;
  double t = 0.0;
  double v = start_value(rng) * kLattice;
  for (int i = 0; i < n; ++i) {
    const double slope = i + 1 == n ? tail_slopes[pick_tail(rng)] : slopes[pick(rng)];
    segs.push_back({t, slope, v});
    const double len = gap(rng) * kLattice;
    v += slope * len;
    t += len;
  }
  return segs;
}

struct CurvePair {
  std::vector<Seg> a;
  std::vector<Seg> b;
};

// Pair with tail(a) <= tail(b) and tail(b) > 0, so that convolution,
// deconvolution and horizontal deviation are all finite.
template <class Rng>
CurvePair random_pair(Rng& rng) {
  static const std::vector<double> kSlopes{0, 1, 2, 4, 8};
  static const std::vector<double> kServiceTails{1, 2, 4, 8};
  CurvePair p;
  p.b = random_lattice_curve(rng, kSlopes, kServiceTails, -2.0);
  std::vector<double> tails;
  for (double s : kSlopes) {
    if (s <= p.b.back().slope) tails.push_back(s);
  }
  p.a = random_lattice_curve(rng, kSlopes, tails, 0.0);
  return p;
}

// Lattice time in [0, hi] at resolution 1/64.
template <class Rng>
double random_time(Rng& rng, double hi) {
  std::uniform_int_distribution<int> k(0, static_cast<int>(hi * 64));
  return k(rng) / 64.0;
}

inline Curve to_curve(const std::vector<Seg>& segs) {
  std::vector<Curve::Segment> out;
  for (const auto& s : segs) out.push_back({s.start, s.slope, s.value});
  return Curve(std::move(out));
}

inline ExactCurve to_exact_curve(const std::vector<Seg>& segs) {
  std::vector<ExactCurve::Segment> out;
  for (const auto& s : segs) {
    out.push_back({Rational::from_double(s.start), Rational::from_double(s.slope),
                   Rational::from_double(s.value)});
  }
  return ExactCurve(std::move(out));
}

inline std::size_t grid_index(double t) { return static_cast<std::size_t>(std::llround(t / kGridStep)); }

// inf over grid s in [0, t] of a(s) + b(t - s); t must lie on the grid.
inline double convolve_at(const std::vector<Seg>& a, const std::vector<Seg>& b, double t) {
  const std::size_t n = grid_index(t);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) * kGridStep;
    best = std::min(best, eval(a, s) + eval(b, t - s));
  }
  return best;
}

// sup over grid s in [0, horizon] of a(t + s) - b(s). Past the last
// breakpoints the objective is non-increasing, so the window suffices.
inline double deconvolve_at(const std::vector<Seg>& a, const std::vector<Seg>& b, double t) {
  const double horizon = std::max(last_break(a), last_break(b)) + 1.0;
  const std::size_t n = grid_index(horizon);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) * kGridStep;
    best = std::max(best, eval(a, t + s) - eval(b, s));
  }
  return best;
}

// First u >= 0 with b(u) >= y, interpolated inside the grid cell where b
// crosses y (b is affine inside cells). Returns +inf if not reached by
// `limit`.
inline double first_crossing(const std::vector<Seg>& b, double y, double limit) {
  if (eval(b, 0.0) >= y) return 0.0;
  std::size_t lo = 0, hi = static_cast<std::size_t>(std::ceil(limit / kDeviationStep));
  if (eval(b, static_cast<double>(hi) * kDeviationStep) < y) return std::numeric_limits<double>::infinity();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (eval(b, static_cast<double>(mid) * kDeviationStep) >= y) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double u0 = static_cast<double>(lo) * kDeviationStep;
  const double v0 = eval(b, u0);
  const double v1 = eval(b, static_cast<double>(hi) * kDeviationStep);
  return u0 + (y - v0) / (v1 - v0) * kDeviationStep;
}

// sup over s of inf{tau >= 0 : a(s) <= b(s + tau)}. The function of s is
// affine inside grid cells when all critical points lie on the grid, so
// each cell contributes its two interior samples extrapolated to the ends.
inline double horizontal_deviation(const std::vector<Seg>& a, const std::vector<Seg>& b) {
  // After a reaches the last breakpoint value of b (and passes its own
  // breakpoints) the deviation is affine and non-increasing.
  double reach = last_break(a);
  const double target = eval(b, last_break(b));
  const auto& tail = a.back();
  if (eval(a, reach) < target && tail.slope > 0) reach += (target - eval(a, reach)) / tail.slope;
  const double horizon = std::ceil((reach + 1.0) / kLattice) * kLattice;
  const double limit = 64.0 * (horizon + 8.0);
  const auto u = [&](double s) { return first_crossing(b, eval(a, s), limit) - s; };
  double best = 0.0;
  const auto n = static_cast<std::size_t>(std::llround(horizon / kDeviationStep));
  for (std::size_t i = 0; i < n; ++i) {
    const double s0 = static_cast<double>(i) * kDeviationStep;
    const double p1 = s0 + kDeviationStep / 4;
    const double p2 = s0 + 3 * kDeviationStep / 4;
    const double u1 = u(p1), u2 = u(p2);
    const double slope = (u2 - u1) / (p2 - p1);
    best = std::max({best, u(s0), u1 - slope * (p1 - s0), u2 + slope * (s0 + kDeviationStep - p2)});
  }
  return best;
}

inline bool close(double got, double want, double rel) {
  return std::fabs(got - want) <= rel * std::max(1.0, std::fabs(want));
}

}  // namespace infocalc::oracle
