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
#include <optional>
#include <vector>

#include "infocalc/curve.hpp"

namespace infocalc::detail {

// Line y = slope * t + intercept restricted to [lo, hi]; a missing bound is
// infinite.
template <class T>
struct Piece {
  std::optional<T> lo;
  std::optional<T> hi;
  T slope;
  T intercept;

  T at(const T& t) const { return slope * t + intercept; }
  bool covers(const T& t) const { return (!lo || *lo <= t) && (!hi || t <= *hi); }
};

template <class T>
void sort_unique(std::vector<T>& xs) {
  std::sort(xs.begin(), xs.end());
  std::vector<T> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    if (!out.empty() && approx_equal(out.back(), x)) continue;
    out.push_back(x);
  }
  xs = std::move(out);
}

// Lower envelope of `pieces` over [0, inf), as raw segments (not validated).
// Every t >= 0 must be covered by at least one piece.
template <class T>
std::vector<typename BasicCurve<T>::Segment> lower_envelope(const std::vector<Piece<T>>& input) {
  std::vector<Piece<T>> pieces;
  pieces.reserve(input.size());
  for (const auto& p : input) {
    if (p.hi && *p.hi < T(0)) continue;
    Piece<T> q = p;
    if (!q.lo || *q.lo < T(0)) q.lo = T(0);
    pieces.push_back(q);
  }
  if (pieces.empty()) throw Error(ErrorKind::kInvalidCurve, "empty envelope");

  std::vector<T> xs{T(0)};
  for (const auto& p : pieces) {
    xs.push_back(*p.lo);
    if (p.hi) xs.push_back(*p.hi);
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const auto& a = pieces[i];
      const auto& b = pieces[j];
      if (a.slope == b.slope) continue;
      const T x = (b.intercept - a.intercept) / (a.slope - b.slope);
      if (x < T(0)) continue;
      if (a.covers(x) && b.covers(x)) xs.push_back(x);
    }
  }
  sort_unique(xs);

  using Segment = typename BasicCurve<T>::Segment;
  std::vector<Segment> out;
  const Piece<T>* prev = nullptr;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const T probe = (k + 1 < xs.size()) ? (xs[k] + xs[k + 1]) / T(2) : xs[k] + T(1);
    const Piece<T>* best = nullptr;
    T best_val{};
    for (const auto& p : pieces) {
      if (!p.covers(probe)) continue;
      const T v = p.at(probe);
      if (!best || v < best_val || (v == best_val && p.slope < best->slope)) {
        best = &p;
        best_val = v;
      }
    }
    if (!best) throw Error(ErrorKind::kInvalidCurve, "envelope has a gap");
    if (prev && prev->slope == best->slope && prev->intercept == best->intercept) continue;
    out.push_back(Segment{xs[k], best->slope, best->at(xs[k])});
    prev = best;
  }
  return out;
}

template <class T>
std::vector<Piece<T>> pieces_of(const BasicCurve<T>& c) {
  std::vector<Piece<T>> out;
  const auto segs = c.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    Piece<T> p;
    p.lo = segs[i].start;
    if (i + 1 < segs.size()) p.hi = segs[i + 1].start;
    p.slope = segs[i].slope;
    p.intercept = segs[i].value - segs[i].slope * segs[i].start;
    out.push_back(p);
  }
  return out;
}

template <class T>
Piece<T> negated(Piece<T> p) {
  p.slope = -p.slope;
  p.intercept = -p.intercept;
  return p;
}

template <class T>
std::vector<typename BasicCurve<T>::Segment> upper_envelope(const std::vector<Piece<T>>& pieces) {
  std::vector<Piece<T>> neg;
  neg.reserve(pieces.size());
  for (const auto& p : pieces) neg.push_back(negated(p));
  auto segs = lower_envelope(neg);
  for (auto& s : segs) {
    s.slope = -s.slope;
    s.value = -s.value;
  }
  return segs;
}

}  // namespace infocalc::detail
