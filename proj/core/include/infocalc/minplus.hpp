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

#include <optional>
#include <vector>

#include "infocalc/curve.hpp"
#include "infocalc/detail/envelope.hpp"

namespace infocalc {

/// (a (x) b)(t) = inf_{0<=s<=t} a(s) + b(t - s).
template <class T>
BasicCurve<T> convolve(const BasicCurve<T>& a, const BasicCurve<T>& b) {
  using detail::Piece;
  std::vector<Piece<T>> out;
  const auto pa = detail::pieces_of(a);
  const auto pb = detail::pieces_of(b);
  for (const auto& f : pa) {
    for (const auto& g : pb) {
      const T fa = *f.lo;
      const T gb = *g.lo;
      const auto fend = f.hi;  // a + L1
      const auto gend = g.hi;  // b + L2
      const T p = f.slope;
      const T q = g.slope;
      if (p < q) {
        // Spend as much time as possible on the flatter piece f.
        Piece<T> e;
        e.lo = fa + gb;
        if (fend) e.hi = *fend + gb;
        e.slope = p;
        e.intercept = f.intercept - p * gb + g.at(gb);
        out.push_back(e);
        if (fend) {
          Piece<T> h;
          h.lo = *fend + gb;
          if (gend) h.hi = *fend + *gend;
          h.slope = q;
          h.intercept = f.at(*fend) - q * *fend + g.intercept;
          out.push_back(h);
        }
      } else {
        Piece<T> e;
        e.lo = fa + gb;
        if (gend) e.hi = fa + *gend;
        e.slope = q;
        e.intercept = f.at(fa) - q * fa + g.intercept;
        out.push_back(e);
        if (gend) {
          Piece<T> h;
          h.lo = fa + *gend;
          if (fend) h.hi = *fend + *gend;
          h.slope = p;
          h.intercept = f.intercept - p * *gend + g.at(*gend);
          out.push_back(h);
        }
      }
    }
  }
  return BasicCurve<T>(detail::lower_envelope(out));
}

/// (a (/) b)(t) = sup_{s>=0} a(t + s) - b(s), restricted to t >= 0.
/// Throws Error(kUnboundedDeconvolution) when the supremum diverges.
template <class T>
BasicCurve<T> deconvolve(const BasicCurve<T>& a, const BasicCurve<T>& b) {
  using detail::Piece;
  if (a.asymptotic_rate() > b.asymptotic_rate() &&
      !approx_equal(a.asymptotic_rate(), b.asymptotic_rate())) {
    throw Error(ErrorKind::kUnboundedDeconvolution,
                "arrival rate exceeds service rate in deconvolution");
  }
  std::vector<Piece<T>> out;
  const auto pa = detail::pieces_of(a);
  const auto pb = detail::pieces_of(b);
  for (const auto& f : pa) {
    for (const auto& g : pb) {
      const T fa = *f.lo;
      const T gb = *g.lo;
      const auto fend = f.hi;
      const auto gend = g.hi;
      const T p = f.slope;
      const T q = g.slope;
      if (p > q && (fend || gend)) {
        // Maximise s.
        if (gend) {
          Piece<T> x;
          x.lo = fa - *gend;
          if (fend) x.hi = *fend - *gend;
          x.slope = p;
          x.intercept = p * *gend + f.intercept - g.at(*gend);
          out.push_back(x);
        }
        if (fend) {
          Piece<T> y;
          if (gend) y.lo = *fend - *gend;
          y.hi = *fend - gb;
          y.slope = q;
          y.intercept = f.at(*fend) - q * *fend - g.intercept;
          out.push_back(y);
        }
      } else {
        // Minimise s.
        Piece<T> x;
        if (gend) x.lo = fa - *gend;
        x.hi = fa - gb;
        x.slope = q;
        x.intercept = f.at(fa) - q * fa - g.intercept;
        out.push_back(x);
        Piece<T> y;
        y.lo = fa - gb;
        if (fend) y.hi = *fend - gb;
        y.slope = p;
        y.intercept = p * gb + f.intercept - g.at(gb);
        out.push_back(y);
      }
    }
  }
  return BasicCurve<T>(detail::upper_envelope(out));
}

/// Smallest u >= 0 with c(u) >= y, or nullopt if c never reaches y.
template <class T>
std::optional<T> lower_inverse(const BasicCurve<T>& c, const T& y) {
  const auto segs = c.segments();
  if (segs.front().value >= y) return T(0);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    const bool last = i + 1 == segs.size();
    if (s.slope == T(0)) continue;
    if (!last) {
      const T end_value = segs[i + 1].value;
      if (end_value < y) continue;
    }
    return s.start + (y - s.value) / s.slope;
  }
  return std::nullopt;
}

/// h(alpha, beta) = sup_{s>=0} inf{tau >= 0 : alpha(s) <= beta(s + tau)}.
/// Throws Error(kInfiniteDeviation) when unbounded.
template <class T>
T horizontal_deviation(const BasicCurve<T>& alpha, const BasicCurve<T>& beta) {
  const auto fail = [] {
    throw Error(ErrorKind::kInfiniteDeviation, "arrival curve is never caught by service curve");
  };
  if (alpha.asymptotic_rate() > beta.asymptotic_rate() &&
      !approx_equal(alpha.asymptotic_rate(), beta.asymptotic_rate())) {
    fail();
  }
  // u(s) = beta^{-1}(alpha(s)) - s is affine between critical points.
  const auto u = [&](const T& s) -> T {
    const auto inv = lower_inverse(beta, alpha(s));
    if (!inv) fail();
    return *inv - s;
  };
  std::vector<T> crit = alpha.breakpoints();
  const auto asegs = alpha.segments();
  for (const auto& bs : beta.segments()) {
    const T y = bs.value;
    for (std::size_t i = 0; i < asegs.size(); ++i) {
      const auto& s = asegs[i];
      if (s.slope == T(0)) continue;
      const T x = s.start + (y - s.value) / s.slope;
      if (x < s.start) continue;
      if (i + 1 < asegs.size() && x > asegs[i + 1].start) continue;
      crit.push_back(x);
    }
  }
  detail::sort_unique(crit);

  T sup = T(0);
  const auto take = [&](const T& v) {
    if (v > sup) sup = v;
  };
  for (std::size_t k = 0; k < crit.size(); ++k) {
    const T c0 = crit[k];
    take(u(c0));
    if (k + 1 < crit.size()) {
      const T c1 = crit[k + 1];
      const T w = (c1 - c0) / T(3);
      const T p1 = c0 + w;
      const T p2 = c0 + w + w;
      const T u1 = u(p1);
      const T u2 = u(p2);
      const T slope = (u2 - u1) / w;
      take(u1 - slope * w);
      take(u2 + slope * w);
    } else {
      const T u1 = u(c0 + T(1));
      const T u2 = u(c0 + T(2));
      const T slope = u2 - u1;
      if (slope > T(0) && !approx_equal(u1, u2)) fail();
      take(u1 - slope);
    }
  }
  return sup;
}

/// inf_{v>=0} [beta(v) - alpha(v - tau)] with alpha taken as 0 for
/// arguments <= 0. nullopt means the infimum is -inf.
template <class T>
std::optional<T> shifted_gap_infimum(const BasicCurve<T>& beta, const BasicCurve<T>& alpha,
                                     const T& tau) {
  if (beta.asymptotic_rate() < alpha.asymptotic_rate() &&
      !approx_equal(beta.asymptotic_rate(), alpha.asymptotic_rate())) {
    return std::nullopt;
  }
  T best = beta(T(0));
  const auto take = [&](const T& v) {
    if (v < best) best = v;
  };
  take(beta(tau) - alpha(T(0)));
  for (const auto& b : beta.breakpoints()) {
    if (b > tau) take(beta(b) - alpha(b - tau));
  }
  for (const auto& a : alpha.breakpoints()) take(beta(a + tau) - alpha(a));
  return best;
}

template <class T>
BasicCurve<T> add_constant(const BasicCurve<T>& c, const T& x) {
  std::vector<typename BasicCurve<T>::Segment> segs(c.segments().begin(), c.segments().end());
  for (auto& s : segs) s.value += x;
  return BasicCurve<T>(std::move(segs));
}

template <class T>
BasicCurve<T> scale(const BasicCurve<T>& c, const T& k) {
  if (k < T(0)) throw Error(ErrorKind::kNonMonotoneResult, "negative scale factor");
  std::vector<typename BasicCurve<T>::Segment> segs(c.segments().begin(), c.segments().end());
  for (auto& s : segs) {
    s.slope *= k;
    s.value *= k;
  }
  return BasicCurve<T>(std::move(segs));
}

template <class T>
BasicCurve<T> pointwise_min(const BasicCurve<T>& a, const BasicCurve<T>& b) {
  auto pieces = detail::pieces_of(a);
  auto pb = detail::pieces_of(b);
  pieces.insert(pieces.end(), pb.begin(), pb.end());
  return BasicCurve<T>(detail::lower_envelope(pieces));
}

template <class T>
BasicCurve<T> pointwise_max(const BasicCurve<T>& a, const BasicCurve<T>& b) {
  auto pieces = detail::pieces_of(a);
  auto pb = detail::pieces_of(b);
  pieces.insert(pieces.end(), pb.begin(), pb.end());
  return BasicCurve<T>(detail::upper_envelope(pieces));
}

/// max(c(t), x).
template <class T>
BasicCurve<T> floor_at(const BasicCurve<T>& c, const T& x) {
  return pointwise_max(c, BasicCurve<T>::constant(x));
}

namespace detail {

template <class T, class Op>
BasicCurve<T> combine(const BasicCurve<T>& a, const BasicCurve<T>& b, Op op) {
  std::vector<T> xs = a.breakpoints();
  const auto bb = b.breakpoints();
  xs.insert(xs.end(), bb.begin(), bb.end());
  sort_unique(xs);
  std::vector<typename BasicCurve<T>::Segment> segs;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const T x = xs[k];
    const T next = k + 1 < xs.size() ? xs[k + 1] : x + T(1);
    const T v0 = op(a(x), b(x));
    const T v1 = op(a(next), b(next));
    const T slope = (v1 - v0) / (next - x);
    if (slope < T(0) && !approx_equal(v0, v1)) {
      throw Error(ErrorKind::kNonMonotoneResult, "curve arithmetic produced a decreasing curve");
    }
    segs.push_back({x, slope < T(0) ? T(0) : slope, v0});
  }
  return BasicCurve<T>(std::move(segs));
}

}  // namespace detail

template <class T>
BasicCurve<T> add(const BasicCurve<T>& a, const BasicCurve<T>& b) {
  return detail::combine(a, b, [](const T& x, const T& y) { return x + y; });
}

/// a - b; throws Error(kNonMonotoneResult) if the difference decreases.
template <class T>
BasicCurve<T> subtract(const BasicCurve<T>& a, const BasicCurve<T>& b) {
  return detail::combine(a, b, [](const T& x, const T& y) { return x - y; });
}

}  // namespace infocalc
