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

#include "infocalc/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "infocalc/error.hpp"

namespace infocalc {
namespace {

detail::Int128 gcd128(detail::Int128 a, detail::Int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    detail::Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(detail::Int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = make(num, den);
}

Rational Rational::make(detail::Int128 num, detail::Int128 den) {
  if (den == 0) throw Error(ErrorKind::kInvalidArgument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const detail::Int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!fits(num) || !fits(den)) throw Error(ErrorKind::kOverflow, "rational arithmetic overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::from_double(double value, std::int64_t max_den, double rel_tol) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::kInvalidArgument, "cannot convert non-finite value to rational");
  }
  // Continued-fraction convergents.
  const bool negative = value < 0;
  double x = std::fabs(value);
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(rem);
    if (fl > 9.0e15) break;
    const auto a = static_cast<std::int64_t>(fl);
    const detail::Int128 h2 = static_cast<detail::Int128>(a) * h1 + h0;
    const detail::Int128 k2 = static_cast<detail::Int128>(a) * k1 + k0;
    if (k2 > max_den || !fits(h2)) break;
    h0 = h1;
    h1 = static_cast<std::int64_t>(h2);
    k0 = k1;
    k1 = static_cast<std::int64_t>(k2);
    const double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::fabs(approx - x) <= rel_tol * std::max(1.0, x)) break;
    const double frac = rem - fl;
    if (frac <= 0) break;
    rem = 1.0 / frac;
  }
  if (k1 == 0) throw Error(ErrorKind::kOverflow, "value too large for rational conversion");
  const double approx = static_cast<double>(h1) / static_cast<double>(k1);
  if (std::fabs(approx - x) > rel_tol * std::max(1.0, x)) {
    throw Error(ErrorKind::kInvalidArgument,
                "value " + std::to_string(value) + " has no small-denominator rational form");
  }
  return make(negative ? -static_cast<detail::Int128>(h1) : h1, k1);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return make(-static_cast<detail::Int128>(num_), den_); }

Rational& Rational::operator+=(const Rational& o) {
  *this = make(static_cast<detail::Int128>(num_) * o.den_ + static_cast<detail::Int128>(o.num_) * den_,
               static_cast<detail::Int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  *this = make(static_cast<detail::Int128>(num_) * o.den_ - static_cast<detail::Int128>(o.num_) * den_,
               static_cast<detail::Int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  *this = make(static_cast<detail::Int128>(num_) * o.num_, static_cast<detail::Int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw Error(ErrorKind::kInvalidArgument, "rational division by zero");
  *this = make(static_cast<detail::Int128>(num_) * o.den_, static_cast<detail::Int128>(den_) * o.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const detail::Int128 lhs = static_cast<detail::Int128>(a.num_) * b.den_;
  const detail::Int128 rhs = static_cast<detail::Int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace infocalc
