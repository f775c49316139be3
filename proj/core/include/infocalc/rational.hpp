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

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace infocalc {

namespace detail {
__extension__ typedef __int128 Int128;
}  // namespace detail

/// Exact rational number with 64-bit numerator and denominator.
/// Intermediate products use 128-bit integers; results that do not fit
/// throw Error(kOverflow).
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT
  Rational(std::int64_t num, std::int64_t den);

  /// Best rational approximation with denominator <= max_den, accepted only
  /// if it reproduces `value` within `rel_tol`.
  static Rational from_double(double value, std::int64_t max_den = 1'000'000,
                              double rel_tol = 1e-12);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational make(detail::Int128 num, detail::Int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.to_double(); }

/// Per-scalar policy: comparison tolerance and conversions.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool kExact = false;
  static double tolerance() { return 1e-12; }
  static double from_double(double v) { return v; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool kExact = true;
  static Rational tolerance() { return Rational(0); }
  static Rational from_double(double v) { return Rational::from_double(v); }
};

template <class T>
T abs_value(const T& v) {
  return v < T(0) ? -v : v;
}

// Equality up to the scalar tolerance, relative to magnitude.
template <class T>
bool approx_equal(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::kExact) {
    return a == b;
  } else {
    const T scale = T(1) + abs_value(a) + abs_value(b);
    return abs_value(a - b) <= ScalarTraits<T>::tolerance() * scale;
  }
}

}  // namespace infocalc
