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

#include "infocalc/curve.hpp"

#include <sstream>

namespace infocalc {
namespace {

template <class T>
std::string describe_impl(const BasicCurve<T>& c) {
  std::ostringstream os;
  const auto segs = c.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i) os << "; ";
    os << "[" << segs[i].start << ", ";
    if (i + 1 < segs.size()) {
      os << segs[i + 1].start << ")";
    } else {
      os << "inf)";
    }
    os << " slope " << segs[i].slope << " from " << segs[i].value;
  }
  return os.str();
}

}  // namespace

Curve to_double(const ExactCurve& c) {
  return c.convert<double>([](const Rational& r) { return r.to_double(); });
}

ExactCurve to_exact(const Curve& c) {
  return c.convert<Rational>([](double v) { return Rational::from_double(v); });
}

std::string describe(const Curve& c) { return describe_impl(c); }
std::string describe(const ExactCurve& c) { return describe_impl(c); }

}  // namespace infocalc
