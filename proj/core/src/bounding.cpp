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

#include "infocalc/bounding.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace infocalc {

GridOptions GridOptions::defaults() {
  GridOptions g;
  if (const char* env = std::getenv("INFOCALC_GRID_STEP")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kConfigError,
                  std::string("INFOCALC_GRID_STEP must be a positive number, got '") + env + "'");
    }
    g.step = v;
  }
  return g;
}

BoundingFunction to_double(const ExactBoundingFunction& f) {
  return f.convert<double>([](const Rational& r) { return r.to_double(); });
}

namespace {

template <class T>
std::string describe_impl(const BasicBoundingFunction<T>& f) {
  std::ostringstream os;
  if (const auto* z = f.zero_params()) {
    os << "0";
    if (z->shift != T(0)) os << " (x >= " << z->shift << ")";
  } else if (const auto* e = f.exponential_params()) {
    os << e->a << "e^{-";
    if (e->x0 != T(0)) {
      os << "(x-" << e->x0 << ")";
    } else {
      os << "x";
    }
    os << "/" << e->b << "}";
  } else {
    const auto& n = *f.numeric_samples();
    os << "numeric[" << n.values.size() << " samples, step " << n.step << "]";
  }
  return os.str();
}

}  // namespace

std::string describe(const BoundingFunction& f) { return describe_impl(f); }
std::string describe(const ExactBoundingFunction& f) { return describe_impl(f); }

LowerBoundingFunction LowerBoundingFunction::constant(double v) {
  return numeric(0.0, 1.0, {v});
}

LowerBoundingFunction LowerBoundingFunction::numeric(double origin, double step,
                                                     std::vector<double> values) {
  if (values.empty() || !(step > 0)) {
    throw Error(ErrorKind::kInvalidArgument, "lower bound needs samples and a positive step");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0 || values[i] > 1) {
      throw Error(ErrorKind::kInvalidArgument, "lower bound values must lie in [0, 1]");
    }
    if (i > 0) values[i] = std::max(values[i], values[i - 1]);
  }
  LowerBoundingFunction out;
  out.origin_ = origin;
  out.step_ = step;
  out.values_ = std::move(values);
  return out;
}

double LowerBoundingFunction::operator()(double s) const {
  if (values_.empty()) return 0.0;
  if (s <= origin_) return values_.front();
  const double idx = std::ceil((s - origin_) / step_);
  if (idx >= static_cast<double>(values_.size())) return values_.back();
  return values_[static_cast<std::size_t>(idx)];
}

namespace detail {

double exponential_convolution_at(double a1, double b1, double s1, double a2, double b2, double s2,
                                  double x) {
  const auto e1 = [&](double s) { return s < s1 ? a1 : a1 * std::exp(-(s - s1) / b1); };
  const auto e2 = [&](double s) { return s < s2 ? a2 : a2 * std::exp(-(s - s2) / b2); };
  const auto objective = [&](double s) { return e1(s) + e2(x - s); };
  // Each region is monotone or convex; its minimum is at an endpoint or
  // at the stationary point of the two decaying terms.
  std::vector<double> cand{0.0, x, s1, x - s2};
  if (a1 > 0 && a2 > 0) {
    const double s = (std::log(a1 * b2 / (a2 * b1)) + s1 / b1 + (x - s2) / b2) / (1 / b1 + 1 / b2);
    cand.push_back(s);
  }
  double best = std::numeric_limits<double>::infinity();
  for (double s : cand) {
    if (!(s >= 0 && s <= x)) continue;
    best = std::min(best, objective(s));
  }
  return best;
}

}  // namespace detail

namespace {

struct Grid {
  double step;
  std::size_t n;
};

Grid make_grid(double x_max, const GridOptions& opts) {
  x_max = std::max(x_max, opts.step);
  std::size_t n = static_cast<std::size_t>(std::ceil(x_max / opts.step)) + 1;
  double step = opts.step;
  if (n > opts.max_points) {
    n = std::max<std::size_t>(opts.max_points, 2);
    step = x_max / static_cast<double>(n - 1);
  }
  return {step, n};
}

}  // namespace

BoundingFunction numeric_convolve(const BoundingFunction& f, const BoundingFunction& g,
                                  const GridOptions& opts) {
  const double x_max = opts.x_max > 0 ? opts.x_max : f.support_end() + g.support_end();
  const Grid grid = make_grid(x_max, opts);
  std::vector<double> fv(grid.n), gv(grid.n), out(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    fv[i] = f(static_cast<double>(i) * grid.step);
    gv[i] = g(static_cast<double>(i) * grid.step);
  }
  for (std::size_t k = 0; k < grid.n; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= k; ++i) best = std::min(best, fv[i] + gv[k - i]);
    out[k] = best;
  }
  return BoundingFunction::numeric(0.0, grid.step, std::move(out));
}

BoundingFunction numeric_infsum(const BoundingFunction& f, const LowerBoundingFunction& theta,
                                const GridOptions& opts) {
  const double x_max = opts.x_max > 0 ? opts.x_max : f.support_end();
  const Grid grid = make_grid(x_max, opts);
  // Shifts s range over the same grid; beyond x_max f is at its floor.
  std::vector<double> fv(2 * grid.n), tv(grid.n), out(grid.n);
  for (std::size_t i = 0; i < fv.size(); ++i) fv[i] = f(static_cast<double>(i) * grid.step);
  for (std::size_t i = 0; i < grid.n; ++i) tv[i] = theta(static_cast<double>(i) * grid.step);
  for (std::size_t k = 0; k < grid.n; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.n; ++i) best = std::min(best, fv[k + i] + tv[i]);
    out[k] = best;
  }
  return BoundingFunction::numeric(0.0, grid.step, std::move(out));
}

}  // namespace infocalc
