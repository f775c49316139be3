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

#include "infocalc/calculus.hpp"

#include <cmath>
#include <limits>

namespace infocalc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExactBoundingFunction exact_bounding(const BoundingFunction& f) {
  return f.convert<Rational>([](double v) { return Rational::from_double(v); });
}

}  // namespace

Isa to_double(const IsaSpec<Rational>& s) { return {to_double(s.bounding), to_double(s.curve)}; }
Iss to_double(const IssSpec<Rational>& s) { return {to_double(s.bounding), to_double(s.curve)}; }
IssSpec<Rational> to_exact(const Iss& s) { return {exact_bounding(s.bounding), to_exact(s.curve)}; }
IsaSpec<Rational> to_exact(const Isa& s) { return {exact_bounding(s.bounding), to_exact(s.curve)}; }

std::string to_string(GuaranteeKind kind) {
  switch (kind) {
    case GuaranteeKind::kBacklog: return "backlog";
    case GuaranteeKind::kDelay: return "delay";
    case GuaranteeKind::kBacklogWithinDelay: return "backlog_within_delay";
  }
  return "unknown";
}

GuaranteeReport backlog_bound(const Isa& arrival, const Iss& service, double x) {
  const auto fg = bf_convolve(arrival.bounding, service.bounding);
  const double c = deconvolve(arrival.curve, service.curve)(0.0);
  GuaranteeReport r;
  r.kind = GuaranteeKind::kBacklog;
  r.threshold = x;
  r.bound_function = fg.shifted(c);
  r.bound_value = fg(x - c);
  r.derived_quantile = x;
  return r;
}

GuaranteeReport backlog_quantile(const Isa& arrival, const Iss& service, double p) {
  const auto fg = bf_convolve(arrival.bounding, service.bounding);
  const double c = deconvolve(arrival.curve, service.curve)(0.0);
  GuaranteeReport r;
  r.kind = GuaranteeKind::kBacklog;
  r.threshold = p;
  r.bound_function = fg.shifted(c);
  const double x = bf_invert(fg, p);
  r.bound_value = fg(x);
  r.derived_quantile = c + x;
  return r;
}

double delay_at_slack(const Isa& arrival, const Iss& service, double x) {
  return horizontal_deviation(add_constant(arrival.curve, x), floor_at(service.curve, x));
}

GuaranteeReport delay_bound(const Isa& arrival, const Iss& service, double p) {
  const auto fg = bf_convolve(arrival.bounding, service.bounding);
  const double x = bf_invert(fg, p);
  GuaranteeReport r;
  r.kind = GuaranteeKind::kDelay;
  r.threshold = p;
  r.bound_function = fg;
  r.bound_value = fg(x);
  r.derived_quantile = delay_at_slack(arrival, service, x);
  return r;
}

GuaranteeReport delay_violation(const Isa& arrival, const Iss& service, double tau) {
  const auto fg = bf_convolve(arrival.bounding, service.bounding);
  GuaranteeReport r;
  r.kind = GuaranteeKind::kDelay;
  r.threshold = tau;
  r.bound_function = fg;
  r.derived_quantile = tau;
  // The deviation grows with the slack x; find the largest admissible x.
  if (delay_at_slack(arrival, service, 0.0) > tau) {
    r.bound_value = 1.0;
    return r;
  }
  double lo = 0.0;
  double hi = std::max(1.0, fg.support_end());
  if (delay_at_slack(arrival, service, hi) <= tau) {
    r.bound_value = fg(hi);
    return r;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * (1.0 + hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (delay_at_slack(arrival, service, mid) <= tau) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.bound_value = fg(lo);
  return r;
}

GuaranteeReport backlog_within_delay_bound(const Isa& arrival, const Iss& service, double tau,
                                           double x) {
  const auto fg = bf_convolve(arrival.bounding, service.bounding);
  const auto c = shifted_gap_infimum(service.curve, arrival.curve, tau);
  GuaranteeReport r;
  r.kind = GuaranteeKind::kBacklogWithinDelay;
  r.threshold = x;
  r.derived_quantile = x;
  if (!c) {
    r.bound_value = 1.0;
    r.bound_function = BoundingFunction::zero(kInf);
    return r;
  }
  r.bound_function = fg.shifted(-*c);
  r.bound_value = fg(x + *c);
  return r;
}

GuaranteeReport backlog_within_delay_quantile(const Isa& arrival, const Iss& service, double tau,
                                              double p) {
  const auto fg = bf_convolve(arrival.bounding, service.bounding);
  const auto c = shifted_gap_infimum(service.curve, arrival.curve, tau);
  GuaranteeReport r;
  r.kind = GuaranteeKind::kBacklogWithinDelay;
  r.threshold = p;
  if (!c) {
    r.bound_value = 1.0;
    r.bound_function = BoundingFunction::zero(kInf);
    r.derived_quantile = kInf;
    return r;
  }
  r.bound_function = fg.shifted(-*c);
  const double x = bf_invert(fg, p);
  r.bound_value = fg(x);
  r.derived_quantile = std::max(0.0, x - *c);
  return r;
}

}  // namespace infocalc
