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

#include <string>
#include <vector>

#include "infocalc/bounding.hpp"
#include "infocalc/curve.hpp"
#include "infocalc/minplus.hpp"

namespace infocalc {

/// Stochastic information arrival: Prob{sup_s [I(s,t) - alpha(t-s)] > x} <= f(x).
template <class T>
struct IsaSpec {
  BasicBoundingFunction<T> bounding;
  BasicCurve<T> curve;

  T asymptotic_rate() const { return curve.asymptotic_rate(); }
  friend bool operator==(const IsaSpec&, const IsaSpec&) = default;
};

/// Stochastic service: Prob{(A (x) beta)(t) - A*(t) > x} <= g(x).
template <class T>
struct IssSpec {
  BasicBoundingFunction<T> bounding;
  BasicCurve<T> curve;

  T asymptotic_rate() const { return curve.asymptotic_rate(); }
  friend bool operator==(const IssSpec&, const IssSpec&) = default;
};

/// Lower bound on redundant information between two flows.
template <class T>
struct LisaSpec {
  LowerBoundingFunction bounding;
  BasicCurve<T> curve;
};

using Isa = IsaSpec<double>;
using Iss = IssSpec<double>;
using Lisa = LisaSpec<double>;

Isa to_double(const IsaSpec<Rational>& s);
Iss to_double(const IssSpec<Rational>& s);
IssSpec<Rational> to_exact(const Iss& s);
IsaSpec<Rational> to_exact(const Isa& s);

/// Merges two flows whose shared information is bounded below by
/// `redundancy`. A zero lower-bound function means the redundancy curve
/// holds surely, so only the arrival bounds combine.
template <class T>
IsaSpec<T> superpose(const IsaSpec<T>& a1, const IsaSpec<T>& a2, const LisaSpec<T>& redundancy) {
  auto f = bf_convolve(a1.bounding, a2.bounding);
  if (!redundancy.bounding.is_zero()) f = bf_infsum(f, redundancy.bounding);
  return {std::move(f), subtract(add(a1.curve, a2.curve), redundancy.curve)};
}

/// Superposition of independent flows with no shared information.
template <class T>
IsaSpec<T> superpose(const IsaSpec<T>& a1, const IsaSpec<T>& a2) {
  return {bf_convolve(a1.bounding, a2.bounding), add(a1.curve, a2.curve)};
}

/// Tandem of nodes along one path.
template <class T>
IssSpec<T> concatenate(const std::vector<IssSpec<T>>& nodes) {
  if (nodes.empty()) throw Error(ErrorKind::kInvalidArgument, "cannot concatenate zero nodes");
  IssSpec<T> out = nodes.front();
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    out.bounding = bf_convolve(out.bounding, nodes[i].bounding);
    out.curve = convolve(out.curve, nodes[i].curve);
  }
  return out;
}

/// Characterisation of the departure process.
template <class T>
IsaSpec<T> output_bound(const IsaSpec<T>& arrival, const IssSpec<T>& service) {
  return {bf_convolve(arrival.bounding, service.bounding), deconvolve(arrival.curve, service.curve)};
}

/// Residual service left after an impairment process takes priority.
template <class T>
IssSpec<T> impair(const IssSpec<T>& service, const IsaSpec<T>& impairment) {
  return {bf_convolve(service.bounding, impairment.bounding), subtract(service.curve, impairment.curve)};
}

/// Split-and-recombine over parallel paths.
template <class T>
IssSpec<T> parallel(const std::vector<IssSpec<T>>& paths) {
  if (paths.empty()) throw Error(ErrorKind::kInvalidArgument, "parallel composition of zero paths");
  IssSpec<T> out = paths.front();
  for (std::size_t i = 1; i < paths.size(); ++i) {
    out.bounding = bf_convolve(out.bounding, paths[i].bounding);
    out.curve = add(out.curve, paths[i].curve);
  }
  return out;
}

/// Redundancy between two flows is unchanged by passing through a system.
template <class T>
T redundancy_preserved(const T& redundancy) {
  return redundancy;
}

enum class GuaranteeKind { kBacklog, kDelay, kBacklogWithinDelay };

std::string to_string(GuaranteeKind kind);

/// Result of a performance-guarantee evaluation. `threshold` is the input
/// (x, p or tau as documented per function); `bound_value` is the
/// violation-probability bound; `derived_quantile` the matching threshold on
/// the performance quantity.
struct GuaranteeReport {
  GuaranteeKind kind = GuaranteeKind::kBacklog;
  double threshold = 0.0;
  double bound_value = 1.0;
  BoundingFunction bound_function;
  double derived_quantile = 0.0;
};

/// Prob{B(t) > x} <= (f (x) g)(x - (alpha (/) beta)(0)).
GuaranteeReport backlog_bound(const Isa& arrival, const Iss& service, double x);
/// Smallest backlog level whose violation bound is <= p.
GuaranteeReport backlog_quantile(const Isa& arrival, const Iss& service, double p);

/// Delay level d with Prob{D(t) > d} <= p, d = h(alpha + x, max(beta, x)) at
/// the x where f (x) g drops to p.
GuaranteeReport delay_bound(const Isa& arrival, const Iss& service, double p);
/// h(alpha + x, max(beta, x)) for a given slack x.
double delay_at_slack(const Isa& arrival, const Iss& service, double x);
/// Smallest violation bound the delay guarantee gives for delay level tau.
GuaranteeReport delay_violation(const Isa& arrival, const Iss& service, double tau);

/// Prob{A(t) - A*(t + tau) > x} <= (f (x) g)(x + c), c = inf_v [beta(v) -
/// alpha(v - tau)].
GuaranteeReport backlog_within_delay_bound(const Isa& arrival, const Iss& service, double tau,
                                           double x);
GuaranteeReport backlog_within_delay_quantile(const Isa& arrival, const Iss& service, double tau,
                                              double p);

}  // namespace infocalc
