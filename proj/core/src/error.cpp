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

#include "infocalc/error.hpp"

namespace infocalc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidCurve: return "InvalidCurve";
    case ErrorKind::kUnboundedDeconvolution: return "UnboundedDeconvolution";
    case ErrorKind::kInfiniteDeviation: return "InfiniteDeviation";
    case ErrorKind::kNonMonotoneResult: return "NonMonotoneResult";
    case ErrorKind::kUnreachableProbability: return "UnreachableProbability";
    case ErrorKind::kDegenerateVariance: return "DegenerateVariance";
    case ErrorKind::kNumericalSingularity: return "NumericalSingularity";
    case ErrorKind::kInconsistentGroup: return "InconsistentGroup";
    case ErrorKind::kSchemaError: return "SchemaError";
    case ErrorKind::kValidationError: return "ValidationError";
    case ErrorKind::kSubsetLimitExceeded: return "SubsetLimitExceeded";
    case ErrorKind::kNonCanonicalForm: return "NonCanonicalForm";
    case ErrorKind::kConfigError: return "ConfigError";
    case ErrorKind::kOverflow: return "Overflow";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace infocalc
