//
// Copyright 2026 The dpmf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Expected approximation error E(B, C) = sens_{k,b}(C) * ||B||_F / sqrt(n),
// the theoretical reference curves it is compared against, and grid tables.
//
// Update vectors are assumed clipped to norm 1; errors for clip norm zeta
// scale linearly in zeta.

#ifndef DPMF_ERROR_ANALYSIS_H_
#define DPMF_ERROR_ANALYSIS_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpmf/aof_solver.h"
#include "dpmf/factorization.h"
#include "dpmf/sensitivity.h"
#include "dpmf/workload.h"

namespace dpmf {

// Leading-order errors of the two baseline factorizations. For k > 1 these
// are lower bounds rather than asymptotic equalities.
struct BaselineAsymptotics {
  double input_perturbation = 0.0;   // B = A, C = Id
  double output_perturbation = 0.0;  // B = Id, C = A
  bool lower_bounds_only = false;
};

struct ErrorBounds {
  double lower_bound = 0.0;
  // Square-root references, single participation only.
  std::optional<double> sqrt_upper_bound;
  std::optional<double> sqrt_lower_companion;
  BaselineAsymptotics baselines;
};

struct ErrorReport {
  WorkloadSpec spec;
  ParticipationSchema schema;
  FactorizationKind kind = FactorizationKind::kSquareRoot;
  double sens = 0.0;
  double b_frobenius = 0.0;
  double expected_error = 0.0;
  bool exact_sens = true;
  SensitivityMethod method = SensitivityMethod::kClosedForm;
  ErrorBounds bounds;
};

// Fails if schema.n differs from the factorization's n.
absl::StatusOr<ErrorReport> ExpectedError(
    const Factorization& f, const ParticipationSchema& schema,
    const EnumerationOptions& enumeration = {});

// sqrt(k) * log(n + 1) / pi for alpha == 1, sqrt(k) otherwise. Valid for
// every factorization with C^T C >= 0 entrywise.
double LowerBound(const WorkloadSpec& spec, const ParticipationSchema& schema);

// Single-participation bound on the square-root error:
//   (1 + log n) / (1 - beta)^2                      for alpha == 1,
//   log(1 / (1 - alpha^2)) / (alpha - beta)^2       otherwise.
double SqrtErrorUpperBound(const WorkloadSpec& spec);

// max{1, (log(n + 1) - 1) / 4} for alpha == 1, 1 otherwise.
double SqrtErrorLowerCompanion(const WorkloadSpec& spec);

BaselineAsymptotics ComputeBaselineAsymptotics(
    const WorkloadSpec& spec, const ParticipationSchema& schema);

// How b and k are derived from n in a grid. Unset b means b = n (single
// participation); unset k means the largest admissible k. b is clamped to n.
struct ParticipationRule {
  std::optional<int> b;
  std::optional<int> k;
};

struct ErrorGrid {
  std::vector<int> ns;
  std::vector<std::pair<double, double>> alpha_beta;
  std::vector<ParticipationRule> rules = {ParticipationRule{}};
  std::vector<FactorizationKind> kinds;
  // Bandwidth for BSR and AOF cells; defaults to b.
  std::optional<int> p;
  AofOptions aof;
  EnumerationOptions enumeration;
  int threads = 1;
};

struct ErrorRow {
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int b = 0;
  int k = 0;
  std::optional<int> p;
  FactorizationKind kind = FactorizationKind::kSquareRoot;
  std::optional<double> sens;
  std::optional<double> b_frobenius;
  std::optional<double> expected_error;
  std::optional<double> lower_bound;
  std::optional<bool> exact_sens;
  // Failure message or solver diagnostics; empty otherwise.
  std::string note;
};

// Evaluates every cell of the cross product. Failures are recorded in the
// row's note. Rows are ordered by n, then by the position of the kind in
// grid.kinds, then by grid order.
std::vector<ErrorRow> ErrorTable(const ErrorGrid& grid);

}  // namespace dpmf

#endif  // DPMF_ERROR_ANALYSIS_H_
