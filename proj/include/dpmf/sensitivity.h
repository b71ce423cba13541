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

// Sensitivity of a strategy matrix C under b-min-separated participation.
//
// A participation pattern is a set pi of (0-based) steps with |pi| <= k and
// pairwise gaps >= b. The sensitivity is bounded by
//   sens_{k,b}(C)^2 <= max_pi sum_{i,j in pi} |(C^T C)_{ij}|,
// with equality when C^T C is entrywise non-negative. Several exact routes
// exist for structured C; ComputeSensitivity picks the cheapest one that
// applies.

#ifndef DPMF_SENSITIVITY_H_
#define DPMF_SENSITIVITY_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpmf/toeplitz.h"

namespace dpmf {

struct ParticipationSchema {
  int n = 1;
  int b = 1;  // minimum separation between participations
  int k = 1;  // maximum number of participations

  // Checks n >= 1, b >= 1, k >= 1 and 1 + (k - 1) b <= n.
  absl::Status Validate() const;

  static absl::StatusOr<ParticipationSchema> Create(int n, int b, int k);
  // Single participation: b = n, k = 1.
  static ParticipationSchema Streaming(int n);
  // ceil(n / b), the largest admissible k.
  static int MaxParticipations(int n, int b);
};

// Slack allowed on monotonicity and sign checks of Toeplitz coefficients.
inline constexpr double kMonotonicityTolerance = 1e-12;
// Gram entries above -kGramSignTolerance count as non-negative.
inline constexpr double kGramSignTolerance = 1e-12;
inline constexpr int kDefaultEnumerationCap = 16;

enum class SensitivityMethod {
  kClosedForm,           // aligned pattern provably optimal (see below)
  kSingleParticipation,  // k == 1: largest column norm
  kBandedDp,             // bandwidth(C) <= b
  kEnumeration,          // exhaustive maximisation over participation sets
  kRelaxedBound,         // polynomial upper bound, never exact
};

std::string_view MethodName(SensitivityMethod method);

struct SensitivityValue {
  double value = 0.0;
  // False when `value` is only an upper bound on the sensitivity.
  bool exact = true;
  SensitivityMethod method = SensitivityMethod::kClosedForm;
};

// sqrt(sum_i (sum_{j=0}^{min(k-1, floor(i/b))} m_{i-jb})^2), the norm of the
// sum of columns 0, b, ..., (k-1)b.
//
// Exact when m is non-negative and either non-decreasing or non-increasing
// on indices >= b (which includes every non-increasing m). Write
// G_ij = R_T(d) = sum_{t<=T} m_t m_{t+d} with d = |i - j|, T = n - 1 - max(i, j).
// The l-th step of any admissible pattern is at least l*b and two steps l < l'
// are at least (l' - l) b apart. R_T grows with T, and for d >= b it shrinks
// with d because m does; so every Gram entry of a pattern is dominated by the
// matching entry of the aligned pattern. For non-decreasing m the column sums
// themselves are dominated entrywise. Fails with FailedPrecondition for any
// other column.
absl::StatusOr<double> SensToeplitzClosedForm(const ToeplitzColumn& m,
                                              const ParticipationSchema& schema);

// Maximises sum_{i in pi} ||C e_i||^2 over participation sets with a dynamic
// program over (position, participations left). Columns at least b apart
// have disjoint supports when bandwidth(C) <= b, which makes this exact.
// Fails with FailedPrecondition if the bandwidth exceeds b.
absl::StatusOr<double> SensBandedDp(const MatrixHandle& c,
                                    const ParticipationSchema& schema);

struct EnumerationOptions {
  int max_n = kDefaultEnumerationCap;
  // Enumerate regardless of max_n (exponential time).
  bool allow_large = false;
};

// Exact maximum of sum_{i,j in pi} |(C^T C)_{ij}| over all participation
// sets. `exact` reports whether C^T C is entrywise non-negative, in which
// case the maximum is the sensitivity itself. Fails with ResourceExhausted
// above the enumeration cap.
absl::StatusOr<SensitivityValue> SensUpperBoundGeneric(
    const Eigen::MatrixXd& c, const ParticipationSchema& schema,
    const EnumerationOptions& options = {});

// Polynomial-time upper bound: each chosen step i is charged
// |G_ii| + (sum of its k - 1 largest admissible |G_ij|), and the charges are
// maximised with the same dynamic program as SensBandedDp.
absl::StatusOr<SensitivityValue> SensRelaxedBound(
    const Eigen::MatrixXd& c, const ParticipationSchema& schema);

// Calls `visit` once per participation set, empty set included, in
// lexicographic order of ascending 0-based step lists.
absl::Status ForEachParticipationSet(
    const ParticipationSchema& schema,
    const std::function<void(std::span<const int>)>& visit);

// sum_{s=0}^{k} binom(n - (s-1)(b-1), s).
uint64_t CountParticipationSets(const ParticipationSchema& schema);

// Largest column norm, the exact sensitivity for k == 1.
double MaxColumnNorm(const MatrixHandle& c);

// Picks, in order: the Toeplitz closed form when it is exact, the k == 1
// column norm, the banded dynamic program, enumeration up to
// `options.max_n`, and the relaxed bound.
absl::StatusOr<SensitivityValue> ComputeSensitivity(
    const MatrixHandle& c, const ParticipationSchema& schema,
    const EnumerationOptions& options = {});

}  // namespace dpmf

#endif  // DPMF_SENSITIVITY_H_
