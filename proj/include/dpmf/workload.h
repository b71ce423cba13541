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

// The SGD-with-momentum-and-weight-decay workload.
//
// Unrolling theta_i = alpha * theta_{i-1} - eta * m_i with
// m_i = beta * m_{i-1} + x_i expresses every iterate as a linear combination
// of the update vectors x_1..x_n. Up to the learning-rate factor eta, which
// callers apply themselves, the coefficients form the LTT matrix A with
//   a_j = sum_{i=0}^{j} alpha^i beta^{j-i}
//       = (alpha^{j+1} - beta^{j+1}) / (alpha - beta).
// A factors as E_alpha * E_beta where E_t has first column (1, t, t^2, ...).

#ifndef DPMF_WORKLOAD_H_
#define DPMF_WORKLOAD_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpmf/toeplitz.h"

namespace dpmf {

struct WorkloadSpec {
  int n = 1;
  double alpha = 1.0;  // weight decay, in (0, 1]
  double beta = 0.0;   // momentum, in [0, 1) and below alpha

  // Checks n >= 1, 0 < alpha <= 1, 0 <= beta < 1 and beta < alpha.
  absl::Status Validate() const;

  static absl::StatusOr<WorkloadSpec> Create(int n, double alpha, double beta);
};

// Below this gap between alpha and beta the ratio form of a_j loses too many
// digits and the explicit sum is used instead.
inline constexpr double kNearDegenerateGap = 1e-12;

// First column of A_{alpha,beta}; a_0 == 1. The spec must be valid.
ToeplitzColumn WorkloadColumn(const WorkloadSpec& spec);

// First column (1, t, ..., t^{n-1}) of E_t. Fails unless 0 <= t <= 1 and
// n >= 1.
absl::StatusOr<ToeplitzColumn> GeometricColumn(double t, int n);

// Closed-form i-th largest singular value (1-based) of the n x n all-ones
// LTT matrix E_1:
//   sigma_i = 1 / (2 sin((i - 1/2) / (n + 1/2) * pi / 2)).
absl::StatusOr<double> E1SingularValue(int i, int n);

// Reference lower bound on the nuclear norm of A_{alpha,beta}:
//   n                                       for alpha < 1,
//   n * log(n + 1) / (pi * (1 + beta))      for alpha == 1.
double NuclearNormLowerBound(const WorkloadSpec& spec);

}  // namespace dpmf

#endif  // DPMF_WORKLOAD_H_
