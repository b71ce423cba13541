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

#include "dpmf/workload.h"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"

namespace dpmf {

absl::Status WorkloadSpec::Validate() const {
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in (0, 1], got ", alpha));
  }
  if (!(beta >= 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must lie in [0, 1), got ", beta));
  }
  if (!(beta < alpha)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "beta must be smaller than alpha, got alpha=", alpha, " beta=", beta));
  }
  return absl::OkStatus();
}

absl::StatusOr<WorkloadSpec> WorkloadSpec::Create(int n, double alpha,
                                                  double beta) {
  WorkloadSpec spec{n, alpha, beta};
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  return spec;
}

ToeplitzColumn WorkloadColumn(const WorkloadSpec& spec) {
  const int n = spec.n;
  const double alpha = spec.alpha;
  const double beta = spec.beta;
  std::vector<double> a(n);
  if (alpha - beta < kNearDegenerateGap) {
    // a_j = sum_{i=0}^{j} alpha^i beta^{j-i}, ascending in i.
    for (int j = 0; j < n; ++j) {
      double sum = 0.0;
      double alpha_pow = 1.0;
      for (int i = 0; i <= j; ++i) {
        sum += alpha_pow * std::pow(beta, j - i);
        alpha_pow *= alpha;
      }
      a[j] = sum;
    }
  } else {
    double alpha_pow = alpha;
    double beta_pow = beta;
    const double inv_gap = 1.0 / (alpha - beta);
    for (int j = 0; j < n; ++j) {
      a[j] = (alpha_pow - beta_pow) * inv_gap;
      alpha_pow *= alpha;
      beta_pow *= beta;
    }
  }
  a[0] = 1.0;
  return *ToeplitzColumn::Create(std::move(a));
}

absl::StatusOr<ToeplitzColumn> GeometricColumn(double t, int n) {
  if (!(t >= 0.0 && t <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("t must lie in [0, 1], got ", t));
  }
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  std::vector<double> e(n);
  double power = 1.0;
  for (int j = 0; j < n; ++j) {
    e[j] = power;
    power *= t;
  }
  return ToeplitzColumn::Create(std::move(e));
}

absl::StatusOr<double> E1SingularValue(int i, int n) {
  if (n < 1 || i < 1 || i > n) {
    return absl::OutOfRangeError(
        absl::StrCat("singular value index ", i, " outside [1, ", n, "]"));
  }
  const double angle =
      (i - 0.5) / (n + 0.5) * std::numbers::pi / 2.0;
  return 1.0 / (2.0 * std::sin(angle));
}

double NuclearNormLowerBound(const WorkloadSpec& spec) {
  const double n = spec.n;
  if (spec.alpha < 1.0) return n;
  return n * std::log(n + 1.0) / (std::numbers::pi * (1.0 + spec.beta));
}

}  // namespace dpmf
