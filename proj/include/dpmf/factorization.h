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

// Factorizations A = B C of the SGD workload matrix.
//
// The square root C of A_{alpha,beta} is itself LTT with
//   c_j = sum_{i=0}^{j} alpha^{j-i} r_{j-i} r_i beta^i,   r_i = |binom(-1/2, i)|,
// and the p-banded square root (BSR) keeps c_0..c_{p-1}, zeroes the rest, and
// sets B = A C^{-1}. Baselines put all of A on one side: B = A, C = Id adds
// noise to the gradients, B = Id, C = A adds it to the iterates.

#ifndef DPMF_FACTORIZATION_H_
#define DPMF_FACTORIZATION_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpmf/toeplitz.h"
#include "dpmf/workload.h"

namespace dpmf {

enum class FactorizationKind {
  kSquareRoot,
  kBandedSquareRoot,
  kAof,
  kInputPerturbation,   // B = A, C = Id
  kOutputPerturbation,  // B = Id, C = A
};

// Short identifiers used on the command line and in tables: "sqrt", "bsr",
// "aof", "id-c" (C = Id) and "id-b" (B = Id).
std::string_view KindName(FactorizationKind kind);
absl::StatusOr<FactorizationKind> ParseKind(std::string_view name);

struct Factorization {
  FactorizationKind kind;
  WorkloadSpec spec;
  // p for kBandedSquareRoot, the band b for kAof.
  std::optional<int> bandwidth;
  MatrixHandle b;
  MatrixHandle c;
};

// Checks dense(B) * dense(C) == dense(A) to `rel_tol` in relative Frobenius
// norm.
absl::Status CheckReconstruction(const Factorization& f, double rel_tol = 1e-8);

// r_0 = 1, r_i = r_{i-1} (2i - 1) / (2i).
std::vector<double> BinomialHalfCoefficients(int n);

struct RootCoefficients {
  std::vector<double> r;
  std::vector<double> c;
};

// All n coefficients of the square root of A_{alpha,beta}.
RootCoefficients SqrtCoefficients(const WorkloadSpec& spec);

// The first `count` square-root coefficients; the cost depends on `count`
// only, never on spec.n.
std::vector<double> SqrtCoefficientPrefix(double alpha, double beta, int count);

// C^{(p)}: the square-root column truncated to bandwidth p.
absl::StatusOr<ToeplitzColumn> BsrC(const WorkloadSpec& spec, int p);

// B^{(p)} = A (C^{(p)})^{-1}, full length n.
absl::StatusOr<ToeplitzColumn> BsrB(const WorkloadSpec& spec, int p);

// Builds any kind except kAof (see MakeAofFactorization). `p` is required
// for kBandedSquareRoot and rejected otherwise.
absl::StatusOr<Factorization> MakeFactorization(FactorizationKind kind,
                                                const WorkloadSpec& spec,
                                                std::optional<int> p = {});

}  // namespace dpmf

#endif  // DPMF_FACTORIZATION_H_
