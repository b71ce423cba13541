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

#include "dpmf/factorization.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace dpmf {

std::string_view KindName(FactorizationKind kind) {
  switch (kind) {
    case FactorizationKind::kSquareRoot:
      return "sqrt";
    case FactorizationKind::kBandedSquareRoot:
      return "bsr";
    case FactorizationKind::kAof:
      return "aof";
    case FactorizationKind::kInputPerturbation:
      return "id-c";
    case FactorizationKind::kOutputPerturbation:
      return "id-b";
  }
  return "unknown";
}

absl::StatusOr<FactorizationKind> ParseKind(std::string_view name) {
  for (FactorizationKind kind :
       {FactorizationKind::kSquareRoot, FactorizationKind::kBandedSquareRoot,
        FactorizationKind::kAof, FactorizationKind::kInputPerturbation,
        FactorizationKind::kOutputPerturbation}) {
    if (KindName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown factorization kind '", std::string(name),
                   "' (expected sqrt, bsr, aof, id-c or id-b)"));
}

absl::Status CheckReconstruction(const Factorization& f, double rel_tol) {
  const int n = f.spec.n;
  if (Order(f.b) != n || Order(f.c) != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "factor orders (", Order(f.b), ", ", Order(f.c),
        ") do not match n = ", n));
  }
  const Eigen::MatrixXd a = ToDense(WorkloadColumn(f.spec)).matrix();
  const Eigen::MatrixXd product = Densify(f.b) * Densify(f.c);
  const double rel = (product - a).norm() / a.norm();
  if (!(rel <= rel_tol)) {
    return absl::InternalError(absl::StrCat(
        "B C differs from A by relative Frobenius error ", rel));
  }
  return absl::OkStatus();
}

std::vector<double> BinomialHalfCoefficients(int n) {
  std::vector<double> r(std::max(n, 0));
  if (n < 1) return r;
  r[0] = 1.0;
  for (int i = 1; i < n; ++i) {
    r[i] = r[i - 1] * (2.0 * i - 1.0) / (2.0 * i);
  }
  return r;
}

std::vector<double> SqrtCoefficientPrefix(double alpha, double beta,
                                          int count) {
  if (count < 1) return {};
  // c_j = alpha^j sum_i r_{j-i} r_i gamma^i with gamma = beta / alpha. Both
  // convolution operands stay O(1) so the FFT path keeps relative accuracy
  // even where alpha^j is tiny.
  const std::vector<double> r = BinomialHalfCoefficients(count);
  const double gamma = beta / alpha;
  std::vector<double> damped(count);
  double gamma_pow = 1.0;
  for (int i = 0; i < count; ++i) {
    damped[i] = gamma_pow * r[i];
    gamma_pow *= gamma;
  }
  std::vector<double> c = Convolve(r, damped, count);
  double alpha_pow = 1.0;
  for (int j = 0; j < count; ++j) {
    c[j] *= alpha_pow;
    alpha_pow *= alpha;
  }
  c[0] = 1.0;
  return c;
}

RootCoefficients SqrtCoefficients(const WorkloadSpec& spec) {
  return {BinomialHalfCoefficients(spec.n),
          SqrtCoefficientPrefix(spec.alpha, spec.beta, spec.n)};
}

absl::StatusOr<ToeplitzColumn> BsrC(const WorkloadSpec& spec, int p) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  if (p < 1 || p > spec.n) {
    return absl::InvalidArgumentError(
        absl::StrCat("bandwidth p = ", p, " outside [1, ", spec.n, "]"));
  }
  std::vector<double> c = SqrtCoefficientPrefix(spec.alpha, spec.beta, p);
  c.resize(spec.n, 0.0);
  return ToeplitzColumn::CreateBanded(std::move(c), p);
}

absl::StatusOr<ToeplitzColumn> BsrB(const WorkloadSpec& spec, int p) {
  absl::StatusOr<ToeplitzColumn> c = BsrC(spec, p);
  if (!c.ok()) return c.status();
  absl::StatusOr<ToeplitzColumn> c_inv = LttInverse(*c);
  if (!c_inv.ok()) return c_inv.status();
  return LttMultiply(WorkloadColumn(spec), *c_inv);
}

absl::StatusOr<Factorization> MakeFactorization(FactorizationKind kind,
                                                const WorkloadSpec& spec,
                                                std::optional<int> p) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  if (kind == FactorizationKind::kBandedSquareRoot && !p.has_value()) {
    return absl::InvalidArgumentError("bsr requires a bandwidth p");
  }
  if (kind != FactorizationKind::kBandedSquareRoot && p.has_value()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bandwidth p only applies to bsr, not ", std::string(KindName(kind))));
  }
  switch (kind) {
    case FactorizationKind::kSquareRoot: {
      absl::StatusOr<ToeplitzColumn> c =
          ToeplitzColumn::Create(SqrtCoefficients(spec).c);
      if (!c.ok()) return c.status();
      return Factorization{kind, spec, std::nullopt, *c, *c};
    }
    case FactorizationKind::kBandedSquareRoot: {
      absl::StatusOr<ToeplitzColumn> c = BsrC(spec, *p);
      if (!c.ok()) return c.status();
      absl::StatusOr<ToeplitzColumn> b = BsrB(spec, *p);
      if (!b.ok()) return b.status();
      return Factorization{kind, spec, p, *std::move(b), *std::move(c)};
    }
    case FactorizationKind::kInputPerturbation:
      return Factorization{kind, spec, std::nullopt, WorkloadColumn(spec),
                           ToeplitzColumn::Unit(spec.n)};
    case FactorizationKind::kOutputPerturbation:
      return Factorization{kind, spec, std::nullopt,
                           ToeplitzColumn::Unit(spec.n), WorkloadColumn(spec)};
    case FactorizationKind::kAof:
      return absl::InvalidArgumentError(
          "aof factorizations come from MakeAofFactorization");
  }
  return absl::InvalidArgumentError("unknown factorization kind");
}

}  // namespace dpmf
