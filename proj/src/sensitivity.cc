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

#include "dpmf/sensitivity.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "absl/strings/str_cat.h"

namespace dpmf {
namespace {

// ||C e_i||^2 for every column i.
std::vector<double> ColumnNormsSq(const MatrixHandle& c) {
  if (const auto* col = std::get_if<ToeplitzColumn>(&c)) {
    const int n = col->size();
    // Column i holds m_0..m_{n-1-i}.
    std::vector<double> prefix(n + 1, 0.0);
    for (int j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + (*col)[j] * (*col)[j];
    std::vector<double> norms(n);
    for (int i = 0; i < n; ++i) norms[i] = prefix[n - i];
    return norms;
  }
  const RowMatrix& m = std::get<DenseLowerTriangular>(c).matrix();
  std::vector<double> norms(m.cols());
  for (Eigen::Index i = 0; i < m.cols(); ++i) norms[i] = m.col(i).squaredNorm();
  return norms;
}

// max over b-separated sets of at most k positions of sum_{i in set} w_i.
double MaxSeparatedSum(const std::vector<double>& weights, int b, int k) {
  const int n = static_cast<int>(weights.size());
  const int width = k + 1;
  // best[i * width + u]: best total using positions >= i and at most u picks.
  std::vector<double> best(static_cast<size_t>(n + 1) * width, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    const int next = std::min(n, i + b);
    for (int u = 1; u <= k; ++u) {
      const double skip = best[static_cast<size_t>(i + 1) * width + u];
      const double take =
          weights[i] + best[static_cast<size_t>(next) * width + u - 1];
      best[static_cast<size_t>(i) * width + u] = std::max(skip, take);
    }
  }
  return best[k];
}

// True when the aligned pattern {0, b, 2b, ...} is optimal for the
// non-negative column m: m is non-decreasing, or non-increasing from index b
// on (arbitrary before).
bool AlignedPatternOptimal(const ToeplitzColumn& m, int b) {
  const int n = m.size();
  for (int j = 0; j < n; ++j) {
    if (m[j] < -kMonotonicityTolerance) return false;
  }
  bool tail_non_increasing = true;
  bool non_decreasing = true;
  for (int j = 0; j + 1 < n; ++j) {
    if (j >= b && m[j + 1] > m[j] + kMonotonicityTolerance) {
      tail_non_increasing = false;
    }
    if (m[j + 1] < m[j] - kMonotonicityTolerance) non_decreasing = false;
  }
  return tail_non_increasing || non_decreasing;
}

absl::Status CheckOrder(const MatrixHandle& c,
                        const ParticipationSchema& schema) {
  if (absl::Status s = schema.Validate(); !s.ok()) return s;
  if (Order(c) != schema.n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "matrix order ", Order(c), " does not match schema n = ", schema.n));
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ParticipationSchema::Validate() const {
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  if (b < 1) {
    return absl::InvalidArgumentError(absl::StrCat("b must be >= 1, got ", b));
  }
  if (k < 1) {
    return absl::InvalidArgumentError(absl::StrCat("k must be >= 1, got ", k));
  }
  if (k > MaxParticipations(n, b)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "k = ", k, " participations with separation b = ", b,
        " do not fit into n = ", n, " steps (max ", MaxParticipations(n, b),
        ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<ParticipationSchema> ParticipationSchema::Create(int n, int b,
                                                                int k) {
  ParticipationSchema schema{n, b, k};
  if (absl::Status s = schema.Validate(); !s.ok()) return s;
  return schema;
}

ParticipationSchema ParticipationSchema::Streaming(int n) {
  return ParticipationSchema{n, n, 1};
}

int ParticipationSchema::MaxParticipations(int n, int b) {
  if (n < 1 || b < 1) return 0;
  return (n - 1) / b + 1;
}

std::string_view MethodName(SensitivityMethod method) {
  switch (method) {
    case SensitivityMethod::kClosedForm:
      return "closed-form";
    case SensitivityMethod::kSingleParticipation:
      return "max-column";
    case SensitivityMethod::kBandedDp:
      return "banded-dp";
    case SensitivityMethod::kEnumeration:
      return "enumeration";
    case SensitivityMethod::kRelaxedBound:
      return "relaxed-bound";
  }
  return "unknown";
}

absl::StatusOr<double> SensToeplitzClosedForm(
    const ToeplitzColumn& m, const ParticipationSchema& schema) {
  if (absl::Status s = CheckOrder(m, schema); !s.ok()) return s;
  if (!AlignedPatternOptimal(m, schema.b)) {
    return absl::FailedPreconditionError(
        "closed-form sensitivity needs non-negative coefficients that are "
        "non-decreasing or non-increasing from index b on");
  }
  const int n = m.size();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const int last = std::min(schema.k - 1, i / schema.b);
    double entry = 0.0;
    for (int j = 0; j <= last; ++j) entry += m[i - j * schema.b];
    total += entry * entry;
  }
  return std::sqrt(total);
}

absl::StatusOr<double> SensBandedDp(const MatrixHandle& c,
                                    const ParticipationSchema& schema) {
  if (absl::Status s = CheckOrder(c, schema); !s.ok()) return s;
  const int bandwidth = EffectiveBandwidth(c);
  if (bandwidth > schema.b) {
    return absl::FailedPreconditionError(
        absl::StrCat("bandwidth ", bandwidth, " exceeds separation b = ",
                     schema.b));
  }
  return std::sqrt(MaxSeparatedSum(ColumnNormsSq(c), schema.b, schema.k));
}

absl::StatusOr<SensitivityValue> SensUpperBoundGeneric(
    const Eigen::MatrixXd& c, const ParticipationSchema& schema,
    const EnumerationOptions& options) {
  if (absl::Status s = schema.Validate(); !s.ok()) return s;
  if (c.rows() != schema.n || c.cols() != schema.n) {
    return absl::InvalidArgumentError("matrix order does not match schema");
  }
  if (schema.n > options.max_n && !options.allow_large) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "enumerating participation sets for n = ", schema.n,
        " exceeds the cap of ", options.max_n,
        "; use the closed form or the banded dynamic program instead"));
  }
  const Eigen::MatrixXd gram = c.transpose() * c;
  const bool non_negative = gram.minCoeff() >= -kGramSignTolerance;
  const Eigen::MatrixXd abs_gram = gram.cwiseAbs();
  const int n = schema.n;

  double best = 0.0;
  std::vector<int> chosen;
  chosen.reserve(schema.k);
  std::function<void(int, double)> descend = [&](int start, double sum) {
    best = std::max(best, sum);
    if (static_cast<int>(chosen.size()) == schema.k) return;
    for (int i = start; i < n; ++i) {
      double added = abs_gram(i, i);
      for (int j : chosen) added += 2.0 * abs_gram(i, j);
      chosen.push_back(i);
      descend(i + schema.b, sum + added);
      chosen.pop_back();
    }
  };
  descend(0, 0.0);
  return SensitivityValue{std::sqrt(best), non_negative,
                          SensitivityMethod::kEnumeration};
}

absl::StatusOr<SensitivityValue> SensRelaxedBound(
    const Eigen::MatrixXd& c, const ParticipationSchema& schema) {
  if (absl::Status s = schema.Validate(); !s.ok()) return s;
  if (c.rows() != schema.n || c.cols() != schema.n) {
    return absl::InvalidArgumentError("matrix order does not match schema");
  }
  const int n = schema.n;
  const Eigen::MatrixXd abs_gram = (c.transpose() * c).cwiseAbs();
  std::vector<double> charges(n);
  std::vector<double> partners;
  for (int i = 0; i < n; ++i) {
    partners.clear();
    for (int j = 0; j < n; ++j) {
      if (std::abs(i - j) >= schema.b) partners.push_back(abs_gram(i, j));
    }
    const int take =
        std::min(static_cast<int>(partners.size()), schema.k - 1);
    std::partial_sort(partners.begin(), partners.begin() + take,
                      partners.end(), std::greater<>());
    double charge = abs_gram(i, i);
    for (int t = 0; t < take; ++t) charge += partners[t];
    charges[i] = charge;
  }
  return SensitivityValue{
      std::sqrt(MaxSeparatedSum(charges, schema.b, schema.k)), false,
      SensitivityMethod::kRelaxedBound};
}

absl::Status ForEachParticipationSet(
    const ParticipationSchema& schema,
    const std::function<void(std::span<const int>)>& visit) {
  if (absl::Status s = schema.Validate(); !s.ok()) return s;
  std::vector<int> chosen;
  std::function<void(int)> descend = [&](int start) {
    visit(chosen);
    if (static_cast<int>(chosen.size()) == schema.k) return;
    for (int i = start; i < schema.n; ++i) {
      chosen.push_back(i);
      descend(i + schema.b);
      chosen.pop_back();
    }
  };
  descend(0);
  return absl::OkStatus();
}

uint64_t CountParticipationSets(const ParticipationSchema& schema) {
  uint64_t total = 0;
  for (int s = 0; s <= schema.k; ++s) {
    const int64_t m =
        static_cast<int64_t>(schema.n) - static_cast<int64_t>(s - 1) * (schema.b - 1);
    if (m < s) continue;
    // binom(m, s) via the exact running product.
    uint64_t binom = 1;
    for (int i = 1; i <= s; ++i) binom = binom * (m - s + i) / i;
    total += binom;
  }
  return total;
}

double MaxColumnNorm(const MatrixHandle& c) {
  const std::vector<double> norms = ColumnNormsSq(c);
  return std::sqrt(*std::max_element(norms.begin(), norms.end()));
}

absl::StatusOr<SensitivityValue> ComputeSensitivity(
    const MatrixHandle& c, const ParticipationSchema& schema,
    const EnumerationOptions& options) {
  if (absl::Status s = CheckOrder(c, schema); !s.ok()) return s;
  if (const auto* col = std::get_if<ToeplitzColumn>(&c);
      col != nullptr && AlignedPatternOptimal(*col, schema.b)) {
    absl::StatusOr<double> value = SensToeplitzClosedForm(*col, schema);
    if (!value.ok()) return value.status();
    return SensitivityValue{*value, true, SensitivityMethod::kClosedForm};
  }
  if (schema.k == 1) {
    return SensitivityValue{MaxColumnNorm(c), true,
                            SensitivityMethod::kSingleParticipation};
  }
  if (EffectiveBandwidth(c) <= schema.b) {
    absl::StatusOr<double> value = SensBandedDp(c, schema);
    if (!value.ok()) return value.status();
    return SensitivityValue{*value, true, SensitivityMethod::kBandedDp};
  }
  const Eigen::MatrixXd dense = Densify(c);
  if (schema.n <= options.max_n || options.allow_large) {
    return SensUpperBoundGeneric(dense, schema, options);
  }
  return SensRelaxedBound(dense, schema);
}

}  // namespace dpmf
