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

#include "dpmf/error_analysis.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "absl/strings/str_cat.h"

namespace dpmf {
namespace {

ErrorBounds AllBounds(const WorkloadSpec& spec,
                      const ParticipationSchema& schema) {
  ErrorBounds bounds;
  bounds.lower_bound = LowerBound(spec, schema);
  if (schema.k == 1) {
    bounds.sqrt_upper_bound = SqrtErrorUpperBound(spec);
    bounds.sqrt_lower_companion = SqrtErrorLowerCompanion(spec);
  }
  bounds.baselines = ComputeBaselineAsymptotics(spec, schema);
  return bounds;
}

struct Cell {
  int n;
  double alpha;
  double beta;
  ParticipationRule rule;
  int kind_rank;
  FactorizationKind kind;
};

ErrorRow EvaluateCell(const Cell& cell, const ErrorGrid& grid) {
  ErrorRow row;
  row.n = cell.n;
  row.alpha = cell.alpha;
  row.beta = cell.beta;
  row.kind = cell.kind;
  row.b = std::min(cell.rule.b.value_or(cell.n), cell.n);
  row.k = cell.rule.k.value_or(
      row.b >= 1 ? ParticipationSchema::MaxParticipations(cell.n, row.b) : 1);

  absl::StatusOr<WorkloadSpec> spec =
      WorkloadSpec::Create(cell.n, cell.alpha, cell.beta);
  if (!spec.ok()) {
    row.note = std::string(spec.status().message());
    return row;
  }
  absl::StatusOr<ParticipationSchema> schema =
      ParticipationSchema::Create(cell.n, row.b, row.k);
  if (!schema.ok()) {
    row.note = std::string(schema.status().message());
    return row;
  }
  row.lower_bound = LowerBound(*spec, *schema);

  const bool banded = cell.kind == FactorizationKind::kBandedSquareRoot ||
                      cell.kind == FactorizationKind::kAof;
  if (banded) row.p = std::min(grid.p.value_or(row.b), cell.n);

  absl::StatusOr<Factorization> f;
  std::string solver_note;
  if (cell.kind == FactorizationKind::kAof) {
    std::optional<AofSolution> solution;
    AofOptions options = grid.aof;
    options.progress = nullptr;
    f = MakeAofFactorization(*spec, *row.p, options, &solution);
    if (f.ok()) {
      solver_note = absl::StrCat(
          "converged=", solution->converged ? "true" : "false",
          " iterations=", solution->iterations,
          " floor_applied=", solution->floor_applied ? "true" : "false");
    }
  } else {
    f = MakeFactorization(cell.kind, *spec,
                          banded ? row.p : std::optional<int>());
  }
  if (!f.ok()) {
    row.note = std::string(f.status().message());
    return row;
  }
  absl::StatusOr<ErrorReport> report =
      ExpectedError(*f, *schema, grid.enumeration);
  if (!report.ok()) {
    row.note = std::string(report.status().message());
    return row;
  }
  row.sens = report->sens;
  row.b_frobenius = report->b_frobenius;
  row.expected_error = report->expected_error;
  row.exact_sens = report->exact_sens;
  row.note = solver_note;
  if (!report->exact_sens) {
    absl::StrAppend(&row.note, row.note.empty() ? "" : " ",
                    "sens_method=", std::string(MethodName(report->method)));
  }
  return row;
}

}  // namespace

absl::StatusOr<ErrorReport> ExpectedError(
    const Factorization& f, const ParticipationSchema& schema,
    const EnumerationOptions& enumeration) {
  const int n = f.spec.n;
  if (schema.n != n || Order(f.b) != n || Order(f.c) != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: factorization order ", n,
                     ", schema n ", schema.n));
  }
  if (absl::Status s = schema.Validate(); !s.ok()) return s;
  absl::StatusOr<SensitivityValue> sens =
      ComputeSensitivity(f.c, schema, enumeration);
  if (!sens.ok()) return sens.status();

  ErrorReport report;
  report.spec = f.spec;
  report.schema = schema;
  report.kind = f.kind;
  report.sens = sens->value;
  report.b_frobenius = std::sqrt(FrobeniusNormSq(f.b));
  report.expected_error =
      report.sens * report.b_frobenius / std::sqrt(static_cast<double>(n));
  report.exact_sens = sens->exact;
  report.method = sens->method;
  report.bounds = AllBounds(f.spec, schema);
  return report;
}

double LowerBound(const WorkloadSpec& spec, const ParticipationSchema& schema) {
  const double root_k = std::sqrt(static_cast<double>(schema.k));
  if (spec.alpha < 1.0) return root_k;
  return root_k * std::log(spec.n + 1.0) / std::numbers::pi;
}

double SqrtErrorUpperBound(const WorkloadSpec& spec) {
  if (spec.alpha < 1.0) {
    const double gap = spec.alpha - spec.beta;
    return std::log(1.0 / (1.0 - spec.alpha * spec.alpha)) / (gap * gap);
  }
  const double damp = 1.0 - spec.beta;
  return (1.0 + std::log(static_cast<double>(spec.n))) / (damp * damp);
}

double SqrtErrorLowerCompanion(const WorkloadSpec& spec) {
  if (spec.alpha < 1.0) return 1.0;
  return std::max(1.0, (std::log(spec.n + 1.0) - 1.0) / 4.0);
}

BaselineAsymptotics ComputeBaselineAsymptotics(
    const WorkloadSpec& spec, const ParticipationSchema& schema) {
  BaselineAsymptotics out;
  const double n = spec.n;
  const double k = schema.k;
  const double a = spec.alpha;
  const double b = spec.beta;
  if (schema.k > 1) {
    out.lower_bounds_only = true;
    if (a < 1.0) {
      out.input_perturbation = std::sqrt(k);
      out.output_perturbation = std::sqrt(k);
    } else {
      out.input_perturbation = std::sqrt(n * k / 2.0);
      out.output_perturbation = k * std::sqrt(n) / std::sqrt(3.0);
    }
    return out;
  }
  if (a < 1.0) {
    const double v = std::sqrt((1.0 + a * b) /
                               ((1.0 - a * b) * (1.0 - a * a) * (1.0 - b * b)));
    out.input_perturbation = v;
    out.output_perturbation = v;
  } else {
    out.input_perturbation = std::sqrt(n) / (std::numbers::sqrt2 * (1.0 - b));
    out.output_perturbation = std::sqrt(n) / (1.0 - b);
  }
  return out;
}

std::vector<ErrorRow> ErrorTable(const ErrorGrid& grid) {
  std::vector<Cell> cells;
  for (const auto& [alpha, beta] : grid.alpha_beta) {
    for (const ParticipationRule& rule : grid.rules) {
      for (int n : grid.ns) {
        for (size_t r = 0; r < grid.kinds.size(); ++r) {
          cells.push_back(
              {n, alpha, beta, rule, static_cast<int>(r), grid.kinds[r]});
        }
      }
    }
  }
  std::vector<ErrorRow> rows(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < cells.size(); i = next++) {
      rows[i] = EvaluateCell(cells[i], grid);
    }
  };
  const int threads =
      std::clamp(grid.threads, 1, std::max<int>(1, cells.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::vector<size_t> order(cells.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    if (cells[x].n != cells[y].n) return cells[x].n < cells[y].n;
    return cells[x].kind_rank < cells[y].kind_rank;
  });
  std::vector<ErrorRow> sorted;
  sorted.reserve(rows.size());
  for (size_t i : order) sorted.push_back(std::move(rows[i]));
  return sorted;
}

}  // namespace dpmf
