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

#include "cli.h"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "dpmf/aof_solver.h"
#include "dpmf/error_analysis.h"
#include "dpmf/factorization.h"
#include "dpmf/noise_stream.h"
#include "dpmf/report_io.h"
#include "dpmf/sensitivity.h"
#include "dpmf/toeplitz.h"
#include "dpmf/workload.h"

namespace dpmf {
namespace {

constexpr int kProgressEvery = 100;

struct CommonOptions {
  std::string format = "csv";
  std::string output;
  int threads = 1;
};

struct ProblemOptions {
  int n = 0;
  double alpha = 1.0;
  double beta = 0.0;
  std::optional<int> b;
  std::string k = "max";
  std::optional<int> p;
};

struct SolverOptions {
  int max_iters = AofOptions().max_iters;
  double tol = AofOptions().tol;
};

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kResourceExhausted:
      return kExitInvalidArguments;
    default:
      return kExitNumericalFailure;
  }
}

void AddCommon(CLI::App* cmd, CommonOptions* common) {
  cmd->add_option("--format", common->format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output", common->output, "Output file (default stdout)");
  cmd->add_option("--threads", common->threads, "Worker threads")
      ->check(CLI::PositiveNumber);
}

void AddSpec(CLI::App* cmd, ProblemOptions* problem) {
  cmd->add_option("--n", problem->n, "Number of steps")->required();
  cmd->add_option("--alpha", problem->alpha, "Weight decay factor in (0, 1]");
  cmd->add_option("--beta", problem->beta, "Momentum in [0, alpha)");
}

void AddParticipation(CLI::App* cmd, ProblemOptions* problem) {
  cmd->add_option("--b", problem->b, "Minimum separation (default n)");
  cmd->add_option("--k", problem->k,
                  "Maximum participations, or 'max' for ceil(n / b)");
  cmd->add_option("--p", problem->p, "Bandwidth for bsr and aof (default b)");
}

void AddSolver(CLI::App* cmd, SolverOptions* solver) {
  cmd->add_option("--max-iters", solver->max_iters, "AOF iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", solver->tol, "AOF relative tolerance")
      ->check(CLI::PositiveNumber);
}

absl::StatusOr<std::optional<int>> ParseK(const std::string& text) {
  if (text == "max") return std::optional<int>();
  int k = 0;
  if (!absl::SimpleAtoi(text, &k)) {
    return absl::InvalidArgumentError(
        absl::StrCat("--k expects an integer or 'max', got '", text, "'"));
  }
  return std::optional<int>(k);
}

// Items are numbers or ranges first:last:step (inclusive).
absl::StatusOr<std::vector<double>> ParseList(const std::string& text,
                                              const std::string& flag) {
  std::vector<double> values;
  for (absl::string_view item : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    item = absl::StripAsciiWhitespace(item);
    std::vector<std::string> parts = absl::StrSplit(item, ':');
    std::vector<double> nums;
    for (const std::string& part : parts) {
      double v = 0.0;
      if (!absl::SimpleAtod(part, &v) || !std::isfinite(v)) {
        return absl::InvalidArgumentError(absl::StrCat(
            flag, ": cannot parse '", std::string(item), "'"));
      }
      nums.push_back(v);
    }
    if (nums.size() == 1) {
      values.push_back(nums[0]);
    } else if (nums.size() == 3 && nums[2] > 0 && nums[0] <= nums[1]) {
      const int count =
          static_cast<int>(std::floor((nums[1] - nums[0]) / nums[2] + 1e-9));
      for (int i = 0; i <= count; ++i) values.push_back(nums[0] + i * nums[2]);
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          flag, ": ranges are first:last:step with step > 0, got '",
          std::string(item), "'"));
    }
  }
  return values;
}

absl::StatusOr<std::vector<int>> ParseIntList(const std::string& text,
                                              const std::string& flag) {
  absl::StatusOr<std::vector<double>> values = ParseList(text, flag);
  if (!values.ok()) return values.status();
  std::vector<int> out;
  for (double v : *values) {
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      return absl::InvalidArgumentError(
          absl::StrCat(flag, ": expected integers, got ", v));
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

absl::StatusOr<std::vector<FactorizationKind>> ParseKinds(
    const std::string& text) {
  std::vector<FactorizationKind> kinds;
  for (absl::string_view item : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    absl::StatusOr<FactorizationKind> kind =
        ParseKind(std::string(absl::StripAsciiWhitespace(item)));
    if (!kind.ok()) return kind.status();
    kinds.push_back(*kind);
  }
  return kinds;
}

struct Problem {
  WorkloadSpec spec;
  ParticipationSchema schema;
  int p = 1;
};

absl::StatusOr<Problem> ResolveProblem(const ProblemOptions& opts) {
  absl::StatusOr<WorkloadSpec> spec =
      WorkloadSpec::Create(opts.n, opts.alpha, opts.beta);
  if (!spec.ok()) return spec.status();
  const int b = opts.b.value_or(opts.n);
  if (b < 1 || b > opts.n) {
    return absl::InvalidArgumentError(
        absl::StrCat("--b must lie in [1, n], got ", b));
  }
  absl::StatusOr<std::optional<int>> k = ParseK(opts.k);
  if (!k.ok()) return k.status();
  absl::StatusOr<ParticipationSchema> schema = ParticipationSchema::Create(
      opts.n, b, k->value_or(ParticipationSchema::MaxParticipations(opts.n, b)));
  if (!schema.ok()) return schema.status();
  const int p = opts.p.value_or(b);
  if (p < 1 || p > opts.n) {
    return absl::InvalidArgumentError(
        absl::StrCat("--p must lie in [1, n], got ", p));
  }
  return Problem{*spec, *schema, p};
}

AofOptions MakeAofOptions(const SolverOptions& solver, std::ostream* err) {
  AofOptions options;
  options.max_iters = solver.max_iters;
  options.tol = solver.tol;
  if (err != nullptr) {
    options.progress = [err](int iteration, double objective) {
      if (iteration % kProgressEvery == 0) {
        *err << "aof: iteration " << iteration << " objective "
             << FormatDouble(objective) << '\n';
      }
    };
  }
  return options;
}

absl::StatusOr<Factorization> Build(FactorizationKind kind,
                                    const Problem& problem,
                                    const SolverOptions& solver,
                                    std::ostream* err) {
  switch (kind) {
    case FactorizationKind::kAof:
      return MakeAofFactorization(problem.spec, problem.p,
                                  MakeAofOptions(solver, err));
    case FactorizationKind::kBandedSquareRoot:
      return MakeFactorization(kind, problem.spec, problem.p);
    default:
      return MakeFactorization(kind, problem.spec);
  }
}

absl::Status Emit(const Table& table, const CommonOptions& common,
                  std::ostream& out) {
  std::ostringstream text;
  if (common.format == "json") {
    WriteJson(table, text);
  } else {
    WriteCsv(table, text);
  }
  if (common.output.empty()) {
    out << text.str();
    out.flush();
    return absl::OkStatus();
  }
  std::ofstream file(common.output, std::ios::binary);
  if (!file) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot open '", common.output, "' for writing"));
  }
  file << text.str();
  if (!file) {
    return absl::InternalError(
        absl::StrCat("failed writing '", common.output, "'"));
  }
  return absl::OkStatus();
}

absl::StatusOr<Table> RunCoeffs(const ProblemOptions& opts) {
  absl::StatusOr<WorkloadSpec> spec =
      WorkloadSpec::Create(opts.n, opts.alpha, opts.beta);
  if (!spec.ok()) return spec.status();
  const int p = opts.p.value_or(opts.n);
  absl::StatusOr<ToeplitzColumn> banded = BsrC(*spec, p);
  if (!banded.ok()) return banded.status();
  absl::StatusOr<ToeplitzColumn> b = BsrB(*spec, p);
  if (!b.ok()) return b.status();
  const ToeplitzColumn a = WorkloadColumn(*spec);
  const RootCoefficients root = SqrtCoefficients(*spec);

  Table table;
  table.columns = {"j", "a", "r", "c", "c_banded", "b"};
  for (int j = 0; j < opts.n; ++j) {
    table.rows.push_back({static_cast<int64_t>(j), a[j], root.r[j], root.c[j],
                          (*banded)[j], (*b)[j]});
  }
  return table;
}

absl::StatusOr<SensitivityValue> SensitivityBy(
    const std::string& method, const MatrixHandle& c,
    const ParticipationSchema& schema, const EnumerationOptions& enumeration) {
  if (method == "auto") return ComputeSensitivity(c, schema, enumeration);
  if (method == "closed-form") {
    const ToeplitzColumn* column = std::get_if<ToeplitzColumn>(&c);
    if (column == nullptr) {
      return absl::FailedPreconditionError(
          "the closed form needs a Toeplitz strategy matrix");
    }
    absl::StatusOr<double> v = SensToeplitzClosedForm(*column, schema);
    if (!v.ok()) return v.status();
    return SensitivityValue{*v, true, SensitivityMethod::kClosedForm};
  }
  if (method == "max-column") {
    return SensitivityValue{MaxColumnNorm(c), schema.k == 1,
                            SensitivityMethod::kSingleParticipation};
  }
  if (method == "banded-dp") {
    absl::StatusOr<double> v = SensBandedDp(c, schema);
    if (!v.ok()) return v.status();
    return SensitivityValue{*v, true, SensitivityMethod::kBandedDp};
  }
  if (method == "enumeration") {
    return SensUpperBoundGeneric(Densify(c), schema, enumeration);
  }
  return SensRelaxedBound(Densify(c), schema);
}

absl::StatusOr<Table> RunSensitivity(const ProblemOptions& opts,
                                     const std::string& kind_name,
                                     const std::string& method, int max_enum,
                                     const SolverOptions& solver,
                                     std::ostream& err) {
  absl::StatusOr<FactorizationKind> kind = ParseKind(kind_name);
  if (!kind.ok()) return kind.status();
  absl::StatusOr<Problem> problem = ResolveProblem(opts);
  if (!problem.ok()) return problem.status();
  absl::StatusOr<Factorization> f = Build(*kind, *problem, solver, &err);
  if (!f.ok()) return f.status();
  EnumerationOptions enumeration;
  enumeration.max_n = max_enum;

  Table table;
  table.columns = {"kind", "n", "b", "k", "p", "method", "sens", "exact",
                   "note"};
  const bool banded = *kind == FactorizationKind::kBandedSquareRoot ||
                      *kind == FactorizationKind::kAof;
  const Cell p = banded ? Cell(static_cast<int64_t>(problem->p))
                        : Cell(std::monostate{});
  auto add_row = [&](const std::string& requested,
                     const absl::StatusOr<SensitivityValue>& v) {
    const ParticipationSchema& s = problem->schema;
    if (v.ok()) {
      table.rows.push_back({kind_name, static_cast<int64_t>(s.n),
                            static_cast<int64_t>(s.b),
                            static_cast<int64_t>(s.k), p,
                            std::string(MethodName(v->method)), v->value,
                            v->exact, std::string()});
    } else {
      table.rows.push_back({kind_name, static_cast<int64_t>(s.n),
                            static_cast<int64_t>(s.b),
                            static_cast<int64_t>(s.k), p, requested,
                            std::monostate{}, std::monostate{},
                            std::string(v.status().message())});
    }
  };

  if (method == "all") {
    for (const char* m : {"closed-form", "max-column", "banded-dp",
                          "enumeration", "relaxed-bound"}) {
      add_row(m, SensitivityBy(m, f->c, problem->schema, enumeration));
    }
    return table;
  }
  absl::StatusOr<SensitivityValue> v =
      SensitivityBy(method, f->c, problem->schema, enumeration);
  if (!v.ok()) return v.status();
  add_row(method, v);
  return table;
}

struct TableOptions {
  std::string ns;
  std::string alphas = "1";
  std::string betas = "0";
  std::string bs;
  std::string k = "max";
  std::optional<int> p;
  std::string kinds = "sqrt,bsr,id-c,id-b";
};

absl::StatusOr<Table> RunErrorTable(const TableOptions& opts,
                                    const SolverOptions& solver, int threads) {
  ErrorGrid grid;
  absl::StatusOr<std::vector<int>> ns = ParseIntList(opts.ns, "--n");
  if (!ns.ok()) return ns.status();
  grid.ns = *ns;
  absl::StatusOr<std::vector<double>> alphas = ParseList(opts.alphas, "--alpha");
  if (!alphas.ok()) return alphas.status();
  absl::StatusOr<std::vector<double>> betas = ParseList(opts.betas, "--beta");
  if (!betas.ok()) return betas.status();
  for (double a : *alphas) {
    for (double b : *betas) grid.alpha_beta.emplace_back(a, b);
  }
  absl::StatusOr<std::optional<int>> k = ParseK(opts.k);
  if (!k.ok()) return k.status();
  grid.rules.clear();
  if (opts.bs.empty()) {
    grid.rules.push_back({std::nullopt, *k});
  } else {
    absl::StatusOr<std::vector<int>> bs = ParseIntList(opts.bs, "--b");
    if (!bs.ok()) return bs.status();
    for (int b : *bs) grid.rules.push_back({b, *k});
  }
  absl::StatusOr<std::vector<FactorizationKind>> kinds = ParseKinds(opts.kinds);
  if (!kinds.ok()) return kinds.status();
  grid.kinds = *kinds;
  grid.p = opts.p;
  grid.aof = MakeAofOptions(solver, nullptr);
  grid.threads = threads;
  return ErrorRowsToTable(ErrorTable(grid));
}

absl::Status DumpMatrix(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot open '", path, "' for writing"));
  }
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j > 0) file << ',';
      file << FormatDouble(m(i, j));
    }
    file << '\n';
  }
  return file ? absl::OkStatus()
              : absl::InternalError(absl::StrCat("failed writing '", path, "'"));
}

absl::StatusOr<Table> RunAof(const ProblemOptions& opts,
                             const SolverOptions& solver, bool allow_large,
                             const std::string& dump_c, std::ostream& err) {
  if (opts.n > kAofDefaultMaxN && !allow_large) {
    return absl::InvalidArgumentError(absl::StrCat(
        "aof with n = ", opts.n, " exceeds the default limit of ",
        kAofDefaultMaxN, "; pass --allow-large to run it anyway"));
  }
  absl::StatusOr<Problem> problem = ResolveProblem(opts);
  if (!problem.ok()) return problem.status();
  std::optional<AofSolution> solution;
  absl::StatusOr<Factorization> f = MakeAofFactorization(
      problem->spec, problem->p, MakeAofOptions(solver, &err), &solution);
  if (!f.ok()) return f.status();
  absl::StatusOr<ErrorReport> report = ExpectedError(*f, problem->schema);
  if (!report.ok()) return report.status();

  std::vector<Cell> baselines;
  for (FactorizationKind kind : {FactorizationKind::kInputPerturbation,
                                 FactorizationKind::kOutputPerturbation}) {
    absl::StatusOr<Factorization> base = MakeFactorization(kind, problem->spec);
    if (!base.ok()) return base.status();
    absl::StatusOr<ErrorReport> r = ExpectedError(*base, problem->schema);
    if (!r.ok()) return r.status();
    baselines.push_back(r->expected_error);
  }
  if (!dump_c.empty()) {
    if (absl::Status s = DumpMatrix(solution->c.matrix(), dump_c); !s.ok()) {
      return s;
    }
  }

  const char* termination = "converged";
  if (solution->termination == AofTermination::kMaxIterations) {
    termination = "max-iterations";
  } else if (solution->termination == AofTermination::kLineSearchFailed) {
    termination = "line-search-failed";
  }
  Table table;
  table.columns = {"n",          "alpha",         "beta",
                   "b",          "k",             "p",
                   "iterations", "converged",     "termination",
                   "floor_applied", "objective",  "sens",
                   "b_fro",      "expected_error", "exact_sens",
                   "error_id_c", "error_id_b"};
  table.rows.push_back(
      {static_cast<int64_t>(problem->spec.n), problem->spec.alpha,
       problem->spec.beta, static_cast<int64_t>(problem->schema.b),
       static_cast<int64_t>(problem->schema.k),
       static_cast<int64_t>(problem->p),
       static_cast<int64_t>(solution->iterations), solution->converged,
       std::string(termination), solution->floor_applied,
       solution->objective_trace, report->sens, report->b_frobenius,
       report->expected_error, report->exact_sens, baselines[0],
       baselines[1]});
  return table;
}

struct SimOptions {
  std::string kind = "bsr";
  int d = 1;
  double sigma = 1.0;
  int trials = 1000;
  uint64_t seed = 0;
};

absl::StatusOr<Table> RunNoiseSim(const ProblemOptions& opts,
                                  const SimOptions& sim,
                                  const SolverOptions& solver, int threads,
                                  std::ostream& err) {
  absl::StatusOr<FactorizationKind> kind = ParseKind(sim.kind);
  if (!kind.ok()) return kind.status();
  absl::StatusOr<Problem> problem = ResolveProblem(opts);
  if (!problem.ok()) return problem.status();
  absl::StatusOr<Factorization> f = Build(*kind, *problem, solver, &err);
  if (!f.ok()) return f.status();
  absl::StatusOr<MonteCarloReport> report = SimulateMechanism(
      *f, problem->schema, sim.d, sim.sigma, sim.trials, sim.seed, threads);
  if (!report.ok()) return report.status();

  Table table;
  table.columns = {"kind",  "n",        "b",
                   "k",     "d",        "sigma",
                   "trials", "seed",    "sens",
                   "estimate", "standard_error", "analytic",
                   "z_score"};
  Cell z = std::monostate{};
  if (report->standard_error > 0.0) {
    z = (report->estimate - report->analytic) / report->standard_error;
  }
  table.rows.push_back(
      {sim.kind, static_cast<int64_t>(problem->spec.n),
       static_cast<int64_t>(problem->schema.b),
       static_cast<int64_t>(problem->schema.k), static_cast<int64_t>(sim.d),
       sim.sigma, static_cast<int64_t>(sim.trials), static_cast<int64_t>(sim.seed),
       report->sens, report->estimate, report->standard_error,
       report->analytic, z});
  return table;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Banded square-root and related factorizations for "
               "private SGD with momentum and weight decay",
               "dpmf");
  app.require_subcommand(1);

  CommonOptions common;
  ProblemOptions problem;
  SolverOptions solver;

  CLI::App* coeffs = app.add_subcommand(
      "coeffs", "Workload, square-root and banded coefficients");
  AddSpec(coeffs, &problem);
  coeffs->add_option("--p", problem.p, "Bandwidth (default n)");
  AddCommon(coeffs, &common);

  std::string sens_kind = "sqrt";
  std::string sens_method = "auto";
  int max_enum = kDefaultEnumerationCap;
  CLI::App* sensitivity =
      app.add_subcommand("sensitivity", "Sensitivity of a strategy matrix C");
  AddSpec(sensitivity, &problem);
  AddParticipation(sensitivity, &problem);
  AddSolver(sensitivity, &solver);
  sensitivity->add_option("--kind", sens_kind, "sqrt, bsr, aof, id-c or id-b");
  sensitivity
      ->add_option("--method", sens_method, "Sensitivity method")
      ->check(CLI::IsMember({"auto", "closed-form", "max-column", "banded-dp",
                             "enumeration", "relaxed-bound", "all"}));
  sensitivity->add_option("--max-enum", max_enum,
                          "Largest n for exhaustive enumeration");
  AddCommon(sensitivity, &common);

  TableOptions table_opts;
  CLI::App* error_table =
      app.add_subcommand("error-table", "Expected errors over a grid");
  error_table->add_option("--n", table_opts.ns, "List of n");
  error_table->add_option("--alpha", table_opts.alphas, "List of alpha");
  error_table->add_option("--beta", table_opts.betas, "List of beta");
  error_table->add_option("--b", table_opts.bs,
                          "List of separations (default b = n)");
  error_table->add_option("--k", table_opts.k, "Participations or 'max'");
  error_table->add_option("--p", table_opts.p,
                          "Bandwidth for bsr and aof (default b)");
  error_table->add_option("--kinds", table_opts.kinds,
                          "Factorizations: sqrt, bsr, aof, id-c, id-b");
  AddSolver(error_table, &solver);
  AddCommon(error_table, &common);

  bool allow_large = false;
  std::string dump_c;
  CLI::App* aof =
      app.add_subcommand("aof", "Approximately optimal banded factorization");
  AddSpec(aof, &problem);
  AddParticipation(aof, &problem);
  AddSolver(aof, &solver);
  aof->add_flag("--allow-large", allow_large,
                absl::StrCat("Permit n > ", kAofDefaultMaxN));
  aof->add_option("--dump-c", dump_c, "Write the dense C matrix as CSV");
  AddCommon(aof, &common);

  SimOptions sim;
  CLI::App* noise_sim =
      app.add_subcommand("noise-sim", "Monte-Carlo check of the error");
  AddSpec(noise_sim, &problem);
  AddParticipation(noise_sim, &problem);
  AddSolver(noise_sim, &solver);
  noise_sim->add_option("--kind", sim.kind, "sqrt, bsr, aof, id-c or id-b");
  noise_sim->add_option("--d", sim.d, "Model dimension")
      ->check(CLI::PositiveNumber);
  noise_sim->add_option("--sigma", sim.sigma, "Noise multiplier")
      ->check(CLI::NonNegativeNumber);
  noise_sim->add_option("--trials", sim.trials, "Monte-Carlo trials")
      ->check(CLI::PositiveNumber);
  noise_sim->add_option("--seed", sim.seed, "Master seed")
      ->check(CLI::Range(uint64_t{0}, uint64_t{INT64_MAX}));
  AddCommon(noise_sim, &common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidArguments;
  }

  absl::StatusOr<Table> table;
  if (*coeffs) {
    table = RunCoeffs(problem);
  } else if (*sensitivity) {
    table = RunSensitivity(problem, sens_kind, sens_method, max_enum, solver,
                           err);
  } else if (*error_table) {
    table = RunErrorTable(table_opts, solver, common.threads);
  } else if (*aof) {
    table = RunAof(problem, solver, allow_large, dump_c, err);
  } else {
    table = RunNoiseSim(problem, sim, solver, common.threads, err);
  }
  if (!table.ok()) {
    err << "error: " << table.status().message() << '\n';
    return ExitCodeFor(table.status());
  }
  if (absl::Status s = Emit(*table, common, out); !s.ok()) {
    err << "error: " << s.message() << '\n';
    return ExitCodeFor(s);
  }
  return kExitOk;
}

}  // namespace dpmf
