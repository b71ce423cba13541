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

#include "dpmf/aof_solver.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

#include "Eigen/Cholesky"
#include "Eigen/Eigenvalues"
#include "absl/strings/str_cat.h"

namespace dpmf {
namespace {

bool IsFree(int i, int j, int band) {
  return i != j && std::abs(i - j) < band;
}

absl::Status CheckFeasible(const Eigen::MatrixXd& s, int band) {
  const int n = static_cast<int>(s.rows());
  if (s.cols() != n) return absl::InvalidArgumentError("S must be square");
  for (int i = 0; i < n; ++i) {
    if (s(i, i) != 1.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("S(", i, ", ", i, ") = ", s(i, i), ", expected 1"));
    }
    for (int j = 0; j < n; ++j) {
      if (i != j && !IsFree(i, j, band) && s(i, j) != 0.0) {
        return absl::InvalidArgumentError(
            absl::StrCat("S(", i, ", ", j, ") lies outside the band"));
      }
      if (s(i, j) != s(j, i)) {
        return absl::InvalidArgumentError("S must be symmetric");
      }
    }
  }
  return absl::OkStatus();
}

double TraceOfSolve(const Eigen::LLT<Eigen::MatrixXd>& llt,
                    const Eigen::MatrixXd& gram) {
  return llt.solve(gram).trace();
}

}  // namespace

absl::StatusOr<AofProblem> AofProblem::Create(const WorkloadSpec& spec,
                                              int band) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  if (band < 1 || band > spec.n) {
    return absl::InvalidArgumentError(
        absl::StrCat("band ", band, " outside [1, ", spec.n, "]"));
  }
  const Eigen::MatrixXd a = ToDense(WorkloadColumn(spec)).matrix();
  return AofProblem{spec, band, a.transpose() * a};
}

absl::StatusOr<double> AofObjective(const Eigen::MatrixXd& s,
                                    const Eigen::MatrixXd& gram) {
  if (s.rows() != s.cols() || s.rows() != gram.rows() ||
      gram.rows() != gram.cols()) {
    return absl::InvalidArgumentError("S and G must be square of equal order");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    return absl::InvalidArgumentError("S is not positive definite");
  }
  return TraceOfSolve(llt, gram);
}

absl::StatusOr<Eigen::MatrixXd> AofGradient(const Eigen::MatrixXd& s,
                                            const Eigen::MatrixXd& gram) {
  if (s.rows() != s.cols() || s.rows() != gram.rows() ||
      gram.rows() != gram.cols()) {
    return absl::InvalidArgumentError("S and G must be square of equal order");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    return absl::InvalidArgumentError("S is not positive definite");
  }
  const Eigen::MatrixXd s_inv =
      llt.solve(Eigen::MatrixXd::Identity(s.rows(), s.cols()));
  Eigen::MatrixXd grad = -(s_inv * gram * s_inv);
  return Eigen::MatrixXd(0.5 * (grad + grad.transpose()));
}

double DefaultEigenvalueFloor(int n) { return std::sqrt(1.0 / n); }

absl::StatusOr<FlooredFactor> ExtractCWithFloor(const Eigen::MatrixXd& s,
                                                double floor) {
  if (s.rows() == 0 || s.rows() != s.cols()) {
    return absl::InvalidArgumentError("S must be square and non-empty");
  }
  if (!(floor > 0.0)) {
    return absl::InvalidArgumentError("eigenvalue floor must be positive");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  if (eig.info() != Eigen::Success) {
    return absl::InternalError("eigendecomposition of S failed");
  }
  Eigen::MatrixXd floored = s;
  bool floor_applied = false;
  if (eig.eigenvalues().minCoeff() < floor) {
    floor_applied = true;
    const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(floor);
    const Eigen::MatrixXd& v = eig.eigenvectors();
    floored = v * clamped.asDiagonal() * v.transpose();
    floored = 0.5 * (floored + floored.transpose()).eval();
  }
  // S = C^T C with C lower triangular is a Cholesky factorization of the
  // index-reversed matrix: J S J = L L^T gives C = J L^T J.
  Eigen::LLT<Eigen::MatrixXd> llt(floored.reverse());
  if (llt.info() != Eigen::Success) {
    return absl::InternalError("Cholesky factorization of floored S failed");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd c = l.transpose().reverse();
  absl::StatusOr<DenseLowerTriangular> lower =
      DenseLowerTriangular::FromLowerPart(c);
  if (!lower.ok()) return lower.status();
  return FlooredFactor{std::move(floored), *std::move(lower), floor_applied};
}

absl::StatusOr<AofSolution> SolveAof(const AofProblem& problem,
                                     const AofOptions& options) {
  const int n = problem.spec.n;
  const Eigen::MatrixXd& gram = problem.gram;
  if (gram.rows() != n || gram.cols() != n) {
    return absl::InvalidArgumentError("Gram matrix order does not match n");
  }
  Eigen::MatrixXd s = options.initial.value_or(Eigen::MatrixXd::Identity(n, n));
  if (absl::Status st = CheckFeasible(s, problem.band); !st.ok()) return st;

  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    return absl::InvalidArgumentError("initial S is not positive definite");
  }
  double objective = TraceOfSolve(llt, gram);
  std::deque<double> history = {objective};
  double step = options.initial_step;
  int accepted = 0;
  AofTermination termination = AofTermination::kMaxIterations;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);

  for (int iter = 0; iter < options.max_iters; ++iter) {
    const Eigen::MatrixXd s_inv = llt.solve(identity);
    Eigen::MatrixXd direction = -(s_inv * gram * s_inv);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        direction(i, j) = IsFree(i, j, problem.band)
                              ? 0.5 * (direction(i, j) + direction(j, i))
                              : 0.0;
      }
    }
    direction = 0.5 * (direction + direction.transpose()).eval();
    if (direction.squaredNorm() == 0.0) {
      termination = AofTermination::kConverged;
      break;
    }

    bool found = false;
    Eigen::MatrixXd trial;
    double trial_objective = objective;
    for (int attempt = 0; attempt <= options.max_backtracks; ++attempt) {
      trial = s - step * direction;
      Eigen::LLT<Eigen::MatrixXd> trial_llt(trial);
      if (trial_llt.info() == Eigen::Success) {
        trial_objective = TraceOfSolve(trial_llt, gram);
        if (trial_objective < objective) {
          llt = std::move(trial_llt);
          found = true;
          break;
        }
      }
      step *= options.backtrack_factor;
    }
    if (!found) {
      termination = AofTermination::kLineSearchFailed;
      break;
    }

    s = std::move(trial);
    objective = trial_objective;
    ++accepted;
    step *= options.growth_factor;
    history.push_back(objective);
    if (static_cast<int>(history.size()) > options.window + 1) {
      history.pop_front();
    }
    if (options.progress) options.progress(accepted, objective);
    if (static_cast<int>(history.size()) == options.window + 1 &&
        (history.front() - objective) / std::abs(objective) < options.tol) {
      termination = AofTermination::kConverged;
      break;
    }
  }

  absl::StatusOr<FlooredFactor> factor =
      ExtractCWithFloor(s, DefaultEigenvalueFloor(n));
  if (!factor.ok()) return factor.status();
  return AofSolution{std::move(factor->s),
                     std::move(factor->c),
                     objective,
                     accepted,
                     termination == AofTermination::kConverged,
                     termination,
                     factor->floor_applied};
}

absl::StatusOr<Factorization> MakeAofFactorization(const WorkloadSpec& spec,
                                                   int band,
                                                   const AofOptions& options,
                                                   std::optional<AofSolution>* solution) {
  absl::StatusOr<AofProblem> problem = AofProblem::Create(spec, band);
  if (!problem.ok()) return problem.status();
  absl::StatusOr<AofSolution> solved = SolveAof(*problem, options);
  if (!solved.ok()) return solved.status();

  const Eigen::MatrixXd a = ToDense(WorkloadColumn(spec)).matrix();
  const Eigen::MatrixXd c = solved->c.matrix();
  const Eigen::MatrixXd b =
      c.triangularView<Eigen::Lower>().solve<Eigen::OnTheRight>(a);
  absl::StatusOr<DenseLowerTriangular> b_lower =
      DenseLowerTriangular::FromLowerPart(b);
  if (!b_lower.ok()) return b_lower.status();

  Factorization f{FactorizationKind::kAof, spec, band, *std::move(b_lower),
                  solved->c};
  if (solution != nullptr) solution->emplace(*std::move(solved));
  return f;
}

}  // namespace dpmf
