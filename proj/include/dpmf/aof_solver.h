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

// Approximately optimal factorization (AOF).
//
// Minimises trace(A^T A S^{-1}) over positive definite S with unit diagonal
// and S_ij = 0 for |i - j| >= b, then factors S = C^T C with C lower
// triangular and sets B = A C^{-1}. The solver is projected gradient descent:
// the gradient -S^{-1} G S^{-1} is restricted to the free (off-diagonal,
// in-band) entries, and an adaptive step size is halved until the trial
// point is positive definite and lowers the objective, then doubled after
// every accepted step.
//
// Dense O(n^3) linear algebra throughout; intended for n up to a few
// thousand.

#ifndef DPMF_AOF_SOLVER_H_
#define DPMF_AOF_SOLVER_H_

#include <functional>
#include <optional>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpmf/factorization.h"
#include "dpmf/toeplitz.h"
#include "dpmf/workload.h"

namespace dpmf {

struct AofProblem {
  WorkloadSpec spec;
  int band = 1;          // S_ij = 0 for |i - j| >= band
  Eigen::MatrixXd gram;  // A^T A

  // Builds the Gram matrix of A_{alpha,beta}. Fails unless
  // 1 <= band <= spec.n.
  static absl::StatusOr<AofProblem> Create(const WorkloadSpec& spec, int band);
};

struct AofOptions {
  int max_iters = 5000;
  // Stop once the objective improved by less than tol (relative) over the
  // last `window` accepted steps.
  double tol = 1e-8;
  int window = 5;
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  double growth_factor = 2.0;
  int max_backtracks = 60;
  // Starting point; identity when unset. Must be feasible.
  std::optional<Eigen::MatrixXd> initial;
  // Called after every accepted step with (iteration, objective).
  std::function<void(int, double)> progress;
};

enum class AofTermination {
  kConverged,
  kMaxIterations,
  kLineSearchFailed,  // no decreasing positive definite step was found
};

struct AofSolution {
  Eigen::MatrixXd s;  // after the eigenvalue floor
  DenseLowerTriangular c;
  double objective_trace = 0.0;  // trace(G S^{-1}) before the floor
  int iterations = 0;            // accepted steps
  bool converged = false;
  AofTermination termination = AofTermination::kConverged;
  bool floor_applied = false;
};

// trace(G S^{-1}) through a Cholesky solve. Fails if S is not positive
// definite.
absl::StatusOr<double> AofObjective(const Eigen::MatrixXd& s,
                                    const Eigen::MatrixXd& gram);

// -S^{-1} G S^{-1}, symmetrised. Fails if S is not positive definite.
absl::StatusOr<Eigen::MatrixXd> AofGradient(const Eigen::MatrixXd& s,
                                            const Eigen::MatrixXd& gram);

struct FlooredFactor {
  Eigen::MatrixXd s;  // S with eigenvalues clamped from below
  DenseLowerTriangular c;
  bool floor_applied = false;
};

// Raises every eigenvalue of the symmetric matrix `s` below `floor` to
// `floor` and factors the result as C^T C with C lower triangular. S is
// returned untouched (bit for bit) when no eigenvalue needed clamping.
absl::StatusOr<FlooredFactor> ExtractCWithFloor(const Eigen::MatrixXd& s,
                                                double floor);

// Default eigenvalue floor sqrt(1 / n).
double DefaultEigenvalueFloor(int n);

absl::StatusOr<AofSolution> SolveAof(const AofProblem& problem,
                                     const AofOptions& options = {});

// Solves the problem for (spec, band) and wraps C and B = A C^{-1} as a
// kAof factorization. `solution`, when non-null, receives the solver output.
absl::StatusOr<Factorization> MakeAofFactorization(
    const WorkloadSpec& spec, int band, const AofOptions& options = {},
    std::optional<AofSolution>* solution = nullptr);

}  // namespace dpmf

#endif  // DPMF_AOF_SOLVER_H_
