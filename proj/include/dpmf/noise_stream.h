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

// Correlated noise for the factorization mechanism, one step at a time.
//
// Row i of C^{-1} Z is produced by forward substitution from the fresh
// Gaussian row z_i and the previous p - 1 output rows, so a p-banded C needs
// O(p d) memory regardless of n. Gaussian variates come from std::mt19937_64
// seeded with `seed` and are consumed row-major over (step, coordinate);
// SampleNoiseMatrix draws the same variates in the same order.

#ifndef DPMF_NOISE_STREAM_H_
#define DPMF_NOISE_STREAM_H_

#include <cstdint>
#include <random>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "dpmf/factorization.h"
#include "dpmf/sensitivity.h"
#include "dpmf/toeplitz.h"

namespace dpmf {

class NoiseStream {
 public:
  // Entries of Z have standard deviation s = sigma * sens; rows are returned
  // scaled by zeta. Fails if C is singular, d < 1, or sigma, sens or zeta is
  // negative.
  static absl::StatusOr<NoiseStream> Create(const ToeplitzColumn& c, int d,
                                            double sigma, double sens,
                                            uint64_t seed, double zeta = 1.0);

  // zeta * [C^{-1} Z]_i for the current step i. Fails with OutOfRange once
  // all n rows were produced.
  absl::StatusOr<Eigen::VectorXd> NextRow();

  int n() const { return n_; }
  int d() const { return d_; }
  int step() const { return step_; }
  // Effective bandwidth p of C.
  int bandwidth() const { return p_; }
  int buffered_rows() const { return buffered_; }
  // Largest buffered_rows() observed so far; never exceeds p - 1.
  int max_buffered_rows() const { return max_buffered_; }

 private:
  NoiseStream(std::vector<double> c, int n, int p, int d, double scale,
              double zeta, uint64_t seed);

  std::vector<double> c_;  // c_0, ..., c_{p-1}
  int n_;
  int p_;
  int d_;
  double scale_;
  double zeta_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  // The last p - 1 rows of C^{-1} Z before the zeta factor; y_i lives in
  // row i % (p - 1).
  RowMatrix ring_;
  int buffered_ = 0;
  int max_buffered_ = 0;
  int step_ = 0;
};

// The n x d matrix Z with N(0, s^2) entries, drawn exactly as NoiseStream
// draws them.
RowMatrix SampleNoiseMatrix(int n, int d, double s, uint64_t seed);

struct MonteCarloReport {
  // sqrt(mean ||B Z||_F^2 / (n d)) / sigma, an estimate of E(B, C).
  double estimate = 0.0;
  double standard_error = 0.0;
  double analytic = 0.0;  // sens * ||B||_F / sqrt(n)
  double sens = 0.0;
  int trials = 0;
  // Per-coordinate mean and standard error of the mechanism deviation
  // Theta^MF - Theta = B Z over trials (n x d).
  Eigen::MatrixXd deviation_mean;
  Eigen::MatrixXd deviation_standard_error;
};

// Samples Z with s = sigma * sens(C) per trial and measures the error of
// B Z. Trial seeds are split from `seed` up front, so the result does not
// depend on `threads`. sigma == 0 yields an all-zero report apart from the
// analytic value.
absl::StatusOr<MonteCarloReport> SimulateMechanism(
    const Factorization& f, const ParticipationSchema& schema, int d,
    double sigma, int trials, uint64_t seed, int threads = 1);

}  // namespace dpmf

#endif  // DPMF_NOISE_STREAM_H_
