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

#include "dpmf/noise_stream.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "absl/strings/str_cat.h"

namespace dpmf {
namespace {

// Trials are accumulated in fixed blocks and the blocks reduced in order, so
// the floating-point result is independent of the thread count.
constexpr int kTrialsPerBlock = 32;

struct BlockSums {
  double e_sum = 0.0;
  double e_sq_sum = 0.0;
  Eigen::MatrixXd dev_sum;
  Eigen::MatrixXd dev_sq_sum;
};

std::vector<uint64_t> SplitSeeds(uint64_t seed, int count) {
  std::seed_seq seq{static_cast<uint32_t>(seed),
                    static_cast<uint32_t>(seed >> 32)};
  std::vector<uint32_t> raw(2 * static_cast<size_t>(count));
  seq.generate(raw.begin(), raw.end());
  std::vector<uint64_t> seeds(count);
  for (int t = 0; t < count; ++t) {
    seeds[t] = static_cast<uint64_t>(raw[2 * t]) |
               (static_cast<uint64_t>(raw[2 * t + 1]) << 32);
  }
  return seeds;
}

}  // namespace

NoiseStream::NoiseStream(std::vector<double> c, int n, int p, int d,
                         double scale, double zeta, uint64_t seed)
    : c_(std::move(c)),
      n_(n),
      p_(p),
      d_(d),
      scale_(scale),
      zeta_(zeta),
      rng_(seed),
      ring_(std::max(p - 1, 0), d) {}

absl::StatusOr<NoiseStream> NoiseStream::Create(const ToeplitzColumn& c, int d,
                                                double sigma, double sens,
                                                uint64_t seed, double zeta) {
  if (!c.IsInvertible()) {
    return absl::InvalidArgumentError("singular LTT matrix: c_0 == 0");
  }
  if (d < 1) return absl::InvalidArgumentError("d must be at least 1");
  if (!(sigma >= 0.0) || !(sens >= 0.0) || !(zeta >= 0.0)) {
    return absl::InvalidArgumentError("sigma, sens and zeta must be >= 0");
  }
  const int p = c.EffectiveBandwidth();
  std::vector<double> head(c.coeffs().begin(), c.coeffs().begin() + p);
  return NoiseStream(std::move(head), c.size(), p, d, sigma * sens, zeta, seed);
}

absl::StatusOr<Eigen::VectorXd> NoiseStream::NextRow() {
  if (step_ >= n()) {
    return absl::OutOfRangeError(
        absl::StrCat("noise stream exhausted after ", n(), " rows"));
  }
  Eigen::RowVectorXd y(d_);
  for (int col = 0; col < d_; ++col) y(col) = scale_ * normal_(rng_);
  const int cap = p_ - 1;
  const int hi = std::min(step_, cap);
  for (int j = 1; j <= hi; ++j) y -= c_[j] * ring_.row((step_ - j) % cap);
  y /= c_[0];
  if (cap > 0) {
    ring_.row(step_ % cap) = y;
    buffered_ = std::min(step_ + 1, cap);
    max_buffered_ = std::max(max_buffered_, buffered_);
  }
  ++step_;
  return Eigen::VectorXd(zeta_ * y.transpose());
}

RowMatrix SampleNoiseMatrix(int n, int d, double s, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  RowMatrix z(n, d);
  for (int i = 0; i < n; ++i) {
    for (int col = 0; col < d; ++col) z(i, col) = s * normal(rng);
  }
  return z;
}

absl::StatusOr<MonteCarloReport> SimulateMechanism(
    const Factorization& f, const ParticipationSchema& schema, int d,
    double sigma, int trials, uint64_t seed, int threads) {
  const int n = f.spec.n;
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (d < 1) return absl::InvalidArgumentError("d must be at least 1");
  if (!(sigma >= 0.0)) return absl::InvalidArgumentError("sigma must be >= 0");
  if (schema.n != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch: factorization order ", n, ", schema n ",
        schema.n));
  }
  absl::StatusOr<SensitivityValue> sens = ComputeSensitivity(f.c, schema);
  if (!sens.ok()) return sens.status();

  MonteCarloReport report;
  report.sens = sens->value;
  report.trials = trials;
  report.analytic = sens->value * std::sqrt(FrobeniusNormSq(f.b)) /
                    std::sqrt(static_cast<double>(n));
  report.deviation_mean = Eigen::MatrixXd::Zero(n, d);
  report.deviation_standard_error = Eigen::MatrixXd::Zero(n, d);
  if (sigma == 0.0) return report;

  const double s = sigma * sens->value;
  const Eigen::MatrixXd b = Densify(f.b);
  const std::vector<uint64_t> seeds = SplitSeeds(seed, trials);
  const int blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<BlockSums> sums(blocks);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int blk = next++; blk < blocks; blk = next++) {
      BlockSums& acc = sums[blk];
      acc.dev_sum = Eigen::MatrixXd::Zero(n, d);
      acc.dev_sq_sum = Eigen::MatrixXd::Zero(n, d);
      const int end = std::min(trials, (blk + 1) * kTrialsPerBlock);
      for (int t = blk * kTrialsPerBlock; t < end; ++t) {
        const Eigen::MatrixXd z = SampleNoiseMatrix(n, d, s, seeds[t]);
        const Eigen::MatrixXd dev = b * z;
        const double e = dev.squaredNorm() / (static_cast<double>(n) * d);
        acc.e_sum += e;
        acc.e_sq_sum += e * e;
        acc.dev_sum += dev;
        acc.dev_sq_sum += dev.cwiseAbs2();
      }
    }
  };
  const int pool_size = std::clamp(threads, 1, blocks);
  std::vector<std::thread> pool;
  for (int t = 1; t < pool_size; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  double e_sum = 0.0;
  double e_sq_sum = 0.0;
  Eigen::MatrixXd dev_sum = Eigen::MatrixXd::Zero(n, d);
  Eigen::MatrixXd dev_sq_sum = Eigen::MatrixXd::Zero(n, d);
  for (const BlockSums& acc : sums) {
    e_sum += acc.e_sum;
    e_sq_sum += acc.e_sq_sum;
    dev_sum += acc.dev_sum;
    dev_sq_sum += acc.dev_sq_sum;
  }

  const double count = trials;
  const double e_mean = e_sum / count;
  report.estimate = std::sqrt(e_mean) / sigma;
  report.deviation_mean = dev_sum / count;
  if (trials > 1) {
    const double e_var =
        std::max(0.0, (e_sq_sum - count * e_mean * e_mean) / (count - 1.0));
    const double e_se = std::sqrt(e_var / count);
    // Delta method for the square root.
    report.standard_error =
        e_mean > 0.0 ? e_se / (2.0 * std::sqrt(e_mean)) / sigma : 0.0;
    const Eigen::MatrixXd var =
        ((dev_sq_sum - count * report.deviation_mean.cwiseAbs2()) /
         (count - 1.0))
            .cwiseMax(0.0);
    report.deviation_standard_error = (var / count).cwiseSqrt();
  }
  return report;
}

}  // namespace dpmf
