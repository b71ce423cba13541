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

// Lower-triangular Toeplitz (LTT) matrices stored by their first column.
//
// An n x n LTT matrix M has entries M[i][j] = m_{i-j} for i >= j and zero
// otherwise, so the column (m_0, ..., m_{n-1}) determines it completely. LTT
// matrices are closed under multiplication and inversion, and products of LTT
// matrices commute. Multiplication is the truncated convolution of the
// columns.
//
// All sums (convolutions, norms, recurrences) run in ascending index order.

#ifndef DPMF_TOEPLITZ_H_
#define DPMF_TOEPLITZ_H_

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"

namespace dpmf {

// Row-major dense matrix used for noise blocks (n rows of dimension d) and
// dense lower-triangular storage.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// First column of an LTT matrix, optionally tagged with a bandwidth p meaning
// coeffs[j] == 0 for every j >= p.
class ToeplitzColumn {
 public:
  // Fails if `coeffs` is empty.
  static absl::StatusOr<ToeplitzColumn> Create(std::vector<double> coeffs);

  // Zeroes every coefficient at index >= `bandwidth` and tags the result.
  // Fails unless 1 <= bandwidth <= coeffs.size().
  static absl::StatusOr<ToeplitzColumn> CreateBanded(std::vector<double> coeffs,
                                                     int bandwidth);

  // (1, 0, ..., 0): the identity matrix of order n.
  static ToeplitzColumn Unit(int n);

  int size() const { return static_cast<int>(coeffs_.size()); }
  double operator[](int j) const { return coeffs_[j]; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::optional<int> bandwidth() const { return bandwidth_; }

  // Smallest p such that coeffs[j] == 0 for all j >= p (at least 1). Unlike
  // bandwidth() this inspects the values and ignores the tag.
  int EffectiveBandwidth() const;

  bool IsInvertible() const { return coeffs_[0] != 0.0; }

 private:
  ToeplitzColumn(std::vector<double> coeffs, std::optional<int> bandwidth)
      : coeffs_(std::move(coeffs)), bandwidth_(bandwidth) {}

  std::vector<double> coeffs_;
  std::optional<int> bandwidth_;
};

// Dense lower-triangular matrix; entries above the diagonal are exactly zero.
class DenseLowerTriangular {
 public:
  // Fails if `m` is not square, empty, or has a nonzero entry above the
  // diagonal.
  static absl::StatusOr<DenseLowerTriangular> Create(RowMatrix m);

  // Keeps the lower triangle of `m` (including the diagonal) and drops the
  // rest.
  static absl::StatusOr<DenseLowerTriangular> FromLowerPart(
      const Eigen::MatrixXd& m);

  int order() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const RowMatrix& matrix() const { return m_; }

  // Smallest p such that entry (i, j) == 0 whenever i - j >= p (at least 1).
  int EffectiveBandwidth() const;

 private:
  explicit DenseLowerTriangular(RowMatrix m) : m_(std::move(m)) {}

  RowMatrix m_;
};

// Either representation of a lower-triangular factor.
using MatrixHandle = std::variant<ToeplitzColumn, DenseLowerTriangular>;

int Order(const MatrixHandle& m);
Eigen::MatrixXd Densify(const MatrixHandle& m);
double FrobeniusNormSq(const MatrixHandle& m);
int EffectiveBandwidth(const MatrixHandle& m);

// Columns at or above this length are convolved through FFT by default.
inline constexpr int kDefaultFftThreshold = 512;

// Truncated convolution out[j] = sum_{i=0}^{j} a[i] * b[j-i] for
// j < out_len, computed directly in O(out_len^2). Missing input entries
// count as zero.
std::vector<double> ConvolveDirect(std::span<const double> a,
                                   std::span<const double> b, int out_len);

// Same result via a real FFT of length >= 2 * out_len - 1.
std::vector<double> ConvolveFft(std::span<const double> a,
                                std::span<const double> b, int out_len);

// Dispatches to ConvolveDirect below `fft_threshold` and to ConvolveFft at
// or above it.
std::vector<double> Convolve(std::span<const double> a,
                             std::span<const double> b, int out_len,
                             int fft_threshold = kDefaultFftThreshold);

// First column of the product of two LTT matrices of equal order. When both
// inputs carry a bandwidth tag the result is tagged with
// min(n, p_a + p_b - 1).
absl::StatusOr<ToeplitzColumn> LttMultiply(
    const ToeplitzColumn& a, const ToeplitzColumn& b,
    int fft_threshold = kDefaultFftThreshold);

// First column of the inverse LTT matrix, by the recurrence
//   x_0 = 1 / a_0,  x_j = -(1 / a_0) sum_{i=1}^{min(j, p-1)} a_i x_{j-i}
// where p is the effective bandwidth of `a`.
absl::StatusOr<ToeplitzColumn> LttInverse(const ToeplitzColumn& a);

// Solves C Y = rhs by forward substitution for a (banded) LTT matrix C, one
// row at a time:
//   y_i = (z_i - sum_{j=1}^{min(i, p-1)} c_j y_{i-j}) / c_0.
// Only the last p - 1 rows of Y are read when producing the next one.
absl::StatusOr<RowMatrix> BandedForwardSolve(const ToeplitzColumn& c,
                                             const RowMatrix& rhs);

// ||M||_F^2 = sum_j (n - j) m_j^2.
double LttFrobeniusNormSq(const ToeplitzColumn& a);

DenseLowerTriangular ToDense(const ToeplitzColumn& a);

// Reads the first column of `m`. Fails unless `m` is Toeplitz (exact
// comparison).
absl::StatusOr<ToeplitzColumn> FromDense(const DenseLowerTriangular& m);

}  // namespace dpmf

#endif  // DPMF_TOEPLITZ_H_
