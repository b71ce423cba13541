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

#include "dpmf/toeplitz.h"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <mutex>
#include <type_traits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpmf {
namespace {

// FFTW's planner is not reentrant; fftw_execute on a private plan is.
std::mutex& FftwPlannerMutex() {
  static std::mutex mu;
  return mu;
}

int NextPowerOfTwo(int v) {
  int p = 1;
  while (p < v) p <<= 1;
  return p;
}

// Owns one FFTW buffer and the pair of plans that transform it in place.
class RealFft {
 public:
  explicit RealFft(int size) : size_(size) {
    const int complex_len = size / 2 + 1;
    buffer_ = fftw_alloc_complex(complex_len);
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    forward_ = fftw_plan_dft_r2c_1d(size, reinterpret_cast<double*>(buffer_),
                                    buffer_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(size, buffer_,
                                     reinterpret_cast<double*>(buffer_),
                                     FFTW_ESTIMATE);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
  }

  // Returns the half spectrum of `x` zero-padded to the transform size.
  std::vector<std::complex<double>> Forward(std::span<const double> x) {
    double* real = reinterpret_cast<double*>(buffer_);
    std::fill(real, real + 2 * (size_ / 2 + 1), 0.0);
    std::copy(x.begin(), x.end(), real);
    fftw_execute(forward_);
    std::vector<std::complex<double>> out(size_ / 2 + 1);
    for (int i = 0; i < size_ / 2 + 1; ++i) {
      out[i] = {buffer_[i][0], buffer_[i][1]};
    }
    return out;
  }

  // Unnormalised inverse; the caller divides by size().
  std::vector<double> Backward(std::span<const std::complex<double>> spectrum,
                               int keep) {
    for (int i = 0; i < size_ / 2 + 1; ++i) {
      buffer_[i][0] = spectrum[i].real();
      buffer_[i][1] = spectrum[i].imag();
    }
    fftw_execute(backward_);
    const double* real = reinterpret_cast<const double*>(buffer_);
    return std::vector<double>(real, real + keep);
  }

  int size() const { return size_; }

 private:
  int size_;
  fftw_complex* buffer_;
  fftw_plan forward_;
  fftw_plan backward_;
};

}  // namespace

absl::StatusOr<ToeplitzColumn> ToeplitzColumn::Create(
    std::vector<double> coeffs) {
  if (coeffs.empty()) {
    return absl::InvalidArgumentError("Toeplitz column must be non-empty");
  }
  return ToeplitzColumn(std::move(coeffs), std::nullopt);
}

absl::StatusOr<ToeplitzColumn> ToeplitzColumn::CreateBanded(
    std::vector<double> coeffs, int bandwidth) {
  if (coeffs.empty()) {
    return absl::InvalidArgumentError("Toeplitz column must be non-empty");
  }
  if (bandwidth < 1 || bandwidth > static_cast<int>(coeffs.size())) {
    return absl::InvalidArgumentError(
        absl::StrCat("bandwidth ", bandwidth, " outside [1, ", coeffs.size(),
                     "]"));
  }
  std::fill(coeffs.begin() + bandwidth, coeffs.end(), 0.0);
  return ToeplitzColumn(std::move(coeffs), bandwidth);
}

ToeplitzColumn ToeplitzColumn::Unit(int n) {
  std::vector<double> coeffs(std::max(n, 1), 0.0);
  coeffs[0] = 1.0;
  return ToeplitzColumn(std::move(coeffs), 1);
}

int ToeplitzColumn::EffectiveBandwidth() const {
  int p = size();
  while (p > 1 && coeffs_[p - 1] == 0.0) --p;
  return p;
}

absl::StatusOr<DenseLowerTriangular> DenseLowerTriangular::Create(
    RowMatrix m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    return absl::InvalidArgumentError("matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) {
        return absl::InvalidArgumentError(
            absl::StrCat("nonzero entry above the diagonal at (", i, ", ", j,
                         ")"));
      }
    }
  }
  return DenseLowerTriangular(std::move(m));
}

absl::StatusOr<DenseLowerTriangular> DenseLowerTriangular::FromLowerPart(
    const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    return absl::InvalidArgumentError("matrix must be square and non-empty");
  }
  RowMatrix lower = m.triangularView<Eigen::Lower>();
  return DenseLowerTriangular(std::move(lower));
}

int DenseLowerTriangular::EffectiveBandwidth() const {
  const int n = order();
  int p = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i - p + 1; ++j) {
      if (m_(i, j) != 0.0) {
        p = i - j + 1;
        break;
      }
    }
  }
  return p;
}

std::vector<double> ConvolveDirect(std::span<const double> a,
                                   std::span<const double> b, int out_len) {
  std::vector<double> out(std::max(out_len, 0), 0.0);
  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  for (int j = 0; j < out_len; ++j) {
    const int lo = std::max(0, j - nb + 1);
    const int hi = std::min(j, na - 1);
    double sum = 0.0;
    for (int i = lo; i <= hi; ++i) sum += a[i] * b[j - i];
    out[j] = sum;
  }
  return out;
}

std::vector<double> ConvolveFft(std::span<const double> a,
                                std::span<const double> b, int out_len) {
  if (out_len <= 0) return {};
  a = a.first(std::min<size_t>(a.size(), out_len));
  b = b.first(std::min<size_t>(b.size(), out_len));
  if (a.empty() || b.empty()) return std::vector<double>(out_len, 0.0);
  const int full = static_cast<int>(a.size() + b.size()) - 1;
  RealFft fft(NextPowerOfTwo(std::max(full, 2)));
  std::vector<std::complex<double>> fa = fft.Forward(a);
  const std::vector<std::complex<double>> fb = fft.Forward(b);
  for (size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  const int keep = std::min(out_len, fft.size());
  std::vector<double> out = fft.Backward(fa, keep);
  const double scale = 1.0 / fft.size();
  for (double& v : out) v *= scale;
  out.resize(out_len, 0.0);
  return out;
}

std::vector<double> Convolve(std::span<const double> a,
                             std::span<const double> b, int out_len,
                             int fft_threshold) {
  if (out_len < fft_threshold) return ConvolveDirect(a, b, out_len);
  return ConvolveFft(a, b, out_len);
}

absl::StatusOr<ToeplitzColumn> LttMultiply(const ToeplitzColumn& a,
                                           const ToeplitzColumn& b,
                                           int fft_threshold) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: ", a.size(), " vs ", b.size()));
  }
  const int n = a.size();
  // Only the nonzero prefixes need to take part in the convolution.
  const int pa = a.EffectiveBandwidth();
  const int pb = b.EffectiveBandwidth();
  std::vector<double> product =
      Convolve(a.coeffs().first(pa), b.coeffs().first(pb), n, fft_threshold);
  if (a.bandwidth().has_value() && b.bandwidth().has_value()) {
    const int p = std::min(n, *a.bandwidth() + *b.bandwidth() - 1);
    return ToeplitzColumn::CreateBanded(std::move(product), p);
  }
  return ToeplitzColumn::Create(std::move(product));
}

absl::StatusOr<ToeplitzColumn> LttInverse(const ToeplitzColumn& a) {
  if (!a.IsInvertible()) {
    return absl::InvalidArgumentError("singular LTT matrix: a_0 == 0");
  }
  const int n = a.size();
  const int p = a.EffectiveBandwidth();
  const double inv0 = 1.0 / a[0];
  std::vector<double> x(n, 0.0);
  x[0] = inv0;
  for (int j = 1; j < n; ++j) {
    double sum = 0.0;
    const int hi = std::min(j, p - 1);
    for (int i = 1; i <= hi; ++i) sum += a[i] * x[j - i];
    x[j] = -inv0 * sum;
  }
  return ToeplitzColumn::Create(std::move(x));
}

absl::StatusOr<RowMatrix> BandedForwardSolve(const ToeplitzColumn& c,
                                             const RowMatrix& rhs) {
  if (!c.IsInvertible()) {
    return absl::InvalidArgumentError("singular LTT matrix: c_0 == 0");
  }
  if (rhs.rows() != c.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "rhs has ", rhs.rows(), " rows, expected ", c.size()));
  }
  const int n = c.size();
  const int p = c.EffectiveBandwidth();
  RowMatrix y(n, rhs.cols());
  for (int i = 0; i < n; ++i) {
    Eigen::RowVectorXd row = rhs.row(i);
    const int hi = std::min(i, p - 1);
    for (int j = 1; j <= hi; ++j) row -= c[j] * y.row(i - j);
    y.row(i) = row / c[0];
  }
  return y;
}

double LttFrobeniusNormSq(const ToeplitzColumn& a) {
  const int n = a.size();
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += static_cast<double>(n - j) * a[j] * a[j];
  return sum;
}

DenseLowerTriangular ToDense(const ToeplitzColumn& a) {
  const int n = a.size();
  RowMatrix m = RowMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) m(i, j) = a[i - j];
  }
  return *DenseLowerTriangular::Create(std::move(m));
}

absl::StatusOr<ToeplitzColumn> FromDense(const DenseLowerTriangular& m) {
  const int n = m.order();
  std::vector<double> coeffs(n);
  for (int i = 0; i < n; ++i) coeffs[i] = m(i, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j <= i; ++j) {
      if (m(i, j) != coeffs[i - j]) {
        return absl::InvalidArgumentError(
            absl::StrCat("matrix is not Toeplitz at (", i, ", ", j, ")"));
      }
    }
  }
  return ToeplitzColumn::Create(std::move(coeffs));
}

int Order(const MatrixHandle& m) {
  return std::visit(
      [](const auto& v) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>,
                                     ToeplitzColumn>) {
          return v.size();
        } else {
          return v.order();
        }
      },
      m);
}

Eigen::MatrixXd Densify(const MatrixHandle& m) {
  if (const auto* col = std::get_if<ToeplitzColumn>(&m)) {
    return ToDense(*col).matrix();
  }
  return std::get<DenseLowerTriangular>(m).matrix();
}

double FrobeniusNormSq(const MatrixHandle& m) {
  if (const auto* col = std::get_if<ToeplitzColumn>(&m)) {
    return LttFrobeniusNormSq(*col);
  }
  return std::get<DenseLowerTriangular>(m).matrix().squaredNorm();
}

int EffectiveBandwidth(const MatrixHandle& m) {
  return std::visit([](const auto& v) { return v.EffectiveBandwidth(); }, m);
}

}  // namespace dpmf
