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

#include "dpmf/workload.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "Eigen/Dense"
#include "gtest/gtest.h"

namespace dpmf {
namespace {

// Runs m_i = beta m_{i-1} + x_i, theta_i = alpha theta_{i-1} - m_i on the
// impulse x = e_0 and returns -theta, which is the first column of A.
std::vector<double> SimulatedColumn(int n, double alpha, double beta) {
  std::vector<double> out(n);
  double m = 0.0;
  double theta = 0.0;
  for (int i = 0; i < n; ++i) {
    m = beta * m + (i == 0 ? 1.0 : 0.0);
    theta = alpha * theta - m;
    out[i] = -theta;
  }
  return out;
}

TEST(WorkloadSpecTest, Validation) {
  EXPECT_TRUE(WorkloadSpec::Create(10, 1.0, 0.0).ok());
  EXPECT_TRUE(WorkloadSpec::Create(1, 0.5, 0.49).ok());
  EXPECT_FALSE(WorkloadSpec::Create(0, 1.0, 0.0).ok());
  EXPECT_FALSE(WorkloadSpec::Create(10, 0.0, 0.0).ok());
  EXPECT_FALSE(WorkloadSpec::Create(10, 1.1, 0.0).ok());
  EXPECT_FALSE(WorkloadSpec::Create(10, 1.0, -0.1).ok());
  EXPECT_FALSE(WorkloadSpec::Create(10, 1.0, 1.0).ok());
  EXPECT_FALSE(WorkloadSpec::Create(10, 0.5, 0.6).ok());
  EXPECT_FALSE(WorkloadSpec::Create(10, 0.5, 0.5).ok());
  EXPECT_FALSE(WorkloadSpec::Create(10, std::nan(""), 0.0).ok());
}

TEST(WorkloadColumnTest, PlainSgdIsAllOnes) {
  ToeplitzColumn a = WorkloadColumn(*WorkloadSpec::Create(6, 1.0, 0.0));
  for (int j = 0; j < 6; ++j) EXPECT_EQ(a[j], 1.0);
}

TEST(WorkloadColumnTest, MatchesSimulatedRecursion) {
  for (auto [alpha, beta] : {std::pair{1.0, 0.0}, std::pair{1.0, 0.9},
                             std::pair{0.999, 0.9}, std::pair{0.99, 0.0},
                             std::pair{0.5, 0.25}}) {
    const int n = 300;
    ToeplitzColumn a = WorkloadColumn(*WorkloadSpec::Create(n, alpha, beta));
    std::vector<double> oracle = SimulatedColumn(n, alpha, beta);
    EXPECT_EQ(a[0], 1.0);
    for (int j = 0; j < n; ++j) {
      EXPECT_NEAR(a[j], oracle[j], 1e-12 * std::abs(oracle[j]))
          << "alpha=" << alpha << " beta=" << beta << " j=" << j;
    }
  }
}

TEST(WorkloadColumnTest, NearDegenerateGapStaysAccurate) {
  const double alpha = 1.0;
  const double beta = 1.0 - 1e-13;
  const int n = 50;
  ToeplitzColumn a = WorkloadColumn(*WorkloadSpec::Create(n, alpha, beta));
  std::vector<double> oracle = SimulatedColumn(n, alpha, beta);
  for (int j = 0; j < n; ++j) {
    EXPECT_NEAR(a[j], oracle[j], 1e-10 * oracle[j]);
    EXPECT_NEAR(a[j], j + 1.0, 1e-9);
  }
}

TEST(WorkloadColumnTest, FactorsAsGeometricProduct) {
  for (auto [alpha, beta] :
       {std::pair{1.0, 0.9}, std::pair{0.999, 0.5}, std::pair{0.9, 0.0}}) {
    const int n = 700;
    auto ea = GeometricColumn(alpha, n);
    auto eb = GeometricColumn(beta, n);
    ASSERT_TRUE(ea.ok() && eb.ok());
    auto product = LttMultiply(*ea, *eb);
    ToeplitzColumn a = WorkloadColumn(*WorkloadSpec::Create(n, alpha, beta));
    // The FFT product is accurate relative to the largest coefficient.
    double scale = 0.0;
    for (int j = 0; j < n; ++j) scale = std::max(scale, a[j]);
    for (int j = 0; j < n; ++j) {
      EXPECT_NEAR((*product)[j], a[j], 1e-12 * scale);
    }
  }
}

TEST(GeometricColumnTest, Values) {
  auto g = GeometricColumn(0.5, 4);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ((*g)[3], 0.125);
  auto zero = GeometricColumn(0.0, 3);
  EXPECT_EQ((*zero)[0], 1.0);
  EXPECT_EQ((*zero)[1], 0.0);
  EXPECT_FALSE(GeometricColumn(1.5, 3).ok());
  EXPECT_FALSE(GeometricColumn(-0.1, 3).ok());
  EXPECT_FALSE(GeometricColumn(0.5, 0).ok());
}

TEST(E1SingularValueTest, SingleStep) {
  auto s = E1SingularValue(1, 1);
  ASSERT_TRUE(s.ok());
  EXPECT_NEAR(*s, 1.0, 1e-15);
}

TEST(E1SingularValueTest, MatchesDenseSvd) {
  for (int n : {2, 3, 8, 32, 64}) {
    Eigen::MatrixXd e1 = Densify(*GeometricColumn(1.0, n));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(e1);
    for (int i = 1; i <= n; ++i) {
      auto s = E1SingularValue(i, n);
      ASSERT_TRUE(s.ok());
      const double oracle = svd.singularValues()(i - 1);
      EXPECT_NEAR(*s, oracle, 1e-8 * oracle) << "n=" << n << " i=" << i;
    }
  }
}

TEST(E1SingularValueTest, OutOfRange) {
  EXPECT_FALSE(E1SingularValue(0, 4).ok());
  EXPECT_FALSE(E1SingularValue(5, 4).ok());
  EXPECT_FALSE(E1SingularValue(1, 0).ok());
}

TEST(NuclearNormLowerBoundTest, Formula) {
  EXPECT_DOUBLE_EQ(NuclearNormLowerBound(*WorkloadSpec::Create(10, 0.9, 0.5)),
                   10.0);
  EXPECT_NEAR(NuclearNormLowerBound(*WorkloadSpec::Create(99, 1.0, 0.0)),
              99.0 * std::log(100.0) / std::numbers::pi, 1e-12);
}

// Property: the bound never exceeds the nuclear norm from a dense SVD.
TEST(NuclearNormLowerBoundTest, BelowDenseNuclearNorm) {
  for (int n : {1, 8, 32, 128}) {
    for (auto [alpha, beta] :
         {std::pair{1.0, 0.0}, std::pair{1.0, 0.5}, std::pair{1.0, 0.9},
          std::pair{0.99, 0.0}, std::pair{0.9, 0.5}}) {
      WorkloadSpec spec = *WorkloadSpec::Create(n, alpha, beta);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Densify(WorkloadColumn(spec)));
      EXPECT_LE(NuclearNormLowerBound(spec), svd.singularValues().sum())
          << "n=" << n << " alpha=" << alpha << " beta=" << beta;
    }
  }
}

}  // namespace
}  // namespace dpmf
