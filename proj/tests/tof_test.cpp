// Copyright 2026 The tomolab Authors
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

#include <cmath>

#include "gtest/gtest.h"
#include "tomolab/random.hpp"
#include "tomolab/tof.hpp"

namespace tomolab {
namespace {

Eigen::VectorXd random_populations(Rng& rng, bool sparse) {
  Eigen::VectorXd p(kTofChannels);
  for (int k = 0; k < kTofChannels; ++k) p(k) = (sparse && rng.uniform() < 0.5) ? 0.0 : rng.uniform();
  if (p.sum() == 0.0) p(0) = 1.0;
  return p / p.sum();
}

// Exhaustive NNLS: the best non-negative unconstrained least-squares solution
// over every support set.
Eigen::VectorXd brute_force_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.cols());
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  double best_r = b.norm();
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j) {
      if (mask & (1 << j)) idx.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd z = sub.fullPivHouseholderQr().solve(b);
    if (z.minCoeff() < 0.0) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) x(idx[k]) = z(static_cast<Eigen::Index>(k));
    const double r = (a * x - b).norm();
    if (r < best_r) {
      best_r = r;
      best = x;
    }
  }
  return best;
}

TEST(TofLayout, TemplatesIntegrateToOne) {
  const TofSignal s = default_tof_layout();
  ASSERT_EQ(s.templates.cols(), kTofChannels);
  const double dt = s.time_ms(1) - s.time_ms(0);
  for (int c = 0; c < kTofChannels; ++c) EXPECT_NEAR(s.templates.col(c).sum() * dt, 1.0, 1e-12);
  for (int c = 1; c < 9; ++c) EXPECT_NEAR(s.centers_ms(c) - s.centers_ms(c - 1), s.width_ms, 1e-12);
}

TEST(TofFit, NoiselessRoundTrip) {
  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd pop = random_populations(rng, trial % 2 == 0);
    const TofFit fit = fit_tof(synthesize_tof(pop, 0.0, rng));
    ASSERT_LT((fit.weights - pop).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT(fit.residual, 1e-8);
  }
}

TEST(TofFit, OnePercentNoise) {
  Rng rng(52);
  double total = 0.0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const Eigen::VectorXd pop = random_populations(rng, false);
    const TofFit fit = fit_tof(synthesize_tof(pop, 0.01, rng));
    ASSERT_GE(fit.weights.minCoeff(), 0.0);
    total += (fit.weights - pop).cwiseAbs().maxCoeff();
  }
  EXPECT_LT(total / trials, 0.02);
}

TEST(TofFit, ZeroSignalGivesZeroWeights) {
  TofSignal s = default_tof_layout();
  const TofFit fit = fit_tof(s);
  EXPECT_EQ(fit.weights.norm(), 0.0);
  EXPECT_EQ(fit.residual, 0.0);
}

TEST(TofFit, NegativeSignalClampsToZero) {
  TofSignal s = default_tof_layout();
  s.amplitude = -s.templates.col(3);
  EXPECT_EQ(fit_tof(s).weights.norm(), 0.0);
}

TEST(Synthesize, RejectsInvalidPopulations) {
  Rng rng(1);
  EXPECT_THROW(synthesize_tof(Eigen::VectorXd::Zero(kTofChannels), 0.0, rng), InvalidInput);
  EXPECT_THROW(synthesize_tof(Eigen::VectorXd::Ones(3) / 3.0, 0.0, rng), InvalidInput);
  Eigen::VectorXd neg = Eigen::VectorXd::Zero(kTofChannels);
  neg(0) = 1.5;
  neg(1) = -0.5;
  EXPECT_THROW(synthesize_tof(neg, 0.0, rng), InvalidInput);
}

TEST(Nnls, AgreesWithExhaustiveSearch) {
  Rng rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd a(8, 5);
    Eigen::VectorXd b(8);
    for (int i = 0; i < 8; ++i) {
      b(i) = rng.normal();
      for (int j = 0; j < 5; ++j) a(i, j) = rng.normal();
    }
    const Eigen::VectorXd x = nnls(a, b);
    const Eigen::VectorXd oracle = brute_force_nnls(a, b);
    ASSERT_LT((x - oracle).cwiseAbs().maxCoeff(), 1e-9) << "trial " << trial;
  }
}

TEST(Nnls, DimensionMismatchThrows) {
  EXPECT_THROW(nnls(Eigen::MatrixXd::Ones(3, 2), Eigen::VectorXd::Ones(4)), InvalidInput);
}

}  // namespace
}  // namespace tomolab
