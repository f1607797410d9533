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

#include "tomolab/tof.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace tomolab {

namespace {

constexpr double kWidthMs = 0.4;
constexpr double kStartMs = 4.0;
constexpr double kStopMs = 18.0;
constexpr double kStepMs = 0.01;
constexpr double kFirstGroupMs = 8.0;
constexpr double kSecondGroupMs = 14.0;

}  // namespace

TofSignal default_tof_layout() {
  TofSignal s;
  const int samples = static_cast<int>(std::lround((kStopMs - kStartMs) / kStepMs)) + 1;
  s.time_ms = Eigen::VectorXd::LinSpaced(samples, kStartMs, kStopMs);
  s.width_ms = kWidthMs;
  s.centers_ms.resize(kTofChannels);
  for (int k = 0; k < 9; ++k) s.centers_ms(k) = kFirstGroupMs + k * kWidthMs;
  for (int k = 0; k < 7; ++k) s.centers_ms(9 + k) = kSecondGroupMs + k * kWidthMs;
  s.templates.resize(samples, kTofChannels);
  for (int c = 0; c < kTofChannels; ++c) {
    const Eigen::ArrayXd z = (s.time_ms.array() - s.centers_ms(c)) / kWidthMs;
    s.templates.col(c) = (-0.5 * z.square()).exp().matrix();
    s.templates.col(c) /= s.templates.col(c).sum() * kStepMs;
  }
  s.amplitude = Eigen::VectorXd::Zero(samples);
  return s;
}

TofSignal synthesize_tof(const Eigen::VectorXd& populations, double noise_fraction, Rng& rng) {
  if (populations.size() != kTofChannels) throw InvalidInput("synthesize_tof: expected 16 populations");
  if (!populations.allFinite() || populations.minCoeff() < 0.0 || std::abs(populations.sum() - 1.0) > 1e-6) {
    throw InvalidInput("synthesize_tof: populations must be non-negative and sum to 1");
  }
  if (!(noise_fraction >= 0.0)) throw InvalidInput("synthesize_tof: noise must be non-negative");
  TofSignal s = default_tof_layout();
  s.amplitude = s.templates * populations;
  if (noise_fraction > 0.0) {
    const double sigma = noise_fraction * s.amplitude.maxCoeff();
    for (Eigen::Index k = 0; k < s.amplitude.size(); ++k) s.amplitude(k) += sigma * rng.normal();
  }
  return s;
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations) {
  const Eigen::Index n = a.cols();
  if (a.rows() != b.size()) throw InvalidInput("nnls: dimension mismatch");
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 10);
  const double tol = 1e-12 * std::max(1.0, a.norm() * b.norm());

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[j]) idx.push_back(j);
    }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    if (idx.empty()) return z;
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd zs = sub.colPivHouseholderQr().solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zs(static_cast<Eigen::Index>(k));
    return z;
  };

  for (int outer = 0; outer < max_iterations; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[best] = true;
    for (int inner = 0; inner <= n; ++inner) {
      const Eigen::VectorXd z = solve_passive();
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0.0) feasible = false;
      }
      if (feasible) {
        x = z;
        break;
      }
      // Step toward z until the first passive variable hits zero.
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && std::abs(x(j)) <= 1e-15) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x.cwiseMax(0.0);
}

TofFit fit_tof(const TofSignal& signal) {
  const Eigen::Index samples = signal.time_ms.size();
  if (signal.amplitude.size() != samples || signal.templates.rows() != samples || signal.templates.cols() < 1) {
    throw InvalidInput("fit_tof: inconsistent signal");
  }
  const Eigen::MatrixXd gram = signal.templates.transpose() * signal.templates;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double largest = eig.eigenvalues().maxCoeff();
  if (!(eig.eigenvalues().minCoeff() > 1e-12 * largest)) {
    throw NumericalError("fit_tof: template Gram matrix is singular");
  }
  TofFit fit;
  fit.weights = nnls(signal.templates, signal.amplitude);
  fit.residual = (signal.amplitude - signal.templates * fit.weights).norm();
  return fit;
}

}  // namespace tomolab
