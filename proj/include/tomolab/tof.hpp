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

#pragma once

#include "tomolab/random.hpp"
#include "tomolab/types.hpp"

namespace tomolab {

/// Stern-Gerlach time-of-flight signal: a weighted sum of per-sublevel
/// arrival distributions sampled on a time grid.
///
/// Channel k of the default layout is standard-basis level k: channels 0-8
/// form the first arrival group (F = 4, m = 4 ... -4) and channels 9-15 the
/// second (F = 3, m = 3 ... -3). Neighbouring arrivals within a group are one
/// width apart, so they overlap strongly.
struct TofSignal {
  Eigen::VectorXd time_ms;
  Eigen::VectorXd amplitude;
  Eigen::MatrixXd templates;  // samples x channels, each integrating to 1
  Eigen::VectorXd centers_ms;
  double width_ms = 0.0;
};

inline constexpr int kTofChannels = 16;

/// Grid and templates of the default layout with zero amplitude.
TofSignal default_tof_layout();

/// Noise standard deviation is `noise_fraction` times the peak of the
/// noiseless signal. Populations must be non-negative and sum to 1 (1e-6).
TofSignal synthesize_tof(const Eigen::VectorXd& populations, double noise_fraction, Rng& rng);

struct TofFit {
  Eigen::VectorXd weights;
  double residual = 0.0;  // ||signal - templates * weights||_2
};

/// Non-negative least-squares fit of the template weights. Throws
/// NumericalError when the template Gram matrix is singular.
TofFit fit_tof(const TofSignal& signal);

/// Lawson-Hanson active-set solution of min ||A x - b|| subject to x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations = 0);

}  // namespace tomolab
