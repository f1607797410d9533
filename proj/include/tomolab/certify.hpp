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

#include <cstdint>

#include "tomolab/estimate.hpp"
#include "tomolab/povm.hpp"

namespace tomolab {

struct CertifyOptions {
  int distinguishability_pairs = 1000;
  int strictness_states = 50;
  double strictness_threshold = 1e-6;
  std::uint64_t seed = 0x63657274ULL;
  EstimatorOptions estimator;
};

/// Informational-completeness diagnostics. Rank and kernel are exact to the
/// singular-value tolerance; the sampled statistics are evidence, not proofs.
struct IcReport {
  int dim = 0;
  int rank = 0;
  int kernel_dim = 0;
  bool fully_ic = false;

  /// Fraction of random Haar pairs whose probability vectors differ in
  /// sup-norm by more than 1e-8.
  double r1_pair_fraction = 0.0;
  /// Fraction of sampled pure states at which the map restricted to the
  /// pure-state tangent space is injective (smallest singular value > 1e-6).
  double r1_local_fraction = 0.0;
  bool r1_distinguishable = false;

  /// Noiseless MLE reconstructions of random pure states.
  int strictness_samples = 0;
  double strictness_max_infidelity = 0.0;
  double strictness_fraction = 0.0;  // share below the threshold
  bool strictness_evidence = false;
};

IcReport certify_ic(const Povm& povm, const CertifyOptions& options = {});

/// Smallest singular value of the measurement map restricted to the
/// 2d - 2 real tangent directions of the pure-state manifold at psi.
double tangent_injectivity(const MeasurementMap& map, const PureState& psi);

}  // namespace tomolab
