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
#include <optional>
#include <string>
#include <vector>

#include "tomolab/povm.hpp"

namespace tomolab {

/// Perturbation strength whose mean process infidelity over 200 GUE draws
/// in d = 16 is 0.018 (see calibrate_epsilon and kCalibrationSeed).
inline constexpr double kCalibratedEpsilon = 0.13495406889611816;
inline constexpr std::uint64_t kCalibrationSeed = 0x63616c6962726174ULL;
inline constexpr double kTargetProcessInfidelity = 0.018;

/// Systematic and statistical imperfections of the simulated apparatus.
struct ErrorModel {
  /// Strength of the fixed per-setting unitary error exp(-i eps G).
  double epsilon_map = kCalibratedEpsilon;
  /// Additive Gaussian noise on each estimated frequency.
  double freq_noise_sigma = 0.01;
  /// Target 1 - <psi_t|rho_a|psi_t> of the prepared state.
  double prep_infidelity = 0.005;
  /// Share of the preparation error that is coherent (a small unitary);
  /// the remainder is depolarizing.
  double prep_coherent_fraction = 0.5;
  /// Reuse one perturbation for every setting (same control waveform).
  bool correlated_waveforms = false;
  /// Number of levels of the apparatus. When larger than the POVM dimension
  /// every setting is realized as a Neumark dilation on this many levels and
  /// the unitary error acts there. Zero means the POVM dimension.
  int embedding_dim = 0;

  static ErrorModel noiseless() { return {0.0, 0.0, 0.0, 0.5, false, 0}; }

  /// Throws InvalidInput on negative parameters or sigma >= 0.2.
  void validate() const;
};

struct SettingFrequencies {
  std::string label;
  std::vector<double> frequencies;
};

/// Estimated outcome frequencies for every setting of a POVM.
struct MeasurementRecord {
  std::string povm_id;
  std::uint64_t seed = 0;
  ErrorModel error_model;
  std::vector<SettingFrequencies> settings;

  /// Frequencies of all settings concatenated in order.
  Eigen::VectorXd flattened() const;
  std::size_t total_outcomes() const;
};

/// Per-run table of fixed measurement errors, one entry per setting.
/// Drawn once and shared read-only by every state measured in the run.
class SystematicErrors {
 public:
  struct Entry {
    // Rows of (U_err U) restricted to the subspace, one per outcome, when the
    // setting is realized by a dilation; otherwise empty.
    MatrixXc outcome_rows;
    // U_err acting on the POVM space when no dilation is used.
    MatrixXc perturbation;
    bool dilated = false;
  };

  /// Setting i draws from stream (master, povm_key, i); with correlated
  /// waveforms every setting uses the stream of setting 0.
  static SystematicErrors draw(const Povm& povm, const ErrorModel& model, std::uint64_t master,
                               std::uint64_t povm_key);

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

/// rho_a = (1 - lambda) U_p |psi><psi| U_p^dagger + lambda I/d with
/// <psi|rho_a|psi> = 1 - prep_infidelity.
DensityMatrix prepare_state(const PureState& target, const ErrorModel& model, Rng& rng);

/// Ideal probabilities under the systematic errors, then additive noise and
/// clipping to [0, 1]. Noise uses sigma / sqrt(outcomes / d) per outcome.
MeasurementRecord measure(const DensityMatrix& rho, const Povm& povm, const SystematicErrors& errors,
                          const ErrorModel& model, Rng& rng);

/// Draws a fresh error table from `rng`, then measures.
MeasurementRecord measure(const DensityMatrix& rho, const Povm& povm, const ErrorModel& model, Rng& rng);

/// Noise-free record holding exact Born-rule probabilities.
MeasurementRecord ideal_record(const DensityMatrix& rho, const Povm& povm);

}  // namespace tomolab
