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

#include "tomolab/estimate.hpp"
#include "tomolab/serialize.hpp"
#include "tomolab/simulate.hpp"

namespace tomolab {

/// Levels of the simulated apparatus; smaller test spaces are embedded.
inline constexpr int kApparatusDim = 16;

struct BasisSweepSpec {
  std::string povm = "mub";
  int n_min = 1;
  int n_max = 0;  // 0 = all settings
};

struct ExperimentConfig {
  int dim = 16;
  /// Built-in names (see builtin_povm_names) or paths to POVM files.
  std::vector<std::string> povms;
  int n_states = 20;
  ErrorModel error_model = default_error_model();
  std::uint64_t master_seed = 1;
  int jobs = 1;
  EstimatorOptions estimator;
  std::optional<BasisSweepSpec> sweep;

  /// Calibrated defaults realized on the 16-level apparatus.
  static ErrorModel default_error_model() {
    ErrorModel m;
    m.embedding_dim = kApparatusDim;
    return m;
  }

  /// Throws InvalidInput unless n_states >= 1, jobs >= 1 and dim >= 2.
  void validate() const;
};

/// Fields: dim, povms, n_states, seed, jobs, error_model (object, or the
/// strings "default" / "noiseless"), sweep {povm, n_min, n_max},
/// estimator {max_iterations, tolerance}.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& config);

struct TrialResult {
  std::string povm;
  IcClass ic_class = IcClass::kUnknown;
  int dim = 0;
  int n_settings_used = 0;
  int state_index = 0;
  double infidelity = 0.0;
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::string error;  // non-empty when the trial failed
};

struct SweepRow {
  std::string povm;
  IcClass ic_class = IcClass::kUnknown;
  int dim = 0;
  int n_settings_used = 0;
  double mean_infidelity = 0.0;
  double std_infidelity = 0.0;  // sample standard deviation
  int n_states = 0;
  int n_failed = 0;
  std::uint64_t seed = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<TrialResult> trials;
};

/// Target test states shared by every POVM of a run: Haar states from
/// stream (master, state_index).
PureState test_state(std::uint64_t master_seed, int state_index, int dim);

/// Stream key of a POVM family; equal names share systematic errors.
std::uint64_t povm_stream_key(const Povm& povm);

/// prepare -> measure -> MLE -> infidelity for every test state, with one
/// systematic-error table per run. Failed trials are reported, not dropped.
std::vector<TrialResult> run_trials(const Povm& povm, const ExperimentConfig& config,
                                    std::uint64_t stream_key, IcClass ic_class);

SweepRow aggregate(const std::vector<TrialResult>& trials);

/// Resolves a config entry to a POVM (built-in name or file path).
Povm resolve_povm(const std::string& entry, int dim);

/// One aggregate row per POVM in config.povms.
SweepResult run_table(const ExperimentConfig& config);

/// One row per N in [n_min, n_max], using only the first N settings of the
/// family. Systematic errors and noise of the shared settings are identical
/// across N.
SweepResult run_basis_sweep(const ExperimentConfig& config, const BasisSweepSpec& spec);

struct FailureSetReport {
  int dim = 0;
  int n_states = 0;
  double generic_mean_infidelity = 0.0;
  double generic_max_infidelity = 0.0;
  double failure_mean_infidelity = 0.0;
};

/// Noiseless PSI tomography of generic states and of states with <0|psi> = 0.
FailureSetReport failure_set_probe(int dim, int n_states, std::uint64_t seed, const EstimatorOptions& options = {});

/// povm,ic_class,d,n_settings_used,state_index,infidelity,objective,converged,seed
std::string trials_csv(const SweepResult& result);
/// povm,ic_class,d,n_settings_used,mean_infidelity,std_infidelity,n_states,seed
std::string aggregate_csv(const SweepResult& result);
/// Two columns: N,mean_infidelity
std::string sweep_plot_data(const SweepResult& result);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace tomolab
