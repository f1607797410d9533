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

#include "tomolab/povm.hpp"
#include "tomolab/simulate.hpp"

namespace tomolab {

/// Frobenius-nearest density matrix: eigendecomposition followed by the
/// Euclidean projection of the spectrum onto the probability simplex.
DensityMatrix project_psd_simplex(const HermitianOperator& a);
MatrixXc project_psd_simplex(const MatrixXc& a);

struct EstimatorOptions {
  int max_iterations = 5000;
  /// Stop when ||rho - P(rho - grad f(rho))||_F falls below this.
  double tolerance = 1e-9;
  double probability_floor = 1e-12;
  /// Sufficient-decrease constant of the Armijo test.
  double armijo = 1e-4;
  /// Largest rank tried by the low-rank refinement step; 0 disables it.
  int polish_max_rank = 8;
};

struct EstimatorResult {
  DensityMatrix rho_hat;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double optimality_residual = 0.0;
};

/// Linear map rho -> (Tr E_j rho)_j over the real coordinates of
/// hermitian_to_real, with its adjoint.
class LinearMeasurement {
 public:
  explicit LinearMeasurement(const Povm& povm);

  int dim() const { return dim_; }
  Eigen::Index outcomes() const { return map_.rows(); }
  Eigen::VectorXd probabilities(const MatrixXc& rho) const;
  /// sum_j w_j E_j
  MatrixXc weighted_sum(const Eigen::VectorXd& weights) const;
  /// Effects stacked vertically, (outcomes * d) x d.
  const MatrixXc& stacked_effects() const { return stacked_; }

 private:
  int dim_;
  Eigen::MatrixXd map_;
  MatrixXc stacked_;
};

/// Minimizes -sum_j nu_j log max(p_j, floor) over density matrices by
/// projected gradient descent with Barzilai-Borwein trial steps and Armijo
/// backtracking, starting from I/d. Negative frequencies count as zero.
///
/// Optima of rank r on the boundary of the PSD cone are approached slowly
/// when the data leave directions flat; on a doubling schedule the iterate
/// is refined over rho = A A^dagger / Tr(A A^dagger), A of width r <=
/// polish_max_rank, by damped Fisher scoring. A refinement is kept only if it
/// lowers the objective, and the projected-gradient residual remains the
/// stopping test.
EstimatorResult mle_estimate(const MeasurementRecord& record, const Povm& povm, const EstimatorOptions& options = {});
EstimatorResult mle_estimate(const Eigen::VectorXd& frequencies, const Povm& povm, const EstimatorOptions& options = {});
EstimatorResult mle_estimate(const Eigen::VectorXd& frequencies, const LinearMeasurement& map,
                             const EstimatorOptions& options = {});

/// Minimizes sum_j (nu_j - p_j)^2 over density matrices; same stopping rule.
EstimatorResult lsq_estimate(const MeasurementRecord& record, const Povm& povm, const EstimatorOptions& options = {});
EstimatorResult lsq_estimate(const Eigen::VectorXd& frequencies, const LinearMeasurement& map,
                             const EstimatorOptions& options = {});

/// -sum_j nu_j log max(p_j, floor)
double negative_log_likelihood(const Eigen::VectorXd& frequencies, const Eigen::VectorXd& probabilities,
                               double floor = 1e-12);

}  // namespace tomolab
