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

#include "tomolab/linalg.hpp"
#include "tomolab/random.hpp"
#include "tomolab/types.hpp"

namespace tomolab {

/// Normalized state vector in a d-dimensional Hilbert space.
class PureState {
 public:
  /// Throws InvalidInput unless the squared norm is 1 within 1e-12.
  explicit PureState(VectorXc amplitudes);

  /// Normalizes first; rejects the zero vector.
  static PureState normalized(VectorXc amplitudes);
  static PureState basis(int dim, int index);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const VectorXc& amplitudes() const { return amplitudes_; }
  const cplx& operator[](Eigen::Index k) const { return amplitudes_(k); }

  /// |psi><psi|
  MatrixXc projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  VectorXc amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite d x d matrix.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12), trace (1e-10) and PSD (-1e-10).
  explicit DensityMatrix(MatrixXc matrix);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const MatrixXc& matrix() const { return matrix_; }

 private:
  MatrixXc matrix_;
};

class UnitaryMap {
 public:
  /// Validates ||U^dagger U - I||_F <= 1e-10.
  explicit UnitaryMap(MatrixXc matrix);

  static UnitaryMap identity(int dim);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const MatrixXc& matrix() const { return matrix_; }

 private:
  MatrixXc matrix_;
};

class HermitianOperator {
 public:
  /// Validates Hermiticity within 1e-12.
  explicit HermitianOperator(MatrixXc matrix);

  /// Accepts rounding-level asymmetry (up to 1e-9) and stores the
  /// Hermitian part.
  static HermitianOperator symmetrized(const MatrixXc& matrix);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const MatrixXc& matrix() const { return matrix_; }

 private:
  MatrixXc matrix_;
};

inline HermitianEigen eig_hermitian(const HermitianOperator& a) { return eig_hermitian(a.matrix()); }

/// <psi| rho |psi>. Infidelity is one minus this value.
double fidelity_pure(const PureState& psi, const DensityMatrix& rho);

inline double infidelity(const PureState& psi, const DensityMatrix& rho) {
  return 1.0 - fidelity_pure(psi, rho);
}

/// Haar-distributed pure state: i.i.d. complex normal amplitudes, normalized.
PureState haar_random_state(int dim, Rng& rng);

/// Sample from the Gaussian unitary ensemble rescaled to Tr(G^2) = d.
MatrixXc gue_generator(int dim, Rng& rng);

/// exp(-i epsilon G) with G from gue_generator.
UnitaryMap random_perturbation_unitary(int dim, double epsilon, Rng& rng);

/// Entanglement (process) infidelity of U relative to the identity,
/// 1 - |Tr U|^2 / d^2.
double process_infidelity(const UnitaryMap& u);

/// Perturbation strength whose mean process infidelity in dimension `dim`
/// over `draws` GUE samples (from `seed`) equals `target`, by bisection.
double calibrate_epsilon(int dim, double target, int draws, std::uint64_t seed);

/// Mean process infidelity of exp(-i epsilon G) over `draws` samples.
double mean_process_infidelity(int dim, double epsilon, int draws, std::uint64_t seed);

}  // namespace tomolab
