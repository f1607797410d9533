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

#include "tomolab/state.hpp"

#include <cmath>
#include <string>

namespace tomolab {

PureState::PureState(VectorXc amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) throw InvalidInput("PureState: empty amplitude vector");
  const double norm2 = amplitudes_.squaredNorm();
  if (!(std::abs(norm2 - 1.0) <= tol::kNorm)) {
    throw InvalidInput("PureState: squared norm " + std::to_string(norm2) + " differs from 1");
  }
}

PureState PureState::normalized(VectorXc amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidInput("PureState: cannot normalize zero vector");
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim) throw InvalidInput("PureState::basis: index out of range");
  VectorXc v = VectorXc::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(MatrixXc matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw InvalidInput("DensityMatrix: matrix must be square and non-empty");
  }
  const double herm = hermiticity_deviation(matrix_);
  if (!(herm <= tol::kHermitian)) {
    throw InvalidInput("DensityMatrix: not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  const double trace = matrix_.trace().real();
  if (!(std::abs(trace - 1.0) <= tol::kTrace)) {
    throw InvalidInput("DensityMatrix: trace " + std::to_string(trace) + " differs from 1");
  }
  const double min_eig = eig_hermitian(matrix_).values.minCoeff();
  if (!(min_eig >= -tol::kPsd)) {
    throw InvalidInput("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(MatrixXc::Identity(dim, dim) / static_cast<double>(dim));
}

UnitaryMap::UnitaryMap(MatrixXc matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw InvalidInput("UnitaryMap: matrix must be square and non-empty");
  }
  const double residual = (matrix_.adjoint() * matrix_ - MatrixXc::Identity(dim(), dim())).norm();
  if (!(residual <= tol::kUnitary)) {
    throw InvalidInput("UnitaryMap: not unitary (residual " + std::to_string(residual) + ")");
  }
}

UnitaryMap UnitaryMap::identity(int dim) { return UnitaryMap(MatrixXc::Identity(dim, dim)); }

HermitianOperator::HermitianOperator(MatrixXc matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw InvalidInput("HermitianOperator: matrix must be square and non-empty");
  }
  const double herm = hermiticity_deviation(matrix_);
  if (!(herm <= tol::kHermitian)) {
    throw InvalidInput("HermitianOperator: not Hermitian (deviation " + std::to_string(herm) + ")");
  }
}

HermitianOperator HermitianOperator::symmetrized(const MatrixXc& matrix) {
  if (matrix.rows() != matrix.cols()) throw InvalidInput("HermitianOperator: matrix must be square");
  const double herm = hermiticity_deviation(matrix);
  if (!(herm <= tol::kHermitianInput)) {
    throw InvalidInput("HermitianOperator: not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  return HermitianOperator(hermitian_part(matrix));
}

double fidelity_pure(const PureState& psi, const DensityMatrix& rho) {
  if (psi.dim() != rho.dim()) throw InvalidInput("fidelity_pure: dimension mismatch");
  const VectorXc& v = psi.amplitudes();
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

PureState haar_random_state(int dim, Rng& rng) {
  if (dim < 2) throw InvalidInput("haar_random_state: dimension must be at least 2");
  VectorXc v(dim);
  for (int k = 0; k < dim; ++k) v(k) = rng.complex_normal();
  return PureState::normalized(std::move(v));
}

MatrixXc gue_generator(int dim, Rng& rng) {
  if (dim < 1) throw InvalidInput("gue_generator: invalid dimension");
  MatrixXc g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    g(i, i) = rng.normal();
    for (int j = i + 1; j < dim; ++j) {
      g(i, j) = rng.complex_normal();
      g(j, i) = std::conj(g(i, j));
    }
  }
  const double tr_g2 = g.squaredNorm();
  return g * std::sqrt(static_cast<double>(dim) / tr_g2);
}

UnitaryMap random_perturbation_unitary(int dim, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0)) throw InvalidInput("random_perturbation_unitary: epsilon must be non-negative");
  const MatrixXc g = gue_generator(dim, rng);
  if (epsilon == 0.0) return UnitaryMap::identity(dim);
  return UnitaryMap(unitary_exponential(g, epsilon));
}

double process_infidelity(const UnitaryMap& u) {
  const double d = u.dim();
  return 1.0 - std::norm(u.matrix().trace()) / (d * d);
}

namespace {

// Spectra of the calibration draws; exp(-i eps G) has trace sum_k e^{-i eps l_k}.
std::vector<Eigen::VectorXd> calibration_spectra(int dim, int draws, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> spectra;
  spectra.reserve(draws);
  for (int k = 0; k < draws; ++k) {
    Rng rng = Rng::stream(seed, {static_cast<std::uint64_t>(k)});
    spectra.push_back(eig_hermitian(gue_generator(dim, rng)).values);
  }
  return spectra;
}

double mean_infidelity_from_spectra(const std::vector<Eigen::VectorXd>& spectra, double epsilon) {
  double total = 0.0;
  for (const auto& lambda : spectra) {
    cplx trace = 0.0;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) trace += std::polar(1.0, -epsilon * lambda(k));
    const double d = static_cast<double>(lambda.size());
    total += 1.0 - std::norm(trace) / (d * d);
  }
  return total / static_cast<double>(spectra.size());
}

}  // namespace

double mean_process_infidelity(int dim, double epsilon, int draws, std::uint64_t seed) {
  if (draws < 1) throw InvalidInput("mean_process_infidelity: draws must be positive");
  return mean_infidelity_from_spectra(calibration_spectra(dim, draws, seed), epsilon);
}

double calibrate_epsilon(int dim, double target, int draws, std::uint64_t seed) {
  if (draws < 1 || !(target > 0.0) || !(target < 0.5)) {
    throw InvalidInput("calibrate_epsilon: target must lie in (0, 0.5) and draws be positive");
  }
  const auto spectra = calibration_spectra(dim, draws, seed);
  // Mean infidelity grows monotonically from 0 on [0, 1] for Tr(G^2) = d.
  double lo = 0.0;
  double hi = 1.0;
  if (mean_infidelity_from_spectra(spectra, hi) < target) {
    throw NumericalError("calibrate_epsilon: target not reachable for epsilon <= 1");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_infidelity_from_spectra(spectra, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace tomolab
