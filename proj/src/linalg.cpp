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

#include "tomolab/linalg.hpp"

#include <string>

namespace tomolab {

HermitianEigen eig_hermitian(const MatrixXc& a, double tolerance) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw InvalidInput("eig_hermitian: matrix must be square and non-empty");
  }
  const double deviation = hermiticity_deviation(a);
  if (!(deviation <= tolerance)) {
    throw InvalidInput("eig_hermitian: input not Hermitian (deviation " + std::to_string(deviation) + ")");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) throw NumericalError("eig_hermitian: eigensolver did not converge");
  // Eigen sorts ascending.
  const Eigen::Index n = a.rows();
  HermitianEigen out{solver.eigenvalues().reverse(), MatrixXc(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  return out;
}

MatrixXc unitary_exponential(const MatrixXc& h, double t) {
  const HermitianEigen eig = eig_hermitian(h);
  return spectral_apply(eig, [t](double lambda) { return std::polar(1.0, -t * lambda); });
}

}  // namespace tomolab
