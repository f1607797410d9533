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

#include <algorithm>
#include <cmath>
#include <vector>

#include "tomolab/types.hpp"

namespace tomolab {

/// Largest elementwise deviation |A - A^dagger|.
template <typename Derived>
typename Derived::RealScalar hermiticity_deviation(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& a) {
  return (0.5 * (a + a.adjoint())).eval();
}

/// Euclidean projection of a real vector onto the probability simplex
/// {x >= 0, sum x = 1}, by the sort-and-threshold method.
template <typename Scalar>
RVector<Scalar> project_simplex(const RVector<Scalar>& v) {
  const Eigen::Index n = v.size();
  std::vector<Scalar> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());
  Scalar cumulative = 0;
  Scalar threshold = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += sorted[k];
    const Scalar candidate = (cumulative - Scalar(1)) / Scalar(k + 1);
    if (sorted[k] - candidate > 0) threshold = candidate;
  }
  return (v.array() - threshold).cwiseMax(Scalar(0)).matrix();
}

/// Orthonormal real coordinates of a Hermitian matrix: diagonal entries,
/// then sqrt(2) Re and sqrt(2) Im of the strict upper triangle. The map is
/// an isometry from the Frobenius inner product to the Euclidean one.
template <typename Derived>
RVector<typename Derived::RealScalar> hermitian_to_real(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  const Eigen::Index d = a.rows();
  RVector<Real> out(d * d);
  const Real root2 = std::sqrt(Real(2));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) out(k++) = std::real(a(i, i));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      out(k++) = root2 * std::real(a(i, j));
      out(k++) = root2 * std::imag(a(i, j));
    }
  }
  return out;
}

template <typename Scalar>
CMatrix<Scalar> real_to_hermitian(const RVector<Scalar>& x, Eigen::Index d) {
  CMatrix<Scalar> a = CMatrix<Scalar>::Zero(d, d);
  const Scalar inv_root2 = Scalar(1) / std::sqrt(Scalar(2));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) a(i, i) = x(k++);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const Complex<Scalar> z(x(k) * inv_root2, x(k + 1) * inv_root2);
      k += 2;
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  return a;
}

/// Spectral decomposition A = V diag(values) V^dagger, values descending.
struct HermitianEigen {
  Eigen::VectorXd values;
  MatrixXc vectors;
};

/// Throws InvalidInput when A deviates from Hermitian by more than `tolerance`
/// (elementwise). The Hermitian part is decomposed.
HermitianEigen eig_hermitian(const MatrixXc& a, double tolerance = tol::kHermitianInput);

/// V diag(f(values)) V^dagger for a real spectral function f.
template <typename Fn>
MatrixXc spectral_apply(const HermitianEigen& eig, Fn&& fn) {
  Eigen::VectorXcd mapped(eig.values.size());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) mapped(k) = fn(eig.values(k));
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

/// exp(-i t H) for Hermitian H.
MatrixXc unitary_exponential(const MatrixXc& h, double t);

/// Tr(A B) for square matrices without forming the product.
template <typename DA, typename DB>
auto trace_product(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  return (a.transpose().cwiseProduct(b)).sum();
}

}  // namespace tomolab
