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

#include <string>

#include "tomolab/povm.hpp"

namespace tomolab {

VectorXc rank_one_vector(const HermitianOperator& effect) {
  const HermitianEigen eig = eig_hermitian(effect);
  if (eig.values.size() > 1 && !(eig.values(1) <= 1e-9)) {
    throw InvalidInput("effect is not rank-1 (second eigenvalue " + std::to_string(eig.values(1)) + ")");
  }
  return std::sqrt(std::max(eig.values(0), 0.0)) * eig.vectors.col(0);
}

NeumarkEmbedding neumark_embed(const PovmSetting& setting, int big_dim) {
  const int n = static_cast<int>(setting.effects.size());
  if (n == 0) throw InvalidInput("neumark_embed: empty setting");
  const int small_dim = setting.effects.front().dim();
  if (n > big_dim) {
    throw InvalidInput("neumark_embed: " + std::to_string(n) + " outcomes exceed dimension " + std::to_string(big_dim));
  }
  if (small_dim > big_dim) throw InvalidInput("neumark_embed: subspace larger than embedding space");

  // Isometry W (D x d) with row mu = <v_mu|; W^dagger W = sum E_mu = I.
  MatrixXc w = MatrixXc::Zero(big_dim, small_dim);
  for (int mu = 0; mu < n; ++mu) w.row(mu) = rank_one_vector(setting.effects[mu]).adjoint();

  // Complete with an orthonormal basis of range(W)^perp.
  Eigen::HouseholderQR<MatrixXc> qr(w);
  const MatrixXc q = qr.householderQ() * MatrixXc::Identity(big_dim, big_dim);
  MatrixXc u(big_dim, big_dim);
  u.leftCols(small_dim) = w;
  u.rightCols(big_dim - small_dim) = q.rightCols(big_dim - small_dim);

  const double isometry_residual = (w.adjoint() * w - MatrixXc::Identity(small_dim, small_dim)).norm();
  if (!(isometry_residual <= 1e-9)) {
    throw InvalidInput("neumark_embed: effects do not form a complete measurement (residual " +
                       std::to_string(isometry_residual) + ")");
  }

  NeumarkEmbedding out{UnitaryMap(std::move(u)), {}, small_dim, 0.0};
  // Projected effect of level mu: Pi U^dagger |mu><mu| U Pi^dagger.
  for (int mu = 0; mu < n; ++mu) {
    out.sublevel.push_back(mu);
    const VectorXc v = out.unitary.matrix().row(mu).leftCols(small_dim).adjoint();
    out.residual = std::max(out.residual, (MatrixXc(v * v.adjoint()) - setting.effects[mu].matrix()).norm());
  }
  if (!(out.residual <= 1e-9)) {
    throw NumericalError("neumark_embed: projected effects residual " + std::to_string(out.residual));
  }
  return out;
}

NeumarkEmbedding neumark_embed(const Povm& povm, int big_dim) {
  if (povm.num_settings() != 1) throw InvalidInput("neumark_embed: POVM must have exactly one setting");
  return neumark_embed(povm.settings().front(), big_dim);
}

}  // namespace tomolab
