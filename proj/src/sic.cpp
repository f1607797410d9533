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

#include <cmath>
#include <numbers>
#include <string>

#include "tomolab/povm.hpp"

namespace tomolab {

MatrixXc weyl_heisenberg(int dim, int shift, int clock) {
  MatrixXc d = MatrixXc::Zero(dim, dim);
  // X^shift Z^clock |m> = w^(clock m) |m + shift>.
  for (int m = 0; m < dim; ++m) {
    d((m + shift) % dim, m) = std::polar(1.0, 2.0 * std::numbers::pi * ((clock * m) % dim) / dim);
  }
  return d;
}

double sic_pair_residual(const VectorXc& fiducial) {
  const int dim = static_cast<int>(fiducial.size());
  const VectorXc phi = fiducial.normalized();
  std::vector<VectorXc> orbit;
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) orbit.push_back(weyl_heisenberg(dim, j, k) * phi);
  }
  const double target = 1.0 / (dim + 1);
  double total = 0.0;
  for (std::size_t a = 0; a < orbit.size(); ++a) {
    for (std::size_t b = a + 1; b < orbit.size(); ++b) {
      const double r = std::norm(orbit[a].dot(orbit[b])) - target;
      total += r * r;
    }
  }
  return total;
}

namespace {

struct Displacements {
  std::vector<MatrixXc> ops;  // all (j, k) != (0, 0)
};

// Residuals r_jk = |<phi|D_jk|phi>|^2 / |phi|^4 - 1/(d+1) and their Jacobian
// over theta = (Re phi, Im phi).
void residuals_and_jacobian(const Displacements& disp, const Eigen::VectorXd& theta, Eigen::VectorXd& r,
                            Eigen::MatrixXd& jac) {
  const Eigen::Index dim = theta.size() / 2;
  VectorXc phi(dim);
  for (Eigen::Index k = 0; k < dim; ++k) phi(k) = cplx(theta(k), theta(dim + k));
  const double n = phi.squaredNorm();
  const double target = 1.0 / (dim + 1.0);
  const Eigen::Index m = static_cast<Eigen::Index>(disp.ops.size());
  r.resize(m);
  jac.resize(m, 2 * dim);
  for (Eigen::Index a = 0; a < m; ++a) {
    const VectorXc dphi = disp.ops[a] * phi;
    const VectorXc ddag_phi = disp.ops[a].adjoint() * phi;
    const cplx c = phi.dot(dphi);
    const double c2 = std::norm(c);
    r(a) = c2 / (n * n) - target;
    for (Eigen::Index k = 0; k < dim; ++k) {
      // Real direction e_k and imaginary direction i e_k.
      const cplx dc_re = dphi(k) + std::conj(ddag_phi(k));
      const cplx dc_im = cplx(0, -1) * dphi(k) + cplx(0, 1) * std::conj(ddag_phi(k));
      const double dn_re = 2.0 * theta(k);
      const double dn_im = 2.0 * theta(dim + k);
      jac(a, k) = 2.0 * std::real(std::conj(c) * dc_re) / (n * n) - 2.0 * c2 * dn_re / (n * n * n);
      jac(a, dim + k) = 2.0 * std::real(std::conj(c) * dc_im) / (n * n) - 2.0 * c2 * dn_im / (n * n * n);
    }
  }
}

Eigen::VectorXd levenberg_marquardt(const Displacements& disp, Eigen::VectorXd theta) {
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residuals_and_jacobian(disp, theta, r, jac);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  for (int it = 0; it < 500 && cost > 1e-30; ++it) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    Eigen::MatrixXd damped = jtj;
    damped.diagonal().array() += mu * (1.0 + jtj.diagonal().array());
    const Eigen::VectorXd step = damped.ldlt().solve(-grad);
    Eigen::VectorXd candidate = theta + step;
    candidate /= candidate.norm();
    Eigen::VectorXd r_new;
    Eigen::MatrixXd jac_new;
    residuals_and_jacobian(disp, candidate, r_new, jac_new);
    const double cost_new = r_new.squaredNorm();
    if (cost_new < cost) {
      theta = std::move(candidate);
      r = std::move(r_new);
      jac = std::move(jac_new);
      cost = cost_new;
      mu = std::max(mu / 3.0, 1e-12);
    } else {
      mu *= 4.0;
      if (mu > 1e12) break;
    }
  }
  return theta;
}

}  // namespace

SicFiducialSearch find_sic_fiducial(int dim, std::uint64_t seed, int max_restarts) {
  if (dim < 2 || dim > 8) throw InvalidInput("find_sic_fiducial: supported for 2 <= d <= 8");
  Displacements disp;
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      if (j != 0 || k != 0) disp.ops.push_back(weyl_heisenberg(dim, j, k));
    }
  }
  SicFiducialSearch best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < max_restarts; ++restart) {
    Rng rng = Rng::stream(seed, {static_cast<std::uint64_t>(restart)});
    const PureState start = haar_random_state(dim, rng);
    Eigen::VectorXd theta(2 * dim);
    theta << start.amplitudes().real(), start.amplitudes().imag();
    theta = levenberg_marquardt(disp, theta);
    VectorXc phi(dim);
    for (int k = 0; k < dim; ++k) phi(k) = cplx(theta(k), theta(dim + k));
    phi.normalize();
    const double residual = sic_pair_residual(phi);
    if (residual < best.residual) best = {phi, residual, restart + 1};
    if (residual < 1e-18) return best;
  }
  throw NumericalError("find_sic_fiducial: no restart converged; best residual " + std::to_string(best.residual));
}

Povm build_sic(int dim, const std::optional<VectorXc>& fiducial, std::uint64_t seed) {
  if (dim < 2 || dim > 8) throw InvalidInput("build_sic: supported for 2 <= d <= 8");
  VectorXc phi;
  if (fiducial) {
    if (fiducial->size() != dim) throw InvalidInput("build_sic: fiducial dimension mismatch");
    phi = fiducial->normalized();
    const double residual = sic_pair_residual(phi);
    // Pair overlaps within 1e-9 of 1/(d+1) bound the summed squares.
    if (!(residual <= 1e-18 * dim * dim * (dim * dim - 1) / 2.0)) {
      throw InvalidInput("build_sic: supplied fiducial is not equiangular (residual " + std::to_string(residual) + ")");
    }
  } else {
    phi = find_sic_fiducial(dim, seed).fiducial;
  }
  PovmSetting s{"sic", {}, false};
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      const VectorXc v = weyl_heisenberg(dim, j, k) * phi;
      s.effects.emplace_back(MatrixXc(v * v.adjoint() / static_cast<double>(dim)));
    }
  }
  return Povm("sic", dim, {std::move(s)}, IcClass::kFullyIc);
}

}  // namespace tomolab
