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

#include "tomolab/estimate.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <string>

namespace tomolab {

MatrixXc project_psd_simplex(const MatrixXc& a) {
  const HermitianEigen eig = eig_hermitian(a);
  const Eigen::VectorXd spectrum = project_simplex<double>(eig.values);
  return hermitian_part(MatrixXc(eig.vectors * spectrum.cast<cplx>().asDiagonal() * eig.vectors.adjoint()));
}

DensityMatrix project_psd_simplex(const HermitianOperator& a) { return DensityMatrix(project_psd_simplex(a.matrix())); }

LinearMeasurement::LinearMeasurement(const Povm& povm) : dim_(povm.dim()) {
  const Eigen::Index n = static_cast<Eigen::Index>(povm.total_outcomes());
  map_.resize(n, static_cast<Eigen::Index>(dim_) * dim_);
  stacked_.resize(n * dim_, dim_);
  Eigen::Index row = 0;
  for (const PovmSetting& s : povm.settings()) {
    for (const HermitianOperator& e : s.effects) {
      map_.row(row) = hermitian_to_real(e.matrix()).transpose();
      stacked_.middleRows(row * dim_, dim_) = e.matrix();
      ++row;
    }
  }
}

Eigen::VectorXd LinearMeasurement::probabilities(const MatrixXc& rho) const { return map_ * hermitian_to_real(rho); }

MatrixXc LinearMeasurement::weighted_sum(const Eigen::VectorXd& weights) const {
  const Eigen::VectorXd coords = map_.transpose() * weights;
  return real_to_hermitian<double>(coords, dim_);
}

double negative_log_likelihood(const Eigen::VectorXd& frequencies, const Eigen::VectorXd& probabilities, double floor) {
  double f = 0.0;
  for (Eigen::Index j = 0; j < frequencies.size(); ++j) {
    const double nu = std::max(frequencies(j), 0.0);
    if (nu > 0.0) f -= nu * std::log(std::max(probabilities(j), floor));
  }
  return f;
}

namespace {

// Objective as a function of the outcome probabilities p.
struct Objective {
  std::function<double(const Eigen::VectorXd&)> value;
  // f(p + dp) - f(p), evaluated without cancellation against f itself.
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> change;
  // df/dp_j
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> slope;
  // Gauss-Newton (Fisher) curvature weights: H ~ sum_j c_j grad p_j grad p_j^T
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> curvature;
};

double frobenius_inner(const MatrixXc& a, const MatrixXc& b) { return a.cwiseProduct(b.conjugate()).sum().real(); }

// Identity components carry no information on the unit-trace set but turn
// rounding in the trace of a step into spurious objective changes.
MatrixXc traceless(MatrixXc a) {
  const double shift = a.trace().real() / static_cast<double>(a.rows());
  a.diagonal().array() -= shift;
  return a;
}

MatrixXc from_factor(const MatrixXc& a) {
  const MatrixXc rho = a * a.adjoint();
  return hermitian_part(MatrixXc(rho / rho.trace().real()));
}

// Damped Fisher scoring over rho = A A^dagger / Tr(A A^dagger) with A of
// width `rank`, started from the leading eigenvectors of rho.
MatrixXc factored_refinement(const LinearMeasurement& map, const Objective& obj, const MatrixXc& rho, int rank) {
  const int dim = map.dim();
  const Eigen::Index n_out = map.outcomes();
  const HermitianEigen eig = eig_hermitian(rho);
  MatrixXc a(dim, rank);
  for (int k = 0; k < rank; ++k) a.col(k) = std::sqrt(std::max(eig.values(k), 1e-12)) * eig.vectors.col(k);
  const Eigen::Index n_par = 2 * static_cast<Eigen::Index>(dim) * rank;

  auto jacobian = [&](const MatrixXc& fa, Eigen::VectorXd& p, Eigen::MatrixXd& jac) {
    const double norm = fa.squaredNorm();
    const MatrixXc ea = map.stacked_effects() * fa;  // rows j*d .. j*d+d-1 hold E_j A
    p.resize(n_out);
    jac.resize(n_out, n_par);
    for (Eigen::Index j = 0; j < n_out; ++j) {
      const auto block = ea.middleRows(j * dim, dim);
      const double t = fa.cwiseProduct(block.conjugate()).sum().real();
      p(j) = t / norm;
      for (int l = 0; l < rank; ++l) {
        for (int k = 0; k < dim; ++k) {
          const Eigen::Index idx = 2 * (static_cast<Eigen::Index>(l) * dim + k);
          const cplx b = block(k, l);
          const cplx x = fa(k, l);
          jac(j, idx) = (2.0 * b.real() - p(j) * 2.0 * x.real()) / norm;
          jac(j, idx + 1) = (2.0 * b.imag() - p(j) * 2.0 * x.imag()) / norm;
        }
      }
    }
  };
  auto apply_step = [&](const MatrixXc& fa, const Eigen::VectorXd& step) {
    MatrixXc out = fa;
    for (int l = 0; l < rank; ++l) {
      for (int k = 0; k < dim; ++k) {
        const Eigen::Index idx = 2 * (static_cast<Eigen::Index>(l) * dim + k);
        out(k, l) += cplx(step(idx), step(idx + 1));
      }
    }
    return MatrixXc(out / out.norm());
  };

  a /= a.norm();
  Eigen::VectorXd p;
  Eigen::MatrixXd jac;
  jacobian(a, p, jac);
  double f = obj.value(p);
  double mu = 1e-6;
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd grad = jac.transpose() * obj.slope(p);
    const Eigen::VectorXd c = obj.curvature(p);
    // more parameters than outcomes: solve the damped system in outcome space
    const bool dual = jac.cols() > jac.rows();
    Eigen::MatrixXd h;
    if (dual) {
      h = c.asDiagonal() * (jac * jac.transpose());
    } else {
      h = jac.transpose() * c.asDiagonal() * jac;
    }
    const double scale = std::max(h.diagonal().maxCoeff(), 1e-300);
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      Eigen::MatrixXd damped = h;
      damped.diagonal().array() += mu * scale;
      Eigen::VectorXd step;
      if (dual) {
        step = -(jac.transpose() * damped.partialPivLu().solve(obj.slope(p)));
      } else {
        step = damped.ldlt().solve(-grad);
      }
      if (!step.allFinite()) {
        mu *= 10.0;
        continue;
      }
      const MatrixXc candidate = apply_step(a, step);
      Eigen::VectorXd p_new;
      Eigen::MatrixXd jac_new;
      jacobian(candidate, p_new, jac_new);
      const double delta = obj.change(p, p_new - p);
      if (delta < 0.0) {
        accepted = -delta > 1e-17 * std::max(1.0, std::abs(f));
        a = candidate;
        p = std::move(p_new);
        jac = std::move(jac_new);
        f += delta;
        mu = std::max(mu * 0.1, 1e-15);
        if (!accepted) return from_factor(a);
      } else {
        mu *= 10.0;
      }
    }
    if (!accepted) break;
  }
  return from_factor(a);
}

std::vector<int> refinement_ranks(const MatrixXc& rho, int max_rank) {
  const Eigen::VectorXd values = eig_hermitian(rho).values;
  std::vector<int> ranks{1};
  for (double threshold : {1e-2, 1e-3, 1e-5}) {
    int r = 0;
    while (r < values.size() && values(r) > threshold) ++r;
    r = std::max(r, 1);
    if (r <= max_rank && std::find(ranks.begin(), ranks.end(), r) == ranks.end()) ranks.push_back(r);
  }
  return ranks;
}

EstimatorResult projected_gradient(const LinearMeasurement& map, const Objective& obj, const EstimatorOptions& options) {
  const int dim = map.dim();
  MatrixXc rho = MatrixXc::Identity(dim, dim) / static_cast<double>(dim);
  Eigen::VectorXd p = map.probabilities(rho);
  double f = obj.value(p);
  MatrixXc grad = traceless(map.weighted_sum(obj.slope(p)));
  double step = 1.0 / std::max(grad.norm(), 1e-300);
  double residual = (rho - project_psd_simplex(MatrixXc(rho - grad))).norm();

  int it = 0;
  int next_refinement = 50;
  bool stalled = false;
  while (it < options.max_iterations && residual >= options.tolerance && !stalled) {
    ++it;
    double trial = step;
    const double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f));
    MatrixXc next;
    Eigen::VectorXd p_next;
    double f_next = 0.0;
    for (;;) {
      next = project_psd_simplex(MatrixXc(rho - trial * grad));
      const MatrixXc s = traceless(next - rho);
      const Eigen::VectorXd dp = map.probabilities(s);
      const double delta = obj.change(p, dp);
      if (delta <= options.armijo * frobenius_inner(grad, s)) {
        p_next = map.probabilities(next);
        f_next = f + delta;
        break;
      }
      // Near the optimum the predicted decrease drops below the rounding of
      // the projected step. Such a step is kept only if it lowers the
      // optimality residual.
      if (delta <= noise_floor) {
        const Eigen::VectorXd p_try = map.probabilities(next);
        const MatrixXc g_try = traceless(map.weighted_sum(obj.slope(p_try)));
        if ((next - project_psd_simplex(MatrixXc(next - g_try))).norm() < residual) {
          p_next = p_try;
          f_next = f + delta;
          break;
        }
      }
      trial *= 0.5;
      if (trial < 1e-30) {
        stalled = true;
        break;
      }
    }
    if (stalled) break;
    if (it == next_refinement && options.polish_max_rank > 0) {
      next_refinement *= 2;
      for (int rank : refinement_ranks(next, options.polish_max_rank)) {
        const MatrixXc refined = factored_refinement(map, obj, next, rank);
        const Eigen::VectorXd dp = map.probabilities(traceless(refined - next));
        const double delta = obj.change(p_next, dp);
        if (delta < 0.0) {
          next = refined;
          p_next = map.probabilities(next);
          f_next += delta;
        }
      }
    }
    const MatrixXc grad_next = traceless(map.weighted_sum(obj.slope(p_next)));
    const MatrixXc s = next - rho;
    const MatrixXc y = grad_next - grad;
    const double sy = frobenius_inner(s, y);
    const double ss = s.squaredNorm();
    step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : std::min(2.0 * trial, 1e12);
    rho = std::move(next);
    p = std::move(p_next);
    f = f_next;
    grad = grad_next;
    residual = (rho - project_psd_simplex(MatrixXc(rho - grad))).norm();
  }
  return EstimatorResult{DensityMatrix(hermitian_part(rho)), obj.value(p), it, residual < options.tolerance, residual};
}

void check_frequencies(const Eigen::VectorXd& frequencies, const LinearMeasurement& map) {
  if (frequencies.size() == 0) throw InvalidInput("estimate: empty record");
  if (frequencies.size() != map.outcomes()) {
    throw InvalidInput("estimate: record has " + std::to_string(frequencies.size()) + " outcomes, POVM has " +
                       std::to_string(map.outcomes()));
  }
  if (!frequencies.allFinite()) throw InvalidInput("estimate: non-finite frequency");
}

Eigen::VectorXd aligned_frequencies(const MeasurementRecord& record, const Povm& povm) {
  if (record.settings.size() != povm.num_settings()) throw InvalidInput("estimate: record settings do not match POVM");
  for (std::size_t i = 0; i < record.settings.size(); ++i) {
    if (record.settings[i].frequencies.size() != povm.settings()[i].effects.size()) {
      throw InvalidInput("estimate: setting '" + record.settings[i].label + "' has the wrong number of outcomes");
    }
  }
  return record.flattened();
}

}  // namespace

EstimatorResult mle_estimate(const Eigen::VectorXd& frequencies, const LinearMeasurement& map,
                             const EstimatorOptions& options) {
  check_frequencies(frequencies, map);
  const Eigen::VectorXd nu = frequencies.cwiseMax(0.0);
  if (!(nu.sum() > 0.0)) throw InvalidInput("mle_estimate: all frequencies are zero");
  const double floor = options.probability_floor;
  Objective obj{[&](const Eigen::VectorXd& p) { return negative_log_likelihood(nu, p, floor); },
                [&](const Eigen::VectorXd& p, const Eigen::VectorXd& dp) {
                  double delta = 0.0;
                  for (Eigen::Index j = 0; j < p.size(); ++j) {
                    if (nu(j) <= 0.0) continue;
                    const double before = std::max(p(j), floor);
                    const double after = std::max(p(j) + dp(j), floor);
                    delta -= nu(j) * std::log1p((after - before) / before);
                  }
                  return delta;
                },
                [&](const Eigen::VectorXd& p) {
                  Eigen::VectorXd w(p.size());
                  for (Eigen::Index j = 0; j < p.size(); ++j) w(j) = -nu(j) / std::max(p(j), floor);
                  return w;
                },
                [&](const Eigen::VectorXd& p) {
                  Eigen::VectorXd w(p.size());
                  for (Eigen::Index j = 0; j < p.size(); ++j) {
                    const double q = std::max(p(j), floor);
                    w(j) = nu(j) / (q * q);
                  }
                  return w;
                }};
  return projected_gradient(map, obj, options);
}

EstimatorResult mle_estimate(const Eigen::VectorXd& frequencies, const Povm& povm, const EstimatorOptions& options) {
  return mle_estimate(frequencies, LinearMeasurement(povm), options);
}

EstimatorResult mle_estimate(const MeasurementRecord& record, const Povm& povm, const EstimatorOptions& options) {
  return mle_estimate(aligned_frequencies(record, povm), LinearMeasurement(povm), options);
}

EstimatorResult lsq_estimate(const Eigen::VectorXd& frequencies, const LinearMeasurement& map,
                             const EstimatorOptions& options) {
  check_frequencies(frequencies, map);
  Objective obj{[&](const Eigen::VectorXd& p) { return (frequencies - p).squaredNorm(); },
                [&](const Eigen::VectorXd& p, const Eigen::VectorXd& dp) {
                  return dp.dot(dp - 2.0 * (frequencies - p));
                },
                [&](const Eigen::VectorXd& p) { return Eigen::VectorXd(-2.0 * (frequencies - p)); },
                [&](const Eigen::VectorXd& p) { return Eigen::VectorXd::Constant(p.size(), 2.0); }};
  return projected_gradient(map, obj, options);
}

EstimatorResult lsq_estimate(const MeasurementRecord& record, const Povm& povm, const EstimatorOptions& options) {
  return lsq_estimate(aligned_frequencies(record, povm), LinearMeasurement(povm), options);
}

}  // namespace tomolab
