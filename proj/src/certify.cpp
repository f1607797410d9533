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

#include "tomolab/certify.hpp"

#include <algorithm>

namespace tomolab {

double tangent_injectivity(const MeasurementMap& map, const PureState& psi) {
  const int dim = psi.dim();
  const VectorXc& v = psi.amplitudes();
  // Orthonormal complement of psi; tangent directions |t><psi| + |psi><t|
  // with t = u or t = i u for each complement vector u.
  const MatrixXc column = v;
  Eigen::HouseholderQR<MatrixXc> qr(column);
  const MatrixXc q = qr.householderQ() * MatrixXc::Identity(dim, dim);
  Eigen::MatrixXd tangent(static_cast<Eigen::Index>(dim) * dim, 2 * (dim - 1));
  for (int k = 1; k < dim; ++k) {
    for (int part = 0; part < 2; ++part) {
      const VectorXc t = (part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0)) * q.col(k);
      const MatrixXc direction = t * v.adjoint() + v * t.adjoint();
      tangent.col(2 * (k - 1) + part) = hermitian_to_real(direction);
    }
  }
  const Eigen::MatrixXd restricted = map.matrix * tangent;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted);
  return svd.singularValues().minCoeff();
}

IcReport certify_ic(const Povm& povm, const CertifyOptions& options) {
  const int dim = povm.dim();
  const MeasurementMap map = measurement_map(povm);
  IcReport report;
  report.dim = dim;
  report.rank = map.rank;
  report.kernel_dim = static_cast<int>(map.kernel.cols());
  report.fully_ic = map.rank == dim * dim;

  Rng rng = Rng::stream(options.seed, {0});
  int pairs_ok = 0;
  int local_ok = 0;
  for (int k = 0; k < options.distinguishability_pairs; ++k) {
    const PureState a = haar_random_state(dim, rng);
    const PureState b = haar_random_state(dim, rng);
    const double gap = (povm.probabilities(a) - povm.probabilities(b)).cwiseAbs().maxCoeff();
    if (gap > 1e-8) ++pairs_ok;
    if (tangent_injectivity(map, a) > 1e-6) ++local_ok;
  }
  const double n_pairs = std::max(options.distinguishability_pairs, 1);
  report.r1_pair_fraction = pairs_ok / n_pairs;
  report.r1_local_fraction = local_ok / n_pairs;
  report.r1_distinguishable = options.distinguishability_pairs > 0 && pairs_ok == options.distinguishability_pairs &&
                              local_ok == options.distinguishability_pairs;

  const LinearMeasurement linear(povm);
  Rng state_rng = Rng::stream(options.seed, {1});
  int strict_ok = 0;
  for (int k = 0; k < options.strictness_states; ++k) {
    const PureState psi = haar_random_state(dim, state_rng);
    const EstimatorResult est = mle_estimate(povm.probabilities(psi), linear, options.estimator);
    const double delta = infidelity(psi, est.rho_hat);
    report.strictness_max_infidelity = std::max(report.strictness_max_infidelity, delta);
    if (delta < options.strictness_threshold) ++strict_ok;
  }
  report.strictness_samples = options.strictness_states;
  report.strictness_fraction = strict_ok / static_cast<double>(std::max(options.strictness_states, 1));
  report.strictness_evidence = options.strictness_states > 0 && strict_ok == options.strictness_states;
  return report;
}

}  // namespace tomolab
