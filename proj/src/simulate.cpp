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

#include "tomolab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tomolab {

void ErrorModel::validate() const {
  if (!(epsilon_map >= 0.0) || !(freq_noise_sigma >= 0.0) || !(prep_infidelity >= 0.0) ||
      !(prep_coherent_fraction >= 0.0) || prep_coherent_fraction > 1.0 || embedding_dim < 0) {
    throw InvalidInput("ErrorModel: parameters must be non-negative");
  }
  if (!(freq_noise_sigma < 0.2)) throw InvalidInput("ErrorModel: freq_noise_sigma must be below 0.2");
}

Eigen::VectorXd MeasurementRecord::flattened() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(total_outcomes()));
  Eigen::Index j = 0;
  for (const SettingFrequencies& s : settings) {
    for (double f : s.frequencies) out(j++) = f;
  }
  return out;
}

std::size_t MeasurementRecord::total_outcomes() const {
  std::size_t n = 0;
  for (const SettingFrequencies& s : settings) n += s.frequencies.size();
  return n;
}

SystematicErrors SystematicErrors::draw(const Povm& povm, const ErrorModel& model, std::uint64_t master,
                                        std::uint64_t povm_key) {
  model.validate();
  const int dim = povm.dim();
  const bool dilate = model.embedding_dim > dim;
  const int big = dilate ? model.embedding_dim : dim;
  SystematicErrors out;
  for (std::size_t i = 0; i < povm.num_settings(); ++i) {
    const PovmSetting& setting = povm.settings()[i];
    Rng rng = Rng::stream(master, {povm_key, 0x657272ULL, model.correlated_waveforms ? 0 : i});
    const UnitaryMap u_err = random_perturbation_unitary(big, model.epsilon_map, rng);
    Entry entry;
    entry.dilated = dilate;
    if (dilate) {
      const NeumarkEmbedding emb = neumark_embed(setting, big);
      const MatrixXc total = u_err.matrix() * emb.unitary.matrix().leftCols(dim);
      entry.outcome_rows.resize(static_cast<Eigen::Index>(emb.sublevel.size()), dim);
      for (std::size_t mu = 0; mu < emb.sublevel.size(); ++mu) {
        entry.outcome_rows.row(static_cast<Eigen::Index>(mu)) = total.row(emb.sublevel[mu]);
      }
    } else {
      entry.perturbation = u_err.matrix();
    }
    out.entries_.push_back(std::move(entry));
  }
  return out;
}

DensityMatrix prepare_state(const PureState& target, const ErrorModel& model, Rng& rng) {
  model.validate();
  const int dim = target.dim();
  const double fidelity_target = 1.0 - model.prep_infidelity;
  if (model.prep_infidelity > 1.0 - 1.0 / dim) {
    throw InvalidInput("prepare_state: prep_infidelity exceeds 1 - 1/d");
  }
  // Coherent part: rotate along a random GUE direction until the overlap loss
  // equals the coherent share of the budget.
  const HermitianEigen gen = eig_hermitian(gue_generator(dim, rng));
  const Eigen::VectorXd weights = (gen.vectors.adjoint() * target.amplitudes()).cwiseAbs2();
  auto overlap_loss = [&](double s) {
    cplx amp = 0.0;
    for (int k = 0; k < dim; ++k) amp += weights(k) * std::polar(1.0, -s * gen.values(k));
    return 1.0 - std::norm(amp);
  };
  const double coherent_target = model.prep_coherent_fraction * model.prep_infidelity;
  double angle = 0.0;
  if (coherent_target > 0.0) {
    double hi = 1e-3;
    while (overlap_loss(hi) < coherent_target && hi < 4.0) hi *= 2.0;
    if (overlap_loss(hi) >= coherent_target) {
      double lo = 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (overlap_loss(mid) < coherent_target ? lo : hi) = mid;
      }
      angle = 0.5 * (lo + hi);
    }
  }
  VectorXc rotated = target.amplitudes();
  if (angle > 0.0) {
    rotated = spectral_apply(gen, [angle](double l) { return std::polar(1.0, -angle * l); }) * target.amplitudes();
  }
  const double rotated_fidelity = std::norm(target.amplitudes().dot(rotated));
  double lambda = 0.0;
  if (rotated_fidelity > fidelity_target) {
    lambda = (rotated_fidelity - fidelity_target) / (rotated_fidelity - 1.0 / dim);
  }
  MatrixXc rho = (1.0 - lambda) * (rotated * rotated.adjoint()) +
                 lambda / dim * MatrixXc::Identity(dim, dim);
  return DensityMatrix(hermitian_part(rho));
}

namespace {

void check_probability(double p) {
  if (p < -1e-9) throw NumericalError("measure: negative probability " + std::to_string(p));
}

}  // namespace

MeasurementRecord measure(const DensityMatrix& rho, const Povm& povm, const SystematicErrors& errors,
                          const ErrorModel& model, Rng& rng) {
  model.validate();
  if (rho.dim() != povm.dim()) throw InvalidInput("measure: state and POVM dimensions differ");
  if (errors.entries().size() != povm.num_settings()) throw InvalidInput("measure: error table does not match POVM");
  MeasurementRecord record;
  record.povm_id = povm.name();
  record.error_model = model;
  for (std::size_t i = 0; i < povm.num_settings(); ++i) {
    const PovmSetting& setting = povm.settings()[i];
    const SystematicErrors::Entry& entry = errors.entries()[i];
    const std::size_t n = setting.effects.size();
    std::vector<double> nu(n);
    if (entry.dilated) {
      const MatrixXc m = entry.outcome_rows * rho.matrix() * entry.outcome_rows.adjoint();
      for (std::size_t mu = 0; mu < n; ++mu) nu[mu] = m(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(mu)).real();
    } else {
      const MatrixXc rotated = entry.perturbation.adjoint() * rho.matrix() * entry.perturbation;
      for (std::size_t mu = 0; mu < n; ++mu) nu[mu] = trace_product(setting.effects[mu].matrix(), rotated).real();
    }
    const double sigma = model.freq_noise_sigma / std::sqrt(static_cast<double>(n) / povm.dim());
    for (double& f : nu) {
      check_probability(f);
      if (sigma > 0.0) f += sigma * rng.normal();
      f = std::clamp(f, 0.0, 1.0);
    }
    record.settings.push_back({setting.label, std::move(nu)});
  }
  return record;
}

MeasurementRecord measure(const DensityMatrix& rho, const Povm& povm, const ErrorModel& model, Rng& rng) {
  const SystematicErrors errors = SystematicErrors::draw(povm, model, rng.next_u64(), 0);
  return measure(rho, povm, errors, model, rng);
}

MeasurementRecord ideal_record(const DensityMatrix& rho, const Povm& povm) {
  if (rho.dim() != povm.dim()) throw InvalidInput("ideal_record: state and POVM dimensions differ");
  MeasurementRecord record;
  record.povm_id = povm.name();
  record.error_model = ErrorModel::noiseless();
  const Eigen::VectorXd p = povm.probabilities(rho);
  Eigen::Index j = 0;
  for (const PovmSetting& s : povm.settings()) {
    std::vector<double> nu(s.effects.size());
    for (double& f : nu) f = std::max(p(j++), 0.0);
    record.settings.push_back({s.label, std::move(nu)});
  }
  return record;
}

}  // namespace tomolab
