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

#include "gtest/gtest.h"
#include "test_util.hpp"
#include "tomolab/simulate.hpp"

namespace tomolab {
namespace {

TEST(PrepareState, HitsFidelityBudget) {
  Rng rng(31);
  const ErrorModel model;
  for (int d : {4, 16}) {
    for (int k = 0; k < 100; ++k) {
      const PureState psi = haar_random_state(d, rng);
      const DensityMatrix rho = prepare_state(psi, model, rng);
      ASSERT_NEAR(fidelity_pure(psi, rho), 0.995, 1e-4);
    }
  }
}

TEST(PrepareState, DepolarizingOnlyMatchesClosedForm) {
  Rng rng(32);
  ErrorModel model;
  model.prep_coherent_fraction = 0.0;
  const PureState psi = haar_random_state(4, rng);
  const double lambda = 0.005 / (1.0 - 0.25);
  const MatrixXc expected = (1.0 - lambda) * psi.projector() + lambda / 4.0 * MatrixXc::Identity(4, 4);
  EXPECT_LT((prepare_state(psi, model, rng).matrix() - expected).norm(), 1e-12);
}

TEST(PrepareState, CoherentShareLowersPurityLess) {
  Rng rng(33);
  ErrorModel coherent;
  coherent.prep_coherent_fraction = 1.0;
  const PureState psi = haar_random_state(16, rng);
  const DensityMatrix rho = prepare_state(psi, coherent, rng);
  EXPECT_NEAR((rho.matrix() * rho.matrix()).trace().real(), 1.0, 1e-10);
  EXPECT_NEAR(fidelity_pure(psi, rho), 0.995, 1e-10);
}

TEST(PrepareState, NoiselessIsExact) {
  Rng rng(34);
  const PureState psi = haar_random_state(16, rng);
  EXPECT_LT((prepare_state(psi, ErrorModel::noiseless(), rng).matrix() - psi.projector()).norm(), 1e-14);
}

TEST(Measure, NoiselessFollowsBornRule) {
  Rng rng(35);
  const ErrorModel model = ErrorModel::noiseless();
  for (const std::string& name : {"mub", "sic", "psi"}) {
    const Povm povm = build_named(name, 4);
    const DensityMatrix rho(testing::random_density(4, 2, rng));
    const Eigen::VectorXd expected = povm.probabilities(rho);
    const MeasurementRecord record = measure(rho, povm, model, rng);
    EXPECT_LT((record.flattened() - expected).cwiseAbs().maxCoeff(), 1e-12) << name;
    EXPECT_LT((ideal_record(rho, povm).flattened() - expected).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Measure, ErrorFreeDilationFollowsBornRule) {
  Rng rng(36);
  ErrorModel model = ErrorModel::noiseless();
  model.embedding_dim = 16;
  for (const std::string& name : {"mub", "sic", "5gmb"}) {
    const Povm povm = build_named(name, 4);
    const DensityMatrix rho(testing::random_density(4, 1, rng));
    const MeasurementRecord record = measure(rho, povm, model, rng);
    EXPECT_LT((record.flattened() - povm.probabilities(rho)).cwiseAbs().maxCoeff(), 1e-12) << name;
  }
}

TEST(Measure, PerturbedRecordIsPerturbedBornRule) {
  // Oracle: Tr(E U^dagger rho U) computed directly from the stored unitary.
  Rng rng(37);
  ErrorModel model;
  model.freq_noise_sigma = 0.0;
  const Povm povm = build_mub(4);
  const SystematicErrors errors = SystematicErrors::draw(povm, model, 5, 6);
  const DensityMatrix rho(testing::random_density(4, 1, rng));
  const MeasurementRecord record = measure(rho, povm, errors, model, rng);
  for (std::size_t i = 0; i < povm.num_settings(); ++i) {
    const MatrixXc& u = errors.entries()[i].perturbation;
    EXPECT_LT((u.adjoint() * u - MatrixXc::Identity(4, 4)).norm(), 1e-10);
    for (std::size_t mu = 0; mu < 4; ++mu) {
      const double p = (povm.settings()[i].effects[mu].matrix() * u.adjoint() * rho.matrix() * u).trace().real();
      EXPECT_NEAR(record.settings[i].frequencies[mu], p, 1e-12);
    }
  }
}

TEST(SystematicErrorsTable, FixedPerRunAndDistinctPerSetting) {
  const Povm povm = build_mub(4);
  const ErrorModel model;
  const SystematicErrors a = SystematicErrors::draw(povm, model, 1, 2);
  const SystematicErrors b = SystematicErrors::draw(povm, model, 1, 2);
  const SystematicErrors other = SystematicErrors::draw(povm, model, 1, 3);
  for (std::size_t i = 0; i < povm.num_settings(); ++i) {
    EXPECT_EQ((a.entries()[i].perturbation - b.entries()[i].perturbation).norm(), 0.0);
    EXPECT_GT((a.entries()[i].perturbation - other.entries()[i].perturbation).norm(), 1e-3);
  }
  EXPECT_GT((a.entries()[0].perturbation - a.entries()[1].perturbation).norm(), 1e-3);
}

TEST(SystematicErrorsTable, SettingsAreUncorrelatedAcrossRuns) {
  const Povm povm = build_mub(4);
  const ErrorModel model;
  const int runs = 400;
  Eigen::VectorXd a(runs), b(runs);
  for (int r = 0; r < runs; ++r) {
    const SystematicErrors table = SystematicErrors::draw(povm, model, static_cast<std::uint64_t>(r), 1);
    a(r) = table.entries()[0].perturbation(0, 1).real();
    b(r) = table.entries()[1].perturbation(0, 1).real();
  }
  const Eigen::ArrayXd ca = a.array() - a.mean();
  const Eigen::ArrayXd cb = b.array() - b.mean();
  const double corr = (ca * cb).sum() / std::sqrt(ca.square().sum() * cb.square().sum());
  // |corr| of independent samples has standard error 1/sqrt(runs) = 0.05.
  EXPECT_LT(std::abs(corr), 0.2);
}

TEST(SystematicErrorsTable, CorrelatedWaveformsShareOnePerturbation) {
  ErrorModel model;
  model.correlated_waveforms = true;
  const Povm povm = build_mub(4);
  const SystematicErrors table = SystematicErrors::draw(povm, model, 1, 2);
  for (std::size_t i = 1; i < povm.num_settings(); ++i) {
    EXPECT_EQ((table.entries()[i].perturbation - table.entries()[0].perturbation).norm(), 0.0);
  }
}

TEST(SystematicErrorsTable, SameTableGivesSameBiasForEveryState) {
  ErrorModel model;
  model.freq_noise_sigma = 0.0;
  const Povm povm = build_gmb_5(16);
  const SystematicErrors table = SystematicErrors::draw(povm, model, 9, 9);
  Rng rng(38);
  const DensityMatrix rho(testing::random_density(16, 1, rng));
  const Eigen::VectorXd first = measure(rho, povm, table, model, rng).flattened();
  const Eigen::VectorXd second = measure(rho, povm, table, model, rng).flattened();
  EXPECT_EQ((first - second).norm(), 0.0);
  EXPECT_GT((first - povm.probabilities(rho)).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Measure, NoiseHasRequestedSpread) {
  ErrorModel model = ErrorModel::noiseless();
  model.freq_noise_sigma = 0.01;
  const Povm mub = build_mub(4);
  const Povm psi = build_psi(4);
  const DensityMatrix rho = DensityMatrix::maximally_mixed(4);
  Rng rng(39);
  const int draws = 4000;
  double sum_sq_mub = 0.0;
  double sum_sq_psi = 0.0;
  for (int k = 0; k < draws; ++k) {
    sum_sq_mub += std::pow(measure(rho, mub, model, rng).settings[0].frequencies[0] - 0.25, 2);
    sum_sq_psi += std::pow(measure(rho, psi, model, rng).settings[0].frequencies[0] - psi.probabilities(rho)(0), 2);
  }
  EXPECT_NEAR(std::sqrt(sum_sq_mub / draws), 0.01, 0.0005);
  EXPECT_NEAR(std::sqrt(sum_sq_psi / draws), 0.01 / std::sqrt(10.0 / 4.0), 0.0005);
}

TEST(Measure, FrequenciesAreClipped) {
  ErrorModel model = ErrorModel::noiseless();
  model.freq_noise_sigma = 0.15;
  Rng rng(40);
  const DensityMatrix rho = DensityMatrix::from_pure(PureState::basis(4, 0));
  for (int k = 0; k < 50; ++k) {
    for (double f : measure(rho, build_mub(4), model, rng).flattened()) {
      ASSERT_GE(f, 0.0);
      ASSERT_LE(f, 1.0);
    }
  }
}

TEST(ErrorModelValidation, RejectsBadParameters) {
  ErrorModel m;
  m.freq_noise_sigma = 0.2;
  EXPECT_THROW(m.validate(), InvalidInput);
  m = ErrorModel{};
  m.epsilon_map = -0.1;
  EXPECT_THROW(m.validate(), InvalidInput);
  Rng rng(1);
  ErrorModel big;
  big.prep_infidelity = 0.9;
  EXPECT_THROW(prepare_state(PureState::basis(4, 0), big, rng), InvalidInput);
}

}  // namespace
}  // namespace tomolab
