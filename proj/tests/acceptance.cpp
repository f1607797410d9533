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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include "test_util.hpp"
#include "tomolab/bench.hpp"
#include "tomolab/certify.hpp"
#include "tomolab/tof.hpp"

namespace tomolab {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

VectorXc leading_vector(const HermitianOperator& e) { return eig_hermitian(e).vectors.col(0); }

Outcome povm_suite() {
  double mub_worst = 0.0;
  for (int d : {4, 16}) {
    const Povm mub = build_mub(d);
    std::vector<MatrixXc> bases;
    for (const PovmSetting& s : mub.settings()) {
      MatrixXc b(d, d);
      for (int k = 0; k < d; ++k) b.col(k) = leading_vector(s.effects[k]);
      bases.push_back(b);
    }
    for (std::size_t a = 0; a < bases.size(); ++a) {
      for (std::size_t b = a + 1; b < bases.size(); ++b) {
        mub_worst = std::max(mub_worst, ((bases[a].adjoint() * bases[b]).cwiseAbs2().array() - 1.0 / d).abs().maxCoeff());
      }
    }
  }
  const Povm sic = build_sic(4);
  double sic_worst = 0.0;
  int pairs = 0;
  const auto& effects = sic.settings()[0].effects;
  for (std::size_t a = 0; a < effects.size(); ++a) {
    for (std::size_t b = a + 1; b < effects.size(); ++b) {
      sic_worst = std::max(sic_worst, std::abs(std::norm(leading_vector(effects[a]).dot(leading_vector(effects[b]))) - 0.2));
      ++pairs;
    }
  }
  double completeness = 0.0;
  for (int d : {4, 16}) {
    for (const std::string& name : builtin_povm_names()) {
      if (name == "sic" && d > 8) continue;
      for (double r : build_named(name, d).completeness_residuals()) completeness = std::max(completeness, r);
    }
  }
  return {mub_worst < 1e-9 && sic_worst < 1e-9 && pairs == 120 && completeness < 1e-8,
          "MUB overlap dev " + fmt(mub_worst) + ", SIC overlap dev " + fmt(sic_worst) + " over " +
              std::to_string(pairs) + " pairs, completeness " + fmt(completeness)};
}

int lu_rank(const Povm& povm) {
  const int d = povm.dim();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(povm.total_outcomes()), 2 * d * d);
  Eigen::Index r = 0;
  for (const PovmSetting& s : povm.settings()) {
    for (const HermitianOperator& e : s.effects) {
      for (int i = 0; i < d * d; ++i) {
        rows(r, i) = e.matrix().data()[i].real();
        rows(r, d * d + i) = e.matrix().data()[i].imag();
      }
      ++r;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

Outcome rank_oracle() {
  struct Case {
    const char* name;
    int dim;
    std::size_t rows;
    bool full;
  };
  const Case cases[] = {{"mub", 16, 272, true}, {"gmb", 16, 496, true},   {"sic", 4, 16, true},
                        {"4gmb", 16, 64, false}, {"5gmb", 16, 80, false}, {"psi", 4, 10, false}};
  bool ok = true;
  std::ostringstream detail;
  for (const Case& c : cases) {
    const Povm p = build_named(c.name, c.dim);
    const int rank = measurement_map(p).rank;
    const int oracle = lu_rank(p);
    const bool good = p.total_outcomes() == c.rows && rank == oracle && (rank == c.dim * c.dim) == c.full;
    ok = ok && good;
    detail << c.name << c.dim << " " << p.total_outcomes() << " rows rank " << rank << "/" << oracle << "; ";
  }
  return {ok, detail.str()};
}

Outcome noiseless_recovery() {
  bool ok = true;
  std::ostringstream detail;
  for (int d : {16, 4}) {
    std::vector<std::string> names{"mub", "gmb", "5gmb", "5mub"};
    if (d == 4) {
      names.push_back("sic");
      names.push_back("psi");
    }
    for (const std::string& name : names) {
      const Povm p = build_named(name, d);
      const LinearMeasurement map(p);
      double worst = 0.0;
      for (int k = 0; k < 50; ++k) {
        const PureState psi = test_state(2024, k, d);
        worst = std::max(worst, infidelity(psi, mle_estimate(p.probabilities(psi), map).rho_hat));
      }
      ok = ok && worst < 1e-6;
      detail << name << d << " max " << fmt(worst) << "; ";
    }
  }
  return {ok, detail.str()};
}

Outcome failure_set() {
  const FailureSetReport r = failure_set_probe(4, 20, 99);
  return {r.failure_mean_infidelity > 0.01 && r.generic_max_infidelity < 1e-6,
          "PSI <0|psi>=0 mean " + fmt(r.failure_mean_infidelity) + ", generic max " + fmt(r.generic_max_infidelity)};
}

std::map<std::string, double> seed_averaged(int dim, const std::vector<std::string>& povms) {
  std::map<std::string, double> mean;
  const std::uint64_t seeds[] = {1, 2, 3};
  for (std::uint64_t seed : seeds) {
    ExperimentConfig c;
    c.dim = dim;
    c.povms = povms;
    c.master_seed = seed;
    for (const SweepRow& row : run_table(c).rows) mean[row.povm] += row.mean_infidelity / 3.0;
  }
  return mean;
}

Outcome table_ordering() {
  auto m16 = seed_averaged(16, {"mub", "gmb", "5gmb", "5mub", "4gmb"});
  auto m4 = seed_averaged(4, {"mub", "sic", "gmb", "psi"});
  const double fully = std::max(m16["mub"], m16["gmb"]);
  const bool d16 = fully < std::min(m16["5gmb"], m16["5mub"]) && std::max(m16["5gmb"], m16["5mub"]) < m16["4gmb"];
  const bool d4 = m4["mub"] < m4["sic"] && m4["gmb"] < m4["psi"];
  std::ostringstream detail;
  detail << "d=16";
  for (const char* n : {"mub", "gmb", "5mub", "5gmb", "4gmb"}) detail << " " << n << " " << fmt(m16[n]);
  detail << "; d=4";
  for (const char* n : {"mub", "gmb", "sic", "psi"}) detail << " " << n << " " << fmt(m4[n]);
  return {d16 && d4, detail.str()};
}

Outcome sweep_knee() {
  ExperimentConfig c;
  c.dim = 16;
  c.master_seed = 1;
  const SweepResult r = run_basis_sweep(c, BasisSweepSpec{"mub", 2, 17});
  std::map<int, double> by_n;
  for (const SweepRow& row : r.rows) by_n[row.n_settings_used] = row.mean_infidelity;
  return {by_n[5] < 0.5 * by_n[2] && by_n[17] < by_n[5],
          "N=2 " + fmt(by_n[2]) + ", N=5 " + fmt(by_n[5]) + ", N=17 " + fmt(by_n[17])};
}

Outcome calibration() {
  const double calibrated = mean_process_infidelity(16, kCalibratedEpsilon, 200, kCalibrationSeed);
  const double fresh = mean_process_infidelity(16, kCalibratedEpsilon, 200, 4242);
  Rng rng(77);
  const ErrorModel model;
  double lo = 1.0;
  double hi = 0.0;
  for (int k = 0; k < 100; ++k) {
    const PureState psi = haar_random_state(16, rng);
    const double f = fidelity_pure(psi, prepare_state(psi, model, rng));
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  const bool ok = std::abs(calibrated - 0.018) <= 0.003 && std::abs(fresh - 0.018) <= 0.003 &&
                  std::abs(lo - 0.995) <= 0.001 && std::abs(hi - 0.995) <= 0.001;
  return {ok, "eps " + fmt(kCalibratedEpsilon) + ", process infidelity " + fmt(calibrated) + " (fresh draws " +
                  fmt(fresh) + "), prep fidelity in [" + fmt(lo) + ", " + fmt(hi) + "]"};
}

Outcome projection() {
  Rng rng(88);
  double idempotence = 0.0;
  for (int k = 0; k < 100; ++k) {
    const MatrixXc rho = testing::random_density(4, 1 + k % 4, rng);
    idempotence = std::max(idempotence, (project_psd_simplex(rho) - rho).norm());
  }
  double kkt = 0.0;
  for (int k = 0; k < 100; ++k) {
    const MatrixXc a = testing::random_hermitian(4, rng);
    const MatrixXc x = project_psd_simplex(a);
    const double tau = (x.adjoint() * (a - x)).trace().real();
    const MatrixXc z = tau * MatrixXc::Identity(4, 4) - (a - x);
    kkt = std::max({kkt, -eig_hermitian(x).values.minCoeff(), std::abs(x.trace().real() - 1.0),
                    -eig_hermitian(hermitian_part(z)).values.minCoeff(), (x * z).norm()});
  }
  return {idempotence < 1e-10 && kkt < 1e-8, "idempotence " + fmt(idempotence) + ", KKT violation " + fmt(kkt)};
}

Outcome tof_round_trip() {
  Rng rng(99);
  double noiseless = 0.0;
  double noisy = 0.0;
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd pop(kTofChannels);
    for (int c = 0; c < kTofChannels; ++c) pop(c) = rng.uniform();
    pop /= pop.sum();
    noiseless = std::max(noiseless, (fit_tof(synthesize_tof(pop, 0.0, rng)).weights - pop).cwiseAbs().maxCoeff());
    noisy += (fit_tof(synthesize_tof(pop, 0.01, rng)).weights - pop).cwiseAbs().maxCoeff() / 100.0;
  }
  return {noiseless < 1e-8 && noisy < 0.02, "noiseless max " + fmt(noiseless) + ", 1% noise mean " + fmt(noisy)};
}

int run_cli(const fs::path& dir, const std::string& args) {
  const std::string cmd =
      "cd '" + dir.string() + "' && '" + std::string(TOMOLAB_CLI_PATH) + "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "tomolab_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_text_atomic(dir / "config.json", R"({"dim": 16, "povms": ["mub", "5gmb"], "n_states": 6})");
  const int a = run_cli(dir, "qst-run --config config.json --seed 7 --jobs 1 --out-dir a");
  const int b = run_cli(dir, "qst-run --config config.json --seed 7 --jobs 4 --out-dir b");
  const int c = run_cli(dir, "qst-run --config config.json --seed 7 --jobs 2 --out-dir c");
  bool same = a == 0 && b == 0 && c == 0;
  if (same) {
    for (const char* f : {"trials.csv", "aggregate.csv"}) {
      const std::string ref = read_text(dir / "a" / f);
      same = same && ref == read_text(dir / "b" / f) && ref == read_text(dir / "c" / f);
    }
  }
  fs::remove_all(dir);
  return {same, "qst-run d=16 with 1, 4 and 2 workers, exit codes " + std::to_string(a) + "/" + std::to_string(b) +
                    "/" + std::to_string(c)};
}

}  // namespace
}  // namespace tomolab

int main() {
  using tomolab::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"definitional POVM suite", tomolab::povm_suite},
      {"IC rank oracle", tomolab::rank_oracle},
      {"noiseless recovery", tomolab::noiseless_recovery},
      {"failure-set probe", tomolab::failure_set},
      {"IC-class ordering under calibrated errors", tomolab::table_ordering},
      {"basis-count knee", tomolab::sweep_knee},
      {"error-model calibration", tomolab::calibration},
      {"PSD simplex projection", tomolab::projection},
      {"TOF round trip", tomolab::tof_round_trip},
      {"CLI determinism across workers", tomolab::determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("%s %zu %s: %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
