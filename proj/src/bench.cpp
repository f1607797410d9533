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

#include "tomolab/bench.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace tomolab {

namespace {

constexpr std::uint64_t kStateTag = 0x7374617465ULL;
constexpr std::uint64_t kTrialTag = 0x747269616cULL;

bool looks_like_path(const std::string& entry) {
  return entry.find('/') != std::string::npos || entry.ends_with(".json");
}

template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
  const int workers = std::max(1, std::min(jobs, count));
  if (workers == 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int k = next++; k < count; k = next++) fn(k);
    });
  }
  for (std::thread& t : pool) t.join();
}

IcClass sweep_ic_class(const Povm& family, std::size_t n) {
  if (n == family.num_settings()) return family.ic_class_claim();
  // Both orthobasis families become strictly IC once five bases are measured.
  return n >= 5 ? IcClass::kR1sIc : IcClass::kUnknown;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dim < 2) throw InvalidInput("config: dim must be at least 2");
  if (n_states < 1) throw InvalidInput("config: n_states must be at least 1");
  if (jobs < 1) throw InvalidInput("config: jobs must be at least 1");
  error_model.validate();
}

ExperimentConfig config_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw InvalidInput("config: top level must be an object");
    ExperimentConfig c;
    c.dim = j.value("dim", c.dim);
    c.povms = j.value("povms", c.povms);
    c.n_states = j.value("n_states", c.n_states);
    c.master_seed = j.value("seed", c.master_seed);
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("error_model")) {
      const Json& em = j.at("error_model");
      if (em.is_string()) {
        const std::string kind = em.get<std::string>();
        if (kind == "noiseless") {
          c.error_model = ErrorModel::noiseless();
          c.error_model.embedding_dim = kApparatusDim;
        } else if (kind != "default") {
          throw InvalidInput("config: unknown error model '" + kind + "'");
        }
      } else {
        c.error_model = error_model_from_json(em, ExperimentConfig::default_error_model());
      }
    }
    if (j.contains("estimator")) {
      const Json& ej = j.at("estimator");
      c.estimator.max_iterations = ej.value("max_iterations", c.estimator.max_iterations);
      c.estimator.tolerance = ej.value("tolerance", c.estimator.tolerance);
    }
    if (j.contains("sweep")) {
      const Json& sj = j.at("sweep");
      BasisSweepSpec s;
      s.povm = sj.value("povm", s.povm);
      s.n_min = sj.value("n_min", s.n_min);
      s.n_max = sj.value("n_max", s.n_max);
      c.sweep = s;
    }
    c.validate();
    return c;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("config: schema violation: ") + e.what());
  }
}

Json config_to_json(const ExperimentConfig& c) {
  Json j = {{"dim", c.dim},
            {"povms", c.povms},
            {"n_states", c.n_states},
            {"seed", c.master_seed},
            {"jobs", c.jobs},
            {"error_model", error_model_to_json(c.error_model)},
            {"estimator", {{"max_iterations", c.estimator.max_iterations}, {"tolerance", c.estimator.tolerance}}}};
  if (c.sweep) j["sweep"] = {{"povm", c.sweep->povm}, {"n_min", c.sweep->n_min}, {"n_max", c.sweep->n_max}};
  return j;
}

PureState test_state(std::uint64_t master_seed, int state_index, int dim) {
  Rng rng = Rng::stream(master_seed, {kStateTag, static_cast<std::uint64_t>(state_index)});
  return haar_random_state(dim, rng);
}

std::uint64_t povm_stream_key(const Povm& povm) { return stable_hash(povm.name()); }

std::vector<TrialResult> run_trials(const Povm& povm, const ExperimentConfig& config, std::uint64_t stream_key,
                                    IcClass ic_class) {
  config.validate();
  if (povm.dim() != config.dim) throw InvalidInput("run_trials: POVM dimension differs from config dim");
  const SystematicErrors errors = SystematicErrors::draw(povm, config.error_model, config.master_seed, stream_key);
  const LinearMeasurement linear(povm);
  std::vector<TrialResult> trials(static_cast<std::size_t>(config.n_states));
  parallel_for(config.n_states, config.jobs, [&](int k) {
    TrialResult& t = trials[static_cast<std::size_t>(k)];
    t.povm = povm.name();
    t.ic_class = ic_class;
    t.dim = povm.dim();
    t.n_settings_used = static_cast<int>(povm.num_settings());
    t.state_index = k;
    t.seed = config.master_seed;
    try {
      const PureState target = test_state(config.master_seed, k, povm.dim());
      Rng rng = Rng::stream(config.master_seed, {stream_key, kTrialTag, static_cast<std::uint64_t>(k)});
      const DensityMatrix actual = prepare_state(target, config.error_model, rng);
      const MeasurementRecord record = measure(actual, povm, errors, config.error_model, rng);
      const EstimatorResult est = mle_estimate(record.flattened(), linear, config.estimator);
      t.infidelity = infidelity(target, est.rho_hat);
      t.objective = est.objective;
      t.converged = est.converged;
      t.iterations = est.iterations;
    } catch (const std::exception& e) {
      t.infidelity = std::numeric_limits<double>::quiet_NaN();
      t.error = e.what();
    }
  });
  return trials;
}

SweepRow aggregate(const std::vector<TrialResult>& trials) {
  if (trials.empty()) throw InvalidInput("aggregate: no trials");
  SweepRow row;
  const TrialResult& first = trials.front();
  row.povm = first.povm;
  row.ic_class = first.ic_class;
  row.dim = first.dim;
  row.n_settings_used = first.n_settings_used;
  row.seed = first.seed;
  row.n_states = static_cast<int>(trials.size());
  double sum = 0.0;
  int ok = 0;
  for (const TrialResult& t : trials) {
    if (!t.error.empty()) {
      ++row.n_failed;
      continue;
    }
    sum += t.infidelity;
    ++ok;
  }
  if (ok == 0) {
    row.mean_infidelity = row.std_infidelity = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  row.mean_infidelity = sum / ok;
  double ss = 0.0;
  for (const TrialResult& t : trials) {
    if (t.error.empty()) ss += (t.infidelity - row.mean_infidelity) * (t.infidelity - row.mean_infidelity);
  }
  row.std_infidelity = ok > 1 ? std::sqrt(ss / (ok - 1)) : 0.0;
  return row;
}

Povm resolve_povm(const std::string& entry, int dim) {
  if (looks_like_path(entry)) {
    Povm p = load_povm(entry);
    if (p.dim() != dim) throw InvalidInput("POVM file '" + entry + "' has dimension " + std::to_string(p.dim()));
    return p;
  }
  return build_named(entry, dim);
}

SweepResult run_table(const ExperimentConfig& config) {
  config.validate();
  if (config.povms.empty()) throw InvalidInput("run_table: no POVMs configured");
  SweepResult out;
  for (const std::string& entry : config.povms) {
    const Povm povm = resolve_povm(entry, config.dim);
    std::vector<TrialResult> trials = run_trials(povm, config, povm_stream_key(povm), povm.ic_class_claim());
    out.rows.push_back(aggregate(trials));
    out.trials.insert(out.trials.end(), trials.begin(), trials.end());
  }
  return out;
}

SweepResult run_basis_sweep(const ExperimentConfig& config, const BasisSweepSpec& spec) {
  config.validate();
  if (spec.povm != "mub" && spec.povm != "gmb") throw InvalidInput("run_basis_sweep: family must be mub or gmb");
  const Povm family = build_named(spec.povm, config.dim);
  const int total = static_cast<int>(family.num_settings());
  const int n_max = spec.n_max == 0 ? total : spec.n_max;
  if (spec.n_min < 1 || n_max > total || spec.n_min > n_max) {
    throw InvalidInput("run_basis_sweep: N range [" + std::to_string(spec.n_min) + ", " + std::to_string(n_max) +
                       "] outside [1, " + std::to_string(total) + "]");
  }
  SweepResult out;
  const std::uint64_t key = povm_stream_key(family);
  for (int n = spec.n_min; n <= n_max; ++n) {
    const IcClass ic = sweep_ic_class(family, static_cast<std::size_t>(n));
    const Povm subset = family.first_settings(static_cast<std::size_t>(n), ic);
    std::vector<TrialResult> trials = run_trials(subset, config, key, ic);
    out.rows.push_back(aggregate(trials));
    out.trials.insert(out.trials.end(), trials.begin(), trials.end());
  }
  return out;
}

FailureSetReport failure_set_probe(int dim, int n_states, std::uint64_t seed, const EstimatorOptions& options) {
  if (n_states < 1) throw InvalidInput("failure_set_probe: n_states must be positive");
  const Povm psi_povm = build_psi(dim);
  const LinearMeasurement linear(psi_povm);
  FailureSetReport report;
  report.dim = dim;
  report.n_states = n_states;
  for (int k = 0; k < n_states; ++k) {
    const PureState generic = test_state(seed, k, dim);
    const double delta = infidelity(generic, mle_estimate(psi_povm.probabilities(generic), linear, options).rho_hat);
    report.generic_mean_infidelity += delta / n_states;
    report.generic_max_infidelity = std::max(report.generic_max_infidelity, delta);

    VectorXc amps = test_state(seed ^ 0x6661696cULL, k, dim).amplitudes();
    amps(0) = 0.0;
    const PureState failing = PureState::normalized(std::move(amps));
    report.failure_mean_infidelity +=
        infidelity(failing, mle_estimate(psi_povm.probabilities(failing), linear, options).rho_hat) / n_states;
  }
  return report;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string trials_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "povm,ic_class,d,n_settings_used,state_index,infidelity,objective,converged,seed\n";
  for (const TrialResult& t : result.trials) {
    out << t.povm << ',' << to_string(t.ic_class) << ',' << t.dim << ',' << t.n_settings_used << ',' << t.state_index
        << ',' << format_double(t.infidelity) << ',' << format_double(t.objective) << ','
        << (t.converged ? "true" : "false") << ',' << t.seed << '\n';
  }
  return out.str();
}

std::string aggregate_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "povm,ic_class,d,n_settings_used,mean_infidelity,std_infidelity,n_states,seed\n";
  for (const SweepRow& r : result.rows) {
    out << r.povm << ',' << to_string(r.ic_class) << ',' << r.dim << ',' << r.n_settings_used << ','
        << format_double(r.mean_infidelity) << ',' << format_double(r.std_infidelity) << ',' << r.n_states << ','
        << r.seed << '\n';
  }
  return out.str();
}

std::string sweep_plot_data(const SweepResult& result) {
  std::ostringstream out;
  out << "N,mean_infidelity\n";
  for (const SweepRow& r : result.rows) out << r.n_settings_used << ',' << format_double(r.mean_infidelity) << '\n';
  return out.str();
}

}  // namespace tomolab
