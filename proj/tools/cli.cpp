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

#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tomolab/bench.hpp"
#include "tomolab/certify.hpp"
#include "tomolab/tof.hpp"

namespace tomolab::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kDefaultSeed = 1;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InvalidInput(source + ": seed must be a non-negative integer, got '" + text + "'");
  }
  return value;
}

// flag > config > TOMOLAB_SEED > built-in default
std::uint64_t environment_seed() {
  const char* env = std::getenv("TOMOLAB_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  return parse_seed(env, "TOMOLAB_SEED");
}

void write_manifest(const fs::path& path, const std::string& command, const Json& config, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
  const std::string canonical = config.dump();
  const Json manifest = {{"command", command},
                         {"version", TOMOLAB_VERSION},
                         {"seed", seed},
                         {"config_hash", hex64(stable_hash(canonical))},
                         {"config", config},
                         {"outputs", outputs}};
  write_text_atomic(path, manifest.dump(2) + "\n");
}

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_states;
  std::optional<int> jobs;
  std::optional<int> dim;
  std::vector<std::string> povms;
  std::string out_dir = ".";
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--seed", f.seed, "Master seed (overrides config and TOMOLAB_SEED)");
  cmd->add_option("--n-states", f.n_states, "Number of random test states");
  cmd->add_option("--jobs", f.jobs, "Worker threads");
  cmd->add_option("--dim", f.dim, "Hilbert-space dimension");
  cmd->add_option("--out-dir", f.out_dir, "Output directory")->capture_default_str();
}

ExperimentConfig effective_config(const RunFlags& f) {
  Json j = Json::object();
  if (!f.config.empty()) j = read_json(f.config);
  if (!j.is_object()) throw InvalidInput("config: top level must be an object");
  if (!j.contains("seed")) j["seed"] = environment_seed();
  if (f.seed) j["seed"] = *f.seed;
  if (f.n_states) j["n_states"] = *f.n_states;
  if (f.jobs) j["jobs"] = *f.jobs;
  if (f.dim) j["dim"] = *f.dim;
  if (!f.povms.empty()) j["povms"] = f.povms;
  return config_from_json(j);
}

std::vector<std::string> write_run_outputs(const fs::path& dir, const SweepResult& result) {
  fs::create_directories(dir);
  write_text_atomic(dir / "trials.csv", trials_csv(result));
  write_text_atomic(dir / "aggregate.csv", aggregate_csv(result));
  return {"trials.csv", "aggregate.csv"};
}

void print_rows(std::ostream& out, const SweepResult& result) {
  for (const SweepRow& row : result.rows) {
    out << row.povm << " N=" << row.n_settings_used << " " << to_string(row.ic_class)
        << " mean=" << format_double(row.mean_infidelity) << " std=" << format_double(row.std_infidelity);
    if (row.n_failed > 0) out << " failed=" << row.n_failed;
    out << "\n";
  }
}

int qst_run(const RunFlags& f, std::ostream& out) {
  const ExperimentConfig config = effective_config(f);
  const SweepResult result = run_table(config);
  std::vector<std::string> outputs = write_run_outputs(f.out_dir, result);
  const Json cj = config_to_json(config);
  write_text_atomic(fs::path(f.out_dir) / "config.json", cj.dump(2) + "\n");
  outputs.push_back("config.json");
  write_manifest(fs::path(f.out_dir) / "manifest.json", "qst-run", cj, config.master_seed, outputs);
  print_rows(out, result);
  return 0;
}

struct SweepFlags {
  std::optional<std::string> povm;
  std::optional<int> n_min;
  std::optional<int> n_max;
};

int qst_sweep(const RunFlags& f, const SweepFlags& s, std::ostream& out) {
  ExperimentConfig config = effective_config(f);
  BasisSweepSpec spec = config.sweep.value_or(BasisSweepSpec{});
  if (s.povm) spec.povm = *s.povm;
  if (s.n_min) spec.n_min = *s.n_min;
  if (s.n_max) spec.n_max = *s.n_max;
  config.sweep = spec;
  config.povms = {spec.povm};
  const SweepResult result = run_basis_sweep(config, spec);
  std::vector<std::string> outputs = write_run_outputs(f.out_dir, result);
  const std::string plot = "sweep_" + spec.povm + ".dat";
  write_text_atomic(fs::path(f.out_dir) / plot, sweep_plot_data(result));
  outputs.push_back(plot);
  const Json cj = config_to_json(config);
  write_text_atomic(fs::path(f.out_dir) / "config.json", cj.dump(2) + "\n");
  outputs.push_back("config.json");
  write_manifest(fs::path(f.out_dir) / "manifest.json", "qst-sweep", cj, config.master_seed, outputs);
  print_rows(out, result);
  return 0;
}

struct BuildFlags {
  std::string name;
  int dim = 0;
  std::string out;
  std::string fiducial;
  std::optional<std::uint64_t> seed;
};

int povm_build(const BuildFlags& f, std::ostream& out) {
  Povm povm = [&]() {
    if (!f.fiducial.empty()) {
      if (f.name != "sic") throw InvalidInput("--fiducial applies to sic only");
      return build_sic(f.dim, fiducial_from_json(read_json(f.fiducial)));
    }
    if (f.seed && f.name == "sic") return build_sic(f.dim, std::nullopt, *f.seed);
    return build_named(f.name, f.dim);
  }();
  const fs::path path(f.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_povm(povm, path);
  Json config = {{"name", f.name}, {"dim", f.dim}};
  if (!f.fiducial.empty()) config["fiducial"] = f.fiducial;
  write_manifest(fs::path(f.out + ".manifest.json"), "povm-build", config, f.seed.value_or(0),
                 {path.filename().string()});
  out << "wrote " << povm.name() << " (d=" << povm.dim() << ", " << povm.num_settings() << " settings, "
      << povm.total_outcomes() << " outcomes) to " << f.out << "\n";
  return 0;
}

struct CheckFlags {
  std::string file;
  int pairs = 200;
  int states = 20;
  std::optional<std::uint64_t> seed;
};

int povm_check(const CheckFlags& f, std::ostream& out, std::ostream& err) {
  Povm povm = [&]() {
    try {
      return load_povm(f.file);
    } catch (const PovmValidationError& e) {
      err << "invalid POVM: " << e.what() << "\n";
      for (std::size_t i = 0; i < e.residuals().size(); ++i) {
        err << "  setting " << i << " completeness residual " << format_double(e.residuals()[i]) << "\n";
      }
      throw;
    }
  }();
  CertifyOptions options;
  options.distinguishability_pairs = f.pairs;
  options.strictness_states = f.states;
  if (f.seed) options.seed = *f.seed;
  const IcReport r = certify_ic(povm, options);
  Json residuals = Json::array();
  for (double v : povm.completeness_residuals()) residuals.push_back(v);
  const Json report = {{"name", povm.name()},
                       {"dim", povm.dim()},
                       {"settings", povm.num_settings()},
                       {"outcomes", povm.total_outcomes()},
                       {"ic_class_claim", to_string(povm.ic_class_claim())},
                       {"completeness_residuals", residuals},
                       {"rank", r.rank},
                       {"kernel_dim", r.kernel_dim},
                       {"fully_ic", r.fully_ic},
                       {"r1_pair_fraction", r.r1_pair_fraction},
                       {"r1_local_fraction", r.r1_local_fraction},
                       {"r1_distinguishable", r.r1_distinguishable},
                       {"strictness_samples", r.strictness_samples},
                       {"strictness_fraction", r.strictness_fraction},
                       {"strictness_max_infidelity", r.strictness_max_infidelity},
                       {"strictness_evidence", r.strictness_evidence}};
  out << report.dump(2) << "\n";
  return 0;
}

struct TofFlags {
  std::string signal;
  std::vector<double> populations;
  double noise = 0.0;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

// Two numeric columns, time_ms and amplitude; a non-numeric first line is a
// header.
TofSignal read_signal_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  std::vector<double> t;
  std::vector<double> a;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected two columns");
    try {
      std::size_t used = 0;
      const double tv = std::stod(line.substr(0, comma), &used);
      const double av = std::stod(line.substr(comma + 1));
      t.push_back(tv);
      a.push_back(av);
    } catch (const std::logic_error&) {
      if (line_no == 1) continue;
      throw InvalidInput(path + ":" + std::to_string(line_no) + ": not a number");
    }
  }
  TofSignal s = default_tof_layout();
  if (static_cast<Eigen::Index>(t.size()) != s.time_ms.size()) {
    throw InvalidInput(path + ": expected " + std::to_string(s.time_ms.size()) + " samples on the default grid, got " +
                       std::to_string(t.size()));
  }
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::abs(t[k] - s.time_ms(static_cast<Eigen::Index>(k))) > 1e-6) {
      throw InvalidInput(path + ": sample " + std::to_string(k) + " is off the default time grid");
    }
    s.amplitude(static_cast<Eigen::Index>(k)) = a[k];
  }
  if (!s.amplitude.allFinite()) throw InvalidInput(path + ": non-finite amplitude");
  return s;
}

std::string signal_csv(const TofSignal& s) {
  std::ostringstream out;
  out << "time_ms,amplitude\n";
  for (Eigen::Index k = 0; k < s.time_ms.size(); ++k) {
    out << format_double(s.time_ms(k)) << "," << format_double(s.amplitude(k)) << "\n";
  }
  return out.str();
}

int tof_fit(const TofFlags& f, std::ostream& out) {
  if (f.signal.empty() == f.populations.empty()) throw InvalidInput("tof-fit: give exactly one of --signal or --populations");
  const fs::path dir(f.out_dir);
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  Json config = Json::object();
  std::uint64_t seed = 0;
  TofSignal signal;
  if (!f.signal.empty()) {
    signal = read_signal_csv(f.signal);
    config["signal"] = f.signal;
  } else {
    seed = f.seed.value_or(environment_seed());
    Rng rng(seed);
    const Eigen::VectorXd pop = Eigen::Map<const Eigen::VectorXd>(f.populations.data(),
                                                                 static_cast<Eigen::Index>(f.populations.size()));
    signal = synthesize_tof(pop, f.noise, rng);
    write_text_atomic(dir / "tof_signal.csv", signal_csv(signal));
    outputs.push_back("tof_signal.csv");
    config["populations"] = f.populations;
    config["noise"] = f.noise;
  }
  const TofFit fit = fit_tof(signal);
  Json weights = Json::array();
  for (Eigen::Index k = 0; k < fit.weights.size(); ++k) weights.push_back(fit.weights(k));
  const Json result = {{"weights", weights}, {"residual", fit.residual}};
  write_text_atomic(dir / "tof_fit.json", result.dump(2) + "\n");
  outputs.push_back("tof_fit.json");
  write_manifest(dir / "manifest.json", "tof-fit", config, seed, outputs);
  for (Eigen::Index k = 0; k < fit.weights.size(); ++k) {
    out << "channel " << k << " " << format_double(fit.weights(k)) << "\n";
  }
  out << "residual " << format_double(fit.residual) << "\n";
  return 0;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum state tomography benchmark toolkit"};
  app.set_version_flag("--version", std::string(TOMOLAB_VERSION));
  app.require_subcommand(1);

  BuildFlags build;
  CLI::App* build_cmd = app.add_subcommand("povm-build", "Construct a built-in POVM and save it");
  build_cmd->add_option("--name", build.name, "standard, mub, 5mub, gmb, 5gmb, 4gmb, sic or psi")->required();
  build_cmd->add_option("--dim", build.dim, "Hilbert-space dimension")->required();
  build_cmd->add_option("--out", build.out, "Output POVM file")->required();
  build_cmd->add_option("--fiducial", build.fiducial, "SIC fiducial file {\"fiducial\": [[re, im], ...]}");
  build_cmd->add_option("--seed", build.seed, "Seed of the SIC fiducial search");

  CheckFlags check;
  CLI::App* check_cmd = app.add_subcommand("povm-check", "Validate a POVM file and report its IC diagnostics");
  check_cmd->add_option("--file", check.file, "POVM file")->required();
  check_cmd->add_option("--pairs", check.pairs, "Random pure-state pairs for the distinguishability test")
      ->capture_default_str();
  check_cmd->add_option("--states", check.states, "Noiseless reconstructions for the strictness test")
      ->capture_default_str();
  check_cmd->add_option("--seed", check.seed, "Sampling seed");

  RunFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("qst-run", "Tomography of random test states through each configured POVM");
  run_cmd->add_option("--config", run_flags.config, "Experiment config file");
  run_cmd->add_option("--povm", run_flags.povms, "POVM name or file (repeatable; overrides config)");
  add_run_flags(run_cmd, run_flags);

  RunFlags sweep_flags;
  SweepFlags sweep;
  CLI::App* sweep_cmd = app.add_subcommand("qst-sweep", "Infidelity versus the number of bases measured");
  sweep_cmd->add_option("--config", sweep_flags.config, "Experiment config file");
  sweep_cmd->add_option("--povm", sweep.povm, "Basis family: mub or gmb");
  sweep_cmd->add_option("--n-min", sweep.n_min, "Smallest number of bases (default 1)");
  sweep_cmd->add_option("--n-max", sweep.n_max, "Largest number of bases (default all)");
  add_run_flags(sweep_cmd, sweep_flags);

  TofFlags tof;
  CLI::App* tof_cmd = app.add_subcommand("tof-fit", "Fit sublevel populations to a time-of-flight signal");
  tof_cmd->add_option("--signal", tof.signal, "CSV signal (time_ms,amplitude) on the default grid");
  tof_cmd->add_option("--populations", tof.populations, "Synthesize from 16 populations instead")->delimiter(',');
  tof_cmd->add_option("--noise", tof.noise, "Noise as a fraction of the signal peak")->capture_default_str();
  tof_cmd->add_option("--seed", tof.seed, "Noise seed");
  tof_cmd->add_option("--out-dir", tof.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return 0;
    err << app.help();
    return 1;
  }

  try {
    if (*build_cmd) return povm_build(build, out);
    if (*check_cmd) return povm_check(check, out, err);
    if (*run_cmd) return qst_run(run_flags, out);
    if (*sweep_cmd) return qst_sweep(sweep_flags, sweep, out);
    if (*tof_cmd) return tof_fit(tof, out);
  } catch (const PovmValidationError&) {
    return 1;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace tomolab::cli
