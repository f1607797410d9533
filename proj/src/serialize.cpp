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

#include "tomolab/serialize.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

namespace tomolab {

namespace {

template <typename Fn>
auto schema_guard(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string(what) + ": schema violation: " + e.what());
  }
}

}  // namespace

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidInput("complex number must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const MatrixXc& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXc matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InvalidInput("matrix must be a non-empty list of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  MatrixXc m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw InvalidInput("matrix rows differ in length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json povm_to_json(const Povm& povm) {
  Json settings = Json::array();
  for (const PovmSetting& s : povm.settings()) {
    Json effects = Json::array();
    for (const HermitianOperator& e : s.effects) effects.push_back(matrix_to_json(e.matrix()));
    settings.push_back({{"label", s.label}, {"is_orthobasis", s.is_orthobasis}, {"effects", std::move(effects)}});
  }
  return {{"name", povm.name()},
          {"dim", povm.dim()},
          {"ic_class_claim", std::string(to_string(povm.ic_class_claim()))},
          {"settings", std::move(settings)}};
}

Povm povm_from_json(const Json& j) {
  return schema_guard("POVM file", [&]() {
    if (!j.is_object()) throw InvalidInput("POVM file: top level must be an object");
    const int dim = j.at("dim").get<int>();
    if (dim < 1) throw InvalidInput("POVM file: dim must be positive");
    const IcClass claim = ic_class_from_string(j.value("ic_class_claim", std::string("UNKNOWN")));
    const Json& settings_json = j.at("settings");
    if (!settings_json.is_array() || settings_json.empty()) throw InvalidInput("POVM file: settings must be a non-empty list");
    std::vector<PovmSetting> settings;
    for (const Json& sj : settings_json) {
      PovmSetting s{sj.at("label").get<std::string>(), {}, sj.value("is_orthobasis", false)};
      for (const Json& ej : sj.at("effects")) {
        MatrixXc m = matrix_from_json(ej);
        if (m.rows() != dim || m.cols() != dim) throw InvalidInput("POVM file: effect in '" + s.label + "' is not d x d");
        s.effects.push_back(HermitianOperator::symmetrized(m));
      }
      settings.push_back(std::move(s));
    }
    return Povm(j.value("name", std::string("custom")), dim, std::move(settings), claim);
  });
}

Json error_model_to_json(const ErrorModel& m) {
  return {{"epsilon_map", m.epsilon_map},
          {"freq_noise_sigma", m.freq_noise_sigma},
          {"prep_infidelity", m.prep_infidelity},
          {"prep_coherent_fraction", m.prep_coherent_fraction},
          {"correlated_waveforms", m.correlated_waveforms},
          {"embedding_dim", m.embedding_dim}};
}

ErrorModel error_model_from_json(const Json& j, const ErrorModel& base) {
  return schema_guard("error model", [&]() {
    ErrorModel m = base;
    if (!j.is_object()) throw InvalidInput("error model must be an object");
    m.epsilon_map = j.value("epsilon_map", m.epsilon_map);
    m.freq_noise_sigma = j.value("freq_noise_sigma", m.freq_noise_sigma);
    m.prep_infidelity = j.value("prep_infidelity", m.prep_infidelity);
    m.prep_coherent_fraction = j.value("prep_coherent_fraction", m.prep_coherent_fraction);
    m.correlated_waveforms = j.value("correlated_waveforms", m.correlated_waveforms);
    m.embedding_dim = j.value("embedding_dim", m.embedding_dim);
    m.validate();
    return m;
  });
}

Json record_to_json(const MeasurementRecord& record) {
  Json settings = Json::array();
  for (const SettingFrequencies& s : record.settings) settings.push_back({{"label", s.label}, {"frequencies", s.frequencies}});
  return {{"povm_id", record.povm_id},
          {"seed", record.seed},
          {"error_model", error_model_to_json(record.error_model)},
          {"settings", std::move(settings)}};
}

MeasurementRecord record_from_json(const Json& j) {
  return schema_guard("measurement record", [&]() {
    MeasurementRecord r;
    r.povm_id = j.at("povm_id").get<std::string>();
    r.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("error_model")) r.error_model = error_model_from_json(j.at("error_model"));
    for (const Json& sj : j.at("settings")) {
      r.settings.push_back({sj.at("label").get<std::string>(), sj.at("frequencies").get<std::vector<double>>()});
    }
    return r;
  });
}

Json estimator_result_to_json(const EstimatorResult& result) {
  return {{"rho_hat", matrix_to_json(result.rho_hat.matrix())},
          {"objective", result.objective},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"optimality_residual", result.optimality_residual}};
}

EstimatorResult estimator_result_from_json(const Json& j) {
  return schema_guard("estimator result", [&]() {
    return EstimatorResult{DensityMatrix(hermitian_part(matrix_from_json(j.at("rho_hat")))),
                           j.at("objective").get<double>(), j.at("iterations").get<int>(),
                           j.at("converged").get<bool>(), j.at("optimality_residual").get<double>()};
  });
}

VectorXc fiducial_from_json(const Json& j) {
  return schema_guard("fiducial file", [&]() {
    const Json& list = j.at("fiducial");
    if (!list.is_array() || list.empty()) throw InvalidInput("fiducial must be a non-empty list");
    VectorXc v(static_cast<Eigen::Index>(list.size()));
    for (std::size_t k = 0; k < list.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(list[k]);
    return v;
  });
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw InvalidInput("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw InvalidInput("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

void save_povm(const Povm& povm, const std::filesystem::path& path) {
  write_text_atomic(path, povm_to_json(povm).dump(1) + "\n");
}

Povm load_povm(const std::filesystem::path& path) { return povm_from_json(read_json(path)); }

void save_record(const MeasurementRecord& record, const std::filesystem::path& path) {
  write_text_atomic(path, record_to_json(record).dump(1) + "\n");
}

MeasurementRecord load_record(const std::filesystem::path& path) { return record_from_json(read_json(path)); }

}  // namespace tomolab
