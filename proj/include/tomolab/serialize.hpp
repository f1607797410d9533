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

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "tomolab/estimate.hpp"
#include "tomolab/povm.hpp"
#include "tomolab/simulate.hpp"

namespace tomolab {

using Json = nlohmann::json;

/// Complex numbers are always encoded as [re, im]; matrices as lists of rows.
Json complex_to_json(cplx z);
cplx complex_from_json(const Json& j);
Json matrix_to_json(const MatrixXc& m);
MatrixXc matrix_from_json(const Json& j);

/// {name, dim, ic_class_claim, settings: [{label, is_orthobasis, effects}]}.
/// `name` and `is_orthobasis` are optional on load; a missing claim is UNKNOWN.
Json povm_to_json(const Povm& povm);
/// Throws InvalidInput on schema violations and PovmValidationError when a
/// setting is incomplete.
Povm povm_from_json(const Json& j);

Json error_model_to_json(const ErrorModel& model);
/// Missing fields keep the values of `base`.
ErrorModel error_model_from_json(const Json& j, const ErrorModel& base = {});

/// {povm_id, seed, error_model, settings: [{label, frequencies}]}.
Json record_to_json(const MeasurementRecord& record);
MeasurementRecord record_from_json(const Json& j);

/// {rho_hat (rows of [re, im]), objective, iterations, converged, optimality_residual}.
Json estimator_result_to_json(const EstimatorResult& result);
EstimatorResult estimator_result_from_json(const Json& j);

/// {"fiducial": [[re, im], ...]}
VectorXc fiducial_from_json(const Json& j);

std::string read_text(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

void save_povm(const Povm& povm, const std::filesystem::path& path);
Povm load_povm(const std::filesystem::path& path);
void save_record(const MeasurementRecord& record, const std::filesystem::path& path);
MeasurementRecord load_record(const std::filesystem::path& path);

}  // namespace tomolab
