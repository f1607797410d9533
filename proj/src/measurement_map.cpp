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

#include "tomolab/povm.hpp"

namespace tomolab {

MeasurementMap measurement_map(const Povm& povm, double tolerance) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(povm.dim()) * povm.dim();
  MeasurementMap out;
  out.matrix.resize(static_cast<Eigen::Index>(povm.total_outcomes()), d2);
  Eigen::Index row = 0;
  for (const PovmSetting& s : povm.settings()) {
    for (const HermitianOperator& e : s.effects) out.matrix.row(row++) = hermitian_to_real(e.matrix()).transpose();
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(out.matrix, Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double scale = std::max(1.0, out.singular_values.size() > 0 ? out.singular_values(0) : 0.0);
  out.rank = 0;
  for (Eigen::Index k = 0; k < out.singular_values.size(); ++k) {
    if (out.singular_values(k) > tolerance * scale) ++out.rank;
  }
  out.kernel = svd.matrixV().rightCols(d2 - out.rank);
  return out;
}

}  // namespace tomolab
