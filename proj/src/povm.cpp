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

#include <cmath>
#include <numbers>
#include <string>

namespace tomolab {

std::string_view to_string(IcClass ic) {
  switch (ic) {
    case IcClass::kFullyIc: return "FULLY_IC";
    case IcClass::kR1sIc: return "R1S_IC";
    case IcClass::kR1Ic: return "R1_IC";
    case IcClass::kUnknown: break;
  }
  return "UNKNOWN";
}

IcClass ic_class_from_string(std::string_view text) {
  if (text == "FULLY_IC") return IcClass::kFullyIc;
  if (text == "R1S_IC") return IcClass::kR1sIc;
  if (text == "R1_IC") return IcClass::kR1Ic;
  if (text == "UNKNOWN") return IcClass::kUnknown;
  throw InvalidInput("unknown IC class '" + std::string(text) + "'");
}

Povm::Povm(std::string name, int dim, std::vector<PovmSetting> settings, IcClass claim)
    : name_(std::move(name)), dim_(dim), settings_(std::move(settings)), claim_(claim) {
  if (dim_ < 1) throw InvalidInput("Povm: dimension must be positive");
  if (settings_.empty()) throw InvalidInput("Povm: no settings");
  for (const PovmSetting& s : settings_) {
    if (s.effects.empty()) throw InvalidInput("Povm: setting '" + s.label + "' has no effects");
    for (const HermitianOperator& e : s.effects) {
      if (e.dim() != dim_) throw InvalidInput("Povm: effect dimension mismatch in '" + s.label + "'");
      const double min_eig = eig_hermitian(e).values.minCoeff();
      if (!(min_eig >= -tol::kEffectPsd)) {
        throw InvalidInput("Povm: effect in '" + s.label + "' has eigenvalue " + std::to_string(min_eig));
      }
    }
  }
  const std::vector<double> residuals = completeness_residuals();
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (!(residuals[i] <= tol::kCompleteness)) {
      std::string what = "Povm: effects do not sum to identity; residuals per setting:";
      for (std::size_t k = 0; k < residuals.size(); ++k) {
        what += " " + settings_[k].label + "=" + std::to_string(residuals[k]);
      }
      throw PovmValidationError(what, residuals);
    }
  }
  for (const PovmSetting& s : settings_) {
    if (!s.is_orthobasis) continue;
    if (static_cast<int>(s.effects.size()) != dim_) {
      throw InvalidInput("Povm: orthobasis setting '" + s.label + "' must have d effects");
    }
    for (const HermitianOperator& e : s.effects) {
      const MatrixXc& m = e.matrix();
      if (!((m * m - m).norm() <= tol::kCompleteness) || !(std::abs(m.trace().real() - 1.0) <= tol::kCompleteness)) {
        throw InvalidInput("Povm: orthobasis setting '" + s.label + "' has a non-projector effect");
      }
    }
  }
}

Povm Povm::from_bases(std::string name, const std::vector<MatrixXc>& bases,
                      const std::vector<std::string>& labels, IcClass claim) {
  if (bases.empty() || bases.size() != labels.size()) throw InvalidInput("Povm::from_bases: label count mismatch");
  const int dim = static_cast<int>(bases.front().rows());
  std::vector<PovmSetting> settings;
  settings.reserve(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const MatrixXc& b = bases[i];
    if (b.rows() != dim || b.cols() != dim) throw InvalidInput("Povm::from_bases: basis must be d x d");
    PovmSetting s{labels[i], {}, true};
    s.effects.reserve(dim);
    for (int k = 0; k < dim; ++k) s.effects.emplace_back(MatrixXc(b.col(k) * b.col(k).adjoint()));
    settings.push_back(std::move(s));
  }
  return Povm(std::move(name), dim, std::move(settings), claim);
}

std::size_t Povm::total_outcomes() const {
  std::size_t n = 0;
  for (const PovmSetting& s : settings_) n += s.effects.size();
  return n;
}

Povm Povm::first_settings(std::size_t n, IcClass claim) const {
  if (n < 1 || n > settings_.size()) {
    throw InvalidInput("Povm::first_settings: count " + std::to_string(n) + " out of range");
  }
  std::vector<PovmSetting> head(settings_.begin(), settings_.begin() + static_cast<std::ptrdiff_t>(n));
  return Povm(name_, dim_, std::move(head), n == settings_.size() ? claim_ : claim);
}

Eigen::VectorXd Povm::probabilities(const DensityMatrix& rho) const {
  if (rho.dim() != dim_) throw InvalidInput("Povm::probabilities: dimension mismatch");
  Eigen::VectorXd p(total_outcomes());
  Eigen::Index j = 0;
  for (const PovmSetting& s : settings_) {
    for (const HermitianOperator& e : s.effects) p(j++) = trace_product(e.matrix(), rho.matrix()).real();
  }
  return p;
}

Eigen::VectorXd Povm::probabilities(const PureState& psi) const {
  if (psi.dim() != dim_) throw InvalidInput("Povm::probabilities: dimension mismatch");
  Eigen::VectorXd p(total_outcomes());
  Eigen::Index j = 0;
  const VectorXc& v = psi.amplitudes();
  for (const PovmSetting& s : settings_) {
    for (const HermitianOperator& e : s.effects) p(j++) = (v.adjoint() * e.matrix() * v)(0, 0).real();
  }
  return p;
}

std::vector<double> Povm::completeness_residuals() const {
  std::vector<double> out;
  out.reserve(settings_.size());
  const MatrixXc identity = MatrixXc::Identity(dim_, dim_);
  for (const PovmSetting& s : settings_) {
    MatrixXc total = MatrixXc::Zero(dim_, dim_);
    for (const HermitianOperator& e : s.effects) total += e.matrix();
    out.push_back((total - identity).norm());
  }
  return out;
}

Povm build_standard_basis(int dim) {
  if (dim < 2) throw InvalidInput("build_standard_basis: dimension must be at least 2");
  return Povm::from_bases("standard", {MatrixXc::Identity(dim, dim)}, {"z"}, IcClass::kUnknown);
}

std::vector<std::vector<std::pair<int, int>>> round_robin_matchings(int dim) {
  if (dim < 2 || dim % 2 != 0) throw InvalidInput("round_robin_matchings: dimension must be even");
  const int m = dim - 1;
  std::vector<std::vector<std::pair<int, int>>> rounds;
  rounds.reserve(m);
  for (int r = 0; r < m; ++r) {
    std::vector<std::pair<int, int>> pairs;
    pairs.emplace_back(r, dim - 1);
    for (int k = 1; k < dim / 2; ++k) pairs.emplace_back((r + k) % m, ((r - k) % m + m) % m);
    rounds.push_back(std::move(pairs));
  }
  return rounds;
}

namespace {

// Columns (|j> + phase|k>)/sqrt2 and (|j> - phase|k>)/sqrt2 for each pair.
MatrixXc pair_basis(int dim, const std::vector<std::pair<int, int>>& pairs, cplx phase) {
  MatrixXc b = MatrixXc::Zero(dim, dim);
  const double s = std::numbers::sqrt2 / 2.0;
  int col = 0;
  for (auto [j, k] : pairs) {
    b(j, col) = s;
    b(k, col) = s * phase;
    ++col;
    b(j, col) = s;
    b(k, col) = -s * phase;
    ++col;
  }
  if (col != dim) throw InvalidInput("pair_basis: pairs must cover every level once");
  return b;
}

std::string pair_label(char type, int round) { return std::string(1, type) + "-r" + std::to_string(round); }

void require_even(int dim, const char* who) {
  if (dim < 2 || dim % 2 != 0) throw InvalidInput(std::string(who) + ": dimension must be even");
}

std::vector<std::pair<int, int>> staggered_pairing(int dim, int offset) {
  std::vector<std::pair<int, int>> pairs;
  for (int k = 0; k < dim / 2; ++k) pairs.emplace_back((2 * k + offset) % dim, (2 * k + 1 + offset) % dim);
  return pairs;
}

}  // namespace

Povm build_gmb_full(int dim) {
  require_even(dim, "build_gmb_full");
  const cplx i(0.0, 1.0);
  std::vector<MatrixXc> bases{MatrixXc::Identity(dim, dim)};
  std::vector<std::string> labels{"z"};
  const auto rounds = round_robin_matchings(dim);
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    bases.push_back(pair_basis(dim, rounds[r], 1.0));
    labels.push_back(pair_label('x', static_cast<int>(r)));
    bases.push_back(pair_basis(dim, rounds[r], i));
    labels.push_back(pair_label('y', static_cast<int>(r)));
  }
  return Povm::from_bases("gmb", bases, labels, IcClass::kFullyIc);
}

Povm build_gmb_5(int dim) {
  require_even(dim, "build_gmb_5");
  const cplx i(0.0, 1.0);
  const auto even = staggered_pairing(dim, 0);
  const auto odd = staggered_pairing(dim, 1);
  return Povm::from_bases("5gmb",
                          {MatrixXc::Identity(dim, dim), pair_basis(dim, even, 1.0), pair_basis(dim, odd, 1.0),
                           pair_basis(dim, even, i), pair_basis(dim, odd, i)},
                          {"z", "x-even", "x-odd", "y-even", "y-odd"}, IcClass::kR1sIc);
}

Povm build_gmb_4(int dim) {
  require_even(dim, "build_gmb_4");
  const cplx i(0.0, 1.0);
  const auto even = staggered_pairing(dim, 0);
  const auto odd = staggered_pairing(dim, 1);
  return Povm::from_bases("4gmb",
                          {pair_basis(dim, even, 1.0), pair_basis(dim, odd, 1.0), pair_basis(dim, even, i),
                           pair_basis(dim, odd, i)},
                          {"x-even", "x-odd", "y-even", "y-odd"}, IcClass::kR1Ic);
}

Povm build_psi(int dim) {
  if (dim < 2) throw InvalidInput("build_psi: dimension must be at least 2");
  const double t = 1.0 / (2.0 * (dim - 1));
  const double root_t = std::sqrt(t);
  PovmSetting s{"psi", {}, false};
  s.effects.reserve(3 * dim - 2);
  MatrixXc e0 = MatrixXc::Zero(dim, dim);
  e0(0, 0) = 1.0 - t * (dim - 1);
  s.effects.emplace_back(std::move(e0));
  for (int j = 1; j < dim; ++j) {
    for (int m = 0; m < 3; ++m) {
      VectorXc v = VectorXc::Zero(dim);
      v(0) = root_t;
      v(j) = std::polar(1.0, 2.0 * std::numbers::pi * m / 3.0);
      s.effects.emplace_back(MatrixXc(v * v.adjoint() / 3.0));
    }
  }
  return Povm("psi", dim, {std::move(s)}, IcClass::kR1sIc);
}

const std::vector<std::string>& builtin_povm_names() {
  static const std::vector<std::string> names{"standard", "mub", "5mub", "gmb", "5gmb", "4gmb", "sic", "psi"};
  return names;
}

Povm build_named(std::string_view name, int dim) {
  if (name == "standard") return build_standard_basis(dim);
  if (name == "mub") return build_mub(dim);
  if (name == "5mub") return build_mub_5(dim);
  if (name == "gmb") return build_gmb_full(dim);
  if (name == "5gmb") return build_gmb_5(dim);
  if (name == "4gmb") return build_gmb_4(dim);
  if (name == "sic") return build_sic(dim);
  if (name == "psi") return build_psi(dim);
  throw InvalidInput("unknown POVM '" + std::string(name) + "'");
}

}  // namespace tomolab
