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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tomolab/state.hpp"

namespace tomolab {

enum class IcClass { kFullyIc, kR1sIc, kR1Ic, kUnknown };

std::string_view to_string(IcClass ic);
/// Accepts the file spellings FULLY_IC, R1S_IC, R1_IC, UNKNOWN.
IcClass ic_class_from_string(std::string_view text);

/// One complete measurement: effects summing to the identity.
struct PovmSetting {
  std::string label;
  std::vector<HermitianOperator> effects;
  bool is_orthobasis = false;
};

/// Rejected POVM with the completeness residual ||sum E - I||_F of every
/// setting, in setting order.
class PovmValidationError : public InvalidInput {
 public:
  PovmValidationError(const std::string& what, std::vector<double> residuals)
      : InvalidInput(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// Ordered collection of measurement settings on a d-dimensional space.
class Povm {
 public:
  /// Validates effect positivity (1e-10), per-setting completeness (1e-8) and,
  /// for settings flagged as orthobases, that they hold d rank-1 projectors.
  Povm(std::string name, int dim, std::vector<PovmSetting> settings, IcClass claim);

  /// Each column of a basis matrix is one basis vector; the setting holds
  /// the projectors onto the columns.
  static Povm from_bases(std::string name, const std::vector<MatrixXc>& bases,
                         const std::vector<std::string>& labels, IcClass claim);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const std::vector<PovmSetting>& settings() const { return settings_; }
  std::size_t num_settings() const { return settings_.size(); }
  IcClass ic_class_claim() const { return claim_; }
  std::size_t total_outcomes() const;

  /// The first n settings in construction order, with the given IC claim.
  Povm first_settings(std::size_t n, IcClass claim = IcClass::kUnknown) const;

  /// Born-rule probabilities Tr(E rho) of all outcomes, settings concatenated.
  Eigen::VectorXd probabilities(const DensityMatrix& rho) const;
  Eigen::VectorXd probabilities(const PureState& psi) const;

  /// Per-setting ||sum_mu E_mu - I||_F.
  std::vector<double> completeness_residuals() const;

 private:
  std::string name_;
  int dim_;
  std::vector<PovmSetting> settings_;
  IcClass claim_;
};

Povm build_standard_basis(int dim);

inline constexpr std::uint64_t kMubSeed = 0x6d75622d62617365ULL;

/// d+1 mutually unbiased bases for d = 2^n, n <= 4. Bases are the joint
/// eigenbases of the commuting Pauli classes of the field spread, ordered
/// infinity, 0, 1, x, x+1, ... over GF(d).
Povm build_mub(int dim, std::uint64_t seed = kMubSeed);

/// The first five bases of build_mub.
Povm build_mub_5(int dim, std::uint64_t seed = kMubSeed);

/// Pairs (j, k) of one perfect matching per round of the circle-method
/// 1-factorization of the complete graph on d vertices (d even).
std::vector<std::vector<std::pair<int, int>>> round_robin_matchings(int dim);

/// Standard basis plus X- and Y-type pair bases for every round-robin
/// matching: 2d - 1 settings.
Povm build_gmb_full(int dim);

/// Standard basis plus the two X-type and two Y-type bases for the pairings
/// (2k, 2k+1) and (2k+1, 2k+2 mod d).
Povm build_gmb_5(int dim);

/// build_gmb_5 without the standard basis.
Povm build_gmb_4(int dim);

/// Weyl-Heisenberg displacement X^shift Z^clock.
MatrixXc weyl_heisenberg(int dim, int shift, int clock);

struct SicFiducialSearch {
  VectorXc fiducial;
  double residual = 0.0;  // sum over orbit pairs of (|<a|b>|^2 - 1/(d+1))^2
  int restarts = 0;
};

/// Multi-start Levenberg-Marquardt search for a Weyl-Heisenberg SIC fiducial.
/// Throws NumericalError (with the best residual) if no restart reaches 1e-18.
SicFiducialSearch find_sic_fiducial(int dim, std::uint64_t seed, int max_restarts = 100);

/// Sum over unordered orbit pairs of (|<psi_a|psi_b>|^2 - 1/(d+1))^2.
double sic_pair_residual(const VectorXc& fiducial);

inline constexpr std::uint64_t kSicSeed = 0x7369632d66696475ULL;

/// SIC-POVM (1/d)|psi_jk><psi_jk| from the orbit of a fiducial, searched
/// numerically unless one is supplied. Supported for 2 <= d <= 8.
Povm build_sic(int dim, const std::optional<VectorXc>& fiducial = std::nullopt,
               std::uint64_t seed = kSicSeed);

/// 3d - 2 rank-1 effects probing |c_0|^2 and the coherences c_0^* c_j.
Povm build_psi(int dim);

/// Built-in POVM by name: standard, mub, 5mub, gmb, 5gmb, 4gmb, sic, psi.
Povm build_named(std::string_view name, int dim);

/// Names accepted by build_named.
const std::vector<std::string>& builtin_povm_names();

/// Real-parametrized linear map rho -> p, one row per outcome.
struct MeasurementMap {
  Eigen::MatrixXd matrix;           // outcomes x d^2
  Eigen::VectorXd singular_values;  // descending
  Eigen::MatrixXd kernel;           // d^2 x kernel_dim, orthonormal columns
  int rank = 0;
};

/// Singular values below tolerance * max(1, sigma_max) count as zero.
MeasurementMap measurement_map(const Povm& povm, double tolerance = tol::kRank);

/// Unitary dilation of a single rank-1 setting into a D-level space.
struct NeumarkEmbedding {
  UnitaryMap unitary;         // D x D; first d columns are the isometry
  std::vector<int> sublevel;  // outcome -> standard-basis level in D
  int subspace_dim = 0;
  double residual = 0.0;      // max_mu ||Pi E_mu Pi^dagger - E_mu||_F
};

NeumarkEmbedding neumark_embed(const PovmSetting& setting, int big_dim);
/// Requires a single-setting POVM.
NeumarkEmbedding neumark_embed(const Povm& povm, int big_dim);

/// The sqrt-vector v with E = v v^dagger; throws InvalidInput if E is not
/// rank-1 (second eigenvalue above 1e-9).
VectorXc rank_one_vector(const HermitianOperator& effect);

}  // namespace tomolab
