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

#include <bit>
#include <cstdint>
#include <string>

#include "tomolab/povm.hpp"

namespace tomolab {

namespace {

// GF(2^n) in the polynomial basis; bit i is the coefficient of x^i.
class BinaryField {
 public:
  explicit BinaryField(int bits) : bits_(bits) {
    // Primitive polynomials, fixed for reproducibility.
    switch (bits) {
      case 1: modulus_ = 0b11; break;
      case 2: modulus_ = 0b111; break;
      case 3: modulus_ = 0b1011; break;
      case 4: modulus_ = 0b10011; break;
      default: throw InvalidInput("build_mub: unsupported dimension");
    }
  }

  unsigned size() const { return 1u << bits_; }

  unsigned mul(unsigned a, unsigned b) const {
    unsigned product = 0;
    while (b != 0) {
      if (b & 1u) product ^= a;
      b >>= 1;
      a <<= 1;
      if (a & size()) a ^= modulus_;
    }
    return product;
  }

  // Absolute trace a + a^2 + ... + a^(2^(n-1)), an element of GF(2).
  unsigned trace(unsigned a) const {
    unsigned sum = 0;
    unsigned power = a;
    for (int k = 0; k < bits_; ++k) {
      sum ^= power;
      power = mul(power, power);
    }
    return sum & 1u;
  }

 private:
  int bits_;
  unsigned modulus_ = 0;
};

struct Pauli {
  unsigned x = 0;
  unsigned z = 0;
};

// Field pair (a, b) -> n-qubit Pauli. X bits are the coordinates of a; Z bit i
// is tr(b x^i), so the qubit symplectic form equals tr(a b') + tr(a' b).
Pauli pauli_from_field(const BinaryField& field, unsigned a, unsigned b, int bits) {
  Pauli p{a, 0};
  for (int i = 0; i < bits; ++i) p.z |= field.trace(field.mul(b, 1u << i)) << i;
  return p;
}

// Hermitian i^{x.z} X^x Z^z on basis index k: X^x Z^z |k> = (-1)^{z.k} |k ^ x>.
MatrixXc pauli_matrix(const Pauli& p, int dim) {
  static const cplx kPowI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx phase = kPowI[std::popcount(p.x & p.z) % 4];
  MatrixXc m = MatrixXc::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double sign = (std::popcount(p.z & static_cast<unsigned>(k)) % 2) ? -1.0 : 1.0;
    m(static_cast<unsigned>(k) ^ p.x, k) = phase * sign;
  }
  return m;
}

MatrixXc joint_eigenbasis(const std::vector<MatrixXc>& paulis, Rng& rng) {
  const Eigen::Index dim = paulis.front().rows();
  for (int attempt = 0; attempt < 64; ++attempt) {
    MatrixXc h = MatrixXc::Zero(dim, dim);
    for (const MatrixXc& p : paulis) h += rng.normal() * p;
    const HermitianEigen eig = eig_hermitian(h);
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k + 1 < dim; ++k) gap = std::min(gap, eig.values(k) - eig.values(k + 1));
    if (gap >= 1e-6) return eig.vectors;
  }
  throw NumericalError("build_mub: no nondegenerate combination found for a commuting class");
}

std::string field_label(unsigned lambda) {
  if (lambda == 0) return "0";
  std::string out;
  for (int i = 3; i >= 0; --i) {
    if (!(lambda & (1u << i))) continue;
    if (!out.empty()) out += "+";
    out += i == 0 ? "1" : (i == 1 ? "x" : "x^" + std::to_string(i));
  }
  return out;
}

}  // namespace

Povm build_mub(int dim, std::uint64_t seed) {
  if (dim < 2 || !std::has_single_bit(static_cast<unsigned>(dim))) {
    throw InvalidInput("build_mub: dimension must be a power of two");
  }
  const int bits = std::countr_zero(static_cast<unsigned>(dim));
  const BinaryField field(bits);
  Rng rng(seed);

  std::vector<MatrixXc> bases;
  std::vector<std::string> labels;

  // Class infinity {(0, x)}: diagonal Paulis, the standard basis.
  bases.push_back(MatrixXc::Identity(dim, dim));
  labels.push_back("mub-inf");

  for (unsigned lambda = 0; lambda < field.size(); ++lambda) {
    std::vector<MatrixXc> paulis;
    for (unsigned x = 1; x < field.size(); ++x) {
      paulis.push_back(pauli_matrix(pauli_from_field(field, x, field.mul(lambda, x), bits), dim));
    }
    bases.push_back(joint_eigenbasis(paulis, rng));
    labels.push_back("mub-" + field_label(lambda));
  }
  return Povm::from_bases("mub", bases, labels, IcClass::kFullyIc);
}

Povm build_mub_5(int dim, std::uint64_t seed) {
  const Povm full = build_mub(dim, seed);
  if (full.num_settings() < 5) throw InvalidInput("build_mub_5: dimension too small for five bases");
  const Povm head = full.first_settings(5, IcClass::kR1sIc);
  return Povm("5mub", head.dim(), head.settings(), IcClass::kR1sIc);
}

}  // namespace tomolab
