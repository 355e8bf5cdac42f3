// Copyright 2026 The maserkur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "maserkur/params.hpp"

namespace maserkur {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Component labels of the vectorized density matrix. Populations come
/// first, then (for quantum models) the two coherences.
///
///   Model I:        rho_gg, rho_00, rho_11, rho_10, rho_01
///   Model II:       rho_11, rho_00, rho_gg, rho_0g, rho_g0
///   classical I/II: the population prefix of the above
struct BasisOrdering {
  std::vector<std::string> labels;
  int population_count = 0;

  int dim() const { return static_cast<int>(labels.size()); }
  /// Throws std::out_of_range for unknown labels.
  int index_of(std::string_view label) const;
};

const BasisOrdering& basis_for(ModelKind kind);

/// Exponent of exp(i chi) attached to an entry. The cold-bath emission entry
/// carries -1 and the cold-bath absorption entry +1.
enum class CountingTag : std::int8_t { Emission = -1, None = 0, Absorption = 1 };

struct TaggedEntry {
  int row = 0;
  int col = 0;
  CountingTag tag = CountingTag::None;
};

/// One classical jump between populations: rate * rho[from] flows to `to`.
struct JumpChannel {
  int from = 0;
  int to = 0;
  double rate = 0.0;
  CountingTag tag = CountingTag::None;
};

/// Dense generator acting on the vectorized density matrix, with the
/// counting-field structure kept alongside the untilted entries.
class Superoperator {
 public:
  Superoperator(ModelKind kind, ComplexMatrix bare, std::vector<TaggedEntry> tagged, double chi);

  ModelKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return static_cast<int>(bare_.rows()); }
  const BasisOrdering& basis() const { return basis_for(kind_); }
  double chi() const noexcept { return chi_; }

  /// Entries at the counting field this operator was built with.
  const ComplexMatrix& matrix() const noexcept { return tilted_; }
  /// Entries at chi = 0.
  const ComplexMatrix& bare() const noexcept { return bare_; }
  /// Same structure re-evaluated at another counting field.
  ComplexMatrix at_chi(double chi) const;

  const std::vector<TaggedEntry>& tagged_entries() const noexcept { return tagged_; }
  CountingTag tag(int row, int col) const;

  /// Entry addressed by labels, e.g. at("rho_gg", "rho_11").
  Complex at(std::string_view row, std::string_view col) const;

  /// Off-diagonal population-to-population entries (all bath and incoherent
  /// drive jumps). Every jump of the process appears exactly once.
  std::vector<JumpChannel> jump_channels() const;

 private:
  ModelKind kind_;
  ComplexMatrix bare_;
  ComplexMatrix tilted_;
  std::vector<TaggedEntry> tagged_;
  double chi_;
};

/// Tilted generator with the cold-bath jumps dressed by exp(-+ i chi). For
/// classical kinds gamma_cl is chosen to reproduce the quantum current.
Superoperator build_tilted(const ValidatedParams& params, ModelKind kind, double chi);

/// Incoherent replacement rate for the coherent drive:
///   Model I:  4 lambda^2 / (gamma_h (1+n_h) + gamma_c (1+n_c))
///   Model II: 4 lambda^2 / (gamma_h n_h + gamma_c n_c)
/// Throws DegenerateError when the Model II denominator vanishes.
double classical_rate(const ValidatedParams& params, Variant which);

struct ClassicalGenerator {
  Superoperator generator;
  double gamma_cl;
};

ClassicalGenerator build_classical(const ValidatedParams& params, Variant which);

/// Labeled CSV grid of the matrix entries, one "re+imi" cell per entry.
std::string dump_csv(const Superoperator& op);

}  // namespace maserkur
