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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maserkur/liouvillian.hpp"

namespace maserkur {

/// Stationary density matrix. Populations are stored in the population order
/// of basis_for(kind); `coherence` is rho_10 (Model I) or rho_g0 (Model II)
/// and is absent for classical kinds.
struct SteadyState {
  ModelKind kind = ModelKind::QuantumI;
  std::vector<double> populations;
  std::optional<Complex> coherence;
  std::vector<std::string> diagnostics;

  /// Population by label ("rho_gg", "rho_00", "rho_11").
  double population(std::string_view label) const;
  /// Full vectorized state in basis order (coherence pair included).
  Eigen::VectorXcd vectorized() const;
};

/// Normalized right null vector of a chi = 0 generator, from the singular
/// value decomposition. Throws DegenerateError when the null space is not
/// one-dimensional (second-smallest singular value below 1e-8 sigma_max) or
/// the residual check fails.
SteadyState solve_null(const Superoperator& generator);

/// Convenience: solve_null(build_tilted(params, kind, 0)).
SteadyState solve_steady_state(const ValidatedParams& params, ModelKind kind);

/// Printed rational-function solutions for the quantum models. Classical
/// kinds return the populations of their quantum counterpart (the rate
/// matching makes them coincide) with no coherence.
SteadyState closed_form_state(const EngineParams& params, ModelKind kind);

}  // namespace maserkur
