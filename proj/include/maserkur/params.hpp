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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace maserkur {

/// Physical rates of the three-level engine. Units: hbar = k_B = 1, all
/// rates share one time unit.
struct EngineParams {
  double gamma_h = 0.0;  ///< hot-bath coupling
  double gamma_c = 0.0;  ///< cold-bath coupling
  double n_h = 0.0;      ///< hot-bath mean occupation
  double n_c = 0.0;      ///< cold-bath mean occupation
  double lambda = 0.0;   ///< matter-field coupling

  friend bool operator==(const EngineParams&, const EngineParams&) = default;
};

/// Transition frequencies, only needed to convert currents into power.
struct Frequencies {
  double omega_h = 0.0;
  double omega_c = 0.0;
};

/// The four generators: quantum Model I / II and their incoherent
/// (classical) equivalents.
enum class ModelKind { QuantumI, QuantumII, ClassicalI, ClassicalII };

/// Configuration of the level structure shared by a quantum model and its
/// classical equivalent.
enum class Variant { I, II };

inline constexpr ModelKind kAllKinds[] = {ModelKind::QuantumI, ModelKind::QuantumII,
                                          ModelKind::ClassicalI, ModelKind::ClassicalII};

constexpr bool is_quantum(ModelKind k) {
  return k == ModelKind::QuantumI || k == ModelKind::QuantumII;
}
constexpr Variant variant_of(ModelKind k) {
  return (k == ModelKind::QuantumI || k == ModelKind::ClassicalI) ? Variant::I : Variant::II;
}
constexpr ModelKind quantum_kind(Variant v) {
  return v == Variant::I ? ModelKind::QuantumI : ModelKind::QuantumII;
}
constexpr ModelKind classical_kind(Variant v) {
  return v == Variant::I ? ModelKind::ClassicalI : ModelKind::ClassicalII;
}

/// Short CLI name: q1, q2, c1, c2.
std::string_view short_name(ModelKind kind);
/// Parses q1/q2/c1/c2 (also QuantumI, ..., case sensitive). Throws
/// std::invalid_argument on unknown names.
ModelKind parse_model(std::string_view name);

/// A statistic that may be undefined (e.g. a Fano factor at zero current).
/// An empty value is the undefined marker; NaN is never used.
using Statistic = std::optional<double>;

struct Issue {
  std::string field;
  std::string message;
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<Issue> issues);
  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

/// Numerical degeneracy: non-unique steady state, vanishing polynomial
/// coefficient, undefined rate.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters that passed validate(). Immutable; converts implicitly to the
/// raw record so closed-form evaluators accept either.
class ValidatedParams {
 public:
  const EngineParams& params() const noexcept { return params_; }
  operator const EngineParams&() const noexcept { return params_; }  // NOLINT

  double gamma_h() const noexcept { return params_.gamma_h; }
  double gamma_c() const noexcept { return params_.gamma_c; }
  double n_h() const noexcept { return params_.n_h; }
  double n_c() const noexcept { return params_.n_c; }
  double lambda() const noexcept { return params_.lambda; }

  /// n_h > n_c: the engine produces positive work.
  bool engine_regime() const noexcept { return params_.n_h > params_.n_c; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  friend ValidatedParams validate(const EngineParams& p);

 private:
  explicit ValidatedParams(EngineParams p) : params_(p) {}
  EngineParams params_;
  std::vector<std::string> warnings_;
};

/// Checks every constraint and reports all violations at once. n_h == n_c and
/// lambda == 0 are accepted with a warning.
ValidatedParams validate(const EngineParams& p);

/// Bose occupation 1/(exp(omega/T) - 1). Throws std::domain_error unless
/// omega > 0 and T > 0.
double occupation_from_temperature(double omega, double temperature);
/// Inverse of occupation_from_temperature; requires n > 0.
double temperature_from_occupation(double omega, double occupation);

}  // namespace maserkur
