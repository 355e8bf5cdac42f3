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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "maserkur/params.hpp"

namespace maserkur {

/// Key/value run configuration. Parameter keys: gamma_h, gamma_c, n_h, n_c,
/// lambda, omega_h, omega_c, model. Subcommand settings live in the optional
/// objects "sweep", "hist" and "traj". The same parameter keys are accepted as
/// CLI overrides (with '-' or '_').
struct RunConfig {
  std::optional<double> gamma_h, gamma_c, n_h, n_c, lambda;
  std::optional<double> omega_h, omega_c;
  std::optional<ModelKind> model;
  nlohmann::json sweep = nlohmann::json::object();
  nlohmann::json hist = nlohmann::json::object();
  nlohmann::json traj = nlohmann::json::object();

  /// The five rates; throws ValidationError naming every missing key.
  EngineParams engine() const;
  /// Both frequencies if both were given.
  std::optional<Frequencies> frequencies() const;
};

/// Throws std::invalid_argument on unknown keys or wrongly typed values.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Applies `key=value` where key is one of the parameter keys. Throws
/// std::invalid_argument for unknown keys or unparsable numbers.
void apply_override(RunConfig& cfg, std::string_view key, std::string_view value);

/// Fixed parameters used throughout the coupling sweeps.
EngineParams reference_sweep_params();

}  // namespace maserkur
