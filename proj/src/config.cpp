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

#include "maserkur/config.hpp"

#include <charconv>
#include <fstream>

#include <fmt/format.h>

namespace maserkur {

namespace {

std::string normalize_key(std::string_view key) {
  std::string k(key);
  for (auto& c : k)
    if (c == '-') c = '_';
  return k;
}

std::optional<double>* numeric_slot(RunConfig& cfg, const std::string& key) {
  if (key == "gamma_h") return &cfg.gamma_h;
  if (key == "gamma_c") return &cfg.gamma_c;
  if (key == "n_h") return &cfg.n_h;
  if (key == "n_c") return &cfg.n_c;
  if (key == "lambda") return &cfg.lambda;
  if (key == "omega_h") return &cfg.omega_h;
  if (key == "omega_c") return &cfg.omega_c;
  return nullptr;
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument(fmt::format("{}: cannot parse '{}' as a number", key, text));
  return v;
}

}  // namespace

EngineParams RunConfig::engine() const {
  std::vector<Issue> missing;
  auto get = [&](const char* name, const std::optional<double>& v) {
    if (!v) missing.push_back({name, "is required"});
    return v.value_or(0.0);
  };
  EngineParams p;
  p.gamma_h = get("gamma_h", gamma_h);
  p.gamma_c = get("gamma_c", gamma_c);
  p.n_h = get("n_h", n_h);
  p.n_c = get("n_c", n_c);
  p.lambda = get("lambda", lambda);
  if (!missing.empty()) throw ValidationError(std::move(missing));
  return p;
}

std::optional<Frequencies> RunConfig::frequencies() const {
  if (omega_h && omega_c) return Frequencies{*omega_h, *omega_c};
  return std::nullopt;
}

RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
  RunConfig cfg;
  for (const auto& [raw_key, value] : doc.items()) {
    const std::string key = normalize_key(raw_key);
    if (auto* slot = numeric_slot(cfg, key)) {
      if (!value.is_number())
        throw std::invalid_argument(fmt::format("config: {} must be a number", raw_key));
      *slot = value.get<double>();
    } else if (key == "model") {
      if (!value.is_string()) throw std::invalid_argument("config: model must be a string");
      cfg.model = parse_model(value.get<std::string>());
    } else if (key == "sweep" || key == "hist" || key == "traj") {
      if (!value.is_object())
        throw std::invalid_argument(fmt::format("config: {} must be an object", raw_key));
      (key == "sweep" ? cfg.sweep : key == "hist" ? cfg.hist : cfg.traj) = value;
    } else if (key == "schema_version") {
      // accepted and ignored
    } else {
      throw std::invalid_argument(fmt::format("config: unknown key '{}'", raw_key));
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(fmt::format("config: cannot open {}", path.string()));
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(fmt::format("config: {}: {}", path.string(), e.what()));
  }
  return parse_config(doc);
}

void apply_override(RunConfig& cfg, std::string_view raw_key, std::string_view value) {
  const std::string key = normalize_key(raw_key);
  if (auto* slot = numeric_slot(cfg, key)) {
    *slot = parse_double(raw_key, value);
  } else if (key == "model") {
    cfg.model = parse_model(value);
  } else {
    throw std::invalid_argument(fmt::format("unknown override key '{}'", raw_key));
  }
}

EngineParams reference_sweep_params() {
  return EngineParams{.gamma_h = 0.016, .gamma_c = 2.0, .n_h = 5.0, .n_c = 0.001, .lambda = 0.05};
}

}  // namespace maserkur
