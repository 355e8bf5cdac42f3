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

#include "maserkur/params.hpp"

#include <cmath>

#include <fmt/format.h>

namespace maserkur {

std::string_view short_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::QuantumI: return "q1";
    case ModelKind::QuantumII: return "q2";
    case ModelKind::ClassicalI: return "c1";
    case ModelKind::ClassicalII: return "c2";
  }
  return "?";
}

ModelKind parse_model(std::string_view name) {
  if (name == "q1" || name == "QuantumI") return ModelKind::QuantumI;
  if (name == "q2" || name == "QuantumII") return ModelKind::QuantumII;
  if (name == "c1" || name == "ClassicalI") return ModelKind::ClassicalI;
  if (name == "c2" || name == "ClassicalII") return ModelKind::ClassicalII;
  throw std::invalid_argument(fmt::format("unknown model '{}' (expected q1, q2, c1, c2)", name));
}

namespace {

std::string join_issues(const std::vector<Issue>& issues) {
  std::string out = "invalid parameters:";
  for (const auto& i : issues) out += fmt::format(" {}: {};", i.field, i.message);
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Issue> issues)
    : std::invalid_argument(join_issues(issues)), issues_(std::move(issues)) {}

ValidatedParams validate(const EngineParams& p) {
  std::vector<Issue> issues;
  auto check = [&](const char* field, double v, bool strictly_positive) {
    if (!std::isfinite(v)) {
      issues.push_back({field, "must be finite"});
    } else if (strictly_positive && !(v > 0.0)) {
      issues.push_back({field, "must be > 0"});
    } else if (!strictly_positive && v < 0.0) {
      issues.push_back({field, "must be >= 0"});
    }
  };
  check("gamma_h", p.gamma_h, true);
  check("gamma_c", p.gamma_c, true);
  check("n_h", p.n_h, false);
  check("n_c", p.n_c, false);
  check("lambda", p.lambda, false);
  if (!issues.empty()) throw ValidationError(std::move(issues));

  ValidatedParams out(p);
  if (p.n_h == p.n_c) out.warnings_.emplace_back("n_h == n_c: no net current (equilibrium)");
  if (p.lambda == 0.0) out.warnings_.emplace_back("lambda == 0: drive switched off, no current");
  return out;
}

double occupation_from_temperature(double omega, double temperature) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::domain_error("omega must be > 0");
  if (!(temperature > 0.0)) throw std::domain_error("temperature must be > 0");
  return 1.0 / std::expm1(omega / temperature);
}

double temperature_from_occupation(double omega, double occupation) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::domain_error("omega must be > 0");
  if (!(occupation > 0.0) || !std::isfinite(occupation))
    throw std::domain_error("occupation must be > 0");
  return omega / std::log1p(1.0 / occupation);
}

}  // namespace maserkur
