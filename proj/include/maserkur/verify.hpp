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

// Cross-module property suite over random draws from the sampling box.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "maserkur/params.hpp"

namespace maserkur {

/// Deliberate corruption of one closed form, for testing that the suite
/// notices.
enum class Fault { None, CurrentII, FanoGap, RatioR };

/// none, current_ii, fano_gap, ratio_r.
Fault parse_fault(std::string_view name);

struct VerifyOptions {
  std::uint64_t n_draws = 1000;
  std::uint64_t seed = 7;
  unsigned threads = 1;
  Fault fault = Fault::None;
};

struct PropertyResult {
  std::string name;
  double tolerance = 0.0;
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  double worst = 0.0;      ///< largest error metric seen
  std::string reproducer;  ///< CLI line for the first failing draw
};

struct VerifyReport {
  std::uint64_t n_draws = 0;
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;

  bool ok() const;
};

/// Runs every property on n_draws samples of SamplingSpec::uniform_box.
/// Throws std::invalid_argument when n_draws == 0.
VerifyReport verify(const VerifyOptions& opts);

/// `maserkur point` invocation reproducing one draw.
std::string reproducer_line(const EngineParams& p, ModelKind kind);

}  // namespace maserkur
