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

// Parameter sweeps and uniform random sampling of the KUR quantifier.

#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "maserkur/params.hpp"

namespace maserkur {

inline constexpr int kSchemaVersion = 1;

enum class Axis { GammaH, GammaC, NH, NC, Lambda };
enum class Quantity { Current, Variance, Fano, Activity, RatioR, Q };

std::string_view axis_name(Axis a);
/// gamma_h, gamma_c, n_h, n_c, lambda ('-' accepted for '_').
Axis parse_axis(std::string_view name);
std::string_view quantity_name(Quantity q);
Quantity parse_quantity(std::string_view name);

void set_axis(EngineParams& p, Axis a, double value);

/// n points spaced evenly in log (lo > 0) or linearly; n = 1 gives {lo}.
std::vector<double> log_grid(double lo, double hi, std::size_t n);
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

struct SweepSpec {
  Axis axis = Axis::Lambda;
  std::vector<double> values;
  EngineParams fixed;
  std::vector<ModelKind> kinds{std::begin(kAllKinds), std::end(kAllKinds)};
  std::vector<Quantity> quantities{Quantity::Current, Quantity::Variance, Quantity::Fano,
                                   Quantity::Activity, Quantity::RatioR, Quantity::Q};
  std::size_t crosscheck_stride = 10;  ///< 0 disables
  unsigned threads = 1;

  /// 200-point log grid lambda in [1e-3, 3] at the reference parameters.
  static SweepSpec coupling_sweep(std::size_t points = 200);
};

/// Throws std::invalid_argument: empty or non-monotone grid, no kinds, or a
/// grid value that fails validate().
void check_spec(const SweepSpec& spec);

struct SweepRow {
  double axis_value = 0.0;
  ModelKind kind = ModelKind::QuantumI;
  Statistic current, variance, fano, activity, ratio_R, Q;
  bool undefined = false;  ///< some requested quantity has no value

  Statistic get(Quantity q) const;
};

struct SweepTable {
  SweepSpec spec;
  std::vector<SweepRow> rows;  ///< grid-major, kinds in spec order
  std::size_t crosschecked_points = 0;
  double max_crosscheck_error = 0.0;  ///< relative, current / variance / activity

  /// Rows of one kind in grid order.
  std::vector<SweepRow> column(ModelKind kind) const;
};

class CrosscheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-form values on every grid point. Every crosscheck_stride-th point
/// is recomputed from the counting statistics; disagreement beyond 1e-6
/// relative throws CrosscheckError.
SweepTable run_sweep(const SweepSpec& spec);

/// # schema_version line, then
/// axis_value,kind,current,variance,fano,activity,ratio_R,Q,undefined_flag
/// Undefined or unrequested values are empty fields.
void write_sweep_csv(std::ostream& out, const SweepTable& table);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct SamplingSpec {
  std::uint64_t n_samples = 0;
  Range gamma_h, gamma_c, n_h, n_c, lambda;
  double bin_width = 0.01;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  /// gamma_h in [1e-4, 1], gamma_c in [1e-4, 5], n_h in [0, 5],
  /// n_c in [0, 0.1], lambda in [1e-4, 2].
  static SamplingSpec uniform_box(std::uint64_t n_samples, std::uint64_t seed);
};

/// Throws std::invalid_argument when a range is inverted or leaves the valid
/// parameter domain, or bin_width <= 0.
void check_spec(const SamplingSpec& spec);

/// Sample i, drawn in the order gamma_h, gamma_c, n_h, n_c, lambda from the
/// Philox stream (seed, i).
EngineParams draw_sample(const SamplingSpec& spec, std::uint64_t index);

struct Violation {
  std::uint64_t index = 0;
  EngineParams params;
  double Q = 0.0;
  Statistic fano;
  double activity_over_current = 0.0;
};

struct Histogram {
  ModelKind kind = ModelKind::QuantumI;
  std::vector<double> bin_edges;  ///< counts.size() + 1 edges from 0
  std::vector<std::uint64_t> counts;
  std::uint64_t n_samples = 0;
  std::uint64_t n_violations = 0;  ///< Q > 1
  std::uint64_t n_undefined = 0;
  Statistic max_Q;
  std::vector<Violation> violations;
};

Histogram run_sampling(const SamplingSpec& spec, ModelKind kind);

/// # schema_version line, then bin_left,bin_right,count.
void write_histogram_csv(std::ostream& out, const Histogram& h);

/// {schema_version, n_samples, n_violations, n_undefined, max_Q, seed,
///  ranges, model, bin_width}
nlohmann::json histogram_sidecar(const SamplingSpec& spec, const Histogram& h);

/// Reads the "sweep" config object:
///   {axis, min, max, points, scale: log|linear, kinds: [...], quantities: [...]}
/// Missing keys fall back to coupling_sweep().
SweepSpec sweep_spec_from_json(const nlohmann::json& j, const EngineParams& fixed);

/// Reads the "hist" config object: {n_samples, bin_width, ranges: {key: [lo, hi]}}.
/// Missing keys fall back to uniform_box().
SamplingSpec sampling_spec_from_json(const nlohmann::json& j, std::uint64_t seed);

}  // namespace maserkur
