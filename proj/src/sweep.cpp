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

#include "maserkur/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "maserkur/analytic.hpp"
#include "maserkur/config.hpp"
#include "maserkur/fcs.hpp"
#include "maserkur/parallel.hpp"
#include "maserkur/rng.hpp"

namespace maserkur {

namespace {

constexpr double kCrosscheckTolerance = 1e-6;

std::string normalized(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

std::string cell(const Statistic& s) { return s ? fmt::format("{:.17g}", *s) : std::string(); }

// floor keeps exact zeros (balanced baths) from comparing against roundoff
double rel_diff(double a, double b, double floor = 0.0) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

bool requested(const SweepSpec& spec, Quantity q) {
  return std::find(spec.quantities.begin(), spec.quantities.end(), q) != spec.quantities.end();
}

SweepRow evaluate_row(const SweepSpec& spec, const EngineParams& p, double x, ModelKind kind) {
  SweepRow row;
  row.axis_value = x;
  row.kind = kind;
  try {
    const ClosedFormStats s = closed_form_stats(p, kind);
    row.current = s.current;
    row.variance = s.variance;
    row.fano = s.fano;
    row.activity = s.activity;
    row.ratio_R = s.ratio_R;
    row.Q = s.Q;
  } catch (const DegenerateError&) {
    row = SweepRow{x, kind, {}, {}, {}, {}, {}, {}, true};
  }
  for (Quantity q : spec.quantities) {
    if (!row.get(q)) row.undefined = true;
  }
  for (Quantity q : {Quantity::Current, Quantity::Variance, Quantity::Fano, Quantity::Activity,
                     Quantity::RatioR, Quantity::Q}) {
    if (requested(spec, q)) continue;
    switch (q) {
      case Quantity::Current: row.current.reset(); break;
      case Quantity::Variance: row.variance.reset(); break;
      case Quantity::Fano: row.fano.reset(); break;
      case Quantity::Activity: row.activity.reset(); break;
      case Quantity::RatioR: row.ratio_R.reset(); break;
      case Quantity::Q: row.Q.reset(); break;
    }
  }
  return row;
}

// Largest relative disagreement between closed form and counting statistics.
double crosscheck(const EngineParams& p, ModelKind kind) {
  const ValidatedParams v = validate(p);
  try {
    const ClosedFormStats s = closed_form_stats(p, kind);
    const FcsResult r = assemble(v, kind);
    // current and variance live on the activity scale
    const double floor = 1e-9 * r.activity;
    double err = std::max(rel_diff(s.current, r.current, floor), rel_diff(s.activity, r.activity));
    if (s.variance) err = std::max(err, rel_diff(*s.variance, r.variance, floor));
    return err;
  } catch (const DegenerateError&) {
    return 0.0;
  }
}

std::vector<ModelKind> kinds_from_json(const nlohmann::json& j) {
  std::vector<ModelKind> out;
  for (const auto& k : j) out.push_back(parse_model(k.get<std::string>()));
  return out;
}

nlohmann::json range_json(const Range& r) { return nlohmann::json::array({r.lo, r.hi}); }

}  // namespace

std::string_view axis_name(Axis a) {
  switch (a) {
    case Axis::GammaH: return "gamma_h";
    case Axis::GammaC: return "gamma_c";
    case Axis::NH: return "n_h";
    case Axis::NC: return "n_c";
    case Axis::Lambda: return "lambda";
  }
  return "?";
}

Axis parse_axis(std::string_view name) {
  const std::string n = normalized(name);
  for (Axis a : {Axis::GammaH, Axis::GammaC, Axis::NH, Axis::NC, Axis::Lambda})
    if (n == axis_name(a)) return a;
  throw std::invalid_argument(fmt::format("unknown sweep axis '{}'", name));
}

std::string_view quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Current: return "current";
    case Quantity::Variance: return "variance";
    case Quantity::Fano: return "fano";
    case Quantity::Activity: return "activity";
    case Quantity::RatioR: return "ratio_R";
    case Quantity::Q: return "Q";
  }
  return "?";
}

Quantity parse_quantity(std::string_view name) {
  const std::string n = normalized(name);
  for (Quantity q : {Quantity::Current, Quantity::Variance, Quantity::Fano, Quantity::Activity,
                     Quantity::RatioR, Quantity::Q})
    if (n == quantity_name(q)) return q;
  throw std::invalid_argument(fmt::format("unknown quantity '{}'", name));
}

void set_axis(EngineParams& p, Axis a, double value) {
  switch (a) {
    case Axis::GammaH: p.gamma_h = value; break;
    case Axis::GammaC: p.gamma_c = value; break;
    case Axis::NH: p.n_h = value; break;
    case Axis::NC: p.n_c = value; break;
    case Axis::Lambda: p.lambda = value; break;
  }
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log grid needs 0 < lo <= hi");
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (!(hi >= lo)) throw std::invalid_argument("linear grid needs lo <= hi");
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

SweepSpec SweepSpec::coupling_sweep(std::size_t points) {
  SweepSpec s;
  s.axis = Axis::Lambda;
  s.values = log_grid(1e-3, 3.0, points);
  s.fixed = reference_sweep_params();
  return s;
}

void check_spec(const SweepSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("sweep grid is empty");
  if (spec.kinds.empty()) throw std::invalid_argument("sweep has no model kinds");
  const bool up = std::is_sorted(spec.values.begin(), spec.values.end());
  const bool down = std::is_sorted(spec.values.rbegin(), spec.values.rend());
  if (!up && !down) throw std::invalid_argument("sweep grid is not monotone");
  for (double x : spec.values) {
    EngineParams p = spec.fixed;
    set_axis(p, spec.axis, x);
    validate(p);
  }
}

Statistic SweepRow::get(Quantity q) const {
  switch (q) {
    case Quantity::Current: return current;
    case Quantity::Variance: return variance;
    case Quantity::Fano: return fano;
    case Quantity::Activity: return activity;
    case Quantity::RatioR: return ratio_R;
    case Quantity::Q: return Q;
  }
  return std::nullopt;
}

std::vector<SweepRow> SweepTable::column(ModelKind kind) const {
  std::vector<SweepRow> out;
  for (const auto& r : rows)
    if (r.kind == kind) out.push_back(r);
  return out;
}

SweepTable run_sweep(const SweepSpec& spec) {
  check_spec(spec);
  SweepTable table;
  table.spec = spec;
  const std::size_t nk = spec.kinds.size();
  const std::size_t n = spec.values.size();
  table.rows.resize(n * nk);
  std::vector<double> errors(n * nk, 0.0);
  parallel_for(n, spec.threads, [&](std::size_t i) {
    EngineParams p = spec.fixed;
    set_axis(p, spec.axis, spec.values[i]);
    const bool check = spec.crosscheck_stride != 0 && i % spec.crosscheck_stride == 0;
    for (std::size_t k = 0; k < nk; ++k) {
      table.rows[i * nk + k] = evaluate_row(spec, p, spec.values[i], spec.kinds[k]);
      if (check) errors[i * nk + k] = crosscheck(p, spec.kinds[k]);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.crosscheck_stride == 0 || i % spec.crosscheck_stride != 0) continue;
    ++table.crosschecked_points;
    for (std::size_t k = 0; k < nk; ++k) {
      const double e = errors[i * nk + k];
      table.max_crosscheck_error = std::max(table.max_crosscheck_error, e);
      if (e > kCrosscheckTolerance)
        throw CrosscheckError(fmt::format("closed form and counting statistics differ by {:.3g} at {} = {:.17g}, model {}",
                                          e, axis_name(spec.axis), spec.values[i],
                                          short_name(spec.kinds[k])));
    }
  }
  return table;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "# schema_version: " << kSchemaVersion << "\n";
  out << "axis_value,kind,current,variance,fano,activity,ratio_R,Q,undefined_flag\n";
  for (const auto& r : table.rows) {
    out << fmt::format("{:.17g},{},{},{},{},{},{},{},{}\n", r.axis_value, short_name(r.kind),
                       cell(r.current), cell(r.variance), cell(r.fano), cell(r.activity),
                       cell(r.ratio_R), cell(r.Q), r.undefined ? 1 : 0);
  }
}

SamplingSpec SamplingSpec::uniform_box(std::uint64_t n_samples, std::uint64_t seed) {
  SamplingSpec s;
  s.n_samples = n_samples;
  s.gamma_h = {1e-4, 1.0};
  s.gamma_c = {1e-4, 5.0};
  s.n_h = {0.0, 5.0};
  s.n_c = {0.0, 0.1};
  s.lambda = {1e-4, 2.0};
  s.seed = seed;
  return s;
}

void check_spec(const SamplingSpec& spec) {
  auto check = [](const Range& r, const char* name, bool strictly_positive) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.hi < r.lo)
      throw std::invalid_argument(fmt::format("range for {} is invalid", name));
    if (strictly_positive ? !(r.lo > 0.0) : !(r.lo >= 0.0))
      throw std::invalid_argument(fmt::format("range for {} leaves the parameter domain", name));
  };
  check(spec.gamma_h, "gamma_h", true);
  check(spec.gamma_c, "gamma_c", true);
  check(spec.n_h, "n_h", false);
  check(spec.n_c, "n_c", false);
  check(spec.lambda, "lambda", false);
  if (!(spec.bin_width > 0.0) || !std::isfinite(spec.bin_width))
    throw std::invalid_argument("bin_width must be positive");
}

EngineParams draw_sample(const SamplingSpec& spec, std::uint64_t index) {
  PhiloxStream rng(spec.seed, index);
  EngineParams p;
  p.gamma_h = rng.uniform(spec.gamma_h.lo, spec.gamma_h.hi);
  p.gamma_c = rng.uniform(spec.gamma_c.lo, spec.gamma_c.hi);
  p.n_h = rng.uniform(spec.n_h.lo, spec.n_h.hi);
  p.n_c = rng.uniform(spec.n_c.lo, spec.n_c.hi);
  p.lambda = rng.uniform(spec.lambda.lo, spec.lambda.hi);
  return p;
}

Histogram run_sampling(const SamplingSpec& spec, ModelKind kind) {
  check_spec(spec);
  std::vector<Statistic> q(spec.n_samples);
  parallel_for(spec.n_samples, spec.threads, [&](std::size_t i) {
    try {
      q[i] = kur_quantifier(draw_sample(spec, i), kind);
    } catch (const DegenerateError&) {
      q[i].reset();
    }
  });

  Histogram h;
  h.kind = kind;
  h.n_samples = spec.n_samples;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!q[i]) {
      ++h.n_undefined;
      continue;
    }
    const double v = *q[i];
    h.max_Q = h.max_Q ? std::max(*h.max_Q, v) : v;
    const auto bin = static_cast<std::size_t>(std::max(0.0, std::floor(v / spec.bin_width)));
    if (bin >= h.counts.size()) h.counts.resize(bin + 1, 0);
    ++h.counts[bin];
    if (v > 1.0) {
      ++h.n_violations;
      const EngineParams p = draw_sample(spec, i);
      const Statistic f = fano_closed(p, kind);
      const double current = current_closed(p, kind);
      h.violations.push_back({i, p, v, f, activity_closed(p, kind) / current});
    }
  }
  h.bin_edges.resize(h.counts.size() + 1);
  for (std::size_t k = 0; k < h.bin_edges.size(); ++k)
    h.bin_edges[k] = static_cast<double>(k) * spec.bin_width;
  return h;
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "# schema_version: " << kSchemaVersion << "\n";
  out << "bin_left,bin_right,count\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k)
    out << fmt::format("{:.17g},{:.17g},{}\n", h.bin_edges[k], h.bin_edges[k + 1], h.counts[k]);
}

nlohmann::json histogram_sidecar(const SamplingSpec& spec, const Histogram& h) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["n_samples"] = h.n_samples;
  j["n_violations"] = h.n_violations;
  j["n_undefined"] = h.n_undefined;
  j["max_Q"] = h.max_Q ? nlohmann::json(*h.max_Q) : nlohmann::json(nullptr);
  j["seed"] = spec.seed;
  j["ranges"] = {{"gamma_h", range_json(spec.gamma_h)}, {"gamma_c", range_json(spec.gamma_c)},
                 {"n_h", range_json(spec.n_h)},         {"n_c", range_json(spec.n_c)},
                 {"lambda", range_json(spec.lambda)}};
  j["model"] = std::string(short_name(h.kind));
  j["bin_width"] = spec.bin_width;
  return j;
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j, const EngineParams& fixed) {
  SweepSpec s = SweepSpec::coupling_sweep();
  s.fixed = fixed;
  for (const auto& [key, value] : j.items()) {
    if (key != "axis" && key != "min" && key != "max" && key != "points" && key != "scale" &&
        key != "kinds" && key != "quantities" && key != "crosscheck_stride")
      throw std::invalid_argument(fmt::format("unknown sweep key '{}'", key));
  }
  s.axis = parse_axis(j.value("axis", std::string("lambda")));
  const double lo = j.value("min", 1e-3);
  const double hi = j.value("max", 3.0);
  const auto points = j.value("points", std::size_t{200});
  const std::string scale = j.value("scale", std::string("log"));
  if (scale == "log")
    s.values = log_grid(lo, hi, points);
  else if (scale == "linear")
    s.values = linear_grid(lo, hi, points);
  else
    throw std::invalid_argument(fmt::format("unknown grid scale '{}'", scale));
  if (j.contains("kinds")) s.kinds = kinds_from_json(j.at("kinds"));
  if (j.contains("quantities")) {
    s.quantities.clear();
    for (const auto& q : j.at("quantities")) s.quantities.push_back(parse_quantity(q.get<std::string>()));
  }
  s.crosscheck_stride = j.value("crosscheck_stride", s.crosscheck_stride);
  return s;
}

SamplingSpec sampling_spec_from_json(const nlohmann::json& j, std::uint64_t seed) {
  SamplingSpec s = SamplingSpec::uniform_box(j.value("n_samples", std::uint64_t{10000}), seed);
  for (const auto& [key, value] : j.items()) {
    if (key != "n_samples" && key != "bin_width" && key != "ranges")
      throw std::invalid_argument(fmt::format("unknown hist key '{}'", key));
  }
  s.bin_width = j.value("bin_width", s.bin_width);
  if (j.contains("ranges")) {
    for (const auto& [key, value] : j.at("ranges").items()) {
      const Range r{value.at(0).get<double>(), value.at(1).get<double>()};
      const std::string k = normalized(key);
      if (k == "gamma_h") s.gamma_h = r;
      else if (k == "gamma_c") s.gamma_c = r;
      else if (k == "n_h") s.n_h = r;
      else if (k == "n_c") s.n_c = r;
      else if (k == "lambda") s.lambda = r;
      else throw std::invalid_argument(fmt::format("unknown range key '{}'", key));
    }
  }
  return s;
}

}  // namespace maserkur
