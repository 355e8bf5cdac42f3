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

// maserkur point|sweep|hist|verify|traj
//
// Exit codes: 0 success, 1 validation or usage error, 2 property or
// cross-check failure, 3 numerical degeneracy.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "maserkur/analytic.hpp"
#include "maserkur/config.hpp"
#include "maserkur/fcs.hpp"
#include "maserkur/sweep.hpp"
#include "maserkur/trajectory.hpp"
#include "maserkur/verify.hpp"

namespace {

using nlohmann::json;
using namespace maserkur;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitProperty = 2;
constexpr int kExitDegenerate = 3;

struct Common {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::optional<std::string> model;
  std::vector<std::pair<std::string, std::optional<std::string>>> overrides{
      {"gamma_h", {}}, {"gamma_c", {}}, {"n_h", {}},     {"n_c", {}},
      {"lambda", {}},  {"omega_h", {}}, {"omega_c", {}},
  };
};

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::invalid_argument(fmt::format("cannot write {}", path));
    }
  }
  std::ostream& stream() { return path_.empty() ? std::cout : file_; }

 private:
  std::string path_;
  std::ofstream file_;
};

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
  for (const auto& [key, value] : c.overrides)
    if (value) apply_override(cfg, key, *value);
  if (c.model) apply_override(cfg, "model", *c.model);
  return cfg;
}

json stat(const Statistic& s) { return s ? json(*s) : json(nullptr); }

json params_json(const EngineParams& p) {
  return {{"gamma_h", p.gamma_h}, {"gamma_c", p.gamma_c}, {"n_h", p.n_h},
          {"n_c", p.n_c},         {"lambda", p.lambda}};
}

double route_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-9); }

double closed_gap(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

void sidecar_write(const std::string& out_path, const json& j) {
  if (out_path.empty()) {
    std::cerr << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out_path + ".json", std::ios::binary);
  if (!f) throw std::invalid_argument(fmt::format("cannot write {}.json", out_path));
  f << j.dump(2) << "\n";
}

int cmd_point(const Common& c) {
  const RunConfig cfg = resolve(c);
  const ValidatedParams v = validate(cfg.engine());
  const ModelKind kind = cfg.model.value_or(ModelKind::QuantumI);

  const FcsResult num = assemble(v, kind);
  const SpectralCumulants sp = cumulants_spectral(v, kind);
  const ClosedFormStats cf = closed_form_stats(v, kind);

  json pops = json::object();
  const auto& basis = basis_for(kind);
  for (int i = 0; i < basis.population_count; ++i)
    pops[basis.labels[static_cast<std::size_t>(i)]] = num.state.populations[static_cast<std::size_t>(i)];

  json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = c.seed;
  j["model"] = std::string(short_name(kind));
  j["params"] = params_json(v);
  j["engine_regime"] = v.engine_regime();
  j["warnings"] = v.warnings();
  j["current"] = num.current;
  j["variance"] = num.variance;
  j["fano"] = stat(num.fano);
  j["activity"] = num.activity;
  j["ratio_R"] = stat(num.ratio_R);
  j["Q"] = stat(num.Q);
  j["populations"] = pops;
  j["coherence"] = num.state.coherence
                       ? json{{"re", num.state.coherence->real()}, {"im", num.state.coherence->imag()}}
                       : json(nullptr);
  j["routes"] = {
      {"charpoly", {{"current", num.current}, {"variance", num.variance}}},
      {"spectral",
       {{"current", sp.current}, {"variance", sp.variance}, {"gap", sp.gap}, {"gap_ok", sp.gap_ok}}},
  };
  j["route_discrepancy"] =
      std::max(route_gap(num.current, sp.current), route_gap(num.variance, sp.variance));
  j["closed_form"] = {{"current", cf.current}, {"variance", stat(cf.variance)},
                      {"fano", stat(cf.fano)},   {"activity", cf.activity},
                      {"ratio_R", stat(cf.ratio_R)}, {"Q", stat(cf.Q)}};
  double cd = std::max(closed_gap(cf.current, num.current), closed_gap(cf.activity, num.activity));
  if (cf.variance) cd = std::max(cd, closed_gap(*cf.variance, num.variance));
  j["closed_form_discrepancy"] = cd;
  if (const auto f = cfg.frequencies()) {
    const PowerStats ps = power_stats(num.current, num.variance, *f);
    j["power"] = {{"power", ps.power}, {"power_variance", ps.power_variance}};
  }
  Output out(c.out_path);
  out.stream() << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_sweep(const Common& c, std::optional<std::size_t> points) {
  const RunConfig cfg = resolve(c);
  EngineParams fixed = reference_sweep_params();
  // Parameters given in the config or on the command line replace the reference ones.
  if (cfg.gamma_h) fixed.gamma_h = *cfg.gamma_h;
  if (cfg.gamma_c) fixed.gamma_c = *cfg.gamma_c;
  if (cfg.n_h) fixed.n_h = *cfg.n_h;
  if (cfg.n_c) fixed.n_c = *cfg.n_c;
  if (cfg.lambda) fixed.lambda = *cfg.lambda;
  json sj = cfg.sweep;
  if (points) sj["points"] = *points;
  SweepSpec spec = sweep_spec_from_json(sj, fixed);
  if (cfg.model && !cfg.sweep.contains("kinds")) spec.kinds = {*cfg.model};
  spec.threads = c.threads;
  const SweepTable table = run_sweep(spec);

  Output out(c.out_path);
  write_sweep_csv(out.stream(), table);
  json kinds = json::array();
  for (ModelKind k : spec.kinds) kinds.push_back(std::string(short_name(k)));
  sidecar_write(c.out_path, {{"schema_version", kSchemaVersion},
                             {"seed", c.seed},
                             {"axis", std::string(axis_name(spec.axis))},
                             {"points", spec.values.size()},
                             {"fixed", params_json(spec.fixed)},
                             {"kinds", kinds},
                             {"crosschecked_points", table.crosschecked_points},
                             {"max_crosscheck_error", table.max_crosscheck_error}});
  return kExitOk;
}

int cmd_hist(const Common& c, std::optional<std::uint64_t> n_samples,
             std::optional<double> bin_width) {
  const RunConfig cfg = resolve(c);
  json hj = cfg.hist;
  if (n_samples) hj["n_samples"] = *n_samples;
  if (bin_width) hj["bin_width"] = *bin_width;
  SamplingSpec spec = sampling_spec_from_json(hj, c.seed);
  spec.threads = c.threads;
  const ModelKind kind = cfg.model.value_or(ModelKind::QuantumII);
  const Histogram h = run_sampling(spec, kind);
  Output out(c.out_path);
  write_histogram_csv(out.stream(), h);
  sidecar_write(c.out_path, histogram_sidecar(spec, h));
  return kExitOk;
}

int cmd_verify(const Common& c, std::uint64_t n_draws, const std::string& fault) {
  VerifyOptions opts;
  opts.n_draws = n_draws;
  opts.seed = c.seed;
  opts.threads = c.threads;
  opts.fault = parse_fault(fault);
  const VerifyReport report = verify(opts);

  json props = json::array();
  for (const auto& p : report.properties) {
    std::cout << fmt::format("{} {} checked={} failed={} worst={:.3g} tol={:.3g}\n",
                             p.failed == 0 ? "PASS" : "FAIL", p.name, p.checked, p.failed,
                             p.worst, p.tolerance);
    if (p.failed != 0) std::cout << "  reproduce: " << p.reproducer << "\n";
    props.push_back({{"name", p.name}, {"checked", p.checked}, {"failed", p.failed},
                     {"worst", p.worst}, {"tolerance", p.tolerance},
                     {"reproducer", p.reproducer}});
  }
  if (!c.out_path.empty()) {
    Output out(c.out_path);
    out.stream() << json{{"schema_version", kSchemaVersion},
                         {"seed", report.seed},
                         {"n_draws", report.n_draws},
                         {"ok", report.ok()},
                         {"properties", props}}
                        .dump(2)
                 << "\n";
  }
  return report.ok() ? kExitOk : kExitProperty;
}

struct TrajFlags {
  std::optional<std::uint64_t> n_traj;
  std::optional<double> t_final, burn_in, dt;
  std::optional<std::string> method;
  std::string records;
};

int cmd_traj(const Common& c, const TrajFlags& f) {
  const RunConfig cfg = resolve(c);
  const ValidatedParams v = validate(cfg.engine());
  const ModelKind kind = cfg.model.value_or(ModelKind::QuantumII);
  if (!is_quantum(kind)) throw TrajectoryConfigError("traj needs --model q1 or q2");
  const json& tj = cfg.traj;
  for (const auto& [key, value] : tj.items())
    if (key != "n_traj" && key != "t_final" && key != "burn_in" && key != "dt" &&
        key != "method" && key != "batches")
      throw std::invalid_argument(fmt::format("unknown traj key '{}'", key));

  const std::uint64_t n = f.n_traj.value_or(tj.value("n_traj", std::uint64_t{1000}));
  TrajectoryConfig tc = default_trajectory_config(v, kind, n, c.seed);
  if (tj.contains("burn_in")) tc.burn_in = tj.at("burn_in").get<double>();
  if (tj.contains("t_final")) tc.t_final = tj.at("t_final").get<double>();
  if (tj.contains("dt")) tc.dt = tj.at("dt").get<double>();
  if (tj.contains("batches")) tc.batches = tj.at("batches").get<unsigned>();
  std::string method = tj.value("method", std::string("exact"));
  if (f.burn_in) tc.burn_in = *f.burn_in;
  if (f.t_final) tc.t_final = *f.t_final;
  if (f.dt) tc.dt = *f.dt;
  if (f.method) method = *f.method;
  if (method == "exact")
    tc.method = Propagator::Exact;
  else if (method == "euler")
    tc.method = Propagator::Euler;
  else
    throw std::invalid_argument(fmt::format("unknown propagator '{}'", method));
  tc.threads = c.threads;

  const TrajectoryEstimate est = run(v, kind, tc);
  const double ic = current_closed(v, kind);
  const double ac = activity_closed(v, kind);
  auto z = [](double est_v, double se, double ref) {
    return se > 0.0 ? json((est_v - ref) / se) : json(nullptr);
  };
  json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = c.seed;
  j["model"] = std::string(short_name(kind));
  j["params"] = params_json(v);
  j["n_traj"] = est.n_traj;
  j["burn_in"] = tc.burn_in;
  j["t_final"] = tc.t_final;
  j["window"] = est.window;
  j["method"] = method;
  j["current"] = {{"estimate", est.current}, {"stderr", est.current_stderr},
                  {"closed_form", ic}, {"z", z(est.current, est.current_stderr, ic)}};
  j["activity"] = {{"estimate", est.activity}, {"stderr", est.activity_stderr},
                   {"closed_form", ac}, {"z", z(est.activity, est.activity_stderr, ac)}};
  const Statistic fc = fano_closed(v, kind);
  j["fano"] = {{"estimate", stat(est.fano)}, {"stderr", stat(est.fano_stderr)},
               {"closed_form", stat(fc)}};
  j["variance"] = est.variance;
  Output out(c.out_path);
  out.stream() << j.dump(2) << "\n";
  if (!f.records.empty()) {
    std::ofstream rec(f.records, std::ios::binary);
    if (!rec) throw std::invalid_argument(fmt::format("cannot write {}", f.records));
    write_records_csv(rec, est);
  }
  return kExitOk;
}

void add_common(CLI::App& app, Common& c) {
  app.add_option("--config", c.config_path, "JSON config file");
  app.add_option("--out", c.out_path, "output path (default stdout)");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--threads", c.threads, "worker threads, 0 = auto");
  app.add_option("--model", c.model, "q1, q2, c1 or c2");
  for (auto& [key, value] : c.overrides) {
    std::string dashed = key;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    const std::string names = dashed == key ? "--" + key : "--" + dashed + ",--" + key;
    app.add_option(names, value, key + " override");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting statistics and KUR checks for the three-level maser engine"};
  app.require_subcommand(1);
  Common common;

  auto* point = app.add_subcommand("point", "statistics at one parameter point");
  auto* sweep = app.add_subcommand("sweep", "closed-form sweep along one axis (CSV)");
  auto* hist = app.add_subcommand("hist", "histogram of Q over uniform samples (CSV + JSON)");
  auto* verify_cmd = app.add_subcommand("verify", "randomized property suite");
  auto* traj = app.add_subcommand("traj", "quantum-jump estimates of current and activity");
  for (auto* s : {point, sweep, hist, verify_cmd, traj}) add_common(*s, common);

  std::optional<std::size_t> points;
  sweep->add_option("--points", points, "grid points");
  std::optional<std::uint64_t> n_samples;
  std::optional<double> bin_width;
  hist->add_option("--n-samples", n_samples, "number of samples");
  hist->add_option("--bin-width", bin_width, "histogram bin width");
  std::uint64_t n_draws = 1000;
  std::string fault = "none";
  verify_cmd->add_option("--n-draws", n_draws, "random draws");
  verify_cmd->add_option("--inject-fault", fault, "corrupt one closed form (testing)");
  TrajFlags tf;
  traj->add_option("--n-traj", tf.n_traj, "number of trajectories");
  traj->add_option("--t-final", tf.t_final, "end of the simulated interval");
  traj->add_option("--burn-in", tf.burn_in, "start of the measurement window");
  traj->add_option("--dt", tf.dt, "Euler step");
  traj->add_option("--method", tf.method, "exact or euler");
  traj->add_option("--records", tf.records, "raw per-trajectory CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (point->parsed()) return cmd_point(common);
    if (sweep->parsed()) return cmd_sweep(common, points);
    if (hist->parsed()) return cmd_hist(common, n_samples, bin_width);
    if (verify_cmd->parsed()) return cmd_verify(common, n_draws, fault);
    if (traj->parsed()) return cmd_traj(common, tf);
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues())
      std::cerr << fmt::format("invalid {}: {}\n", issue.field, issue.message);
    return kExitUsage;
  } catch (const DegenerateError& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const CrosscheckError& e) {
    std::cerr << "cross-check failed: " << e.what() << "\n";
    return kExitProperty;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
