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

// Acceptance run. Prints one PASS/FAIL line per criterion; exits nonzero on
// any FAIL. Without arguments criteria 1-8 run; --trajectory runs 9.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "maserkur/analytic.hpp"
#include "maserkur/config.hpp"
#include "maserkur/fcs.hpp"
#include "maserkur/steadystate.hpp"
#include "maserkur/sweep.hpp"
#include "maserkur/trajectory.hpp"
#include "support/gen.hpp"

using namespace maserkur;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      if (!failures.empty()) failures += "; ";
      failures += why;
    }
  }
  std::string failures;
};

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int report(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.failures = std::string("exception: ") + e.what();
  }
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " ["
            << o.detail << (o.failures.empty() ? "" : "; " + o.failures)
            << fmt::format("; {:.2f} s]", seconds_since(t0)) << std::endl;
  return o.pass ? 0 : 1;
}

std::vector<EngineParams> box_draws(std::uint64_t n, std::uint64_t seed) {
  const SamplingSpec s = SamplingSpec::uniform_box(n, seed);
  std::vector<EngineParams> out;
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(draw_sample(s, i));
  return out;
}

const std::vector<EngineParams>& draw_set() {
  static const std::vector<EngineParams> d = box_draws(1000, 20261014);
  return d;
}

Outcome formula_fidelity() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::uint64_t compared = 0;
  for (const EngineParams& p : draw_set()) {
    const ValidatedParams v = validate(p);
    for (ModelKind k : kAllKinds) {
      const FcsResult r = assemble(v, k);
      const ClosedFormStats c = closed_form_stats(p, k);
      if (!c.fano || !c.Q || !r.fano || !r.Q) {
        o.require(false, "undefined statistic at " + testgen::describe(p));
        continue;
      }
      for (double e : {rel(c.current, r.current), rel(*c.fano, *r.fano), rel(c.activity, r.activity),
                       rel(*c.Q, *r.Q)}) {
        worst = std::max(worst, e);
        ++compared;
      }
    }
  }
  const double t = seconds_since(t0);
  o.detail = fmt::format("{} comparisons, worst relative error {:.3g} (limit 1e-9)", compared, worst);
  o.require(worst <= 1e-9, "tolerance exceeded");
  o.require(t <= 10.0, fmt::format("runtime {:.2f} s over 10 s", t));
  return o;
}

Outcome route_equivalence() {
  Outcome o;
  double worst = 0.0;
  for (const EngineParams& p : draw_set()) {
    const ValidatedParams v = validate(p);
    for (ModelKind k : kAllKinds) {
      const Cumulants a = cumulants_charpoly(v, k);
      const SpectralCumulants b = cumulants_spectral(v, k);
      o.require(b.gap_ok, "spectral gap collapse");
      for (auto [x, y] : {std::pair{a.current, b.current}, std::pair{a.variance, b.variance}}) {
        const double allowed = std::max(1e-6 * std::abs(x), 1e-9);
        worst = std::max(worst, std::abs(x - y) / allowed);
      }
    }
  }
  o.detail = fmt::format("4000 cumulant pairs, worst |diff| / max(1e-6 rel, 1e-9 abs) = {:.3g}", worst);
  o.require(worst <= 1.0, "routes disagree");
  return o;
}

Outcome coupling_sweep_Q() {
  Outcome o;
  const auto t0 = Clock::now();
  const SweepTable t = run_sweep(SweepSpec::coupling_sweep(200));
  double max_q2 = -1.0, max_other = -1.0;
  for (const auto& r : t.rows) {
    if (!r.Q) {
      o.require(false, "undefined Q on the grid");
      continue;
    }
    if (r.kind == ModelKind::QuantumII)
      max_q2 = std::max(max_q2, *r.Q);
    else
      max_other = std::max(max_other, *r.Q);
  }
  // saturation: the last grid point against the far-coupling value
  EngineParams far = reference_sweep_params();
  far.lambda = 1e4;
  const double l1 = *kur_quantifier(far, Variant::I), l2 = *kur_quantifier(far, Variant::II);
  const auto c1 = t.column(ModelKind::QuantumI), c2 = t.column(ModelKind::QuantumII);
  const double e1 = std::abs(*c1.back().Q - l1) / l1, e2 = std::abs(*c2.back().Q - l2) / l2;
  const double secs = seconds_since(t0);
  o.detail = fmt::format(
      "max Q^II = {:.6f}, max Q over q1/c1/c2 = {:.6f}; large-coupling limits Q^I = {:.4f}, Q^II = {:.4f}, "
      "lambda = 3 within {:.2g} / {:.2g} of them",
      max_q2, max_other, l1, l2, e1, e2);
  o.require(max_q2 > 1.0 + 1e-9, "no Model II violation");
  o.require(max_other < 1.0 - 1e-9, "violation outside Model II");
  o.require(l1 < 1.0 - 1e-9 && l2 < 1.0 - 1e-9, "plateau not below 1");
  o.require(e1 < 1e-2 && e2 < 1e-2, "Q not saturated at the end of the grid");
  o.require(secs <= 5.0, fmt::format("runtime {:.2f} s over 5 s", secs));
  return o;
}

struct SamplingRun {
  Histogram q1, q2;
  bool identical = false;
  double seconds = 0.0;
};

const SamplingRun& sampling_run() {
  static const SamplingRun run = [] {
    SamplingRun r;
    const auto t0 = Clock::now();
    SamplingSpec s = SamplingSpec::uniform_box(10000, 1);
    r.q1 = run_sampling(s, ModelKind::QuantumI);
    r.q2 = run_sampling(s, ModelKind::QuantumII);
    auto text = [&](const Histogram& h) {
      std::ostringstream out;
      write_histogram_csv(out, h);
      return out.str() + histogram_sidecar(s, h).dump();
    };
    const std::string first = text(r.q1) + text(r.q2);
    s.threads = 2;
    const std::string second = text(run_sampling(s, ModelKind::QuantumI)) + text(run_sampling(s, ModelKind::QuantumII));
    r.identical = first == second;
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

Outcome sampled_histograms() {
  Outcome o;
  const SamplingRun& r = sampling_run();
  o.detail = fmt::format("10^4 samples, seed 1: violations Model I = {}, Model II = {}; max Q^II = {:.4f}",
                         r.q1.n_violations, r.q2.n_violations, r.q2.max_Q.value_or(0.0));
  o.require(r.q1.n_violations == 0, "Model I violation");
  o.require(r.q2.n_violations >= 1, "no Model II violation");
  o.require(r.identical, "regenerated CSV differs");
  o.require(r.seconds <= 30.0, fmt::format("runtime {:.2f} s over 30 s", r.seconds));
  return o;
}

Outcome activity_and_current() {
  Outcome o;
  SweepSpec spec = SweepSpec::coupling_sweep(200);
  spec.kinds = {ModelKind::QuantumI, ModelKind::QuantumII};
  const SweepTable t = run_sweep(spec);
  const auto c1 = t.column(ModelKind::QuantumI), c2 = t.column(ModelKind::QuantumII);
  // lowest decade of the grid: lambda in [1e-3, 1e-2]
  std::size_t top = 0;
  while (top + 1 < c1.size() && c1[top + 1].axis_value <= 1e-2 * (1 + 1e-12)) ++top;
  const double a1_lo = *c1.front().activity, a1_dec = *c1[top].activity;
  const double a2_lo = *c2.front().activity, a2_dec = *c2[top].activity, a2_end = *c2.back().activity;
  bool shrinking = true;
  for (std::size_t i = 1; i <= top; ++i) shrinking = shrinking && *c2[i].activity > *c2[i - 1].activity;
  std::size_t ordered = 0, checked = 0;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    if (c1[i].axis_value > 0.1) break;
    ++checked;
    ordered += *c2[i].current >= *c1[i].current;
  }
  o.detail = fmt::format(
      "A^I: {:.5f} at 1e-3, {:.5f} at 1e-2; A^II: {:.5f} at 1e-3, {:.5f} at 1e-2, {:.5f} at 3; "
      "I^II >= I^I at {}/{} points with lambda <= 0.1",
      a1_lo, a1_dec, a2_lo, a2_dec, a2_end, ordered, checked);
  o.require(a1_lo > 0.0 && std::abs(a1_dec - a1_lo) / a1_lo < 1e-2, "A^I not a positive constant at small lambda");
  o.require(shrinking && a2_lo < 0.5 * a2_dec && a2_lo < 0.1 * a2_end, "A^II does not fall toward 0");
  o.require(a2_lo < 0.1 * a1_lo, "A^II not small against A^I");
  o.require(ordered == checked && checked > 0, "current ordering broken");
  return o;
}

Outcome limit_identities() {
  Outcome o;
  testgen::SplitMix g(6);
  double worst_fano = 0.0, worst_pop = 0.0;
  for (int n = 0; n < 1000; ++n) {
    EngineParams p = testgen::box_params(g);
    p.n_c = 0.0;
    if (p.n_h == 0.0) continue;
    const double f2 = *fano_closed(p, ModelKind::QuantumII);
    worst_fano = std::max(worst_fano, std::abs(fano_nc0_model_II(p) - f2) / std::max(1.0, std::abs(f2)));
    EngineParams q = p;
    q.gamma_h = q.gamma_c;
    const double f1 = *fano_closed(q, ModelKind::QuantumI);
    worst_fano = std::max(worst_fano, std::abs(fano_nc0_model_I(q) - f1) / std::max(1.0, std::abs(f1)));

    p.lambda = 0.0;
    const ValidatedParams v = validate(p);
    // Model I: rho_00 empties into g; g <-> 1 is a detailed-balance pair.
    const double up = p.gamma_h * p.n_h, down = p.gamma_h * (p.n_h + 1.0);
    const double direct_gg = down / (up + down), direct_11 = up / (up + down);
    const SteadyState lim1 = limit_populations(p, Variant::I);
    const SteadyState num1 = solve_steady_state(v, ModelKind::QuantumI);
    for (double e : {std::abs(lim1.population("rho_gg") - direct_gg), std::abs(lim1.population("rho_11") - direct_11),
                     std::abs(lim1.population("rho_00")), std::abs(num1.population("rho_gg") - direct_gg),
                     std::abs(num1.population("rho_00"))})
      worst_pop = std::max(worst_pop, e);
    const SteadyState lim2 = limit_populations(p, Variant::II);
    const SteadyState num2 = solve_steady_state(v, ModelKind::QuantumII);
    for (const char* l : {"rho_gg", "rho_00", "rho_11"})
      worst_pop = std::max(worst_pop, std::abs(lim2.population(l) - num2.population(l)));
  }
  o.detail = fmt::format("worst cold-vacuum Fano mismatch {:.3g} (limit 1e-12), worst population mismatch {:.3g} (limit 1e-9)",
                         worst_fano, worst_pop);
  o.require(worst_fano <= 1e-12, "Fano specialization mismatch");
  o.require(worst_pop <= 1e-9, "limit populations mismatch");
  return o;
}

Outcome classical_equivalence() {
  Outcome o;
  double worst_current = 0.0, worst_pop = 0.0, worst_gap = 0.0, min_gap = 0.0;
  for (const EngineParams& p : draw_set()) {
    const ValidatedParams v = validate(p);
    for (Variant w : {Variant::I, Variant::II}) {
      const FcsResult q = assemble(v, quantum_kind(w));
      const FcsResult c = assemble(v, classical_kind(w));
      worst_current = std::max(worst_current, rel(q.current, c.current));
      const auto& ql = basis_for(q.kind).labels;
      for (std::size_t i = 0; i < 3; ++i)
        worst_pop = std::max(worst_pop, std::abs(q.state.population(ql[i]) - c.state.population(ql[i])));
      const double gap = fano_gap(p, w);
      const double direct = *c.fano - *q.fano;
      worst_gap = std::max(worst_gap, std::abs(gap - direct) / std::max(1.0, std::abs(*c.fano)));
      if (p.n_h > p.n_c) min_gap = std::min(min_gap, gap);
    }
  }
  o.detail = fmt::format(
      "2000 model pairs: worst current {:.3g} rel, worst population {:.3g} (limit 1e-10); worst gap mismatch {:.3g} "
      "(limit 1e-9); smallest engine-regime gap {:.3g}",
      worst_current, worst_pop, worst_gap, min_gap);
  o.require(worst_current <= 1e-10 && worst_pop <= 1e-10, "classical model does not reproduce the state");
  o.require(worst_gap <= 1e-9, "gap formula mismatch");
  o.require(min_gap >= 0.0, "negative gap in the engine regime");
  return o;
}

Outcome necessary_condition() {
  Outcome o;
  const SamplingRun& r = sampling_run();
  std::size_t ok = 0;
  double max_f = 0.0, min_r = 1e300;
  for (const Violation& v : r.q2.violations) {
    const FcsResult num = assemble(validate(v.params), ModelKind::QuantumII);
    const bool closed = v.fano && *v.fano < 1.0 && v.activity_over_current >= 1.0;
    const bool numeric = num.fano && *num.fano < 1.0 && *num.ratio_R >= 1.0;
    ok += closed && numeric;
    max_f = std::max({max_f, v.fano.value_or(2.0), num.fano.value_or(2.0)});
    min_r = std::min({min_r, v.activity_over_current, num.ratio_R.value_or(0.0)});
  }
  o.detail = fmt::format("{}/{} violations with F < 1 and A/I >= 1; largest F {:.4f}, smallest A/I {:.4f}", ok,
                         r.q2.violations.size(), max_f, min_r);
  o.require(!r.q2.violations.empty(), "no violations to audit");
  o.require(ok == r.q2.violations.size(), "condition broken");
  return o;
}

// Criterion 9 -----------------------------------------------------------------

struct Point {
  EngineParams p;
  ModelKind kind;
  std::string label;
};

std::vector<Point> trajectory_points() {
  std::vector<Point> out;
  EngineParams ref = reference_sweep_params();
  ref.lambda = 0.05;
  out.push_back({ref, ModelKind::QuantumII, "reference"});
  out.push_back({ref, ModelKind::QuantumI, "reference"});
  // moderate rates keep 10^4 trajectories of 10^3 / min-rate within budget:
  // draws expecting more than 5000 jumps per trajectory are redrawn
  testgen::SplitMix g(909);
  while (out.size() < 7) {
    EngineParams p;
    p.gamma_h = g.uniform(0.05, 1.0);
    p.gamma_c = g.uniform(0.05, 2.0);
    p.n_c = g.uniform(0.0, 0.1);
    p.n_h = p.n_c + g.uniform(0.5, 4.0);
    p.lambda = g.uniform(0.05, 1.0);
    const ModelKind k = out.size() % 2 == 0 ? ModelKind::QuantumI : ModelKind::QuantumII;
    if (activity_closed(p, k) * 1e3 / min_rate(p) > 5000.0) continue;
    out.push_back({p, k, "random"});
  }
  return out;
}

int trajectory_oracle() {
  const auto t0 = Clock::now();
  Outcome o;
  std::vector<std::string> lines;
  double worst_z = 0.0;
  std::uint64_t seed = 1;
  for (const Point& pt : trajectory_points()) {
    const ValidatedParams v = validate(pt.p);
    const TrajectoryConfig cfg = default_trajectory_config(v, pt.kind, 10000, seed++);
    const TrajectoryEstimate e = run(v, pt.kind, cfg);
    const double I = current_closed(pt.p, pt.kind), A = activity_closed(pt.p, pt.kind);
    const double zi = (e.current - I) / e.current_stderr, za = (e.activity - A) / e.activity_stderr;
    worst_z = std::max({worst_z, std::abs(zi), std::abs(za)});
    lines.push_back(fmt::format("  {} {} {}: I {:.6g} vs {:.6g} (z {:+.2f}), A {:.6g} vs {:.6g} (z {:+.2f})",
                                pt.label, short_name(pt.kind), testgen::describe(pt.p), e.current, I, zi,
                                e.activity, A, za));
    o.require(std::abs(zi) <= 3.0, fmt::format("current outside 3 stderr at {} {}", pt.label, short_name(pt.kind)));
    o.require(std::abs(za) <= 3.0, fmt::format("activity outside 3 stderr at {} {}", pt.label, short_name(pt.kind)));
  }
  const double secs = seconds_since(t0);
  o.require(secs <= 300.0, fmt::format("runtime {:.1f} s over 300 s", secs));
  for (const auto& l : lines) std::cout << l << "\n";
  std::cout << (o.pass ? "PASS" : "FAIL")
            << " criterion 9: quantum-jump estimates match closed-form current and activity within 3 standard errors ["
            << fmt::format("7 point/model pairs, 10^4 trajectories each, worst |z| {:.2f}", worst_z)
            << (o.failures.empty() ? "" : "; " + o.failures) << fmt::format("; {:.1f} s]", secs) << std::endl;
  return o.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::strcmp(argv[1], "--trajectory") == 0) return trajectory_oracle();
  if (argc > 1) {
    std::cerr << "usage: acceptance [--trajectory]\n";
    return 2;
  }
  int failures = 0;
  failures += report(1, "closed forms match counting-statistics numerics", formula_fidelity);
  failures += report(2, "characteristic-polynomial and eigenvalue routes agree", route_equivalence);
  failures += report(3, "coupling sweep: KUR violated only in Model II, Q saturates below 1", coupling_sweep_Q);
  failures += report(4, "sampled Q histograms: violations only in Model II, reproducible", sampled_histograms);
  failures += report(5, "activity and current along the coupling sweep", activity_and_current);
  failures += report(6, "cold-vacuum and undriven limit identities", limit_identities);
  failures += report(7, "classical models reproduce state and current; Fano gap identity", classical_equivalence);
  failures += report(8, "every sampled violation has F < 1 and A/I >= 1", necessary_condition);
  return failures == 0 ? 0 : 1;
}
