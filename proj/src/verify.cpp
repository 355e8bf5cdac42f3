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

#include "maserkur/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "maserkur/analytic.hpp"
#include "maserkur/fcs.hpp"
#include "maserkur/parallel.hpp"
#include "maserkur/sweep.hpp"

namespace maserkur {

namespace {

enum Prop : int {
  FormulaCurrent,
  FormulaFano,
  FormulaActivity,
  FormulaQ,
  RouteEquivalence,
  ClassicalCurrent,
  ClassicalPopulations,
  FanoGapIdentity,
  FanoGapSign,
  RatioOrdering,
  DecoherenceOrdering,
  QConsistency,
  NecessaryCondition,
  kPropCount
};

struct PropDef {
  const char* name;
  double tolerance;
};

// Error metrics pass when <= tolerance.
constexpr PropDef kProps[kPropCount] = {
    {"formula_current", 1e-9},     {"formula_fano", 1e-9},        {"formula_activity", 1e-9},
    {"formula_Q", 1e-9},           {"route_equivalence", 1.0},    {"classical_current", 1e-10},
    {"classical_populations", 1e-10}, {"fano_gap_identity", 1e-9}, {"fano_gap_sign", 0.0},
    {"ratio_ordering", 0.0},       {"decoherence_ordering", 0.0}, {"q_consistency", 1e-10},
    {"necessary_condition", 0.0},
};

struct Sample {
  bool applies = false;
  double error = 0.0;
  ModelKind kind = ModelKind::QuantumI;
};

using DrawResult = std::array<Sample, kPropCount>;

double rel(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

void note(DrawResult& d, Prop p, double err, ModelKind kind) {
  Sample& s = d[p];
  if (!s.applies || err > s.error) s.kind = kind;
  s.applies = true;
  s.error = std::max(s.error, err);
}

ClosedFormStats tampered(const EngineParams& p, ModelKind kind, Fault f) {
  ClosedFormStats s = closed_form_stats(p, kind);
  if (f == Fault::CurrentII && kind == ModelKind::QuantumII) s.current *= 1.0 + 1e-6;
  return s;
}

DrawResult check_draw(const EngineParams& p, Fault fault) {
  DrawResult d{};
  const ValidatedParams v = validate(p);
  FcsResult num[4];
  ClosedFormStats cf[4];

  for (ModelKind k : kAllKinds) {
    const int ik = static_cast<int>(k);
    cf[ik] = tampered(p, k, fault);
    num[ik] = assemble(v, k);
    note(d, FormulaCurrent, rel(cf[ik].current, num[ik].current), k);
    note(d, FormulaActivity, rel(cf[ik].activity, num[ik].activity), k);
    if (cf[ik].fano && num[ik].fano) note(d, FormulaFano, rel(*cf[ik].fano, *num[ik].fano), k);
    if (cf[ik].Q && num[ik].Q) note(d, FormulaQ, rel(*cf[ik].Q, *num[ik].Q), k);

    const SpectralCumulants sp = cumulants_spectral(v, k);
    auto route = [](double a, double b) {
      return std::abs(a - b) / std::max(1e-6 * std::abs(a), 1e-9);
    };
    note(d, RouteEquivalence,
         std::max(route(num[ik].current, sp.current), route(num[ik].variance, sp.variance)), k);

    if (cf[ik].Q && cf[ik].fano) {
      const double composed = cf[ik].current / (cf[ik].activity * *cf[ik].fano);
      note(d, QConsistency, rel(*cf[ik].Q, composed), k);
      if (*cf[ik].Q > 1.0) {
        const bool ok = *cf[ik].fano < 1.0 && cf[ik].activity / cf[ik].current >= 1.0;
        note(d, NecessaryCondition, ok ? 0.0 : 1.0, k);
      }
    }
  }

  for (Variant w : {Variant::I, Variant::II}) {
    const ModelKind q = quantum_kind(w), c = classical_kind(w);
    const int iq = static_cast<int>(q), ic = static_cast<int>(c);
    note(d, ClassicalCurrent, rel(num[iq].current, num[ic].current), c);
    double pop = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      pop = std::max(pop, std::abs(num[iq].state.populations[i] - num[ic].state.populations[i]));
    note(d, ClassicalPopulations, pop, c);

    double gap = fano_gap(p, w);
    if (fault == Fault::FanoGap) gap = -gap;
    if (num[iq].fano && num[ic].fano) {
      const double direct = *num[ic].fano - *num[iq].fano;
      double err = std::abs(gap - direct) / std::max(1.0, std::abs(*num[ic].fano));
      if (const Statistic compact = fano_gap_compact(p, w)) err = std::max(err, rel(gap, *compact));
      note(d, FanoGapIdentity, err, c);
    }
    if (v.engine_regime()) note(d, FanoGapSign, std::max(0.0, -gap), c);
  }

  if (v.engine_regime()) {
    Statistic r1 = ratio_R(p, Variant::I), r2 = ratio_R(p, Variant::II);
    if (fault == Fault::RatioR) std::swap(r1, r2);
    if (r1 && r2) note(d, RatioOrdering, std::max(0.0, (*r2 - *r1) / *r1), ModelKind::QuantumI);
  }
  note(d, DecoherenceOrdering,
       decoherence_rate(p, Variant::I) > decoherence_rate(p, Variant::II) ? 0.0 : 1.0,
       ModelKind::QuantumI);
  return d;
}

}  // namespace

Fault parse_fault(std::string_view name) {
  if (name == "none") return Fault::None;
  if (name == "current_ii") return Fault::CurrentII;
  if (name == "fano_gap") return Fault::FanoGap;
  if (name == "ratio_r") return Fault::RatioR;
  throw std::invalid_argument(fmt::format("unknown fault '{}'", name));
}

bool VerifyReport::ok() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.failed == 0; });
}

std::string reproducer_line(const EngineParams& p, ModelKind kind) {
  return fmt::format(
      "maserkur point --gamma-h {:.17g} --gamma-c {:.17g} --n-h {:.17g} --n-c {:.17g} "
      "--lambda {:.17g} --model {}",
      p.gamma_h, p.gamma_c, p.n_h, p.n_c, p.lambda, short_name(kind));
}

VerifyReport verify(const VerifyOptions& opts) {
  if (opts.n_draws == 0) throw std::invalid_argument("verify needs at least one draw");
  const SamplingSpec box = SamplingSpec::uniform_box(opts.n_draws, opts.seed);
  std::vector<DrawResult> draws(opts.n_draws);
  std::vector<std::string> errors(opts.n_draws);
  parallel_for(opts.n_draws, opts.threads, [&](std::size_t i) {
    try {
      draws[i] = check_draw(draw_sample(box, i), opts.fault);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  VerifyReport report;
  report.n_draws = opts.n_draws;
  report.seed = opts.seed;
  for (int k = 0; k < kPropCount; ++k)
    report.properties.push_back({kProps[k].name, kProps[k].tolerance, 0, 0, 0.0, {}});
  PropertyResult numerics{"numerics", 0.0, 0, 0, 0.0, {}};

  for (std::size_t i = 0; i < draws.size(); ++i) {
    const EngineParams p = draw_sample(box, i);
    ++numerics.checked;
    if (!errors[i].empty()) {
      if (numerics.failed++ == 0)
        numerics.reproducer = reproducer_line(p, ModelKind::QuantumI) + "  # " + errors[i];
      continue;
    }
    for (int k = 0; k < kPropCount; ++k) {
      const Sample& s = draws[i][k];
      if (!s.applies) continue;
      PropertyResult& r = report.properties[static_cast<std::size_t>(k)];
      ++r.checked;
      r.worst = std::max(r.worst, s.error);
      if (s.error > r.tolerance && r.failed++ == 0) r.reproducer = reproducer_line(p, s.kind);
    }
  }
  report.properties.push_back(numerics);
  return report;
}

}  // namespace maserkur
