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

#include "maserkur/analytic.hpp"

#include <stdexcept>

namespace maserkur {

namespace {

// num / den with 0/0 (fully switched-off engine) read as 0.
double ratio_or_zero(double num, double den) { return num == 0.0 ? 0.0 : num / den; }

double sq(double x) { return x * x; }

// 2 n_h n_c + n_h + n_c, the equilibrium (lambda -> 0) Fano numerator.
double thermal_sum(const EngineParams& p) { return 2.0 * p.n_h * p.n_c + p.n_h + p.n_c; }

// Common denominator 4 lambda^2 D + B C gamma_c gamma_h (primed for Model II).
double quantum_den(const EngineParams& p, const AggregateCoefficients& k, Variant v) {
  const double gg = p.gamma_c * p.gamma_h;
  const double l4 = 4.0 * p.lambda * p.lambda;
  return v == Variant::I ? l4 * k.D + k.B * k.C * gg : l4 * k.Dp + k.Bp * k.Cp * gg;
}

// gamma_cl, or throws for Model II with Bp = 0.
double gamma_cl(const EngineParams& p, const AggregateCoefficients& k, Variant v) {
  const double den = v == Variant::I ? k.B : k.Bp;
  if (!(den > 0.0)) throw DegenerateError("classical rate undefined: gamma_h n_h + gamma_c n_c = 0");
  return 4.0 * p.lambda * p.lambda / den;
}

// gamma_cl D + C gamma_c gamma_h (primed for Model II).
double classical_den(const EngineParams& p, const AggregateCoefficients& k, Variant v, double g) {
  const double gg = p.gamma_c * p.gamma_h;
  return v == Variant::I ? g * k.D + k.C * gg : g * k.Dp + k.Cp * gg;
}

}  // namespace

AggregateCoefficients aggregate(const EngineParams& p) {
  const double gh = p.gamma_h, gc = p.gamma_c, nh = p.n_h, nc = p.n_c;
  const double l2 = p.lambda * p.lambda;
  AggregateCoefficients k{};
  k.B = gc * (1.0 + nc) + gh * (1.0 + nh);
  k.Bp = gc * nc + gh * nh;
  k.C = 3.0 * nc * nh + 2.0 * nc + 2.0 * nh + 1.0;
  k.Cp = 3.0 * nc * nh + nc + nh;
  k.D = gc * (1.0 + 3.0 * nc) + gh * (1.0 + 3.0 * nh);
  k.Dp = gc * (2.0 + 3.0 * nc) + gh * (2.0 + 3.0 * nh);
  k.G = 8.0 * l2 + gc * gh * (10.0 * nh * nc + 7.0 * nc + 7.0 * nh + 4.0) +
        gc * gc * (nc + 1.0) * (2.0 * nc + 1.0) + gh * gh * (nh + 1.0) * (2.0 * nh + 1.0);
  k.Gp = 8.0 * l2 + gc * gh * (10.0 * nh * nc + 3.0 * nc + 3.0 * nh) +
         gc * gc * nc * (2.0 * nc + 1.0) + gh * gh * nh * (2.0 * nh + 1.0);
  k.H = 4.0 * l2 + (1.0 + nc) * (1.0 + nh) * gc * gh;
  k.Hp = 4.0 * l2 + nc * nh * gc * gh;
  return k;
}

double current_closed(const EngineParams& p, ModelKind kind) {
  const auto k = aggregate(p);
  const Variant v = variant_of(kind);
  const double gg = p.gamma_h * p.gamma_c;
  const double dn = p.n_h - p.n_c;
  if (is_quantum(kind))
    return ratio_or_zero(4.0 * dn * gg * p.lambda * p.lambda, quantum_den(p, k, v));
  const double g = gamma_cl(p, k, v);
  return ratio_or_zero(dn * g * gg, classical_den(p, k, v, g));
}

Statistic fano_closed(const EngineParams& p, ModelKind kind) {
  const double dn = p.n_h - p.n_c;
  if (dn == 0.0) return std::nullopt;
  const auto k = aggregate(p);
  const Variant v = variant_of(kind);
  const double gg = p.gamma_h * p.gamma_c;
  const double s = thermal_sum(p);
  if (is_quantum(kind)) {
    const double l2 = p.lambda * p.lambda;
    const double G = v == Variant::I ? k.G : k.Gp;
    const double den = quantum_den(p, k, v);
    const double drop = ratio_or_zero(8.0 * gg * l2 * dn * dn * G, den * den);
    return (s - drop) / dn;
  }
  const double g = gamma_cl(p, k, v);
  const double den = classical_den(p, k, v, g);
  const double bracket =
      p.gamma_c * (1.0 + 2.0 * p.n_c) + p.gamma_h * (1.0 + 2.0 * p.n_h) + 2.0 * g;
  return s / dn - ratio_or_zero(2.0 * dn * g * gg * bracket, den * den);
}

Statistic variance_closed(const EngineParams& p, ModelKind kind) {
  const Statistic f = fano_closed(p, kind);
  if (!f) return std::nullopt;
  return *f * current_closed(p, kind);
}

double activity_closed(const EngineParams& p, ModelKind kind) {
  const auto k = aggregate(p);
  const Variant v = variant_of(kind);
  const double H = v == Variant::I ? k.H : k.Hp;
  const double quantum = ratio_or_zero(2.0 * k.Bp * k.B * H, quantum_den(p, k, v));
  if (is_quantum(kind)) return quantum;

  const double g = gamma_cl(p, k, v);
  if (g == 0.0) return quantum;
  const SteadyState s = closed_form_state(p, kind);
  const double pair = v == Variant::I ? s.population("rho_11") + s.population("rho_00")
                                      : s.population("rho_gg") + s.population("rho_00");
  return quantum + g * pair;
}

Statistic ratio_R(const EngineParams& p, Variant which) {
  const double dn = p.n_h - p.n_c;
  const double l2 = p.lambda * p.lambda;
  if (dn == 0.0 || l2 == 0.0) return std::nullopt;
  const auto k = aggregate(p);
  const double H = which == Variant::I ? k.H : k.Hp;
  return k.Bp * k.B * H / (2.0 * l2 * p.gamma_c * p.gamma_h * dn);
}

Statistic kur_quantifier(const EngineParams& p, Variant which) {
  const double dn = p.n_h - p.n_c;
  const double l2 = p.lambda * p.lambda;
  const auto k = aggregate(p);
  if (dn == 0.0 || l2 == 0.0 || k.Bp == 0.0) return std::nullopt;
  const double gg = p.gamma_c * p.gamma_h;
  const bool one = which == Variant::I;
  const double H = one ? k.H : k.Hp;
  const double G = one ? k.G : k.Gp;
  const double den = one ? k.B * k.C * gg + 4.0 * l2 * k.D : k.Bp * k.Cp * gg + 4.0 * l2 * k.Dp;
  const double bracket = thermal_sum(p) - 8.0 * l2 * dn * dn * gg * G / (den * den);
  if (bracket == 0.0) return std::nullopt;
  return 2.0 * dn * dn * gg * l2 / (k.B * k.Bp * H) / bracket;
}

Statistic kur_quantifier(const EngineParams& p, ModelKind kind) {
  if (is_quantum(kind)) return kur_quantifier(p, variant_of(kind));
  if (p.lambda == 0.0) return std::nullopt;
  const Statistic f = fano_closed(p, kind);
  if (!f || *f == 0.0) return std::nullopt;
  const double i = current_closed(p, kind);
  const double a = activity_closed(p, kind);
  return i / (a * *f);
}

double fano_gap(const EngineParams& p, Variant which) {
  const double gh = p.gamma_h, gc = p.gamma_c, nh = p.n_h, nc = p.n_c;
  const double l2 = p.lambda * p.lambda;
  const double pre = 16.0 * l2 * gc * gc * gh * gh * (nh - nc);
  if (which == Variant::I) {
    const double num = pre * (3.0 * nh * nc + 2.0 * nh + 2.0 * nc + 1.0);
    const double den = 4.0 * l2 * (gc + 3.0 * gc * nc + gh + 3.0 * gh * nh) +
                       gc * gh * (nc * (3.0 * nh + 2.0) + 2.0 * nh + 1.0) *
                           (gc + gc * nc + gh + gh * nh);
    return ratio_or_zero(num, den * den);
  }
  const double num = pre * (3.0 * nc * nh + nc + nh);
  const double den = 4.0 * l2 * (gc * (3.0 * nc + 2.0) + gh * (3.0 * nh + 2.0)) +
                     gc * gh * (3.0 * nc * nh + nc + nh) * (gc * nc + gh * nh);
  return ratio_or_zero(num, den * den);
}

Statistic fano_gap_compact(const EngineParams& p, Variant which) {
  const double dn = p.n_h - p.n_c;
  const double l2 = p.lambda * p.lambda;
  if (dn == 0.0 || l2 == 0.0) return std::nullopt;
  const auto k = aggregate(p);
  const double c = which == Variant::I ? k.C : k.Cp;
  return c / (l2 * dn) * sq(current_closed(p, quantum_kind(which)));
}

double decoherence_rate(const EngineParams& p, Variant which) {
  if (which == Variant::I) return 0.5 * (p.gamma_h * (p.n_h + 1.0) + p.gamma_c * (p.n_c + 1.0));
  return 0.5 * (p.gamma_h * p.n_h + p.gamma_c * p.n_c);
}

SteadyState limit_populations(const EngineParams& p, Variant which) {
  SteadyState s;
  s.kind = quantum_kind(which);
  if (which == Variant::I) {
    const double z = 1.0 + 2.0 * p.n_h;
    s.populations = {(1.0 + p.n_h) / z, 0.0, p.n_h / z};  // gg, 00, 11
  } else {
    s.populations = {0.0, 1.0, 0.0};  // 11, 00, gg
  }
  s.coherence = Complex(0.0, 0.0);
  return s;
}

double fano_nc0_model_I(const EngineParams& p) {
  const double gc = p.gamma_c, nh = p.n_h;
  const double l2 = p.lambda * p.lambda;
  const double gc2 = gc * gc;
  const double num =
      8.0 * l2 * gc2 * nh *
      (gc2 + gc2 * (nh + 1.0) * (2.0 * nh + 1.0) + gc2 * (7.0 * nh + 4.0) + 8.0 * l2);
  const double den =
      4.0 * l2 * (2.0 * gc + 3.0 * gc * nh) + gc2 * (2.0 * nh + 1.0) * (2.0 * gc + gc * nh);
  return 1.0 - num / sq(den);
}

double fano_nc0_model_II(const EngineParams& p) {
  const double gh = p.gamma_h, gc = p.gamma_c, nh = p.n_h;
  const double l2 = p.lambda * p.lambda;
  const double num =
      8.0 * l2 * gc * gh * nh * (gh * nh * (3.0 * gc + gh * (2.0 * nh + 1.0)) + 8.0 * l2);
  const double den = gc * (gh * gh * nh * nh + 8.0 * l2) + 4.0 * l2 * gh * (3.0 * nh + 2.0);
  return 1.0 - num / sq(den);
}

PowerStats power_stats(double current, double variance, const Frequencies& f) {
  if (!(f.omega_c > 0.0) || !(f.omega_h > f.omega_c))
    throw std::domain_error("power conversion requires omega_h > omega_c > 0");
  const double w = f.omega_h - f.omega_c;
  return {w * current, w * w * variance};
}

ClosedFormStats closed_form_stats(const EngineParams& p, ModelKind kind) {
  ClosedFormStats s;
  s.current = current_closed(p, kind);
  s.fano = fano_closed(p, kind);
  if (s.fano) s.variance = *s.fano * s.current;
  s.activity = activity_closed(p, kind);
  if (p.lambda > 0.0 && p.n_h != p.n_c && s.current != 0.0) {
    if (is_quantum(kind))
      s.ratio_R = ratio_R(p, variant_of(kind));
    else
      s.ratio_R = s.activity / s.current;
  }
  s.Q = kur_quantifier(p, kind);
  return s;
}

}  // namespace maserkur
