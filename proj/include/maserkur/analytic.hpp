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

// Closed-form steady-state statistics of both engine configurations and their
// classical equivalents. Every function is a direct evaluation of a rational
// expression in the rates; `fcs` and `steadystate` provide the numerical
// counterparts they are tested against.

#pragma once

#include "maserkur/params.hpp"
#include "maserkur/steadystate.hpp"

namespace maserkur {

/// Shorthand combinations shared by the closed forms:
///   B  = gamma_c (1+n_c) + gamma_h (1+n_h)     Bp = gamma_c n_c + gamma_h n_h
///   C  = 3 n_c n_h + 2 n_c + 2 n_h + 1         Cp = 3 n_c n_h + n_c + n_h
///   D  = gamma_c (1+3n_c) + gamma_h (1+3n_h)   Dp = gamma_c (2+3n_c) + gamma_h (2+3n_h)
///   H  = 4 lambda^2 + (1+n_c)(1+n_h) gamma_c gamma_h
///   Hp = 4 lambda^2 + n_c n_h gamma_c gamma_h
/// G and Gp are the quadratic forms appearing in the Fano factors.
struct AggregateCoefficients {
  double B, Bp, C, Cp, D, Dp, G, Gp, H, Hp;
};

AggregateCoefficients aggregate(const EngineParams& p);

/// Mean cycle current for any of the four kinds.
double current_closed(const EngineParams& p, ModelKind kind);

/// Fano factor; undefined when n_h == n_c (or, for ClassicalII, when the
/// classical rate is undefined).
Statistic fano_closed(const EngineParams& p, ModelKind kind);

/// Scaled current variance, Fano times current.
Statistic variance_closed(const EngineParams& p, ModelKind kind);

/// Dynamical activity. Classical kinds add gamma_cl times the population of
/// the two levels joined by the incoherent drive.
double activity_closed(const EngineParams& p, ModelKind kind);

/// Activity-to-current ratio of the quantum models; undefined unless
/// lambda > 0 and n_h != n_c.
Statistic ratio_R(const EngineParams& p, Variant which);

/// KUR quantifier I^2 / (A Delta I) of the quantum models, evaluated from
/// its single printed expression.
Statistic kur_quantifier(const EngineParams& p, Variant which);

/// KUR quantifier for any kind. Quantum kinds use kur_quantifier(Variant);
/// classical kinds are composed from current, activity and Fano.
Statistic kur_quantifier(const EngineParams& p, ModelKind kind);

/// Classical-minus-quantum Fano factor, long form.
double fano_gap(const EngineParams& p, Variant which);
/// Same gap as C / (lambda^2 (n_h - n_c)) I^2 (C' for Model II).
Statistic fano_gap_compact(const EngineParams& p, Variant which);

/// Decay rate of the driven coherence:
///   Model I:  (gamma_h (n_h+1) + gamma_c (n_c+1)) / 2
///   Model II: (gamma_h n_h + gamma_c n_c) / 2
double decoherence_rate(const EngineParams& p, Variant which);

/// Steady populations in the joint limit n_c = 0, lambda = 0 (n_h taken
/// from p, the other fields ignored).
SteadyState limit_populations(const EngineParams& p, Variant which);

/// Fano factors specialised to n_c = 0, in their printed compact forms.
/// The Model I form is written with gamma_h = gamma_c and reads only gamma_c.
double fano_nc0_model_I(const EngineParams& p);
double fano_nc0_model_II(const EngineParams& p);

struct PowerStats {
  double power = 0.0;
  double power_variance = 0.0;
};

/// P = (omega_h - omega_c) I and Delta P = (omega_h - omega_c)^2 Delta I.
/// Throws std::domain_error unless omega_h > omega_c > 0.
PowerStats power_stats(double current, double variance, const Frequencies& freqs);

/// Every closed-form statistic at one parameter point.
struct ClosedFormStats {
  double current = 0.0;
  Statistic variance;
  Statistic fano;
  double activity = 0.0;
  Statistic ratio_R;
  Statistic Q;
};

/// Throws DegenerateError for ClassicalII with gamma_h n_h + gamma_c n_c = 0.
ClosedFormStats closed_form_stats(const EngineParams& p, ModelKind kind);

}  // namespace maserkur
