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

// Full counting statistics of the cold-bath photon count.
//
// Conventions: the current is the net emission rate into the cold bath and the
// variance is the *scaled* one, Delta I = lim_{t->inf} t Var(I(t)) where I(t)
// is the time-averaged current. Both are cumulants of the dominant eigenvalue
// xi(chi) of the tilted generator: I = i xi'(0), Delta I = -xi''(0).

#pragma once

#include <vector>

#include "maserkur/jet.hpp"
#include "maserkur/liouvillian.hpp"
#include "maserkur/steadystate.hpp"

namespace maserkur {

using CoefficientJet = Jet2<long double>;

struct Cumulants {
  double current = 0.0;
  double variance = 0.0;
};

/// Coefficients a_0..a_n of det(xi - L(chi)) with their chi-derivatives,
/// from the Faddeev-LeVerrier recursion carried out in jet arithmetic
/// (extended precision).
std::vector<CoefficientJet> characteristic_coefficients(const Superoperator& generator);

/// I = -a_0'/a_1 and Delta I = -(a_0'' + 2 I (a_1' + a_2 I)) / a_1.
/// Throws DegenerateError when a_1 vanishes (zero eigenvalue not simple).
Cumulants cumulants_charpoly(const Superoperator& generator);
Cumulants cumulants_charpoly(const ValidatedParams& params, ModelKind kind);

struct SpectralCumulants {
  double current = 0.0;
  double variance = 0.0;
  // Real part of the dominant eigenvalue minus that of the runner-up at chi=0.
  double gap = 0.0;
  bool gap_ok = true;
};

/// Eigenvalue of largest real part; ties go to the smallest |imag|.
std::complex<long double> dominant_eigenvalue(const Superoperator& generator, double chi);

/// Five-point central differences of xi(chi) at chi in {0, +-h, +-2h}.
/// Requires h in [1e-6, 1e-2]; gap_ok is false when the runner-up eigenvalue
/// lies within 1e-10 of the dominant one.
SpectralCumulants cumulants_spectral(const ValidatedParams& params, ModelKind kind,
                                     double h = 1e-3);

/// Sum over every jump channel of rate * source population.
double dynamical_activity(const Superoperator& generator, const SteadyState& state);
double dynamical_activity(const ValidatedParams& params, ModelKind kind);

struct FcsResult {
  ModelKind kind = ModelKind::QuantumI;
  SteadyState state;
  double current = 0.0;
  double variance = 0.0;
  Statistic fano;     ///< variance / current
  double activity = 0.0;
  Statistic ratio_R;  ///< activity / current
  Statistic Q;        ///< current^2 / (activity variance)
};

/// Characteristic-polynomial cumulants plus activity. Fano, R and Q are left
/// undefined at zero current.
FcsResult assemble(const ValidatedParams& params, ModelKind kind);

}  // namespace maserkur
