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

#include "maserkur/steadystate.hpp"

#include <cmath>

#include <fmt/format.h>

namespace maserkur {

namespace {

using LComplex = std::complex<long double>;
using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;

constexpr double kSecondNullTolerance = 1e-8;
constexpr double kResidualTolerance = 1e-10;
constexpr double kClampTolerance = 1e-12;

// Index of the stored coherence (rho_10 or rho_g0) in the quantum bases.
int coherence_index(ModelKind kind) { return kind == ModelKind::QuantumI ? 3 : 4; }

}  // namespace

double SteadyState::population(std::string_view label) const {
  return populations.at(static_cast<std::size_t>(basis_for(kind).index_of(label)));
}

Eigen::VectorXcd SteadyState::vectorized() const {
  const auto& b = basis_for(kind);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(b.dim());
  for (int i = 0; i < b.population_count; ++i) v(i) = populations[static_cast<std::size_t>(i)];
  if (coherence) {
    const int k = coherence_index(kind);
    const int partner = k == 3 ? 4 : 3;
    v(k) = *coherence;
    v(partner) = std::conj(*coherence);
  }
  return v;
}

SteadyState solve_null(const Superoperator& generator) {
  const int n = generator.dim();
  const int np = generator.basis().population_count;
  const LMatrix m = generator.matrix().cast<LComplex>();

  Eigen::JacobiSVD<LMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const long double smax = s(0);
  if (!(smax > 0.0L)) throw DegenerateError("steady state: zero generator");
  if (s(n - 2) <= kSecondNullTolerance * smax)
    throw DegenerateError(fmt::format(
        "steady state not unique: second-smallest singular value {:.3g} (sigma_max {:.3g})",
        static_cast<double>(s(n - 2)), static_cast<double>(smax)));

  Eigen::Matrix<LComplex, Eigen::Dynamic, 1> v = svd.matrixV().col(n - 1);
  LComplex trace = 0.0L;
  for (int i = 0; i < np; ++i) trace += v(i);
  if (std::abs(trace) < 1e-8L * v.cwiseAbs().maxCoeff())
    throw DegenerateError("steady state: null vector has vanishing trace");
  v /= trace;

  const long double residual = (m * v).cwiseAbs().maxCoeff();
  const long double norm_inf = m.cwiseAbs().rowwise().sum().maxCoeff();
  if (residual > kResidualTolerance * norm_inf)
    throw DegenerateError(fmt::format("steady state residual {:.3g} too large",
                                      static_cast<double>(residual)));

  SteadyState out;
  out.kind = generator.kind();
  out.populations.resize(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) {
    double p = static_cast<double>(v(i).real());
    if (p < 0.0) {
      if (p < -kClampTolerance)
        throw DegenerateError(fmt::format("steady state: negative population {:.3g}", p));
      out.diagnostics.push_back(
          fmt::format("clamped {} = {:.3g} to 0", generator.basis().labels[i], p));
      p = 0.0;
    }
    out.populations[static_cast<std::size_t>(i)] = p;
  }
  if (is_quantum(out.kind)) {
    const auto c = v(coherence_index(out.kind));
    out.coherence = Complex(static_cast<double>(c.real()), static_cast<double>(c.imag()));
  }
  return out;
}

SteadyState solve_steady_state(const ValidatedParams& params, ModelKind kind) {
  return solve_null(build_tilted(params, kind, 0.0));
}

SteadyState closed_form_state(const EngineParams& p, ModelKind kind) {
  const double gh = p.gamma_h, gc = p.gamma_c, nh = p.n_h, nc = p.n_c, lam = p.lambda;
  const double lam2 = lam * lam;
  const double B = gc * (nc + 1.0) + gh * (nh + 1.0);
  const double Bp = gc * nc + gh * nh;

  SteadyState out;
  out.kind = kind;
  if (variant_of(kind) == Variant::I) {
    const double den = 4.0 * lam2 * (gh * (3.0 * nh + 1.0) + gc * (3.0 * nc + 1.0)) +
                       (3.0 * nh * nc + 2.0 * nh + 2.0 * nc + 1.0) * B * gh * gc;
    if (!(den > 0.0)) throw DegenerateError("closed-form state: vanishing denominator");
    const double gg = B * (4.0 * lam2 + (1.0 + nc) * (1.0 + nh) * gc * gh) / den;
    const double r00 = (nc * (1.0 + nh) * B * gc * gh + 4.0 * lam2 * Bp) / den;
    const double r11 = (nh * (1.0 + nc) * B * gc * gh + 4.0 * lam2 * Bp) / den;
    out.populations = {gg, r00, r11};
    // Sign follows the generator's rho_10 equation; the drive depletes level 1.
    if (is_quantum(kind)) out.coherence = Complex(0.0, 2.0 * (nh - nc) * gh * gc * lam / den);
  } else {
    const double den = 4.0 * lam2 * (gh * (3.0 * nh + 2.0) + gc * (3.0 * nc + 2.0)) +
                       (3.0 * nh * nc + nh + nc) * Bp * gh * gc;
    if (!(den > 0.0)) throw DegenerateError("closed-form state: vanishing denominator");
    const double gg = (nc * (1.0 + nh) * Bp * gh * gc + 4.0 * lam2 * B) / den;
    const double r00 = (nh * (1.0 + nc) * Bp * gh * gc + 4.0 * lam2 * B) / den;
    const double r11 = Bp * (4.0 * lam2 + nc * nh * gc * gh) / den;
    out.populations = {r11, r00, gg};
    if (is_quantum(kind)) out.coherence = Complex(0.0, 2.0 * (nc - nh) * gh * gc * lam / den);
  }
  return out;
}

}  // namespace maserkur
