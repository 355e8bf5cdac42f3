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

#include "maserkur/fcs.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace maserkur {

namespace {

using LComplex = std::complex<long double>;
using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
using JetMatrix = std::vector<CoefficientJet>;  // row-major n*n

constexpr long double kImagTolerance = 1e-10L;
constexpr long double kDegenerateA1 = 1e-14L;
constexpr double kGapTolerance = 1e-10;

JetMatrix to_jets(const Superoperator& op) {
  const int n = op.dim();
  JetMatrix a(static_cast<std::size_t>(n * n));
  const auto& m = op.bare();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(i * n + j)] = CoefficientJet::counting(
          LComplex(m(i, j).real(), m(i, j).imag()), static_cast<int>(op.tag(i, j)));
  return a;
}

JetMatrix multiply(const JetMatrix& a, const JetMatrix& b, int n) {
  JetMatrix c(a.size());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const auto& aik = a[static_cast<std::size_t>(i * n + k)];
      for (int j = 0; j < n; ++j)
        c[static_cast<std::size_t>(i * n + j)] += aik * b[static_cast<std::size_t>(k * n + j)];
    }
  return c;
}

long double real_checked(LComplex z, const char* what) {
  if (std::abs(z.imag()) > kImagTolerance * std::max(1.0L, std::abs(z.real())))
    throw DegenerateError(fmt::format("{} has imaginary part {:.3g}", what,
                                      static_cast<double>(z.imag())));
  return z.real();
}

}  // namespace

std::vector<CoefficientJet> characteristic_coefficients(const Superoperator& generator) {
  const int n = generator.dim();
  const JetMatrix a = to_jets(generator);
  std::vector<CoefficientJet> c(static_cast<std::size_t>(n + 1));
  c[static_cast<std::size_t>(n)] = CoefficientJet(1.0L);

  // M_k = A M_{k-1} + c_{n-k+1} I ;  c_{n-k} = -tr(A M_k) / k
  JetMatrix m(static_cast<std::size_t>(n * n));
  for (int k = 1; k <= n; ++k) {
    JetMatrix am = multiply(a, m, n);
    for (int i = 0; i < n; ++i)
      am[static_cast<std::size_t>(i * n + i)] += c[static_cast<std::size_t>(n - k + 1)];
    m = std::move(am);
    const JetMatrix next = multiply(a, m, n);
    CoefficientJet tr;
    for (int i = 0; i < n; ++i) tr += next[static_cast<std::size_t>(i * n + i)];
    c[static_cast<std::size_t>(n - k)] = -tr / LComplex(static_cast<long double>(k));
  }
  return c;
}

Cumulants cumulants_charpoly(const Superoperator& generator) {
  const auto c = characteristic_coefficients(generator);
  const auto& a0 = c[0];
  const auto& a1 = c[1];
  const auto& a2 = c[2];

  const long double scale =
      std::pow(static_cast<long double>(generator.bare().cwiseAbs().maxCoeff()),
               static_cast<long double>(generator.dim() - 1));
  if (std::abs(a1.v) <= kDegenerateA1 * scale)
    throw DegenerateError("characteristic polynomial: a_1 vanishes, zero eigenvalue not simple");

  const LComplex current = -a0.d1 / a1.v;
  const LComplex variance = -(a0.d2 + 2.0L * current * (a1.d1 + a2.v * current)) / a1.v;
  return {static_cast<double>(real_checked(current, "current")),
          static_cast<double>(real_checked(variance, "variance"))};
}

Cumulants cumulants_charpoly(const ValidatedParams& params, ModelKind kind) {
  return cumulants_charpoly(build_tilted(params, kind, 0.0));
}

namespace {

struct Spectrum {
  LComplex dominant;
  long double runner_up_real;
};

Spectrum spectrum_at(const Superoperator& generator, double chi) {
  const ComplexMatrix m = generator.at_chi(chi);
  Eigen::ComplexEigenSolver<LMatrix> solver(m.cast<LComplex>(), false);
  const auto& ev = solver.eigenvalues();
  int best = 0;
  for (int i = 1; i < ev.size(); ++i) {
    const bool higher = ev(i).real() > ev(best).real();
    const bool tie = ev(i).real() == ev(best).real() &&
                     std::abs(ev(i).imag()) < std::abs(ev(best).imag());
    if (higher || tie) best = i;
  }
  long double second = -std::numeric_limits<long double>::infinity();
  for (int i = 0; i < ev.size(); ++i)
    if (i != best) second = std::max(second, ev(i).real());
  return {ev(best), second};
}

}  // namespace

std::complex<long double> dominant_eigenvalue(const Superoperator& generator, double chi) {
  return spectrum_at(generator, chi).dominant;
}

SpectralCumulants cumulants_spectral(const ValidatedParams& params, ModelKind kind, double h) {
  if (!(h >= 1e-6 && h <= 1e-2))
    throw std::invalid_argument(fmt::format("spectral step h = {} outside [1e-6, 1e-2]", h));
  const Superoperator op = build_tilted(params, kind, 0.0);
  const Spectrum s0 = spectrum_at(op, 0.0);
  const LComplex xp1 = spectrum_at(op, h).dominant;
  const LComplex xm1 = spectrum_at(op, -h).dominant;
  const LComplex xp2 = spectrum_at(op, 2.0 * h).dominant;
  const LComplex xm2 = spectrum_at(op, -2.0 * h).dominant;
  const long double hl = h;

  const LComplex d1 = (-xp2 + 8.0L * xp1 - 8.0L * xm1 + xm2) / (12.0L * hl);
  const LComplex d2 = (-xp2 + 16.0L * xp1 - 30.0L * s0.dominant + 16.0L * xm1 - xm2) /
                      (12.0L * hl * hl);
  const LComplex i_unit(0.0L, 1.0L);

  SpectralCumulants out;
  out.current = static_cast<double>((i_unit * d1).real());
  out.variance = static_cast<double>((-d2).real());
  out.gap = static_cast<double>(s0.dominant.real() - s0.runner_up_real);
  out.gap_ok = out.gap > kGapTolerance;
  return out;
}

double dynamical_activity(const Superoperator& generator, const SteadyState& state) {
  double a = 0.0;
  for (const auto& ch : generator.jump_channels())
    a += ch.rate * state.populations[static_cast<std::size_t>(ch.from)];
  return a;
}

double dynamical_activity(const ValidatedParams& params, ModelKind kind) {
  const Superoperator op = build_tilted(params, kind, 0.0);
  return dynamical_activity(op, solve_null(op));
}

FcsResult assemble(const ValidatedParams& params, ModelKind kind) {
  const Superoperator op = build_tilted(params, kind, 0.0);
  FcsResult r;
  r.kind = kind;
  r.state = solve_null(op);
  const Cumulants c = cumulants_charpoly(op);
  r.current = c.current;
  r.variance = c.variance;
  r.activity = dynamical_activity(op, r.state);
  if (r.current != 0.0 && params.lambda() > 0.0 && params.n_h() != params.n_c()) {
    r.fano = r.variance / r.current;
    r.ratio_R = r.activity / r.current;
    r.Q = r.current * r.current / (r.activity * r.variance);
  }
  return r;
}

}  // namespace maserkur
