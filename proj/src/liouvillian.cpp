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

#include "maserkur/liouvillian.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace maserkur {

namespace {

const BasisOrdering kBasisQI{{"rho_gg", "rho_00", "rho_11", "rho_10", "rho_01"}, 3};
const BasisOrdering kBasisQII{{"rho_11", "rho_00", "rho_gg", "rho_0g", "rho_g0"}, 3};
const BasisOrdering kBasisCI{{"rho_gg", "rho_00", "rho_11"}, 3};
const BasisOrdering kBasisCII{{"rho_11", "rho_00", "rho_gg"}, 3};

constexpr Complex kI{0.0, 1.0};

Complex counting_factor(CountingTag tag, double chi) {
  return std::exp(kI * (static_cast<double>(tag) * chi));
}

// Rates shared by every generator.
struct Rates {
  double hot_down;   // gamma_h (n_h + 1)
  double hot_up;     // gamma_h n_h
  double cold_down;  // gamma_c (n_c + 1)
  double cold_up;    // gamma_c n_c
  explicit Rates(const EngineParams& p)
      : hot_down(p.gamma_h * (p.n_h + 1.0)),
        hot_up(p.gamma_h * p.n_h),
        cold_down(p.gamma_c * (p.n_c + 1.0)),
        cold_up(p.gamma_c * p.n_c) {}
};

// Model I, basis (gg, 00, 11, 10, 01). Cold bath on 0 <-> g, drive on 1 <-> 0.
ComplexMatrix bare_quantum_I(const EngineParams& p) {
  const Rates r(p);
  const double lam = p.lambda;
  const double decay = 0.5 * (r.hot_down + r.cold_down);
  ComplexMatrix m = ComplexMatrix::Zero(5, 5);
  m(0, 0) = -(r.hot_up + r.cold_up);
  m(0, 1) = r.cold_down;
  m(0, 2) = r.hot_down;
  m(1, 0) = r.cold_up;
  m(1, 1) = -r.cold_down;
  m(1, 3) = -kI * lam;
  m(1, 4) = kI * lam;
  m(2, 0) = r.hot_up;
  m(2, 2) = -r.hot_down;
  m(2, 3) = kI * lam;
  m(2, 4) = -kI * lam;
  m(3, 1) = -kI * lam;
  m(3, 2) = kI * lam;
  m(3, 3) = -decay;
  m(4, 1) = kI * lam;
  m(4, 2) = -kI * lam;
  m(4, 4) = -decay;
  return m;
}

// Model II, basis (11, 00, gg, 0g, g0). Cold bath on 1 <-> 0, drive on g <-> 0.
ComplexMatrix bare_quantum_II(const EngineParams& p) {
  const Rates r(p);
  const double lam = p.lambda;
  const double decay = 0.5 * (r.hot_up + r.cold_up);
  ComplexMatrix m = ComplexMatrix::Zero(5, 5);
  m(0, 0) = -(r.hot_down + r.cold_down);
  m(0, 1) = r.cold_up;
  m(0, 2) = r.hot_up;
  m(1, 0) = r.cold_down;
  m(1, 1) = -r.cold_up;
  m(1, 3) = kI * lam;
  m(1, 4) = -kI * lam;
  m(2, 0) = r.hot_down;
  m(2, 2) = -r.hot_up;
  m(2, 3) = -kI * lam;
  m(2, 4) = kI * lam;
  m(3, 1) = kI * lam;
  m(3, 2) = -kI * lam;
  m(3, 3) = -decay;
  m(4, 1) = -kI * lam;
  m(4, 2) = kI * lam;
  m(4, 4) = -decay;
  return m;
}

ComplexMatrix bare_classical_I(const EngineParams& p, double g) {
  const Rates r(p);
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = -(r.hot_up + r.cold_up);
  m(0, 1) = r.cold_down;
  m(0, 2) = r.hot_down;
  m(1, 0) = r.cold_up;
  m(1, 1) = -r.cold_down - g;
  m(1, 2) = g;
  m(2, 0) = r.hot_up;
  m(2, 1) = g;
  m(2, 2) = -r.hot_down - g;
  return m;
}

ComplexMatrix bare_classical_II(const EngineParams& p, double g) {
  const Rates r(p);
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = -(r.hot_down + r.cold_down);
  m(0, 1) = r.cold_up;
  m(0, 2) = r.hot_up;
  m(1, 0) = r.cold_down;
  m(1, 1) = -r.cold_up - g;
  m(1, 2) = g;
  m(2, 0) = r.hot_down;
  m(2, 1) = g;
  m(2, 2) = -r.hot_up - g;
  return m;
}

// (row, col) of the cold emission / absorption entries.
std::vector<TaggedEntry> cold_tags(Variant v) {
  if (v == Variant::I) {
    // 0 -> g lands in rho_gg (row 0) from rho_00 (col 1).
    return {{0, 1, CountingTag::Emission}, {1, 0, CountingTag::Absorption}};
  }
  // 1 -> 0 lands in rho_00 (row 1) from rho_11 (col 0).
  return {{1, 0, CountingTag::Emission}, {0, 1, CountingTag::Absorption}};
}

}  // namespace

int BasisOrdering::index_of(std::string_view label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::out_of_range(fmt::format("unknown basis label '{}'", label));
  return static_cast<int>(it - labels.begin());
}

const BasisOrdering& basis_for(ModelKind kind) {
  switch (kind) {
    case ModelKind::QuantumI: return kBasisQI;
    case ModelKind::QuantumII: return kBasisQII;
    case ModelKind::ClassicalI: return kBasisCI;
    case ModelKind::ClassicalII: return kBasisCII;
  }
  throw std::logic_error("bad ModelKind");
}

Superoperator::Superoperator(ModelKind kind, ComplexMatrix bare, std::vector<TaggedEntry> tagged,
                             double chi)
    : kind_(kind), bare_(std::move(bare)), tagged_(std::move(tagged)), chi_(chi) {
  tilted_ = at_chi(chi_);
}

ComplexMatrix Superoperator::at_chi(double chi) const {
  ComplexMatrix m = bare_;
  for (const auto& e : tagged_) m(e.row, e.col) *= counting_factor(e.tag, chi);
  return m;
}

CountingTag Superoperator::tag(int row, int col) const {
  for (const auto& e : tagged_)
    if (e.row == row && e.col == col) return e.tag;
  return CountingTag::None;
}

Complex Superoperator::at(std::string_view row, std::string_view col) const {
  const auto& b = basis();
  return tilted_(b.index_of(row), b.index_of(col));
}

std::vector<JumpChannel> Superoperator::jump_channels() const {
  std::vector<JumpChannel> out;
  const int np = basis().population_count;
  for (int col = 0; col < np; ++col) {
    for (int row = 0; row < np; ++row) {
      if (row == col) continue;
      const double rate = bare_(row, col).real();
      if (rate != 0.0) out.push_back({col, row, rate, tag(row, col)});
    }
  }
  return out;
}

double classical_rate(const ValidatedParams& params, Variant which) {
  const Rates r(params);
  const double denom = which == Variant::I ? r.hot_down + r.cold_down : r.hot_up + r.cold_up;
  if (!(denom > 0.0))
    throw DegenerateError("classical rate undefined: gamma_h n_h + gamma_c n_c = 0");
  return 4.0 * params.lambda() * params.lambda() / denom;
}

ClassicalGenerator build_classical(const ValidatedParams& params, Variant which) {
  const double g = classical_rate(params, which);
  ComplexMatrix bare =
      which == Variant::I ? bare_classical_I(params, g) : bare_classical_II(params, g);
  return {Superoperator(classical_kind(which), std::move(bare), cold_tags(which), 0.0), g};
}

Superoperator build_tilted(const ValidatedParams& params, ModelKind kind, double chi) {
  const Variant v = variant_of(kind);
  if (is_quantum(kind)) {
    ComplexMatrix bare = v == Variant::I ? bare_quantum_I(params) : bare_quantum_II(params);
    return Superoperator(kind, std::move(bare), cold_tags(v), chi);
  }
  auto cl = build_classical(params, v);
  return Superoperator(kind, cl.generator.bare(), cl.generator.tagged_entries(), chi);
}

std::string dump_csv(const Superoperator& op) {
  const auto& b = op.basis();
  std::string out = "row\\col";
  for (const auto& l : b.labels) out += "," + l;
  out += '\n';
  for (int i = 0; i < op.dim(); ++i) {
    out += b.labels[i];
    for (int j = 0; j < op.dim(); ++j) {
      const Complex z = op.matrix()(i, j);
      out += fmt::format(",{:.17g}{:+.17g}i", z.real(), z.imag());
    }
    out += '\n';
  }
  return out;
}

}  // namespace maserkur
