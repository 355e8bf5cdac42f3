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

#pragma once

#include <complex>

namespace maserkur {

/// Second-order truncated Taylor number in the counting field. With
/// D = i d/dchi evaluated at chi = 0 it stores (f, D f, D^2 f); products
/// follow the Leibniz rule and terms beyond second order are dropped.
template <class Real>
struct Jet2 {
  using value_type = std::complex<Real>;

  value_type v{};
  value_type d1{};
  value_type d2{};

  constexpr Jet2() = default;
  constexpr Jet2(value_type value) : v(value) {}  // NOLINT: constants embed implicitly
  constexpr Jet2(value_type value, value_type first, value_type second)
      : v(value), d1(first), d2(second) {}

  /// value * exp(i tag chi): D gives -tag, D^2 gives tag^2.
  static constexpr Jet2 counting(value_type value, int tag) {
    const Real t = static_cast<Real>(tag);
    return {value, -t * value, t * t * value};
  }

  constexpr Jet2& operator+=(const Jet2& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  constexpr Jet2& operator-=(const Jet2& o) {
    v -= o.v;
    d1 -= o.d1;
    d2 -= o.d2;
    return *this;
  }
  constexpr Jet2& operator*=(const Jet2& o) {
    const value_type nv = v * o.v;
    const value_type n1 = d1 * o.v + v * o.d1;
    const value_type n2 = d2 * o.v + Real(2) * d1 * o.d1 + v * o.d2;
    v = nv;
    d1 = n1;
    d2 = n2;
    return *this;
  }
  constexpr Jet2& operator*=(value_type s) {
    v *= s;
    d1 *= s;
    d2 *= s;
    return *this;
  }
  constexpr Jet2& operator/=(value_type s) {
    v /= s;
    d1 /= s;
    d2 /= s;
    return *this;
  }

  friend constexpr Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend constexpr Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend constexpr Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
  friend constexpr Jet2 operator*(Jet2 a, value_type s) { return a *= s; }
  friend constexpr Jet2 operator*(value_type s, Jet2 a) { return a *= s; }
  friend constexpr Jet2 operator/(Jet2 a, value_type s) { return a /= s; }
  friend constexpr Jet2 operator-(Jet2 a) { return {-a.v, -a.d1, -a.d2}; }
};

}  // namespace maserkur
