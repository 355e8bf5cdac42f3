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

#include <cmath>
#include <sstream>

#include <doctest.h>

#include "maserkur/liouvillian.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace maserkur;

namespace {

const EngineParams kRef{0.016, 2.0, 5.0, 0.001, 0.05};

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("liouvillian") {
  TEST_CASE("basis orderings") {
    CHECK(basis_for(ModelKind::QuantumI).labels ==
          std::vector<std::string>{"rho_gg", "rho_00", "rho_11", "rho_10", "rho_01"});
    CHECK(basis_for(ModelKind::QuantumII).labels ==
          std::vector<std::string>{"rho_11", "rho_00", "rho_gg", "rho_0g", "rho_g0"});
    CHECK(basis_for(ModelKind::ClassicalI).dim() == 3);
    CHECK(basis_for(ModelKind::ClassicalII).index_of("rho_gg") == 2);
    CHECK_THROWS_AS(basis_for(ModelKind::QuantumI).index_of("rho_g1"), std::out_of_range);
  }

  TEST_CASE("quoted entries at the reference point") {
    const ValidatedParams v = validate(kRef);
    const Superoperator q1 = build_tilted(v, ModelKind::QuantumI, 0.0);
    CHECK(q1.at("rho_gg", "rho_11").real() == doctest::Approx(0.096).epsilon(1e-14));
    const Superoperator q2 = build_tilted(v, ModelKind::QuantumII, 0.0);
    CHECK(q2.at("rho_0g", "rho_0g").real() == doctest::Approx(-0.041).epsilon(1e-14));
    CHECK(q2.at("rho_g0", "rho_g0").real() == doctest::Approx(-0.041).epsilon(1e-14));
    CHECK(q1.at("rho_10", "rho_01") == Complex(0.0, 0.0));
  }

  TEST_CASE("quantum generators equal the Kronecker-product Lindbladian") {
    testgen::SplitMix g(101);
    for (int n = 0; n < 300; ++n) {
      const EngineParams p = testgen::wide_params(g);
      const double chi = g.uniform(-3.0, 3.0);
      for (ModelKind k : {ModelKind::QuantumI, ModelKind::QuantumII}) {
        const Superoperator op = build_tilted(validate(p), k, chi);
        const oracle::M9 full = oracle::lindblad(p, k, chi);
        const auto& labels = op.basis().labels;
        std::vector<int> idx;
        for (const auto& l : labels) idx.push_back(oracle::vec_index(l));
        double err = 0.0;
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j) err = std::max(err, std::abs(op.matrix()(i, j) - full(idx[i], idx[j])));
        // the retained components form a closed block
        for (int r = 0; r < 9; ++r) {
          if (std::find(idx.begin(), idx.end(), r) != idx.end()) continue;
          for (int j : idx) err = std::max(err, std::abs(full(r, j)));
        }
        CHECK_MESSAGE(err <= 1e-13 * (1.0 + full.cwiseAbs().maxCoeff()), testgen::describe(p));
      }
    }
  }

  TEST_CASE("trace preservation for every kind") {
    testgen::SplitMix g(7);
    for (int n = 0; n < 500; ++n) {
      const ValidatedParams v = validate(testgen::box_params(g));
      for (ModelKind k : kAllKinds) {
        const Superoperator op = build_tilted(v, k, 0.0);
        const int np = op.basis().population_count;
        const Eigen::RowVectorXcd colsum = op.matrix().topRows(np).colwise().sum();
        CHECK(colsum.cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + max_abs(op.matrix())));
      }
    }
  }

  TEST_CASE("exactly two entries carry counting tags") {
    const ValidatedParams v = validate(kRef);
    for (ModelKind k : kAllKinds) {
      const Superoperator op = build_tilted(v, k, 0.3);
      int emission = 0, absorption = 0;
      for (int i = 0; i < op.dim(); ++i)
        for (int j = 0; j < op.dim(); ++j) {
          emission += op.tag(i, j) == CountingTag::Emission;
          absorption += op.tag(i, j) == CountingTag::Absorption;
        }
      CHECK(emission == 1);
      CHECK(absorption == 1);
    }
    const Superoperator q1 = build_tilted(v, ModelKind::QuantumI, 0.0);
    CHECK(q1.tag(q1.basis().index_of("rho_gg"), q1.basis().index_of("rho_00")) == CountingTag::Emission);
    const Superoperator q2 = build_tilted(v, ModelKind::QuantumII, 0.0);
    CHECK(q2.tag(q2.basis().index_of("rho_00"), q2.basis().index_of("rho_11")) == CountingTag::Emission);
  }

  TEST_CASE("counting-field derivative touches only the tagged entries") {
    testgen::SplitMix g(8);
    const double h = 1e-6;
    for (int n = 0; n < 100; ++n) {
      const ValidatedParams v = validate(testgen::box_params(g));
      for (ModelKind k : kAllKinds) {
        const Superoperator op = build_tilted(v, k, 0.0);
        const ComplexMatrix d = (op.at_chi(h) - op.at_chi(-h)) / (2.0 * h);
        for (int i = 0; i < op.dim(); ++i)
          for (int j = 0; j < op.dim(); ++j) {
            const double t = static_cast<double>(op.tag(i, j));
            const Complex expected = Complex(0.0, t) * op.bare()(i, j);
            CHECK(std::abs(d(i, j) - expected) <= 1e-8 * (1.0 + std::abs(op.bare()(i, j))));
          }
      }
    }
  }

  TEST_CASE("Hermitian inputs map to Hermitian outputs") {
    testgen::SplitMix g(9);
    for (int n = 0; n < 200; ++n) {
      const ValidatedParams v = validate(testgen::wide_params(g));
      for (ModelKind k : {ModelKind::QuantumI, ModelKind::QuantumII}) {
        const Superoperator op = build_tilted(v, k, 0.0);
        Eigen::VectorXcd rho(5);
        const Complex c(g.uniform(-1, 1), g.uniform(-1, 1));
        rho << g.uniform(), g.uniform(), g.uniform(), c, std::conj(c);
        const Eigen::VectorXcd out = op.matrix() * rho;
        CHECK(std::abs(out(3) - std::conj(out(4))) <= 1e-13 * (1.0 + out.cwiseAbs().maxCoeff()));
        for (int i = 0; i < 3; ++i) CHECK(std::abs(out(i).imag()) <= 1e-13 * (1.0 + std::abs(out(i))));
      }
    }
  }

  TEST_CASE("classical replacement rates") {
    const ValidatedParams v = validate(kRef);
    const ClassicalGenerator c1 = build_classical(v, Variant::I);
    const ClassicalGenerator c2 = build_classical(v, Variant::II);
    CHECK(c1.gamma_cl == doctest::Approx(0.004766444232602478551).epsilon(1e-14));
    CHECK(c2.gamma_cl == doctest::Approx(0.12195121951219512195).epsilon(1e-14));
    CHECK(c1.generator.at("rho_00", "rho_11").real() == doctest::Approx(c1.gamma_cl));
    CHECK(c2.generator.at("rho_gg", "rho_00").real() == doctest::Approx(c2.gamma_cl));

    EngineParams p = kRef;
    p.lambda = 0.0;
    CHECK(build_classical(validate(p), Variant::I).gamma_cl == 0.0);
    CHECK(build_classical(validate(p), Variant::II).gamma_cl == 0.0);

    const EngineParams cold{1.0, 1.0, 0.0, 0.0, 0.3};
    CHECK_THROWS_AS(build_classical(validate(cold), Variant::II), DegenerateError);
    CHECK_NOTHROW(build_classical(validate(cold), Variant::I));
  }

  TEST_CASE("jump channels list every population transfer once") {
    const ValidatedParams v = validate(kRef);
    CHECK(build_tilted(v, ModelKind::QuantumI, 0.0).jump_channels().size() == 4);
    CHECK(build_tilted(v, ModelKind::ClassicalII, 0.0).jump_channels().size() == 6);
    for (const auto& ch : build_tilted(v, ModelKind::ClassicalI, 0.0).jump_channels()) CHECK(ch.rate > 0.0);
  }

  TEST_CASE("CSV dump is a labeled grid") {
    const std::string csv = dump_csv(build_tilted(validate(kRef), ModelKind::QuantumII, 0.0));
    std::istringstream in(csv);
    std::string line;
    int rows = 0;
    std::getline(in, line);
    CHECK(line.find("rho_g0") != std::string::npos);
    while (std::getline(in, line)) {
      ++rows;
      CHECK(std::count(line.begin(), line.end(), ',') == 5);
    }
    CHECK(rows == 5);
  }
}
