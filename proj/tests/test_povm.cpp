// Copyright 2026 The povm-forge Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "povmforge/povm.hpp"
#include "test_util.hpp"

using namespace povmforge;
using namespace povmforge::povm;
namespace mc = povmforge::matcore;
using testutil::max_abs_diff;

TEST_CASE("cyclic family closed form") {
  const Povm p2 = cyclic_povm(2);
  ComplexMatrix plus(2, 2), minus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  CHECK(max_abs_diff(p2.op(0), plus) < 1e-15);
  CHECK(max_abs_diff(p2.op(1), minus) < 1e-15);

  const Povm p4 = cyclic_povm(4);
  ComplexMatrix pi1(2, 2);
  pi1 << 0.25, Complex(0, 0.25), Complex(0, -0.25), 0.25;  // omega_4 = -i
  CHECK(max_abs_diff(p4.op(1), pi1) < 1e-15);

  for (std::size_t n : {2, 3, 5, 9, 16}) {
    const Povm p = cyclic_povm(n);
    CHECK(completeness_error(2, p.operators()) < 1e-12);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(std::real(p.op(j).trace()) ==
            doctest::Approx(2.0 / static_cast<double>(n)).epsilon(1e-12));
      // rank one: determinant vanishes
      CHECK(std::abs(p.op(j).determinant()) < 1e-14);
    }
  }
  CHECK_THROWS_AS(cyclic_povm(1), ParameterError);
}

TEST_CASE("povm constructor rejects broken families") {
  auto ops = cyclic_povm(4).operators();
  ops[0] *= 1.01;
  CHECK_THROWS_AS(Povm(2, ops), NumericError);

  auto ops2 = cyclic_povm(4).operators();
  ops2[1](0, 1) += Complex(0.0, 1e-3);
  CHECK_THROWS_AS(Povm(2, ops2), NumericError);
}

TEST_CASE("probabilities behave like probabilities") {
  std::mt19937_64 rng(23);
  for (const Povm& p :
       {cyclic_povm(5), hw_povm(3, random_psd(3, 1.0 / 3.0, rng))}) {
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexVector psi = random_state(p.dim(), rng);
      const auto probs = p.probabilities(psi);
      double sum = 0.0;
      for (double q : probs) {
        CHECK(q >= -1e-12);
        sum += q;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("hw family structure") {
  ComplexMatrix mu = ComplexMatrix::Zero(2, 2);
  mu(0, 0) = 0.5;  // |0><0| / 2
  const Povm p = hw_povm(2, mu);
  REQUIRE(p.size() == 4);
  ComplexMatrix p00 = ComplexMatrix::Zero(2, 2);
  p00(0, 0) = 0.5;
  ComplexMatrix p11 = ComplexMatrix::Zero(2, 2);
  p11(1, 1) = 0.5;
  // (j,k) lexicographic with j major: Z^k fixes the projectors, X flips them
  CHECK(max_abs_diff(p.op(0), p00) < 1e-15);
  CHECK(max_abs_diff(p.op(1), p00) < 1e-15);
  CHECK(max_abs_diff(p.op(2), p11) < 1e-15);
  CHECK(max_abs_diff(p.op(3), p11) < 1e-15);
  CHECK(p.label(1) == "0,1");

  SUBCASE("invariant seed gives a flat family") {
    const Eigen::Index d = 3;
    const ComplexMatrix flat =
        ComplexMatrix::Identity(d, d) / static_cast<double>(d * d);
    const Povm q = hw_povm(d, flat);
    for (std::size_t j = 0; j < q.size(); ++j) {
      CHECK(max_abs_diff(q.op(j), flat) < 1e-14);
    }
  }

  SUBCASE("random seed still sums to identity") {
    std::mt19937_64 rng(3);
    const Povm q = hw_povm(3, random_psd(3, 1.0 / 3.0, rng));
    CHECK(completeness_error(3, q.operators()) < 1e-10);
  }

  SUBCASE("trace condition is enforced") {
    ComplexMatrix bad = ComplexMatrix::Identity(2, 2) * 0.4;
    CHECK_THROWS_AS(hw_povm(2, bad), NumericError);
  }
}

TEST_CASE("build_M stacks roots into an isometry") {
  const Povm p2 = cyclic_povm(2);
  const ComplexMatrix m = build_M(p2);
  REQUIRE(m.rows() == 4);
  REQUIRE(m.cols() == 2);
  CHECK(max_abs_diff(m.topRows(2), p2.op(0)) < 1e-12);     // sqrt of projector
  CHECK(max_abs_diff(m.bottomRows(2), p2.op(1)) < 1e-12);
  CHECK(max_abs_diff(m.adjoint() * m, ComplexMatrix::Identity(2, 2)) < 1e-12);

  const Povm single(3, {ComplexMatrix::Identity(3, 3)});
  CHECK(max_abs_diff(build_M(single), ComplexMatrix::Identity(3, 3)) < 1e-14);

  ComplexMatrix mu = ComplexMatrix::Zero(2, 2);
  mu(0, 0) = 0.5;
  const ComplexMatrix mhw = build_M(hw_povm(2, mu));
  REQUIRE(mhw.rows() == 8);
  CHECK(max_abs_diff(mhw.adjoint() * mhw, ComplexMatrix::Identity(2, 2)) <
        1e-12);

  std::mt19937_64 rng(7);
  for (std::size_t n : {3, 6, 11}) {
    const ComplexMatrix m_n = build_M(cyclic_povm(n));
    CHECK(max_abs_diff(m_n.adjoint() * m_n, ComplexMatrix::Identity(2, 2)) <
          1e-10);
  }
}

TEST_CASE("dilation unitary extends M and reproduces the roots") {
  SUBCASE("completion of the cyclic n = 2 stack") {
    const ComplexMatrix u2 = dilation_unitary(cyclic_povm(2));
    REQUIRE(u2.rows() == 4);
    CHECK(mc::unitarity_error(u2) < 1e-12);
    CHECK(max_abs_diff(u2.leftCols(2), build_M(cyclic_povm(2))) == 0.0);
  }

  std::mt19937_64 rng(29);
  const Povm p = hw_povm(3, random_psd(3, 1.0 / 3.0, rng));
  const ComplexMatrix u = dilation_unitary(p);
  CHECK(mc::unitarity_error(u) < 1e-10);

  ComplexVector e0 = ComplexVector::Zero(static_cast<Eigen::Index>(p.size()));
  e0(0) = 1.0;
  const KrausFamily kraus = kraus_operators(u, e0, p.dim(), p.size());
  const auto report = check_minimal_disturbance(kraus, p);
  CHECK(report.pass);
  CHECK(report.all_psd);
}

TEST_CASE("symmetry checks") {
  for (std::size_t n : {2, 3, 4, 8}) {
    const auto report = check_symmetry(cyclic_povm(n), cyclic_symmetry_action(n));
    CHECK(report.pass);
  }
  std::mt19937_64 rng(31);
  for (Eigen::Index d : {2, 3, 4}) {
    const Povm p = hw_povm(d, random_psd(d, 1.0 / static_cast<double>(d), rng));
    const auto report = check_symmetry(p, hw_symmetry_action(d));
    CHECK(report.pass);
  }

  // identity permutation is wrong for n = 4
  SymmetryAction broken = cyclic_symmetry_action(4);
  for (std::size_t j = 0; j < 4; ++j) broken.outcome_maps[0][j] = j;
  const auto report = check_symmetry(cyclic_povm(4), broken);
  CHECK_FALSE(report.pass);
}

TEST_CASE("symmetry holds over the full generated group") {
  for (std::size_t n : {2, 3, 5, 8}) {
    const Povm p = cyclic_povm(n);
    const ComplexMatrix r = mc::r_phase_op(n, 1);
    ComplexMatrix g = ComplexMatrix::Identity(2, 2);
    std::vector<std::size_t> pi(n);
    for (std::size_t j = 0; j < n; ++j) pi[j] = j;
    for (std::size_t power = 1; power < n; ++power) {
      g = (g * r).eval();
      for (std::size_t j = 0; j < n; ++j) pi[j] = (pi[j] + 1) % n;
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(max_abs_diff(g * p.op(j) * g.adjoint(), p.op(pi[j])) < 1e-10);
      }
    }
  }

  std::mt19937_64 rng(37);
  for (Eigen::Index d : {2, 3, 4}) {
    const auto du = static_cast<std::size_t>(d);
    const Povm p = hw_povm(d, random_psd(d, 1.0 / static_cast<double>(d), rng));
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        const ComplexMatrix g = mc::phase_op(du, b) * mc::shift_op(du, a);
        for (Eigen::Index j = 0; j < d; ++j) {
          for (Eigen::Index k = 0; k < d; ++k) {
            const auto from = static_cast<std::size_t>(j * d + k);
            const auto to =
                static_cast<std::size_t>(((j + a) % d) * d + (k + b) % d);
            CHECK(max_abs_diff(g * p.op(from) * g.adjoint(), p.op(to)) < 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("kraus extraction") {
  SUBCASE("identity unitary leaves only the aligned outcome") {
    const Eigen::Index d = 3;
    const std::size_t outcomes = 4;
    ComplexVector phi = ComplexVector::Zero(4);
    phi(0) = 1.0;
    const KrausFamily family = kraus_operators(
        ComplexMatrix::Identity(12, 12), phi, d, outcomes);
    CHECK(max_abs_diff(family.op(0), ComplexMatrix::Identity(d, d)) == 0.0);
    for (std::size_t j = 1; j < outcomes; ++j) {
      CHECK(family.op(j).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SUBCASE("linearity in the ancilla state") {
    std::mt19937_64 rng(41);
    const Eigen::Index d = 2;
    const std::size_t outcomes = 3;
    const ComplexMatrix u = testutil::random_unitary(6, rng);
    const ComplexVector phi1 = random_state(3, rng);
    const ComplexVector phi2 = random_state(3, rng);
    const Complex a(0.3, -0.1), b(0.2, 0.7);
    ComplexVector mix = a * phi1 + b * phi2;
    const double norm = mix.norm();
    mix /= norm;

    const KrausFamily k1 = kraus_operators(u, phi1, d, outcomes);
    const KrausFamily k2 = kraus_operators(u, phi2, d, outcomes);
    const KrausFamily km = kraus_operators(u, mix, d, outcomes);
    for (std::size_t j = 0; j < outcomes; ++j) {
      const ComplexMatrix expected = (a * k1.op(j) + b * k2.op(j)) / norm;
      CHECK(max_abs_diff(km.op(j), expected) < 1e-12);
    }
  }

  SUBCASE("input validation") {
    ComplexVector phi = ComplexVector::Zero(2);
    phi(0) = 1.0;
    CHECK_THROWS_AS(
        kraus_operators(2.0 * ComplexMatrix::Identity(4, 4), phi, 2, 2),
        NumericError);
    CHECK_THROWS_AS(
        kraus_operators(ComplexMatrix::Identity(4, 4), phi, 3, 2),
        ParameterError);
  }
}

TEST_CASE("kraus family constructor enforces completeness") {
  ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(KrausFamily({half, half}), NumericError);
  CHECK_NOTHROW(KrausFamily(
      {mc::psd_sqrt(cyclic_povm(2).op(0)), mc::psd_sqrt(cyclic_povm(2).op(1))}));
}

TEST_CASE("minimal disturbance detects a unitary twist") {
  const Povm p = cyclic_povm(2);
  ComplexMatrix twist = ComplexMatrix::Zero(2, 2);
  twist(0, 0) = 1.0;
  twist(1, 1) = -1.0;
  std::vector<ComplexMatrix> twisted = {twist * mc::psd_sqrt(p.op(0)),
                                        mc::psd_sqrt(p.op(1))};
  const KrausFamily family(twisted);  // still a valid channel for the POVM
  const auto report = check_minimal_disturbance(family, p);
  CHECK_FALSE(report.pass);
  CHECK_FALSE(report.all_psd);
}
