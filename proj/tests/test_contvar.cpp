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

#include <cmath>
#include <numbers>
#include <random>

#include "povmforge/contvar.hpp"

using namespace povmforge;
using namespace povmforge::contvar;

namespace {

const Grid1D kGrid(10.0, 256);

double rel_l2_error(const GridWavefunction& a, const GridWavefunction& b) {
  const double scale = std::sqrt(a.measure());
  const double diff = (a.values() - b.values()).norm() * scale;
  const double ref = b.values().norm() * scale;
  return diff / ref;
}

}  // namespace

TEST_CASE("grid construction and abscissas") {
  CHECK(kGrid.spacing() == doctest::Approx(20.0 / 256.0));
  CHECK(kGrid.x(0) == doctest::Approx(-10.0));
  CHECK(kGrid.x(128) == doctest::Approx(0.0));
  CHECK(kGrid.nearest_index(0.0) == 128);
  CHECK_THROWS_AS(Grid1D(10.0, 6), ParameterError);
  CHECK_THROWS_AS(Grid1D(10.0, 9), ParameterError);
  CHECK_THROWS_AS(Grid1D(-1.0, 16), ParameterError);
  CHECK_THROWS_AS(kGrid.nearest_index(11.0), ParameterError);
}

TEST_CASE("gaussian samples") {
  const GridWavefunction alpha = gaussian_wavefn(1.0, kGrid);
  CHECK(std::abs(alpha.norm() - 1.0) < 1e-8);

  // even function
  for (Eigen::Index k = 1; k < kGrid.points; ++k) {
    const Eigen::Index mirror = kGrid.points - k;
    CHECK(std::abs(alpha.values()(k) - alpha.values()(mirror)) < 1e-14);
  }

  // second moment sigma^2 / 2
  double x2 = 0.0;
  for (Eigen::Index k = 0; k < kGrid.points; ++k) {
    x2 += kGrid.x(k) * kGrid.x(k) * std::norm(alpha.values()(k));
  }
  x2 *= kGrid.spacing();
  CHECK(std::abs(x2 - 0.5) < 1e-6);

  CHECK_THROWS_AS(gaussian_wavefn(0.01, kGrid), ResolutionError);
  CHECK_THROWS_AS(gaussian_wavefn(9.0, kGrid), ResolutionError);
}

TEST_CASE("fourier gate inverts and preserves norm") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const GridWavefunction psi = random_smooth_state(kGrid, rng);
    const GridWavefunction hat = apply_cv_gate(psi, CvGate::fourier(0));
    CHECK(std::abs(hat.norm() - 1.0) < 1e-8);
    const GridWavefunction back =
        apply_cv_gate(hat, CvGate::fourier_dagger(0));
    CHECK(rel_l2_error(back, psi) < 1e-8);
  }
}

TEST_CASE("fourier gate matches the analytic gaussian transform") {
  // width-sigma gaussian maps to a width-1/sigma gaussian
  const double sigma = 1.6;
  const GridWavefunction in = gaussian_wavefn(sigma, kGrid);
  const GridWavefunction out = apply_cv_gate(in, CvGate::fourier(0));
  const GridWavefunction expected = gaussian_wavefn(1.0 / sigma, kGrid);
  CHECK(rel_l2_error(out, expected) < 1e-8);
}

TEST_CASE("controlled shift dagger matches argument substitution") {
  const GridWavefunction a = gaussian_packet(1.0, 1.5, 0.0, kGrid);
  const GridWavefunction b = gaussian_packet(0.8, -2.0, 0.0, kGrid);
  const GridWavefunction pair = GridWavefunction::product(a, b);
  const GridWavefunction out =
      apply_cv_gate(pair, CvGate::controlled_shift_dagger(0, 1));

  // oracle: psi(x, y + x) by direct index substitution
  const Eigen::Index n = kGrid.points;
  ComplexVector expected(n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index src = (((k + j - n / 2) % n) + n) % n;
      expected(j * n + k) = pair.values()(j * n + src);
    }
  }
  CHECK((out.values() - expected).cwiseAbs().maxCoeff() == 0.0);

  // packet centered (a_c, b_c) moves its second slot to b_c - a_c
  double best = -1.0;
  Eigen::Index best_j = 0, best_k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double mag = std::norm(out.values()(j * n + k));
      if (mag > best) {
        best = mag;
        best_j = j;
        best_k = k;
      }
    }
  }
  CHECK(kGrid.x(best_j) == doctest::Approx(1.5).epsilon(0.05));
  CHECK(kGrid.x(best_k) == doctest::Approx(-3.5).epsilon(0.05));
}

TEST_CASE("displacement gate") {
  SUBCASE("off-lattice shift matches the analytic displaced gaussian") {
    const double t = 0.3021, s = -0.77;
    const GridWavefunction in = gaussian_wavefn(1.2, kGrid);
    const GridWavefunction out =
        apply_cv_gate(in, CvGate::displacement(s, t, 0));
    ComplexVector expected(kGrid.points);
    const AnalyticGaussian g{1.2, 0.0, 0.0};
    for (Eigen::Index k = 0; k < kGrid.points; ++k) {
      const double x = kGrid.x(k);
      expected(k) = std::exp(Complex(0.0, -x * s)) * g.eval(x - t);
    }
    const double err =
        (out.values() - expected).norm() / expected.norm();
    CHECK(err < 1e-10);
  }
  SUBCASE("norm preserved") {
    std::mt19937_64 rng(13);
    const GridWavefunction psi = random_smooth_state(kGrid, rng);
    const GridWavefunction out =
        apply_cv_gate(psi, CvGate::displacement(1.3, -0.41, 0));
    CHECK(std::abs(out.norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("beam splitter") {
  SUBCASE("isotropic gaussian is invariant") {
    const GridWavefunction g = gaussian_wavefn(1.0, kGrid);
    const GridWavefunction pair = GridWavefunction::product(g, g);
    const GridWavefunction out =
        apply_cv_gate(pair, CvGate::beam_splitter(0, 1));
    CHECK(rel_l2_error(out, pair) < 1e-6);
  }
  SUBCASE("matches the analytic argument map for unequal packets") {
    const AnalyticGaussian a{1.3, 0.9, 0.0};
    const AnalyticGaussian b{0.9, -0.7, 0.0};
    const GridWavefunction pair =
        GridWavefunction::product(a.sample(kGrid), b.sample(kGrid));
    const GridWavefunction out =
        apply_cv_gate(pair, CvGate::beam_splitter(0, 1));
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    ComplexVector expected(kGrid.points * kGrid.points);
    for (Eigen::Index j = 0; j < kGrid.points; ++j) {
      for (Eigen::Index k = 0; k < kGrid.points; ++k) {
        const double x = kGrid.x(j), y = kGrid.x(k);
        expected(j * kGrid.points + k) =
            a.eval((x + y) * inv_sqrt2) * b.eval((x - y) * inv_sqrt2);
      }
    }
    const double err = (out.values() - expected).norm() / expected.norm();
    CHECK(err < 1e-7);
  }
}

TEST_CASE("coordinate map resampling") {
  SUBCASE("integer map on 2 coordinates is an exact gather") {
    RealMatrix swap(2, 2);
    swap << 0, 1, 1, 0;
    const GridWavefunction a = gaussian_packet(1.0, 1.0, 0.0, kGrid);
    const GridWavefunction b = gaussian_packet(1.0, -2.0, 0.0, kGrid);
    const GridWavefunction pair = GridWavefunction::product(a, b);
    const GridWavefunction swapped =
        apply_cv_gate(pair, CvGate::coordinate_map(swap));
    const GridWavefunction expected = GridWavefunction::product(b, a);
    CHECK((swapped.values() - expected.values()).cwiseAbs().maxCoeff() <
          1e-14);
  }
  SUBCASE("non-integer area-preserving map keeps the norm") {
    RealMatrix shear(2, 2);
    shear << 1.0, 0.35, 0.0, 1.0;
    const GridWavefunction g = gaussian_wavefn(1.0, kGrid);
    const GridWavefunction pair = GridWavefunction::product(g, g);
    const GridWavefunction out =
        apply_cv_gate(pair, CvGate::coordinate_map(shear));
    CHECK(std::abs(out.norm() - pair.norm()) < 1e-3);
  }
  SUBCASE("non-area-preserving maps are rejected") {
    RealMatrix stretch(2, 2);
    stretch << 2.0, 0.0, 0.0, 1.0;
    const GridWavefunction g = gaussian_wavefn(1.0, kGrid);
    const GridWavefunction pair = GridWavefunction::product(g, g);
    CHECK_THROWS_AS(apply_cv_gate(pair, CvGate::coordinate_map(stretch)),
                    ParameterError);
  }
}

TEST_CASE("every grid gate preserves the Riemann norm") {
  std::mt19937_64 rng(43);
  const GridWavefunction a = random_smooth_state(kGrid, rng);
  const GridWavefunction b = random_smooth_state(kGrid, rng);
  const GridWavefunction pair = GridWavefunction::product(a, b);

  const std::vector<CvGate> gates = {
      CvGate::fourier(0),
      CvGate::fourier_dagger(1),
      CvGate::controlled_shift_dagger(0, 1),
      CvGate::controlled_phase(1, 0),
      CvGate::reflection(0),
      CvGate::displacement(0.9, -0.437, 1),
      CvGate::beam_splitter(0, 1),
  };
  for (const CvGate& gate : gates) {
    CHECK(std::abs(apply_cv_gate(pair, gate).norm() - 1.0) < 1e-6);
  }

  // resampling renormalizes explicitly; flagged wider tolerance
  RealMatrix shear(2, 2);
  shear << 1.0, 0.21, 0.0, 1.0;
  CHECK(std::abs(apply_cv_gate(pair, CvGate::coordinate_map(shear)).norm() -
                 1.0) < 1e-3);
}

TEST_CASE("circuit against the closed-form conditional") {
  std::mt19937_64 rng(17);
  const GridWavefunction alpha = gaussian_wavefn(1.0, kGrid);

  SUBCASE("zero outcome with the probe as input") {
    const GridWavefunction out = infhw_kraus(alpha, alpha, 0.0, 0.0);
    // expected: alpha(z) / sqrt(2 pi) times ||alpha||^2
    ComplexVector expected = alpha.values() / std::sqrt(2.0 * std::numbers::pi);
    const double err = (out.values() - expected).norm() / expected.norm();
    CHECK(err < 1e-3);
  }

  SUBCASE("lattice sweep against the oracle") {
    const GridWavefunction psi = random_smooth_state(kGrid, rng);
    const CvConditionalTable table = infhw_apply(rank_one_ancilla(alpha), psi);
    for (double t : {-2.0, -0.5, 0.0, 1.0, 2.0}) {
      for (double s : {-2.0, -1.0, 0.0, 0.5, 2.0}) {
        const GridWavefunction circuit = table.conditional(t, s);
        const GridWavefunction oracle = coin_oracle(alpha, psi, t, s);
        CHECK(rel_l2_error(circuit, oracle) < 1e-3);
      }
    }
  }

  SUBCASE("orthogonal input gives a vanishing conditional") {
    const double t = 0.5, s = -0.7;
    // build the displaced/boosted probe window and project it out
    const double t_hat = kGrid.x(kGrid.nearest_index(t));
    const double s_hat = kGrid.x(kGrid.nearest_index(s));
    // the conditional pairs psi with window(u) = alpha(u - t) e^{-ius}
    ComplexVector window(kGrid.points);
    const AnalyticGaussian displaced{1.0, t_hat, 0.0};
    for (Eigen::Index u = 0; u < kGrid.points; ++u) {
      const double xu = kGrid.x(u);
      window(u) = displaced.eval(xu) * std::exp(Complex(0.0, -xu * s_hat));
    }
    GridWavefunction psi0 = random_smooth_state(kGrid, rng);
    ComplexVector v = psi0.values();
    const Complex overlap =
        window.dot(v) /
        window.squaredNorm();  // note: dot conjugates the left argument
    v -= overlap * window;
    const double norm = v.norm() * std::sqrt(kGrid.spacing());
    v /= norm;
    const GridWavefunction psi({kGrid}, v);
    const GridWavefunction out = coin_oracle(alpha, psi, t, s);
    CHECK(out.norm() < 1e-4);
  }

  SUBCASE("conditional weights integrate to one") {
    const GridWavefunction psi = random_smooth_state(kGrid, rng);
    const CvConditionalTable table = infhw_apply(rank_one_ancilla(alpha), psi);
    CHECK(std::abs(table.total_weight() - 1.0) < 0.02);
  }
}

TEST_CASE("rank-two ancilla stays linear in the probe state") {
  std::mt19937_64 rng(19);
  const GridWavefunction a1 = gaussian_wavefn(1.0, kGrid);
  const GridWavefunction a2 = gaussian_packet(0.9, 0.8, 0.4, kGrid);

  // orthonormalize a2 against a1 so the pair is an eigenbasis slice
  ComplexVector v2 = a2.values();
  const Complex overlap = a1.values().dot(v2) * kGrid.spacing();
  v2 -= overlap * a1.values();
  v2 /= v2.norm() * std::sqrt(kGrid.spacing());
  const GridWavefunction b2({kGrid}, v2);

  const double lambda1 = 0.7, lambda2 = 0.3;
  ComplexVector anc = std::sqrt(lambda1) * rank_one_ancilla(a1).values() +
                      std::sqrt(lambda2) * rank_one_ancilla(b2).values();
  const GridWavefunction ancilla({kGrid, kGrid}, std::move(anc));

  const GridWavefunction psi = random_smooth_state(kGrid, rng);
  const CvConditionalTable table = infhw_apply(ancilla, psi);
  for (double t : {-1.0, 0.5}) {
    for (double s : {0.0, 1.5}) {
      const GridWavefunction circuit = table.conditional(t, s);
      const ComplexVector expected =
          std::sqrt(lambda1) * coin_oracle(a1, psi, t, s).values() +
          std::sqrt(lambda2) * coin_oracle(b2, psi, t, s).values();
      const double err = (circuit.values() - expected).norm() / expected.norm();
      CHECK(err < 1e-3);
    }
  }
}

TEST_CASE("wavefunction normalization contract") {
  ComplexVector doubled = gaussian_wavefn(1.0, kGrid).values() * 2.0;
  CHECK_THROWS_AS(GridWavefunction({kGrid}, doubled), NumericError);
  CHECK_NOTHROW(GridWavefunction({kGrid}, std::move(doubled), true));
}

TEST_CASE("kernel operator application uses the Riemann measure") {
  const KernelOperator k00 =
      scattering_kraus_kernel(2.0, 1.0, 0.0, 0.0, kGrid);
  const GridWavefunction psi = gaussian_wavefn(1.0, kGrid);
  const GridWavefunction out = k00.apply(psi);
  ComplexVector manual(kGrid.points);
  for (Eigen::Index z = 0; z < kGrid.points; ++z) {
    Complex acc(0.0, 0.0);
    for (Eigen::Index w = 0; w < kGrid.points; ++w) {
      acc += k00.kernel(z, w) * psi.values()(w);
    }
    manual(z) = acc * kGrid.spacing();
  }
  CHECK((out.values() - manual).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(out.unnormalized());
}

TEST_CASE("unresolvable positivity widths are rejected") {
  CHECK_THROWS_AS(kernel_positivity(1e4, 1.0, 1.0, kGrid), ResolutionError);
}

TEST_CASE("scattering maps") {
  const ScatteringMaps maps = scattering_compose();
  RealMatrix expected(3, 3);
  expected << 1, 2, 2, 0, 1, 0, 0, 2, 1;
  CHECK((maps.composite.position - expected).cwiseAbs().maxCoeff() == 0.0);

  RealMatrix s21(3, 3);
  s21 << -1, 2, 0, 0, 1, 0, 0, 0, 1;
  CHECK((maps.s21.position - s21).cwiseAbs().maxCoeff() == 0.0);

  // two-particle collision: position map is the transposed inverse of the
  // momentum map
  RealMatrix n2(2, 2);
  n2 << 1, 2, 0, -1;
  const CoordinateMap momentum_map{n2};
  RealMatrix m2(2, 2);
  m2 << 1, 0, 2, -1;
  CHECK((momentum_map.momentum_action().transpose().inverse() - n2)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((CoordinateMap(m2).momentum_action() -
         RealMatrix(m2.transpose().inverse()))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("scattering kernel covariance under displacements") {
  const Grid1D grid(12.0, 320);
  const double sigma1 = 2.0, sigma2 = 1.0;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pick(-0.8, 0.8);
  for (int trial = 0; trial < 5; ++trial) {
    const double x = trial == 0 ? 0.4 : pick(rng);
    const double y = trial == 0 ? -0.6 : pick(rng);
    const KernelOperator direct =
        scattering_kraus_kernel(sigma1, sigma2, x, y, grid);
    const KernelOperator k00 =
        scattering_kraus_kernel(sigma1, sigma2, 0.0, 0.0, grid);

    // conjugate K00 by U_{s,t} with s = -y/2, t = -x/2
    const Eigen::Index n = grid.points;
    ComplexMatrix u = ComplexMatrix::Identity(n, n);
    {
      GridWavefunction basis({grid}, ComplexVector::Zero(n), true);
      for (Eigen::Index c = 0; c < n; ++c) {
        ComplexVector e = ComplexVector::Zero(n);
        e(c) = 1.0;
        GridWavefunction col({grid}, std::move(e), true);
        u.col(c) = apply_cv_gate(col, CvGate::displacement(-y / 2.0, -x / 2.0, 0))
                       .values();
      }
    }
    const ComplexMatrix conjugated = u * k00.kernel * u.adjoint();
    const double err = (conjugated - direct.kernel).cwiseAbs().maxCoeff();
    CHECK(err < 1e-6);
  }
}

TEST_CASE("kernel positivity") {
  const Grid1D grid(10.0, 256);
  SUBCASE("pure difference kernel is positive") {
    const auto report = kernel_positivity(0.0, 1.0, 1.0, grid);
    CHECK(report.regime);
    CHECK(report.positive);
  }
  SUBCASE("factorized kernel is rank one") {
    const auto report = kernel_positivity(0.5, 0.5, 1.0, grid);
    CHECK(report.positive);
    CHECK(report.min_eigenvalue > -1e-10);
    // rank one: the spectrum has a single significant eigenvalue; compare
    // the largest against the full trace
    CHECK(report.max_eigenvalue ==
          doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-6));
  }
  SUBCASE("outside the regime a negative eigenvalue appears") {
    const auto report = kernel_positivity(1.0, 0.25, 1.0, grid);
    CHECK_FALSE(report.regime);
    CHECK_FALSE(report.positive);
    CHECK(report.min_eigenvalue < -1e-4);
  }
}

TEST_CASE("scattering kernel positivity by width regime") {
  const Grid1D grid(10.0, 256);
  SUBCASE("sigma1 = 2 sigma2 gives a PSD root close to the ground state") {
    const KernelOperator k00 =
        scattering_kraus_kernel(2.0, 1.0, 0.0, 0.0, grid);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(k00.op());
    const double min_eig = es.eigenvalues().minCoeff();
    const double max_eig = es.eigenvalues().maxCoeff();
    CHECK(min_eig >= -1e-8 * max_eig);

    // mu = K00^2 should be the oscillator ground state at m w = 1/2
    KernelOperator mu = k00.compose(k00);
    mu.kernel *= 2.0 * std::numbers::pi;
    const double trace = mu.trace();
    mu.kernel /= trace;
    const ThermalParams params = thermal_params(2.0, 1.0);
    CHECK(params.mean_phonons == doctest::Approx(0.0).epsilon(1e-12));
    const AnalyticGaussian ground{std::sqrt(2.0), 0.0, 0.0};  // width 1/sqrt(mw)
    CHECK(fidelity_with_pure(mu, ground.sample(grid)) > 0.999);
  }
  SUBCASE("equal widths break positivity") {
    const KernelOperator k00 =
        scattering_kraus_kernel(1.0, 1.0, 0.0, 0.0, grid);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(k00.op());
    CHECK(es.eigenvalues().minCoeff() < -1e-4);
  }
}

TEST_CASE("mu consistency against the reduced state") {
  const Grid1D grid(10.0, 256);
  SUBCASE("pure point") {
    const auto report = mu_consistency(2.0, 1.0, grid);
    CHECK(report.regime_ok);
    CHECK(report.trace_distance < 1e-3);
    CHECK(report.purity == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("mixed point") {
    const auto report = mu_consistency(4.0, 1.0, grid);
    CHECK(report.regime_ok);
    CHECK(report.trace_distance < 1e-3);
    CHECK(report.purity < 1.0 - 1e-3);
  }
}

TEST_CASE("covariance transform") {
  const CoordinateMap g = entangling_map();
  SUBCASE("pure point determinant 1/4") {
    const GaussianState state = covariance_transform(g, 2.0, 1.0);
    const Eigen::Matrix2d reduced = state.mode_covariance(0);
    CHECK(reduced(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(reduced(1, 1) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(reduced(0, 1)) < 1e-12);
    CHECK(reduced.determinant() == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("mixed point") {
    const GaussianState state = covariance_transform(g, 4.0, 1.0);
    const Eigen::Matrix2d reduced = state.mode_covariance(0);
    CHECK(reduced(0, 0) == doctest::Approx(20.0 / 8.0).epsilon(1e-12));
    CHECK(reduced(1, 1) == doctest::Approx(1.25 / 8.0).epsilon(1e-12));
    CHECK(reduced.determinant() > 0.25);
  }
  SUBCASE("off-diagonal position-momentum blocks vanish") {
    const GaussianState state = covariance_transform(g, 3.0, 1.0);
    CHECK(state.covariance.topRightCorner(2, 2).cwiseAbs().maxCoeff() <
          1e-12);
  }
  SUBCASE("symplectic bound enforced on constructed states") {
    for (double s1 : {2.0, 3.0, 5.0}) {
      const GaussianState state = covariance_transform(g, s1, 1.0);
      CHECK(state.symplectic_eigenvalues().minCoeff() >= 0.5 - 1e-9);
    }
    RealMatrix bad = RealMatrix::Identity(4, 4) * 0.1;
    CHECK_THROWS_AS(GaussianState(2, RealVector::Zero(4), bad), NumericError);
  }
}

TEST_CASE("thermal parameter map") {
  SUBCASE("closed forms") {
    const ThermalParams p21 = thermal_params(2.0, 1.0);
    CHECK(p21.m_omega == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p21.mean_phonons == doctest::Approx(0.0).epsilon(1e-14));

    const ThermalParams p41 = thermal_params(4.0, 1.0);
    CHECK(p41.m_omega == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(p41.mean_phonons == doctest::Approx(0.25).epsilon(1e-14));
  }
  SUBCASE("mean phonon number vanishes exactly on the pure line") {
    for (double ratio = 1.0; ratio <= 4.0; ratio += 0.25) {
      const double sigma2 = 1.0;
      const ThermalParams p = thermal_params(2.0 * ratio * sigma2, sigma2);
      CHECK(p.mean_phonons >= 0.0);
      if (ratio == 1.0) {
        CHECK(p.mean_phonons < 1e-12);
      } else {
        CHECK(p.mean_phonons > 0.0);
      }
    }
  }
}

TEST_CASE("thermal state construction") {
  const Grid1D grid(10.0, 256);
  SUBCASE("ground state for N = 0") {
    const ThermalParams params{0.5, 0.0, true};
    const KernelOperator rho = thermal_state(params, 1, grid);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(kernel_expectation_x2(rho) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("geometric weights and covariance") {
    const ThermalParams params{0.25, 0.25, true};
    const KernelOperator rho = thermal_state(params, 40, grid);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-8));
    // covariance (N+1)/2 diag(1/(m w), m w)
    const double expected_x2 = (0.25 + 1.0) / (2.0 * 0.25);
    const double expected_p2 = (0.25 + 1.0) * 0.25 / 2.0;
    CHECK(std::abs(kernel_expectation_x2(rho) - expected_x2) < 1e-4);
    CHECK(std::abs(kernel_expectation_p2(rho) - expected_p2) < 1e-4);
  }
  SUBCASE("insufficient cutoff is rejected") {
    const ThermalParams params{0.25, 2.0, true};
    CHECK_THROWS_AS(thermal_state(params, 3, grid), ParameterError);
  }
  SUBCASE("matches mu from the kernel route") {
    const ThermalParams params = thermal_params(4.0, 1.0);
    const KernelOperator rho = thermal_state(params, 40, grid);
    const KernelOperator k00 =
        scattering_kraus_kernel(4.0, 1.0, 0.0, 0.0, grid);
    KernelOperator mu = k00.compose(k00);
    mu.kernel *= 2.0 * std::numbers::pi;
    mu.kernel /= mu.trace();
    CHECK(trace_distance(mu, rho) < 5e-3);
  }
}

TEST_CASE("optics scheme against its closed form") {
  std::mt19937_64 rng(29);
  const AnalyticGaussian alpha{1.0, 0.0, 0.0};
  const AnalyticGaussian beta{1.0, 0.0, 0.0};
  const GridWavefunction alpha_grid = alpha.sample(kGrid);
  const GridWavefunction beta_grid = beta.sample(kGrid);

  SUBCASE("zero outcome reduces to a projection") {
    const GridWavefunction psi = random_smooth_state(kGrid, rng);
    const GridWavefunction out =
        optics_kraus(alpha_grid, beta_grid, psi, 0.0, 0.0);
    // output proportional to beta, coefficient sqrt(2) <alpha|psi>/sqrt(2 pi)
    const Complex overlap =
        alpha_grid.values().dot(psi.values()) * kGrid.spacing();
    ComplexVector expected = std::numbers::sqrt2 * overlap /
                             std::sqrt(2.0 * std::numbers::pi) *
                             beta_grid.values();
    const double err = (out.values() - expected).norm() / expected.norm();
    CHECK(err < 1e-6);
  }

  SUBCASE("lattice comparison") {
    for (int trial = 0; trial < 3; ++trial) {
      const GridWavefunction psi = random_smooth_state(kGrid, rng);
      for (double x : {-0.8, 0.0, 0.6}) {
        for (double y : {-0.5, 0.0, 0.7}) {
          const GridWavefunction circuit =
              optics_kraus(alpha_grid, beta_grid, psi, x, y);
          const GridWavefunction oracle =
              optics_oracle(alpha, beta, psi, x, y);
          CHECK(rel_l2_error(circuit, oracle) < 1e-3);
        }
      }
    }
  }

  SUBCASE("self overlap is maximal at zero outcome") {
    const GridWavefunction psi = alpha.sample(kGrid);
    const double center =
        optics_kraus(alpha_grid, beta_grid, psi, 0.0, 0.0).norm();
    for (double x : {-1.0, 0.5, 1.0}) {
      for (double y : {-1.0, 1.0}) {
        CHECK(optics_kraus(alpha_grid, beta_grid, psi, x, y).norm() <=
              center + 1e-12);
      }
    }
  }
}

TEST_CASE("outcome statistics satisfy the product bound") {
  const GridWavefunction psi = gaussian_wavefn(1.0, kGrid);
  for (double sigma1 : {1.0, 2.0, 4.0}) {
    const OutcomeStatistics stats =
        outcome_statistics(sigma1, sigma1 / 2.0, psi);
    CHECK(stats.total_weight == doctest::Approx(1.0).epsilon(0.02));
    CHECK(stats.product >= 1.0 - 0.02);
  }
  CHECK_THROWS_AS(outcome_statistics(1.0, 1.0, psi), ParameterError);
}

TEST_CASE("outcome statistics match the convolution prediction") {
  // rank-one POVM with probe width w: Var t = (sigma_psi^2 + w^2)/2,
  // Var s = (1/sigma_psi^2 + 1/w^2)/2, with w = 1/sqrt(m omega)
  const GridWavefunction psi = gaussian_wavefn(1.0, kGrid);
  const OutcomeStatistics stats = outcome_statistics(2.0, 1.0, psi);
  const double w2 = 2.0;  // m omega = 1/2
  CHECK(stats.delta_x ==
        doctest::Approx(std::sqrt((1.0 + w2) / 2.0)).epsilon(5e-3));
  CHECK(stats.delta_p ==
        doctest::Approx(std::sqrt((1.0 + 1.0 / w2) / 2.0)).epsilon(5e-3));
}

TEST_CASE("broad inputs dominate the position spread") {
  const GridWavefunction broad = gaussian_wavefn(2.0, kGrid);
  const OutcomeStatistics stats = outcome_statistics(1.0, 0.5, broad);
  // probe variance w^2/2 = 1/4 against the input's own 2
  CHECK(stats.delta_x == doctest::Approx(std::sqrt(2.25)).epsilon(5e-3));
  CHECK(stats.product >= 1.0 - 0.02);
}
