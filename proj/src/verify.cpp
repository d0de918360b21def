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

#include "povmforge/verify.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "povmforge/circuits.hpp"
#include "povmforge/contvar.hpp"
#include "povmforge/povm.hpp"

namespace povmforge::verify {

namespace mc = matcore;
namespace pv = povm;
namespace qc = circuits;
namespace cv = contvar;

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

double rel_l2(const cv::GridWavefunction& got,
              const cv::GridWavefunction& want) {
  return (got.values() - want.values()).norm() / want.values().norm();
}

}  // namespace

CriterionResult check_completeness(double perturbation) {
  Stopwatch timer;
  CriterionResult result;
  result.id = 0;
  result.name = "povm-completeness";
  result.relation = "<=";
  result.threshold = pv::kFamilyTol;
  auto ops = pv::cyclic_povm(8).operators();
  ops[0] *= perturbation;
  result.value = pv::completeness_error(2, ops);
  result.pass = result.value <= result.threshold;
  if (perturbation != 1.0) {
    result.detail = "operator 0 scaled by " + format_number(perturbation);
  }
  result.seconds = timer.seconds();
  return result;
}

CriterionResult criterion_cyclic_dilation(std::uint64_t seed) {
  Stopwatch timer;
  CriterionResult result;
  result.id = 1;
  result.name = "cyclic-dilation-identity";
  result.relation = "<=";
  result.threshold = 1e-10;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t n = 2; n <= 16; ++n) {
    const ComplexMatrix u = qc::cyclic_unitary(n);
    const pv::Povm p = pv::cyclic_povm(n);
    std::vector<ComplexMatrix> roots;
    roots.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      roots.push_back(mc::psd_sqrt(p.op(j)));
    }
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexVector psi = pv::random_state(2, rng);
      ComplexVector in = ComplexVector::Zero(2 * static_cast<Eigen::Index>(n));
      in.segment(0, 2) = psi;
      const ComplexVector got = u * in;
      for (std::size_t j = 0; j < n; ++j) {
        const ComplexVector block =
            got.segment(2 * static_cast<Eigen::Index>(j), 2) - roots[j] * psi;
        worst = std::max(worst, block.cwiseAbs().maxCoeff());
      }
    }
  }
  result.value = worst;
  result.pass = result.value <= result.threshold;
  result.seconds = timer.seconds();
  return result;
}

CriterionResult criterion_cyclic_circuit() {
  Stopwatch timer;
  CriterionResult result;
  result.id = 2;
  result.name = "cyclic-gate-circuit";
  result.relation = "<=";
  result.threshold = 1e-9;
  double worst = 0.0;
  std::vector<double> log_m, log_count;
  for (std::size_t m = 1; m <= 4; ++m) {
    const qc::Circuit circuit = qc::cyclic_gate_circuit(m);
    const ComplexMatrix dense = qc::dense_unitary(circuit);
    const ComplexMatrix expected = qc::cyclic_unitary(1UL << m);
    worst = std::max(worst, (dense - expected).cwiseAbs().maxCoeff());
    log_m.push_back(std::log(static_cast<double>(m)));
    log_count.push_back(std::log(static_cast<double>(circuit.gates.size())));
  }
  // least-squares slope of log(count) vs log(m)
  const auto k = static_cast<double>(log_m.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < log_m.size(); ++i) {
    sx += log_m[i];
    sy += log_count[i];
    sxx += log_m[i] * log_m[i];
    sxy += log_m[i] * log_count[i];
  }
  const double exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);

  result.value = worst;
  result.detail = "gate-count fit exponent " + format_number(exponent);
  result.pass = worst <= result.threshold && exponent <= 2.2;
  result.seconds = timer.seconds();
  return result;
}

CriterionResult criterion_hw_disturbance(std::uint64_t seed) {
  Stopwatch timer;
  CriterionResult result;
  result.id = 3;
  result.name = "hw-minimal-disturbance";
  result.relation = "<=";
  result.threshold = 1e-9;
  std::mt19937_64 rng(seed);
  double worst_kraus = 0.0;
  double worst_appendix = 0.0;
  for (Eigen::Index d : {2, 3, 4}) {
    const auto du = static_cast<std::size_t>(d);
    const ComplexMatrix u = qc::dense_unitary(qc::hw_circuit(d));
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix mu =
          trial % 3 == 0
              ? pv::random_rank_one_psd(d, 1.0 / static_cast<double>(d), rng)
              : pv::random_psd(d, 1.0 / static_cast<double>(d), rng);
      const ComplexMatrix root = mc::psd_sqrt(mu);
      const ComplexVector gamma = qc::gamma_state(mu, d).amplitudes();
      const pv::KrausFamily family =
          pv::kraus_operators(u, gamma, d, du * du);
      for (Eigen::Index j = 0; j < d; ++j) {
        const ComplexMatrix xj = mc::shift_op(du, j);
        for (Eigen::Index kk = 0; kk < d; ++kk) {
          const ComplexMatrix zk = mc::phase_op(du, kk);
          const ComplexMatrix expected =
              zk * xj * root * xj.adjoint() * zk.adjoint();
          worst_kraus = std::max(
              worst_kraus,
              (family.op(static_cast<std::size_t>(j * d + kk)) - expected)
                  .cwiseAbs()
                  .maxCoeff());
        }
      }
      const qc::AppendixHwReport appendix = qc::appendix_hw_verify(d, mu);
      worst_appendix =
          std::max({worst_appendix, appendix.z_intertwining.max_error,
                    appendix.x_intertwining.max_error,
                    appendix.column_structure.max_error});
    }
  }
  result.value = worst_kraus;
  result.detail = "appendix identity residual " + format_number(worst_appendix);
  result.pass = worst_kraus <= result.threshold && worst_appendix < 1e-10;
  result.seconds = timer.seconds();
  return result;
}

CriterionResult criterion_outcome_oracle(std::uint64_t seed) {
  Stopwatch timer;
  CriterionResult result;
  result.id = 4;
  result.name = "outcome-distribution-oracle";
  result.relation = "<=";
  result.threshold = 1e-10;
  std::mt19937_64 rng(seed);
  double worst = 0.0;

  // cyclic family through the gate-level circuit
  {
    const std::size_t m = 3, n = 8;
    const qc::Circuit circuit = qc::cyclic_gate_circuit(m);
    const pv::Povm p = pv::cyclic_povm(n);
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexVector psi = pv::random_state(2, rng);
      ComplexVector in = ComplexVector::Zero(2 * n);
      in.segment(0, 2) = psi;
      const auto measurement = qc::run_measurement(
          circuit, qc::QuditRegister::from_amplitudes(circuit.dims, in), seed,
          0);
      const auto expected = p.probabilities(psi);
      for (std::size_t o = 0; o < expected.size(); ++o) {
        worst = std::max(worst,
                         std::abs(measurement.probabilities[o] - expected[o]));
      }
    }
  }

  // Heisenberg-Weyl family
  {
    const Eigen::Index d = 3;
    const qc::Circuit circuit = qc::hw_circuit(d);
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix mu =
          pv::random_psd(d, 1.0 / static_cast<double>(d), rng);
      const pv::Povm p = pv::hw_povm(d, mu);
      const ComplexVector psi = pv::random_state(d, rng);
      const ComplexVector gamma = qc::gamma_state(mu, d).amplitudes();
      ComplexVector in(d * d * d);
      for (Eigen::Index a = 0; a < d * d; ++a) {
        in.segment(a * d, d) = gamma(a) * psi;
      }
      const auto measurement = qc::run_measurement(
          circuit, qc::QuditRegister::from_amplitudes(circuit.dims, in), seed,
          0);
      const auto expected = p.probabilities(psi);
      for (std::size_t o = 0; o < expected.size(); ++o) {
        worst = std::max(worst,
                         std::abs(measurement.probabilities[o] - expected[o]));
      }
    }
  }
  result.value = worst;
  result.pass = result.value <= result.threshold;
  result.seconds = timer.seconds();
  return result;
}

CriterionResult criterion_cv_coin(std::uint64_t seed) {
  Stopwatch timer;
  CriterionResult result;
  result.id = 5;
  result.name = "cv-circuit-vs-coin-oracle";
  result.relation = "<=";
  result.threshold = 1e-3;
  const cv::Grid1D grid(10.0, 256);
  const cv::GridWavefunction alpha = cv::gaussian_wavefn(1.0, grid);
  const cv::GridWavefunction ancilla = cv::rank_one_ancilla(alpha);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  double worst_weight = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const cv::GridWavefunction psi = cv::random_smooth_state(grid, rng);
    const cv::CvConditionalTable table = cv::infhw_apply(ancilla, psi);
    worst_weight = std::max(worst_weight,
                            std::abs(table.total_weight() - 1.0));
    for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        const cv::GridWavefunction circuit = table.conditional(t, s);
        const cv::GridWavefunction oracle = cv::coin_oracle(alpha, psi, t, s);
        worst = std::max(worst, rel_l2(circuit, oracle));
      }
    }
  }
  result.value = worst;
  result.detail = "completeness deviation " + format_number(worst_weight);
  result.pass = result.value <= result.threshold && worst_weight <= 0.02;
  result.seconds = timer.seconds();
  return result;
}

CriterionResult criterion_scattering() {
  Stopwatch timer;
  CriterionResult result;
  result.id = 6;
  result.name = "scattering-composite-and-kernel";
  result.relation = "<=";
  result.threshold = 1e-6;

  const cv::ScatteringMaps maps = cv::scattering_compose();
  RealMatrix expected(3, 3);
  expected << 1, 2, 2, 0, 1, 0, 0, 2, 1;
  const bool composite_exact =
      (maps.composite.position - expected).cwiseAbs().maxCoeff() == 0.0;

  // covariance identity on a box wide enough that periodization noise
  // stays below the tolerance
  const cv::Grid1D grid(12.0, 320);
  const double sigma1 = 2.0, sigma2 = 1.0;
  const cv::KernelOperator k00 =
      cv::scattering_kraus_kernel(sigma1, sigma2, 0.0, 0.0, grid);
  double worst_cov = 0.0;
  const Eigen::Index n = grid.points;
  for (auto [x, y] : std::vector<std::pair<double, double>>{
           {0.4, -0.6}, {-0.5, 0.3}, {0.7, 0.7}}) {
    ComplexMatrix u(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      ComplexVector e = ComplexVector::Zero(n);
      e(c) = 1.0;
      u.col(c) =
          cv::apply_cv_gate(cv::GridWavefunction({grid}, std::move(e), true),
                            cv::CvGate::displacement(-y / 2.0, -x / 2.0, 0))
              .values();
    }
    const ComplexMatrix conjugated = u * k00.kernel * u.adjoint();
    const cv::KernelOperator direct =
        cv::scattering_kraus_kernel(sigma1, sigma2, x, y, grid);
    worst_cov = std::max(worst_cov,
                         (conjugated - direct.kernel).cwiseAbs().maxCoeff());
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es_psd(k00.op());
  const bool psd_ok = es_psd.eigenvalues().minCoeff() >=
                      -1e-8 * es_psd.eigenvalues().maxCoeff();
  const cv::KernelOperator equal =
      cv::scattering_kraus_kernel(1.0, 1.0, 0.0, 0.0, grid);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es_bad(equal.op());
  const bool indefinite_ok = es_bad.eigenvalues().minCoeff() < -1e-4;

  result.value = worst_cov;
  result.detail = std::string("composite ") +
                  (composite_exact ? "exact" : "WRONG") + ", PSD regime " +
                  (psd_ok ? "ok" : "violated") + ", indefinite case " +
                  (indefinite_ok ? "confirmed" : "missing");
  result.pass = composite_exact && worst_cov <= result.threshold && psd_ok &&
                indefinite_ok;
  result.seconds = timer.seconds();
  return result;
}

CriterionResult criterion_thermal() {
  Stopwatch timer;
  CriterionResult result;
  result.id = 7;
  result.name = "thermal-parameter-map";
  result.relation = "<=";
  result.threshold = 5e-3;
  const cv::Grid1D grid(10.0, 256);

  // pure point: N = 0 and the seed operator is the oscillator ground state
  const cv::ThermalParams pure = cv::thermal_params(2.0, 1.0);
  const bool pure_exact =
      std::abs(pure.m_omega - 0.5) < 1e-14 && pure.mean_phonons < 1e-14;
  cv::KernelOperator mu2 =
      cv::scattering_kraus_kernel(2.0, 1.0, 0.0, 0.0, grid);
  mu2 = mu2.compose(mu2);
  mu2.kernel /= mu2.trace();
  const cv::AnalyticGaussian ground{std::sqrt(1.0 / pure.m_omega), 0.0, 0.0};
  const double fidelity = cv::fidelity_with_pure(mu2, ground.sample(grid));

  // mixed point: closed forms are exact in floating point
  const cv::ThermalParams mixed = cv::thermal_params(4.0, 1.0);
  const bool mixed_exact =
      mixed.m_omega == 0.25 && mixed.mean_phonons == 0.25;
  cv::KernelOperator mu4 =
      cv::scattering_kraus_kernel(4.0, 1.0, 0.0, 0.0, grid);
  mu4 = mu4.compose(mu4);
  mu4.kernel /= mu4.trace();
  const cv::KernelOperator rho = cv::thermal_state(mixed, 40, grid);
  const double distance = cv::trace_distance(mu4, rho);

  result.value = distance;
  result.detail = "ground-state fidelity " + format_number(fidelity) +
                  ", closed forms " +
                  ((pure_exact && mixed_exact) ? "exact" : "OFF");
  result.pass = pure_exact && mixed_exact && fidelity > 0.999 &&
                distance < result.threshold;
  result.seconds = timer.seconds();
  return result;
}

CriterionResult criterion_optics(std::uint64_t seed) {
  Stopwatch timer;
  CriterionResult result;
  result.id = 8;
  result.name = "optics-two-path";
  result.relation = "<=";
  result.threshold = 1e-3;
  const cv::Grid1D grid(10.0, 256);
  const cv::AnalyticGaussian alpha{1.0, 0.0, 0.0};
  const cv::AnalyticGaussian beta{1.2, 0.0, 0.0};
  const cv::GridWavefunction alpha_grid = alpha.sample(grid);
  const cv::GridWavefunction beta_grid = beta.sample(grid);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 2; ++trial) {
    const cv::GridWavefunction psi = cv::random_smooth_state(grid, rng);
    for (double x : {-0.8, 0.0, 0.8}) {
      for (double y : {-0.6, 0.0, 0.6}) {
        const cv::GridWavefunction circuit =
            cv::optics_kraus(alpha_grid, beta_grid, psi, x, y);
        const cv::GridWavefunction oracle =
            cv::optics_oracle(alpha, beta, psi, x, y);
        worst = std::max(worst, rel_l2(circuit, oracle));
      }
    }
  }
  result.value = worst;
  result.pass = result.value <= result.threshold;
  result.seconds = timer.seconds();
  return result;
}

CriterionResult criterion_uncertainty() {
  Stopwatch timer;
  CriterionResult result;
  result.id = 9;
  result.name = "uncertainty-product";
  result.relation = ">=";
  result.threshold = 1.0 - 0.02;
  const cv::Grid1D grid(10.0, 256);
  const cv::GridWavefunction psi = cv::gaussian_wavefn(1.0, grid);
  double worst = 1e300;
  std::string detail;
  for (double sigma1 : {1.0, 2.0, 4.0}) {
    const cv::OutcomeStatistics stats =
        cv::outcome_statistics(sigma1, sigma1 / 2.0, psi);
    worst = std::min(worst, stats.product);
    detail += (detail.empty() ? "" : ", ") + format_number(stats.product);
  }
  result.value = worst;
  result.detail = "products " + detail;
  result.pass = result.value >= result.threshold;
  result.seconds = timer.seconds();
  return result;
}

std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& options) {
  std::vector<CriterionResult> results;
  results.push_back(check_completeness(options.perturbation));
  results.push_back(criterion_cyclic_dilation(options.seed));
  results.push_back(criterion_cyclic_circuit());
  results.push_back(criterion_hw_disturbance(options.seed));
  results.push_back(criterion_outcome_oracle(options.seed));
  results.push_back(criterion_cv_coin(options.seed));
  results.push_back(criterion_scattering());
  results.push_back(criterion_thermal());
  results.push_back(criterion_optics(options.seed));
  results.push_back(criterion_uncertainty());
  return results;
}

}  // namespace povmforge::verify
