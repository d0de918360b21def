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

#include "povmforge/povm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace povmforge::povm {

namespace mc = matcore;

double completeness_error(Eigen::Index dim,
                          const std::vector<ComplexMatrix>& ops) {
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto& op : ops) {
    if (op.rows() != dim || op.cols() != dim) {
      throw ParameterError("completeness_error: operator dimension mismatch");
    }
    sum += op;
  }
  sum -= ComplexMatrix::Identity(dim, dim);
  return sum.cwiseAbs().maxCoeff();
}

double psd_violation(const ComplexMatrix& op) {
  double err = mc::hermiticity_error(op);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (op + op.adjoint()));
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < 0.0) err = std::max(err, -min_eig);
  return err;
}

Povm::Povm(Eigen::Index dim, std::vector<ComplexMatrix> operators,
           std::vector<std::string> labels)
    : dim_(dim), operators_(std::move(operators)), labels_(std::move(labels)) {
  if (dim_ < 1) throw ParameterError("Povm: dimension must be >= 1");
  if (operators_.empty()) throw ParameterError("Povm: no operators");
  if (labels_.empty()) {
    labels_.reserve(operators_.size());
    for (std::size_t j = 0; j < operators_.size(); ++j) {
      labels_.push_back(std::to_string(j));
    }
  }
  if (labels_.size() != operators_.size()) {
    throw ParameterError("Povm: label count does not match operator count");
  }
  for (const auto& op : operators_) {
    if (op.rows() != dim_ || op.cols() != dim_) {
      throw ParameterError("Povm: operator dimension mismatch");
    }
    if (!op.allFinite()) throw NumericError("Povm: operator has NaN/Inf entries");
    const double v = psd_violation(op);
    if (v > kFamilyTol) {
      throw NumericError("Povm: operator not Hermitian PSD (violation " +
                         std::to_string(v) + ")");
    }
  }
  const double c = completeness_error(dim_, operators_);
  if (c > kFamilyTol) {
    throw NumericError("Povm: operators do not sum to identity (deviation " +
                       std::to_string(c) + ")");
  }
}

std::vector<double> Povm::probabilities(const ComplexVector& psi) const {
  if (psi.size() != dim_) {
    throw ParameterError("Povm::probabilities: state dimension mismatch");
  }
  std::vector<double> p;
  p.reserve(operators_.size());
  for (const auto& op : operators_) {
    p.push_back(std::real(psi.dot(op * psi)));
  }
  return p;
}

SymmetryAction::SymmetryAction(Group g, std::vector<ComplexMatrix> gens,
                               std::vector<std::vector<std::size_t>> maps)
    : group(g), generators(std::move(gens)), outcome_maps(std::move(maps)) {
  if (generators.size() != outcome_maps.size()) {
    throw ParameterError("SymmetryAction: generator/permutation count mismatch");
  }
  for (const auto& u : generators) {
    if (mc::unitarity_error(u) > 1e-9) {
      throw NumericError("SymmetryAction: generator is not unitary");
    }
  }
  for (const auto& pi : outcome_maps) {
    std::vector<bool> hit(pi.size(), false);
    for (std::size_t image : pi) {
      if (image >= pi.size() || hit[image]) {
        throw ParameterError("SymmetryAction: outcome map is not a bijection");
      }
      hit[image] = true;
    }
  }
}

KrausFamily::KrausFamily(std::vector<ComplexMatrix> operators)
    : operators_(std::move(operators)) {
  if (operators_.empty()) throw ParameterError("KrausFamily: no operators");
  const Eigen::Index d = operators_.front().cols();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& a : operators_) {
    if (a.cols() != d) {
      throw ParameterError("KrausFamily: operator column count mismatch");
    }
    sum += a.adjoint() * a;
  }
  sum -= ComplexMatrix::Identity(d, d);
  const double err = sum.cwiseAbs().maxCoeff();
  if (err > kFamilyTol) {
    throw NumericError("KrausFamily: completeness violated (deviation " +
                       std::to_string(err) + ")");
  }
}

Povm cyclic_povm(std::size_t n) {
  if (n < 2) throw ParameterError("cyclic_povm: n must be >= 2");
  std::vector<ComplexMatrix> ops;
  std::vector<std::string> labels;
  ops.reserve(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    // omega(n)^j evaluated directly, avoiding pow() phase drift
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(n);
    const Complex w(std::cos(angle), std::sin(angle));
    ComplexMatrix pi(2, 2);
    pi << inv_n, inv_n * std::conj(w), inv_n * w, inv_n;
    ops.push_back(pi);
    labels.push_back(std::to_string(j));
  }
  return Povm(2, std::move(ops), std::move(labels));
}

Povm hw_povm(Eigen::Index d, const ComplexMatrix& mu) {
  if (d < 2) throw ParameterError("hw_povm: d must be >= 2");
  if (mu.rows() != d || mu.cols() != d) {
    throw ParameterError("hw_povm: seed operator dimension mismatch");
  }
  const double v = psd_violation(mu);
  if (v > kFamilyTol) {
    throw NumericError("hw_povm: seed operator not PSD (violation " +
                       std::to_string(v) + ")");
  }
  const double tr = std::real(mu.trace());
  if (std::abs(tr - 1.0 / static_cast<double>(d)) > kFamilyTol) {
    throw NumericError("hw_povm: seed operator trace must be 1/d, got " +
                       std::to_string(tr));
  }
  std::vector<ComplexMatrix> ops;
  std::vector<std::string> labels;
  ops.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index j = 0; j < d; ++j) {
    const ComplexMatrix xj = mc::shift_op(static_cast<std::size_t>(d), j);
    for (Eigen::Index k = 0; k < d; ++k) {
      const ComplexMatrix zk = mc::phase_op(static_cast<std::size_t>(d), k);
      ComplexMatrix op = zk * xj * mu * xj.adjoint() * zk.adjoint();
      ops.push_back(0.5 * (op + op.adjoint()));
      labels.push_back(std::to_string(j) + "," + std::to_string(k));
    }
  }
  return Povm(d, std::move(ops), std::move(labels));
}

ComplexMatrix build_M(const Povm& p) {
  const Eigen::Index d = p.dim();
  const auto n = static_cast<Eigen::Index>(p.size());
  ComplexMatrix m(n * d, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    m.middleRows(j * d, d) = mc::psd_sqrt(p.op(static_cast<std::size_t>(j)));
  }
  return m;
}

ComplexMatrix dilation_unitary(const Povm& p) {
  return mc::complete_isometry_to_unitary(build_M(p), Tolerance(1e-8));
}

CheckReport check_symmetry(const Povm& p, const SymmetryAction& action) {
  CheckReport report;
  report.check = "povm-symmetry";
  report.tolerance = kFamilyTol;
  for (std::size_t g = 0; g < action.generators.size(); ++g) {
    const ComplexMatrix& sigma = action.generators[g];
    if (sigma.rows() != p.dim()) {
      throw ParameterError("check_symmetry: generator dimension mismatch");
    }
    const auto& pi = action.outcome_maps[g];
    if (pi.size() != p.size()) {
      throw ParameterError("check_symmetry: outcome map size mismatch");
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
      const ComplexMatrix lhs = sigma * p.op(j) * sigma.adjoint();
      const double err = (lhs - p.op(pi[j])).cwiseAbs().maxCoeff();
      report.max_error = std::max(report.max_error, err);
    }
  }
  report.pass = report.max_error <= report.tolerance;
  return report;
}

SymmetryAction cyclic_symmetry_action(std::size_t n) {
  if (n < 2) throw ParameterError("cyclic_symmetry_action: n must be >= 2");
  std::vector<std::size_t> pi(n);
  for (std::size_t j = 0; j < n; ++j) pi[j] = (j + 1) % n;
  return SymmetryAction(SymmetryAction::Group::Cyclic, {mc::r_phase_op(n, 1)},
                        {std::move(pi)});
}

SymmetryAction hw_symmetry_action(Eigen::Index d) {
  if (d < 2) throw ParameterError("hw_symmetry_action: d must be >= 2");
  const auto dd = static_cast<std::size_t>(d);
  std::vector<std::size_t> pi_x(dd * dd), pi_z(dd * dd);
  for (std::size_t j = 0; j < dd; ++j) {
    for (std::size_t k = 0; k < dd; ++k) {
      pi_x[j * dd + k] = ((j + 1) % dd) * dd + k;
      pi_z[j * dd + k] = j * dd + (k + 1) % dd;
    }
  }
  return SymmetryAction(SymmetryAction::Group::HeisenbergWeyl,
                        {mc::shift_op(dd, 1), mc::phase_op(dd, 1)},
                        {std::move(pi_x), std::move(pi_z)});
}

KrausFamily kraus_operators(const ComplexMatrix& u, const ComplexVector& phi,
                            Eigen::Index d, std::size_t outcomes) {
  const auto n = static_cast<Eigen::Index>(outcomes);
  if (u.rows() != u.cols() || u.rows() != n * d) {
    throw ParameterError("kraus_operators: unitary must act on outcomes*d");
  }
  if (phi.size() != n) {
    throw ParameterError("kraus_operators: ancilla state dimension mismatch");
  }
  if (mc::unitarity_error(u) > kFamilyTol) {
    throw NumericError("kraus_operators: u is not unitary");
  }
  if (std::abs(phi.norm() - 1.0) > kFamilyTol) {
    throw NumericError("kraus_operators: ancilla state is not normalized");
  }
  // u * (|phi> (x) I_d) mixes ancilla blocks of u with the weights phi_k;
  // row block j of the product is A_j.
  ComplexMatrix embedded = ComplexMatrix::Zero(n * d, d);
  for (Eigen::Index k = 0; k < n; ++k) {
    embedded += phi(k) * u.middleCols(k * d, d);
  }
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(outcomes);
  for (Eigen::Index j = 0; j < n; ++j) {
    kraus.push_back(embedded.middleRows(j * d, d));
  }
  return KrausFamily(std::move(kraus));
}

MinimalDisturbanceReport check_minimal_disturbance(const KrausFamily& kraus,
                                                   const Povm& p) {
  if (kraus.size() != p.size()) {
    throw ParameterError("check_minimal_disturbance: outcome count mismatch");
  }
  MinimalDisturbanceReport report;
  report.kraus_psd.reserve(kraus.size());
  for (std::size_t j = 0; j < kraus.size(); ++j) {
    const ComplexMatrix root = mc::psd_sqrt(p.op(j));
    const double err = (kraus.op(j) - root).cwiseAbs().maxCoeff();
    report.max_error = std::max(report.max_error, err);
    report.kraus_psd.push_back(psd_violation(kraus.op(j)) <= kFamilyTol);
  }
  report.all_psd = std::all_of(report.kraus_psd.begin(), report.kraus_psd.end(),
                               [](bool b) { return b; });
  report.pass = report.max_error <= report.tolerance;
  return report;
}

ComplexMatrix random_psd(Eigen::Index d, double trace, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      g(i, j) = Complex(normal(rng), normal(rng));
    }
  }
  ComplexMatrix out = g * g.adjoint();
  out *= trace / std::real(out.trace());
  return 0.5 * (out + out.adjoint());
}

ComplexMatrix random_rank_one_psd(Eigen::Index d, double trace,
                                  std::mt19937_64& rng) {
  const ComplexVector v = random_state(d, rng);
  ComplexMatrix out = trace * (v * v.adjoint());
  return 0.5 * (out + out.adjoint());
}

ComplexVector random_state(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    v(i) = Complex(normal(rng), normal(rng));
  }
  v.normalize();
  return v;
}

}  // namespace povmforge::povm
