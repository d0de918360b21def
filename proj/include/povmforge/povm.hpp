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

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "povmforge/matcore.hpp"

namespace povmforge::povm {

// Validation tolerance for measurement families built from double-precision
// eigensolves on dimensions up to ~64.
inline constexpr double kFamilyTol = 1e-9;

/// max-abs deviation of sum(ops) from the identity on C^dim.
double completeness_error(Eigen::Index dim,
                          const std::vector<ComplexMatrix>& ops);

/// max(hermiticity error, most negative eigenvalue magnitude); 0 for PSD.
double psd_violation(const ComplexMatrix& op);

/// A positive operator-valued measure: `size()` PSD operators on C^dim that
/// sum to the identity. Construction validates both properties to kFamilyTol.
class Povm {
 public:
  Povm(Eigen::Index dim, std::vector<ComplexMatrix> operators,
       std::vector<std::string> labels = {});

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return operators_.size(); }
  const ComplexMatrix& op(std::size_t j) const { return operators_.at(j); }
  const std::vector<ComplexMatrix>& operators() const { return operators_; }
  const std::string& label(std::size_t j) const { return labels_.at(j); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// <psi|Pi_j|psi> for every outcome.
  std::vector<double> probabilities(const ComplexVector& psi) const;

 private:
  Eigen::Index dim_;
  std::vector<ComplexMatrix> operators_;
  std::vector<std::string> labels_;
};

/// Unitary generators together with the induced permutation of outcomes.
struct SymmetryAction {
  enum class Group { Cyclic, HeisenbergWeyl };

  Group group;
  std::vector<ComplexMatrix> generators;
  std::vector<std::vector<std::size_t>> outcome_maps;

  SymmetryAction(Group g, std::vector<ComplexMatrix> gens,
                 std::vector<std::vector<std::size_t>> maps);
};

/// Kraus operators of a measurement channel; construction checks the
/// completeness relation sum_j A_j^dagger A_j = I to kFamilyTol.
class KrausFamily {
 public:
  explicit KrausFamily(std::vector<ComplexMatrix> operators);

  std::size_t size() const { return operators_.size(); }
  const ComplexMatrix& op(std::size_t j) const { return operators_.at(j); }
  const std::vector<ComplexMatrix>& operators() const { return operators_; }

 private:
  std::vector<ComplexMatrix> operators_;
};

/// Qubit family with cyclic symmetry: n rank-one operators
///   Pi_j = (1/n) [[1, omega^-j], [omega^j, 1]],  omega = omega(n).
Povm cyclic_povm(std::size_t n);

/// Family of d^2 operators Z^k X^j mu X^-j Z^-k ordered lexicographically in
/// (j, k) with j major. Requires mu PSD with trace 1/d.
Povm hw_povm(Eigen::Index d, const ComplexMatrix& mu);

/// Vertical stack of the PSD square roots sqrt(Pi_j), outcome order;
/// an (n*d) x d isometry.
ComplexMatrix build_M(const Povm& p);

/// Deterministic unitary extension of build_M(p). Columns 0..d-1 equal M,
/// so measuring the ancilla block index after this unitary realizes the
/// minimally-disturbing channel for p.
ComplexMatrix dilation_unitary(const Povm& p);

/// max over generators g and outcomes j of
/// max-abs(sigma(g) Pi_j sigma(g)^dagger - Pi_{pi(g) j}).
CheckReport check_symmetry(const Povm& p, const SymmetryAction& action);

SymmetryAction cyclic_symmetry_action(std::size_t n);
SymmetryAction hw_symmetry_action(Eigen::Index d);

/// Kraus operators of the channel "apply u to |phi> (x) |psi>, then measure
/// the first register": A_j = (<j| (x) I_d) u (|phi> (x) I_d).
KrausFamily kraus_operators(const ComplexMatrix& u, const ComplexVector& phi,
                            Eigen::Index d, std::size_t outcomes);

struct MinimalDisturbanceReport {
  double max_error = 0.0;
  double tolerance = kFamilyTol;
  bool pass = false;
  std::vector<bool> kraus_psd;  // A_j PSD => Pi_j := A_j^2 is minimally
                                // disturbed by this family
  bool all_psd = false;
};

/// Compares each Kraus operator against the PSD root of the matching POVM
/// element, max-abs entrywise.
MinimalDisturbanceReport check_minimal_disturbance(const KrausFamily& kraus,
                                                   const Povm& p);

/// Random PSD matrix with the given trace (Ginibre construction); used for
/// seeding Heisenberg-Weyl families.
ComplexMatrix random_psd(Eigen::Index d, double trace, std::mt19937_64& rng);

/// Random rank-one PSD matrix with the given trace.
ComplexMatrix random_rank_one_psd(Eigen::Index d, double trace,
                                  std::mt19937_64& rng);

/// Random normalized state vector.
ComplexVector random_state(Eigen::Index d, std::mt19937_64& rng);

}  // namespace povmforge::povm
