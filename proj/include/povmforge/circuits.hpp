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
#include <string>
#include <vector>

#include "povmforge/matcore.hpp"

namespace povmforge::circuits {

/// Pure state of a register of qudits with per-wire dimensions.
/// Wire 0 is the most significant digit of the amplitude index.
class QuditRegister {
 public:
  /// |0...0> on the given wire dimensions.
  explicit QuditRegister(std::vector<Eigen::Index> dims);

  static QuditRegister basis(std::vector<Eigen::Index> dims,
                             const std::vector<Eigen::Index>& digits);
  static QuditRegister from_amplitudes(std::vector<Eigen::Index> dims,
                                       ComplexVector amplitudes,
                                       bool unnormalized = false);

  const std::vector<Eigen::Index>& dims() const { return dims_; }
  const ComplexVector& amplitudes() const { return amps_; }
  ComplexVector& amplitudes() { return amps_; }
  bool unnormalized() const { return unnormalized_; }
  Eigen::Index total_dim() const { return amps_.size(); }
  double norm() const { return amps_.norm(); }

 private:
  QuditRegister() = default;
  std::vector<Eigen::Index> dims_;
  ComplexVector amps_;
  bool unnormalized_ = false;
};

enum class GateKind {
  Fourier,
  FourierDagger,
  ShiftPower,
  PhasePower,
  RPhasePower,
  ControlledShiftDagger,
  ControlledPhase,
  Permutation,
  DenseBlock,
};

std::string to_string(GateKind kind);
GateKind gate_kind_from_string(const std::string& name);

/// One gate on a qudit register. Controlled gates have a single control
/// wire and act as sum_j |j><j| (x) base^j on the target (base^-j for the
/// dagger variants). Fourier and DenseBlock may span several wires; the
/// listed order defines digit significance within the block.
struct Gate {
  GateKind kind;
  std::vector<int> targets;
  std::vector<int> controls;
  long power = 1;                // Shift/Phase/RPhase exponent
  long modulus = 0;              // RPhasePower: modulus of omega
  std::vector<int> permutation;  // Permutation: out digit w reads in digit
                                 // permutation[w]
  ComplexMatrix block;           // DenseBlock payload

  static Gate fourier(std::vector<int> targets);
  static Gate fourier_dagger(std::vector<int> targets);
  static Gate shift_power(int target, long power);
  static Gate phase_power(int target, long power);
  static Gate r_phase_power(int target, long modulus, long power);
  static Gate controlled_shift_dagger(int control, int target);
  static Gate controlled_phase(int control, int target);
  static Gate wire_permutation(std::vector<int> permutation);
  static Gate dense_block(std::vector<int> targets, ComplexMatrix block);
};

struct Circuit {
  std::vector<Eigen::Index> dims;
  std::vector<Gate> gates;
  std::vector<int> measured;

  void validate() const;
};

QuditRegister apply_gate(const QuditRegister& state, const Gate& gate);
QuditRegister apply_circuit(const Circuit& circuit, QuditRegister state);

/// Full matrix of the circuit, built column by column from basis states.
ComplexMatrix dense_unitary(const Circuit& circuit);

/// Closed-form dilation unitary for the cyclic qubit family on C^{2n}:
///   U = (F_n^dagger (x) I_2) X_{2n}^dagger (I_n (x) F_2) K^dagger
/// with K the interleave permutation K|2j> = |j>, K|2j+1> = |n+j>.
ComplexMatrix cyclic_unitary(std::size_t n);

/// Gate-level form of cyclic_unitary(2^m) on m+1 qubits. K reduces to a
/// rotation of the qubit wires and X_{2n}^dagger to single-qubit phase
/// gates between two full-register Fourier blocks.
Circuit cyclic_gate_circuit(std::size_t m);

/// Two-qudit ancilla state sqrt(d) sum_jk sqrt(mu)_jk |j>|k>; normalized
/// exactly when tr(mu) = 1/d.
QuditRegister gamma_state(const ComplexMatrix& mu, Eigen::Index d);

/// Measurement circuit on wires (ancilla-a, ancilla-b, system), each of
/// dimension d. With input gamma_state(mu) on the ancillas, measuring
/// wires 0 and 1 realizes the Kraus operators Z^k X^j sqrt(mu) X^-j Z^-k.
Circuit hw_circuit(Eigen::Index d);

/// Ancilla state (F_d^dagger (x) I)(sum_q |q><q| (x) X^-q) gamma; the
/// two-wire input that replaces the explicit unitary extension block.
QuditRegister phi1_state(const ComplexMatrix& mu, Eigen::Index d);

struct AppendixHwReport {
  CheckReport z_intertwining;    // (I (x) I (x) Z) N = N Z
  CheckReport x_intertwining;    // (I (x) I (x) X) N = N X
  CheckReport column_structure;  // N = |phi1> (x) I
  CheckReport stack_cross_check; // stacked conjugated roots vs build_M
  double max_residual = 0.0;
  bool pass = false;
};

/// Builds the stacked-root matrix M for the Heisenberg-Weyl family, the
/// block-diagonalizing transformation A, and N = A*M, then verifies the
/// intertwining relations and the product structure of N. Dense d^3
/// matrices; guarded to d <= 6.
AppendixHwReport appendix_hw_verify(Eigen::Index d, const ComplexMatrix& mu);

struct MeasurementResult {
  std::vector<Eigen::Index> measured_dims;
  std::vector<std::string> labels;
  std::vector<double> probabilities;
  /// Normalized post-measurement states of the unmeasured wires; entry j is
  /// meaningful only when empty[j] is false.
  std::vector<QuditRegister> conditional_states;
  std::vector<bool> empty;
  std::vector<std::uint64_t> counts;
  std::vector<std::uint32_t> samples;
};

/// Applies the circuit, measures the circuit's measured wires in the
/// standard basis, and draws `shots` samples with the given seed.
/// Probabilities are exact block norms; sampling is reproducible.
MeasurementResult run_measurement(const Circuit& circuit,
                                  const QuditRegister& input,
                                  std::uint64_t seed, std::size_t shots);

}  // namespace povmforge::circuits
