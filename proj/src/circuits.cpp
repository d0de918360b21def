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

#include "povmforge/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "povmforge/povm.hpp"

namespace povmforge::circuits {

namespace mc = matcore;

namespace {

Eigen::Index product_of(const std::vector<Eigen::Index>& dims) {
  Eigen::Index p = 1;
  for (Eigen::Index d : dims) p *= d;
  return p;
}

std::vector<Eigen::Index> strides_of(const std::vector<Eigen::Index>& dims) {
  std::vector<Eigen::Index> strides(dims.size(), 1);
  for (std::size_t w = dims.size(); w-- > 1;) {
    strides[w - 1] = strides[w] * dims[w];
  }
  return strides;
}

void check_wires(const std::vector<int>& wires,
                 const std::vector<Eigen::Index>& dims) {
  for (int w : wires) {
    if (w < 0 || static_cast<std::size_t>(w) >= dims.size()) {
      throw ParameterError("gate wire index out of range");
    }
  }
}

void validate_gate(const Gate& gate, const std::vector<Eigen::Index>& dims) {
  check_wires(gate.targets, dims);
  check_wires(gate.controls, dims);
  std::vector<int> all = gate.targets;
  all.insert(all.end(), gate.controls.begin(), gate.controls.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw ParameterError("gate target/control wires must be distinct");
  }
  switch (gate.kind) {
    case GateKind::Fourier:
    case GateKind::FourierDagger:
      if (gate.targets.empty()) throw ParameterError("Fourier gate needs targets");
      break;
    case GateKind::ShiftPower:
    case GateKind::PhasePower:
      if (gate.targets.size() != 1) {
        throw ParameterError("single-wire gate needs exactly one target");
      }
      break;
    case GateKind::RPhasePower:
      if (gate.targets.size() != 1) {
        throw ParameterError("RPhasePower needs exactly one target");
      }
      if (dims[static_cast<std::size_t>(gate.targets[0])] != 2) {
        throw ParameterError("RPhasePower acts on a two-level wire");
      }
      if (gate.modulus < 1) throw ParameterError("RPhasePower needs a modulus");
      break;
    case GateKind::ControlledShiftDagger:
    case GateKind::ControlledPhase:
      if (gate.targets.size() != 1 || gate.controls.size() != 1) {
        throw ParameterError("controlled gate needs one control and one target");
      }
      break;
    case GateKind::Permutation: {
      if (gate.permutation.size() != dims.size()) {
        throw ParameterError("wire permutation length must match register");
      }
      std::vector<bool> hit(dims.size(), false);
      for (std::size_t w = 0; w < dims.size(); ++w) {
        const int src = gate.permutation[w];
        if (src < 0 || static_cast<std::size_t>(src) >= dims.size() || hit[src]) {
          throw ParameterError("wire permutation is not a bijection");
        }
        if (dims[static_cast<std::size_t>(src)] != dims[w]) {
          throw ParameterError("wire permutation mixes unequal dimensions");
        }
        hit[src] = true;
      }
      break;
    }
    case GateKind::DenseBlock: {
      if (gate.targets.empty()) throw ParameterError("DenseBlock needs targets");
      Eigen::Index m = 1;
      for (int t : gate.targets) m *= dims[static_cast<std::size_t>(t)];
      if (gate.block.rows() != m || gate.block.cols() != m) {
        throw ParameterError("DenseBlock matrix does not match target dims");
      }
      break;
    }
  }
}

inline Eigen::Index digit_of(Eigen::Index index, Eigen::Index stride,
                             Eigen::Index dim) {
  return (index / stride) % dim;
}

// Applies a dense block to the listed target wires (first target = most
// significant digit of the block index).
ComplexVector apply_dense_block(const ComplexVector& amps,
                                const std::vector<Eigen::Index>& dims,
                                const std::vector<int>& targets,
                                const ComplexMatrix& block) {
  const auto strides = strides_of(dims);
  const Eigen::Index total = amps.size();
  Eigen::Index m = 1;
  for (int t : targets) m *= dims[static_cast<std::size_t>(t)];

  // Offsets of the block's basis states relative to a base index whose
  // target digits are all zero.
  std::vector<Eigen::Index> offsets(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::Index rest = j;
    Eigen::Index offset = 0;
    for (std::size_t i = targets.size(); i-- > 0;) {
      const auto w = static_cast<std::size_t>(targets[i]);
      offset += (rest % dims[w]) * strides[w];
      rest /= dims[w];
    }
    offsets[static_cast<std::size_t>(j)] = offset;
  }

  ComplexVector out(total);
  ComplexVector scratch(m);
  for (Eigen::Index base = 0; base < total; ++base) {
    bool is_base = true;
    for (int t : targets) {
      const auto w = static_cast<std::size_t>(t);
      if (digit_of(base, strides[w], dims[w]) != 0) {
        is_base = false;
        break;
      }
    }
    if (!is_base) continue;
    for (Eigen::Index j = 0; j < m; ++j) {
      scratch(j) = amps(base + offsets[static_cast<std::size_t>(j)]);
    }
    scratch = (block * scratch).eval();
    for (Eigen::Index j = 0; j < m; ++j) {
      out(base + offsets[static_cast<std::size_t>(j)]) = scratch(j);
    }
  }
  return out;
}

}  // namespace

QuditRegister::QuditRegister(std::vector<Eigen::Index> dims) {
  dims_ = std::move(dims);
  if (dims_.empty()) throw ParameterError("QuditRegister: no wires");
  for (Eigen::Index d : dims_) {
    if (d < 1) throw ParameterError("QuditRegister: wire dimension must be >= 1");
  }
  amps_ = ComplexVector::Zero(product_of(dims_));
  amps_(0) = 1.0;
}

QuditRegister QuditRegister::basis(std::vector<Eigen::Index> dims,
                                   const std::vector<Eigen::Index>& digits) {
  QuditRegister reg(std::move(dims));
  if (digits.size() != reg.dims_.size()) {
    throw ParameterError("QuditRegister::basis: digit count mismatch");
  }
  Eigen::Index index = 0;
  for (std::size_t w = 0; w < digits.size(); ++w) {
    if (digits[w] < 0 || digits[w] >= reg.dims_[w]) {
      throw ParameterError("QuditRegister::basis: digit out of range");
    }
    index = index * reg.dims_[w] + digits[w];
  }
  reg.amps_.setZero();
  reg.amps_(index) = 1.0;
  return reg;
}

QuditRegister QuditRegister::from_amplitudes(std::vector<Eigen::Index> dims,
                                             ComplexVector amplitudes,
                                             bool unnormalized) {
  QuditRegister reg(std::move(dims));
  if (amplitudes.size() != reg.amps_.size()) {
    throw ParameterError("QuditRegister: amplitude vector length mismatch");
  }
  if (!amplitudes.allFinite()) {
    throw NumericError("QuditRegister: amplitudes contain NaN/Inf");
  }
  if (!unnormalized && std::abs(amplitudes.norm() - 1.0) > 1e-10) {
    throw NumericError("QuditRegister: state is not normalized");
  }
  reg.amps_ = std::move(amplitudes);
  reg.unnormalized_ = unnormalized;
  return reg;
}

std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::Fourier: return "Fourier";
    case GateKind::FourierDagger: return "FourierDagger";
    case GateKind::ShiftPower: return "ShiftPower";
    case GateKind::PhasePower: return "PhasePower";
    case GateKind::RPhasePower: return "RPhasePower";
    case GateKind::ControlledShiftDagger: return "ControlledShiftDagger";
    case GateKind::ControlledPhase: return "ControlledPhase";
    case GateKind::Permutation: return "Permutation";
    case GateKind::DenseBlock: return "DenseBlock";
  }
  throw ParameterError("to_string: unknown gate kind");
}

GateKind gate_kind_from_string(const std::string& name) {
  static const std::pair<const char*, GateKind> table[] = {
      {"Fourier", GateKind::Fourier},
      {"FourierDagger", GateKind::FourierDagger},
      {"ShiftPower", GateKind::ShiftPower},
      {"PhasePower", GateKind::PhasePower},
      {"RPhasePower", GateKind::RPhasePower},
      {"ControlledShiftDagger", GateKind::ControlledShiftDagger},
      {"ControlledPhase", GateKind::ControlledPhase},
      {"Permutation", GateKind::Permutation},
      {"DenseBlock", GateKind::DenseBlock},
  };
  for (const auto& [key, kind] : table) {
    if (name == key) return kind;
  }
  throw ParameterError("unknown gate kind: " + name);
}

Gate Gate::fourier(std::vector<int> targets) {
  Gate g;
  g.kind = GateKind::Fourier;
  g.targets = std::move(targets);
  return g;
}

Gate Gate::fourier_dagger(std::vector<int> targets) {
  Gate g;
  g.kind = GateKind::FourierDagger;
  g.targets = std::move(targets);
  return g;
}

Gate Gate::shift_power(int target, long power) {
  Gate g;
  g.kind = GateKind::ShiftPower;
  g.targets = {target};
  g.power = power;
  return g;
}

Gate Gate::phase_power(int target, long power) {
  Gate g;
  g.kind = GateKind::PhasePower;
  g.targets = {target};
  g.power = power;
  return g;
}

Gate Gate::r_phase_power(int target, long modulus, long power) {
  Gate g;
  g.kind = GateKind::RPhasePower;
  g.targets = {target};
  g.modulus = modulus;
  g.power = power;
  return g;
}

Gate Gate::controlled_shift_dagger(int control, int target) {
  Gate g;
  g.kind = GateKind::ControlledShiftDagger;
  g.controls = {control};
  g.targets = {target};
  return g;
}

Gate Gate::controlled_phase(int control, int target) {
  Gate g;
  g.kind = GateKind::ControlledPhase;
  g.controls = {control};
  g.targets = {target};
  return g;
}

Gate Gate::wire_permutation(std::vector<int> permutation) {
  Gate g;
  g.kind = GateKind::Permutation;
  g.permutation = std::move(permutation);
  return g;
}

Gate Gate::dense_block(std::vector<int> targets, ComplexMatrix block) {
  Gate g;
  g.kind = GateKind::DenseBlock;
  g.targets = std::move(targets);
  g.block = std::move(block);
  return g;
}

void Circuit::validate() const {
  if (dims.empty()) throw ParameterError("Circuit: no wires");
  for (const Gate& gate : gates) validate_gate(gate, dims);
  for (int w : measured) {
    if (w < 0 || static_cast<std::size_t>(w) >= dims.size()) {
      throw ParameterError("Circuit: measured wire out of range");
    }
  }
}

QuditRegister apply_gate(const QuditRegister& state, const Gate& gate) {
  const auto& dims = state.dims();
  validate_gate(gate, dims);
  const auto strides = strides_of(dims);
  const ComplexVector& amps = state.amplitudes();
  const Eigen::Index total = amps.size();

  switch (gate.kind) {
    case GateKind::Fourier:
    case GateKind::FourierDagger: {
      Eigen::Index m = 1;
      for (int t : gate.targets) m *= dims[static_cast<std::size_t>(t)];
      const long power = gate.kind == GateKind::Fourier ? 1 : -1;
      const ComplexMatrix block =
          mc::fourier_op(static_cast<std::size_t>(m), power);
      return QuditRegister::from_amplitudes(
          dims, apply_dense_block(amps, dims, gate.targets, block),
          state.unnormalized());
    }
    case GateKind::DenseBlock:
      return QuditRegister::from_amplitudes(
          dims, apply_dense_block(amps, dims, gate.targets, gate.block),
          state.unnormalized());
    case GateKind::ShiftPower: {
      const auto w = static_cast<std::size_t>(gate.targets[0]);
      const Eigen::Index d = dims[w];
      const Eigen::Index p = ((gate.power % d) + d) % d;
      ComplexVector out(total);
      for (Eigen::Index i = 0; i < total; ++i) {
        const Eigen::Index k = digit_of(i, strides[w], d);
        // X^p |k> = |k+p>, so the amplitude at digit k comes from k-p.
        const Eigen::Index src = i + (((k - p + d) % d) - k) * strides[w];
        out(i) = amps(src);
      }
      return QuditRegister::from_amplitudes(dims, std::move(out),
                                            state.unnormalized());
    }
    case GateKind::PhasePower: {
      const auto w = static_cast<std::size_t>(gate.targets[0]);
      const Eigen::Index d = dims[w];
      ComplexVector out = amps;
      std::vector<Complex> phases(static_cast<std::size_t>(d));
      for (Eigen::Index k = 0; k < d; ++k) {
        const double angle = -2.0 * std::numbers::pi *
                             static_cast<double>(((gate.power * k) % d + d) % d) /
                             static_cast<double>(d);
        phases[static_cast<std::size_t>(k)] = Complex(std::cos(angle), std::sin(angle));
      }
      for (Eigen::Index i = 0; i < total; ++i) {
        out(i) *= phases[static_cast<std::size_t>(digit_of(i, strides[w], d))];
      }
      return QuditRegister::from_amplitudes(dims, std::move(out),
                                            state.unnormalized());
    }
    case GateKind::RPhasePower: {
      const auto w = static_cast<std::size_t>(gate.targets[0]);
      const auto m = static_cast<std::size_t>(gate.modulus);
      const long r = ((gate.power % gate.modulus) + gate.modulus) % gate.modulus;
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) /
                           static_cast<double>(m);
      const Complex phase(std::cos(angle), std::sin(angle));
      ComplexVector out = amps;
      for (Eigen::Index i = 0; i < total; ++i) {
        if (digit_of(i, strides[w], 2) == 1) out(i) *= phase;
      }
      return QuditRegister::from_amplitudes(dims, std::move(out),
                                            state.unnormalized());
    }
    case GateKind::ControlledShiftDagger: {
      const auto c = static_cast<std::size_t>(gate.controls[0]);
      const auto t = static_cast<std::size_t>(gate.targets[0]);
      const Eigen::Index dc = dims[c];
      const Eigen::Index dt = dims[t];
      if (dc != dt) {
        throw ParameterError("ControlledShiftDagger: control/target dims differ");
      }
      ComplexVector out(total);
      for (Eigen::Index i = 0; i < total; ++i) {
        const Eigen::Index j = digit_of(i, strides[c], dc);
        const Eigen::Index k = digit_of(i, strides[t], dt);
        // X^-j on the target: amplitude at digit k comes from (k+j) mod d.
        const Eigen::Index src = i + (((k + j) % dt) - k) * strides[t];
        out(i) = amps(src);
      }
      return QuditRegister::from_amplitudes(dims, std::move(out),
                                            state.unnormalized());
    }
    case GateKind::ControlledPhase: {
      const auto c = static_cast<std::size_t>(gate.controls[0]);
      const auto t = static_cast<std::size_t>(gate.targets[0]);
      const Eigen::Index dc = dims[c];
      const Eigen::Index dt = dims[t];
      if (dc != dt) {
        throw ParameterError("ControlledPhase: control/target dims differ");
      }
      ComplexVector out = amps;
      for (Eigen::Index i = 0; i < total; ++i) {
        const Eigen::Index j = digit_of(i, strides[c], dc);
        const Eigen::Index k = digit_of(i, strides[t], dt);
        const double angle = -2.0 * std::numbers::pi *
                             static_cast<double>((j * k) % dt) /
                             static_cast<double>(dt);
        out(i) *= Complex(std::cos(angle), std::sin(angle));
      }
      return QuditRegister::from_amplitudes(dims, std::move(out),
                                            state.unnormalized());
    }
    case GateKind::Permutation: {
      ComplexVector out(total);
      const std::size_t wires = dims.size();
      std::vector<Eigen::Index> digits(wires);
      for (Eigen::Index i = 0; i < total; ++i) {
        for (std::size_t w = 0; w < wires; ++w) {
          digits[w] = digit_of(i, strides[w], dims[w]);
        }
        Eigen::Index j = 0;
        for (std::size_t w = 0; w < wires; ++w) {
          j += digits[static_cast<std::size_t>(gate.permutation[w])] * strides[w];
        }
        out(j) = amps(i);
      }
      return QuditRegister::from_amplitudes(dims, std::move(out),
                                            state.unnormalized());
    }
  }
  throw ParameterError("apply_gate: unknown gate kind");
}

QuditRegister apply_circuit(const Circuit& circuit, QuditRegister state) {
  circuit.validate();
  if (state.dims() != circuit.dims) {
    throw ParameterError("apply_circuit: register shape mismatch");
  }
  for (const Gate& gate : circuit.gates) {
    state = apply_gate(state, gate);
  }
  return state;
}

ComplexMatrix dense_unitary(const Circuit& circuit) {
  circuit.validate();
  const Eigen::Index total = product_of(circuit.dims);
  ComplexMatrix u(total, total);
  for (Eigen::Index col = 0; col < total; ++col) {
    ComplexVector e = ComplexVector::Zero(total);
    e(col) = 1.0;
    QuditRegister reg =
        QuditRegister::from_amplitudes(circuit.dims, std::move(e));
    u.col(col) = apply_circuit(circuit, std::move(reg)).amplitudes();
  }
  return u;
}

ComplexMatrix cyclic_unitary(std::size_t n) {
  if (n < 2) throw ParameterError("cyclic_unitary: n must be >= 2");
  const auto ni = static_cast<Eigen::Index>(n);
  ComplexMatrix k_dagger = ComplexMatrix::Zero(2 * ni, 2 * ni);
  for (Eigen::Index j = 0; j < ni; ++j) {
    k_dagger(2 * j, j) = 1.0;
    k_dagger(2 * j + 1, ni + j) = 1.0;
  }
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix in = ComplexMatrix::Identity(ni, ni);
  return mc::kron(mc::fourier_op(n, -1), i2) * mc::shift_op(2 * n, -1) *
         mc::kron(in, mc::fourier_op(2, 1)) * k_dagger;
}

Circuit cyclic_gate_circuit(std::size_t m) {
  if (m < 1) throw ParameterError("cyclic_gate_circuit: m must be >= 1");
  const std::size_t wires = m + 1;
  const long two_n = 1L << (m + 1);

  Circuit circuit;
  circuit.dims.assign(wires, 2);

  // K^dagger rotates every qubit one wire up; the top bit wraps to the
  // bottom.
  std::vector<int> perm(wires);
  for (std::size_t w = 0; w < wires; ++w) {
    perm[w] = static_cast<int>((w + 1) % wires);
  }
  circuit.gates.push_back(Gate::wire_permutation(std::move(perm)));

  circuit.gates.push_back(Gate::fourier({static_cast<int>(m)}));

  std::vector<int> all(wires);
  for (std::size_t w = 0; w < wires; ++w) all[w] = static_cast<int>(w);
  circuit.gates.push_back(Gate::fourier(all));

  // Z_{2n}^dagger splits into one phase gate per qubit, R_{2n}^{-2^k} on
  // the qubit with significance 2^k.
  for (std::size_t w = 0; w < wires; ++w) {
    const long exponent = -(1L << (m - w));
    circuit.gates.push_back(
        Gate::r_phase_power(static_cast<int>(w), two_n, exponent));
  }

  circuit.gates.push_back(Gate::fourier_dagger(all));

  std::vector<int> ancilla(m);
  for (std::size_t w = 0; w < m; ++w) ancilla[w] = static_cast<int>(w);
  circuit.gates.push_back(Gate::fourier_dagger(ancilla));

  circuit.measured = std::move(ancilla);
  return circuit;
}

QuditRegister gamma_state(const ComplexMatrix& mu, Eigen::Index d) {
  if (d < 2) throw ParameterError("gamma_state: d must be >= 2");
  if (mu.rows() != d || mu.cols() != d) {
    throw ParameterError("gamma_state: seed operator dimension mismatch");
  }
  const double tr = std::real(mu.trace());
  if (std::abs(tr - 1.0 / static_cast<double>(d)) > povm::kFamilyTol) {
    throw NumericError("gamma_state: seed operator trace must be 1/d");
  }
  const ComplexMatrix root = mc::psd_sqrt(mu, Tolerance(povm::kFamilyTol));
  ComplexVector amps(d * d);
  const double scale = std::sqrt(static_cast<double>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      amps(j * d + k) = scale * root(j, k);
    }
  }
  // norm^2 = d * tr(mu) = 1 up to the eigensolve; renormalizing here would
  // hide trace violations, so construct strictly.
  return QuditRegister::from_amplitudes({d, d}, std::move(amps));
}

Circuit hw_circuit(Eigen::Index d) {
  if (d < 2) throw ParameterError("hw_circuit: d must be >= 2");
  Circuit circuit;
  circuit.dims = {d, d, d};
  circuit.gates = {
      Gate::controlled_shift_dagger(0, 1),
      Gate::fourier_dagger({0}),
      Gate::controlled_shift_dagger(1, 2),
      Gate::controlled_phase(0, 2),
      Gate::fourier_dagger({0}),
      Gate::fourier_dagger({1}),
  };
  circuit.measured = {0, 1};
  return circuit;
}

QuditRegister phi1_state(const ComplexMatrix& mu, Eigen::Index d) {
  QuditRegister state = gamma_state(mu, d);
  state = apply_gate(state, Gate::controlled_shift_dagger(0, 1));
  state = apply_gate(state, Gate::fourier_dagger({0}));
  return state;
}

AppendixHwReport appendix_hw_verify(Eigen::Index d, const ComplexMatrix& mu) {
  if (d < 2) throw ParameterError("appendix_hw_verify: d must be >= 2");
  if (d > 6) {
    throw ResolutionError("appendix_hw_verify: dense d^3 check guarded to d <= 6");
  }
  const auto du = static_cast<std::size_t>(d);
  const ComplexMatrix root = mc::psd_sqrt(mu, Tolerance(povm::kFamilyTol));
  const Eigen::Index d2 = d * d;
  const Eigen::Index d3 = d2 * d;

  ComplexMatrix m_stack(d3, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const ComplexMatrix xj = mc::shift_op(du, j);
    for (Eigen::Index k = 0; k < d; ++k) {
      const ComplexMatrix zk = mc::phase_op(du, k);
      m_stack.middleRows((j * d + k) * d, d) =
          zk * xj * root * xj.adjoint() * zk.adjoint();
    }
  }

  ComplexMatrix x_mod = ComplexMatrix::Zero(d3, d3);
  ComplexMatrix z_div = ComplexMatrix::Zero(d3, d3);
  for (Eigen::Index block = 0; block < d2; ++block) {
    x_mod.block(block * d, block * d, d, d) = mc::shift_op(du, block % d);
    z_div.block(block * d, block * d, d, d) = mc::phase_op(du, block / d);
  }
  const ComplexMatrix fourier_pair =
      mc::kron(mc::kron(mc::fourier_op(du, 1), mc::fourier_op(du, 1)),
               ComplexMatrix::Identity(d, d));
  const ComplexMatrix a = x_mod * z_div.adjoint() * fourier_pair;
  const ComplexMatrix n = a * m_stack;

  const ComplexMatrix id2 = ComplexMatrix::Identity(d2, d2);
  const ComplexMatrix z1 = mc::phase_op(du, 1);
  const ComplexMatrix x1 = mc::shift_op(du, 1);

  AppendixHwReport report;
  const double tol = 1e-10;

  report.z_intertwining.check = "hw-appendix-z-intertwining";
  report.z_intertwining.tolerance = tol;
  report.z_intertwining.max_error =
      (mc::kron(id2, z1) * n - n * z1).cwiseAbs().maxCoeff();

  report.x_intertwining.check = "hw-appendix-x-intertwining";
  report.x_intertwining.tolerance = tol;
  report.x_intertwining.max_error =
      (mc::kron(id2, x1) * n - n * x1).cwiseAbs().maxCoeff();

  const ComplexVector phi1 = phi1_state(mu, d).amplitudes();
  ComplexMatrix structured(d3, d);
  for (Eigen::Index j = 0; j < d2; ++j) {
    structured.middleRows(j * d, d) =
        phi1(j) * ComplexMatrix::Identity(d, d);
  }
  report.column_structure.check = "hw-appendix-column-structure";
  report.column_structure.tolerance = tol;
  report.column_structure.max_error = (n - structured).cwiseAbs().maxCoeff();

  report.stack_cross_check.check = "hw-appendix-stack-vs-build-M";
  report.stack_cross_check.tolerance = 1e-9;
  report.stack_cross_check.max_error =
      (m_stack - povm::build_M(povm::hw_povm(d, mu))).cwiseAbs().maxCoeff();

  for (CheckReport* r :
       {&report.z_intertwining, &report.x_intertwining,
        &report.column_structure, &report.stack_cross_check}) {
    r->pass = r->max_error <= r->tolerance;
    report.max_residual = std::max(report.max_residual, r->max_error);
  }
  report.pass = report.z_intertwining.pass && report.x_intertwining.pass &&
                report.column_structure.pass && report.stack_cross_check.pass;
  return report;
}

MeasurementResult run_measurement(const Circuit& circuit,
                                  const QuditRegister& input,
                                  std::uint64_t seed, std::size_t shots) {
  if (circuit.measured.empty()) {
    throw ParameterError("run_measurement: circuit has no measured wires");
  }
  QuditRegister final_state = apply_circuit(circuit, input);

  const auto& dims = final_state.dims();
  const auto strides = strides_of(dims);
  const ComplexVector& amps = final_state.amplitudes();

  MeasurementResult result;
  Eigen::Index outcome_count = 1;
  for (int w : circuit.measured) {
    result.measured_dims.push_back(dims[static_cast<std::size_t>(w)]);
    outcome_count *= dims[static_cast<std::size_t>(w)];
  }
  std::vector<bool> is_measured(dims.size(), false);
  for (int w : circuit.measured) is_measured[static_cast<std::size_t>(w)] = true;
  std::vector<Eigen::Index> rest_dims;
  for (std::size_t w = 0; w < dims.size(); ++w) {
    if (!is_measured[w]) rest_dims.push_back(dims[w]);
  }
  const bool has_rest = !rest_dims.empty();
  Eigen::Index rest_count = 1;
  for (Eigen::Index rd : rest_dims) rest_count *= rd;

  std::vector<ComplexVector> blocks(
      static_cast<std::size_t>(outcome_count),
      ComplexVector::Zero(has_rest ? rest_count : 1));
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    Eigen::Index outcome = 0;
    for (int w : circuit.measured) {
      const auto wu = static_cast<std::size_t>(w);
      outcome = outcome * dims[wu] + digit_of(i, strides[wu], dims[wu]);
    }
    Eigen::Index rest = 0;
    for (std::size_t w = 0; w < dims.size(); ++w) {
      if (is_measured[w]) continue;
      rest = rest * dims[w] + digit_of(i, strides[w], dims[w]);
    }
    blocks[static_cast<std::size_t>(outcome)](has_rest ? rest : 0) += amps(i);
  }

  result.probabilities.resize(static_cast<std::size_t>(outcome_count));
  result.empty.resize(static_cast<std::size_t>(outcome_count));
  result.labels.resize(static_cast<std::size_t>(outcome_count));
  result.conditional_states.reserve(static_cast<std::size_t>(outcome_count));
  const std::vector<Eigen::Index> cond_dims =
      has_rest ? rest_dims : std::vector<Eigen::Index>{1};
  for (Eigen::Index o = 0; o < outcome_count; ++o) {
    const auto ou = static_cast<std::size_t>(o);
    const double p = blocks[ou].squaredNorm();
    result.probabilities[ou] = p;

    std::string label;
    Eigen::Index rest_o = o;
    for (std::size_t w = result.measured_dims.size(); w-- > 0;) {
      const std::string digit = std::to_string(rest_o % result.measured_dims[w]);
      rest_o /= result.measured_dims[w];
      label = label.empty() ? digit : digit + "," + label;
    }
    result.labels[ou] = label;

    // Zero-probability branches carry an explicit marker instead of a
    // NaN-normalized state.
    if (p < 1e-30) {
      result.empty[ou] = true;
      result.conditional_states.push_back(QuditRegister(cond_dims));
    } else {
      result.empty[ou] = false;
      result.conditional_states.push_back(QuditRegister::from_amplitudes(
          cond_dims, blocks[ou] / std::sqrt(p)));
    }
  }

  result.counts.assign(static_cast<std::size_t>(outcome_count), 0);
  result.samples.reserve(shots);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = uniform(rng);
    double cdf = 0.0;
    Eigen::Index chosen = outcome_count - 1;
    for (Eigen::Index o = 0; o < outcome_count; ++o) {
      cdf += result.probabilities[static_cast<std::size_t>(o)];
      if (u < cdf) {
        chosen = o;
        break;
      }
    }
    result.samples.push_back(static_cast<std::uint32_t>(chosen));
    ++result.counts[static_cast<std::size_t>(chosen)];
  }
  return result;
}

}  // namespace povmforge::circuits
