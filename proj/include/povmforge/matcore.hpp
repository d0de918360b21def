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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace povmforge {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// A parameter is outside its documented domain (bad dimension, size
/// mismatch, out-of-range wire index, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input data violates a numerical contract (not Hermitian, not PSD,
/// columns not orthonormal, trace condition broken, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A grid cannot resolve the requested widths, or a dense computation
/// exceeds its resource guard.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Absolute tolerance for numerical checks.
struct Tolerance {
  double absolute = 1e-10;

  Tolerance() = default;
  explicit Tolerance(double abs) : absolute(abs) {
    if (!(abs >= 0.0)) throw ParameterError("Tolerance must be >= 0");
  }
};

/// Result of a single numerical identity check.
struct CheckReport {
  std::string check;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

namespace matcore {

// Root-of-unity convention used throughout this library:
//
//   omega(m) = exp(-2*pi*i/m)
//
// i.e. the MINUS sign in the exponent. All shift/phase/Fourier operators
// below are built from this omega. Double-check before mixing in an FFT
// library, conventions differ.
Complex omega(std::size_t m);

enum class StructuredKind {
  Shift,    // X_m: |j> -> |(j+1) mod m>
  Phase,    // Z_m: diag(omega^j)
  Fourier,  // F_m: (1/sqrt(m)) omega^{jk}
  RPhase,   // 2x2 diag(1, omega(m))
};

/// Builds one of the structured unitaries above, raised to `power`.
/// `m` is the modulus of omega; for RPhase the matrix is always 2x2.
ComplexMatrix structured_operator(StructuredKind kind, std::size_t m,
                                  long power = 1);

ComplexMatrix shift_op(std::size_t m, long power = 1);
ComplexMatrix phase_op(std::size_t m, long power = 1);
ComplexMatrix fourier_op(std::size_t m, long power = 1);
ComplexMatrix r_phase_op(std::size_t m, long power = 1);

/// Kronecker product; dimensions multiply.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |(a - a^dagger)_ij|
double hermiticity_error(const ComplexMatrix& a);

/// max_ij |(a^dagger a - I)_ij|; zero for empty matrices.
double unitarity_error(const ComplexMatrix& a);

/// Hermitian PSD square root via eigendecomposition. Eigenvalues in
/// [-tol, 0) are clipped to zero; anything below -tol is rejected.
ComplexMatrix psd_sqrt(const ComplexMatrix& a, Tolerance tol = Tolerance{});

/// Extends a matrix with orthonormal columns to a square unitary whose
/// leading columns equal the input bit for bit. The completion is
/// deterministic: standard basis vectors are orthogonalized in index
/// order and kept while their residual norm exceeds tol.
ComplexMatrix complete_isometry_to_unitary(const ComplexMatrix& iso,
                                           Tolerance tol = Tolerance{});

/// Reports max |(a^dagger a - I)_ij| for a square matrix.
CheckReport assert_unitary(const ComplexMatrix& a, Tolerance tol = Tolerance{});

}  // namespace matcore
}  // namespace povmforge
