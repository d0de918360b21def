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

#include "povmforge/matcore.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

namespace povmforge::matcore {

namespace {

ComplexMatrix matrix_power(const ComplexMatrix& base, long power) {
  const Eigen::Index n = base.rows();
  if (power == 0) return ComplexMatrix::Identity(n, n);
  ComplexMatrix b = power > 0 ? base : ComplexMatrix(base.adjoint());
  unsigned long e = power > 0 ? static_cast<unsigned long>(power)
                              : static_cast<unsigned long>(-power);
  ComplexMatrix result = ComplexMatrix::Identity(n, n);
  while (e > 0) {
    if (e & 1UL) result = (result * b).eval();
    b = (b * b).eval();
    e >>= 1UL;
  }
  return result;
}

// omega(m)^e for possibly negative e, without accumulating phase error.
Complex omega_pow(std::size_t m, long e) {
  const double lm = static_cast<double>(m);
  const long r = ((e % static_cast<long>(m)) + static_cast<long>(m)) %
                 static_cast<long>(m);
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / lm;
  return Complex(std::cos(angle), std::sin(angle));
}

}  // namespace

Complex omega(std::size_t m) { return omega_pow(m, 1); }

ComplexMatrix shift_op(std::size_t m, long power) {
  const auto n = static_cast<Eigen::Index>(m);
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  const long p = ((power % static_cast<long>(m)) + static_cast<long>(m)) %
                 static_cast<long>(m);
  for (Eigen::Index j = 0; j < n; ++j) {
    x((j + p) % n, j) = 1.0;
  }
  return x;
}

ComplexMatrix phase_op(std::size_t m, long power) {
  const auto n = static_cast<Eigen::Index>(m);
  ComplexMatrix z = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    z(j, j) = omega_pow(m, power * static_cast<long>(j));
  }
  return z;
}

ComplexMatrix fourier_op(std::size_t m, long power) {
  const auto n = static_cast<Eigen::Index>(m);
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      f(j, k) = scale * omega_pow(m, static_cast<long>(j) * static_cast<long>(k));
    }
  }
  if (power == 1) return f;
  return matrix_power(f, power);
}

ComplexMatrix r_phase_op(std::size_t m, long power) {
  ComplexMatrix r = ComplexMatrix::Identity(2, 2);
  r(1, 1) = omega_pow(m, power);
  return r;
}

ComplexMatrix structured_operator(StructuredKind kind, std::size_t m,
                                  long power) {
  if (m == 0) throw ParameterError("structured_operator: dimension m must be >= 1");
  switch (kind) {
    case StructuredKind::Shift:
      return shift_op(m, power);
    case StructuredKind::Phase:
      return phase_op(m, power);
    case StructuredKind::Fourier:
      return fourier_op(m, power);
    case StructuredKind::RPhase:
      return r_phase_op(m, power);
  }
  throw ParameterError("structured_operator: unknown kind");
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

double hermiticity_error(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw ParameterError("hermiticity_error: matrix must be square");
  }
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_error(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw ParameterError("unitarity_error: matrix must be square");
  }
  if (a.size() == 0) return 0.0;
  ComplexMatrix gram = a.adjoint() * a;
  gram -= ComplexMatrix::Identity(a.cols(), a.cols());
  return gram.cwiseAbs().maxCoeff();
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a, Tolerance tol) {
  if (a.rows() != a.cols()) {
    throw ParameterError("psd_sqrt: matrix must be square");
  }
  if (!a.allFinite()) throw NumericError("psd_sqrt: input has NaN/Inf entries");
  const double herm = hermiticity_error(a);
  if (herm > tol.absolute) {
    throw NumericError("psd_sqrt: matrix is not Hermitian within tolerance (error " +
                       std::to_string(herm) + ")");
  }
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw NumericError("psd_sqrt: eigendecomposition failed");
  }
  RealVector lambda = es.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -tol.absolute) {
      throw NumericError("psd_sqrt: eigenvalue " + std::to_string(lambda(i)) +
                         " below -tolerance, matrix is not PSD");
    }
    // Clip the whole band [-tol, tol) to zero. Rank-deficient inputs come
    // back from the eigensolver with noise of either sign, and sqrt would
    // amplify a 1e-17 positive to 3e-9 in the root.
    lambda(i) = lambda(i) >= tol.absolute ? std::sqrt(lambda(i)) : 0.0;
  }
  ComplexMatrix root =
      es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().adjoint();
  return 0.5 * (root + root.adjoint());
}

ComplexMatrix complete_isometry_to_unitary(const ComplexMatrix& iso,
                                           Tolerance tol) {
  const Eigen::Index rows = iso.rows();
  const Eigen::Index cols = iso.cols();
  if (cols > rows) {
    throw ParameterError("complete_isometry_to_unitary: more columns than rows");
  }
  {
    ComplexMatrix gram = iso.adjoint() * iso;
    gram -= ComplexMatrix::Identity(cols, cols);
    const double err = gram.size() == 0 ? 0.0 : gram.cwiseAbs().maxCoeff();
    if (err > tol.absolute) {
      throw NumericError(
          "complete_isometry_to_unitary: columns are not orthonormal (error " +
          std::to_string(err) + ")");
    }
  }

  ComplexMatrix u(rows, rows);
  u.leftCols(cols) = iso;
  Eigen::Index filled = cols;
  for (Eigen::Index k = 0; k < rows && filled < rows; ++k) {
    ComplexVector v = ComplexVector::Zero(rows);
    v(k) = 1.0;
    // Two rounds of modified Gram-Schmidt keep the completion orthogonal
    // even when a candidate is nearly in the current span.
    for (int round = 0; round < 2; ++round) {
      for (Eigen::Index c = 0; c < filled; ++c) {
        v -= u.col(c).dot(v) * u.col(c);
      }
    }
    const double residual = v.norm();
    if (residual > tol.absolute) {
      u.col(filled++) = v / residual;
    }
  }
  if (filled != rows) {
    throw NumericError("complete_isometry_to_unitary: completion fell short; "
                       "input columns may be ill-conditioned");
  }
  return u;
}

CheckReport assert_unitary(const ComplexMatrix& a, Tolerance tol) {
  CheckReport report;
  report.check = "unitary";
  report.tolerance = tol.absolute;
  report.max_error = unitarity_error(a);
  report.pass = report.max_error <= tol.absolute;
  return report;
}

}  // namespace povmforge::matcore
