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
#include <vector>

#include "povmforge/matcore.hpp"

namespace povmforge::contvar {

// hbar = 1 throughout. Position and momentum shifts act as
//   (U_{s,t} psi)(x) = exp(-i x s) psi(x - t),
// the continuous Fourier transform as
//   (F psi)(x) = (1/sqrt(2 pi)) int exp(-i x y) psi(y) dy.

/// Uniform symmetric grid: abscissas x_k = -L + k * (2L/N), k in [0, N).
/// N must be even so that 0 and all pairwise sums of abscissas stay on the
/// lattice; shifts by grid values are then exact index moves.
struct Grid1D {
  double half_width = 0.0;
  Eigen::Index points = 0;

  Grid1D(double half_width, Eigen::Index points);

  double spacing() const {
    return 2.0 * half_width / static_cast<double>(points);
  }
  double x(Eigen::Index k) const {
    return -half_width + static_cast<double>(k) * spacing();
  }
  /// Index of the nearest abscissa; throws ParameterError outside the box.
  Eigen::Index nearest_index(double value) const;
  RealVector abscissas() const;

  bool operator==(const Grid1D& other) const {
    return half_width == other.half_width && points == other.points;
  }
};

/// Complex samples of a wavefunction of 1-3 coordinates. Coordinate 0 is
/// the most significant index. Inner products use the Riemann measure
/// prod_i spacing_i.
class GridWavefunction {
 public:
  GridWavefunction(std::vector<Grid1D> grids, ComplexVector values,
                   bool unnormalized = false);

  static GridWavefunction product(const GridWavefunction& a,
                                  const GridWavefunction& b);

  std::size_t coords() const { return grids_.size(); }
  const Grid1D& grid(std::size_t i = 0) const { return grids_.at(i); }
  const std::vector<Grid1D>& grids() const { return grids_; }
  const ComplexVector& values() const { return values_; }
  ComplexVector& values() { return values_; }
  bool unnormalized() const { return unnormalized_; }

  /// prod_i spacing_i
  double measure() const;
  double norm() const;
  Complex inner(const GridWavefunction& other) const;

 private:
  std::vector<Grid1D> grids_;
  ComplexVector values_;
  bool unnormalized_ = false;
};

/// Real Gaussian with the width convention alpha(x) ~ exp(-x^2 / (2 sigma^2)),
/// optionally displaced in position and momentum.
struct AnalyticGaussian {
  double sigma = 1.0;
  double center = 0.0;
  double momentum = 0.0;

  Complex eval(double x) const;
  GridWavefunction sample(const Grid1D& grid) const;
};

/// Samples the normalized width-sigma Gaussian. Requires
/// sigma in [4 spacing, L/4] so the grid resolves and contains it.
GridWavefunction gaussian_wavefn(double sigma, const Grid1D& grid);

/// Displaced/boosted Gaussian sample with the same resolution guard.
GridWavefunction gaussian_packet(double sigma, double center, double momentum,
                                 const Grid1D& grid);

/// Normalized superposition of a few random Gaussian packets; smooth,
/// band-limited, and localized well inside the box.
GridWavefunction random_smooth_state(const Grid1D& grid, std::mt19937_64& rng);

/// Matrix of the continuous Fourier transform restricted to the grid:
/// G[j,k] = (spacing/sqrt(2 pi)) exp(-i x_j x_k). An isometry on states
/// whose momentum content stays inside the box.
ComplexMatrix grid_fourier(const Grid1D& grid);

struct CvGate {
  enum class Kind {
    Fourier,
    FourierDagger,
    ControlledShiftDagger,  // psi(x, y) -> psi(x, y + x)
    ControlledPhase,        // multiply exp(-i x y)
    Reflection,             // psi(x) -> psi(-x)
    Displacement,           // U_{s,t}
    BeamSplitter,           // psi(x, y) -> psi((x+y)/sqrt2, (x-y)/sqrt2)
    CoordinateMapResample,  // psi(vec x) -> psi(A vec x)
  };

  Kind kind = Kind::Fourier;
  int wire = 0;   // target; control wire for controlled kinds
  int wire2 = 0;  // target of controlled kinds, second beam-splitter wire
  double momentum_shift = 0.0;
  double position_shift = 0.0;
  RealMatrix map;

  static CvGate fourier(int wire);
  static CvGate fourier_dagger(int wire);
  static CvGate controlled_shift_dagger(int control, int target);
  static CvGate controlled_phase(int control, int target);
  static CvGate reflection(int wire);
  static CvGate displacement(double s, double t, int wire);
  static CvGate beam_splitter(int w1, int w2);
  static CvGate coordinate_map(RealMatrix a);
};

GridWavefunction apply_cv_gate(const GridWavefunction& psi, const CvGate& gate);

/// Integral kernel k(z, w) on grid x grid, acting as
/// (K psi)(z) = sum_w k(z, w) psi(w) spacing.
struct KernelOperator {
  Grid1D grid;
  ComplexMatrix kernel;

  KernelOperator(Grid1D g, ComplexMatrix k);

  /// Plain matrix acting on sample vectors: kernel * spacing.
  ComplexMatrix op() const { return kernel * grid.spacing(); }
  GridWavefunction apply(const GridWavefunction& psi) const;
  double trace() const;
  KernelOperator compose(const KernelOperator& other) const;
};

/// (1/2) tr |a - b| for Hermitian kernels on the same grid.
double trace_distance(const KernelOperator& a, const KernelOperator& b);

/// <phi| a |phi> for a normalized grid state; fidelity against a pure state
/// when a has unit trace.
double fidelity_with_pure(const KernelOperator& a, const GridWavefunction& phi);

/// First and second position moments of a density kernel.
double kernel_expectation_x2(const KernelOperator& a);
/// tr(a P^2) evaluated spectrally through the periodic DFT.
double kernel_expectation_p2(const KernelOperator& a);

/// Mean vector and covariance matrix of a multimode Gaussian state, ordered
/// (x_1..x_m, p_1..p_m). Construction enforces symmetry and the uncertainty
/// bound (symplectic eigenvalues >= 1/2 - 1e-9).
struct GaussianState {
  Eigen::Index modes = 0;
  RealVector mean;
  RealMatrix covariance;

  GaussianState(Eigen::Index modes, RealVector mean, RealMatrix covariance);

  RealVector symplectic_eigenvalues() const;
  Eigen::Matrix2d mode_covariance(Eigen::Index mode) const;
};

/// Linear map of position coordinates; momenta transform by the transposed
/// inverse. Area preservation (|det| = 1) is enforced.
struct CoordinateMap {
  RealMatrix position;

  explicit CoordinateMap(RealMatrix m);
  RealMatrix momentum_action() const;
  double determinant() const { return position.determinant(); }
};

struct ScatteringMaps {
  CoordinateMap s21, s23, s31, r3, composite;
};

/// The three hard-core collision shears, the final reflection, and their
/// composite A = S31 S23 S21 R3, all integer-valued.
ScatteringMaps scattering_compose();

/// Kraus kernel of the scattering network for probe outcomes (x, y), with
/// Gaussian probe widths sigma1 (position probe) and sigma2 (momentum
/// probe):
///   k_{x,y}(z,w) = sqrt(1/(2 pi)) alpha(x+w+z) beta((w-z)/2)
///                  exp(-i (y/2) (w-z)).
/// Normalized as a density over the rescaled outcomes (t, s) = (-x/2, -y/2),
/// so that K_{0,0}^2 = mu with tr(mu) = 1/(2 pi).
KernelOperator scattering_kraus_kernel(double sigma1, double sigma2, double x,
                                       double y, const Grid1D& grid);

struct KernelPositivityReport {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool regime = false;    // b > a >= 0
  bool positive = false;  // min >= -1e-8 * max
};

/// Spectrum test of the kernel d * exp(-a (x+y)^2 - b (x-y)^2).
KernelPositivityReport kernel_positivity(double a, double b, double d,
                                         const Grid1D& grid);

struct MuConsistencyReport {
  double trace_distance = 0.0;
  double purity = 0.0;
  bool regime_ok = false;  // sigma1 >= 2 sigma2
  double tolerance = 1e-3;
  bool pass = false;
};

/// Builds mu = K_{0,0}^2 and, independently, the one-particle reduction of
/// the pure two-particle state phi(x,y) = alpha(x+y) beta((x-y)/2); reports
/// the trace distance of the trace-normalized operators and the purity of
/// the reduction.
MuConsistencyReport mu_consistency(double sigma1, double sigma2,
                                   const Grid1D& grid);

/// Covariance matrix of the probe pair after the argument map g, starting
/// from the product of Gaussians with widths sigma1, sigma2.
GaussianState covariance_transform(const CoordinateMap& g, double sigma1,
                                   double sigma2);

/// Entangling map G = [[1, 1], [1/2, -1/2]] taking |alpha> (x) |beta> to the
/// two-particle state phi above.
CoordinateMap entangling_map();

struct ThermalParams {
  double m_omega = 0.0;     // mass times frequency
  double mean_phonons = 0.0;
  bool regime_ok = false;   // sigma1 >= 2 sigma2
};

/// Oscillator parameters matching the reduced probe state:
///   (m w)^2 = (4/s1^2 + 1/s2^2) / (s1^2 + 4 s2^2),
///   N = (1/2) sqrt(2 + 4 s2^2/s1^2 + s1^2/(4 s2^2)) - 1.
ThermalParams thermal_params(double sigma1, double sigma2);

/// Boltzmann mixture of oscillator eigenstates as a density kernel, with
/// the geometric ratio fixed so the covariance equals
/// (N+1)/2 diag(1/(m w), m w); truncated weight must stay below 1e-8.
KernelOperator thermal_state(const ThermalParams& params, std::size_t cutoff,
                             const Grid1D& grid);

/// Full three-coordinate state of the continuous measurement network
/// (wires: position probe, momentum probe, system), from which any
/// conditional can be sliced.
struct CvConditionalTable {
  Grid1D grid;
  ComplexVector state;  // points^3 samples

  /// Unnormalized conditional system wavefunction at the grid points
  /// nearest (t, s); |t|, |s| <= L/2.
  GridWavefunction conditional(double t, double s) const;
  /// Distance from (t, s) to the snapped grid point.
  double snap_distance(double t, double s) const;
  /// Outcome density at (t, s): Riemann norm^2 of the conditional.
  double probability_density(double t, double s) const;
  /// sum over all grid (t, s) of density * spacing^2; near 1 when the
  /// state stayed inside the box.
  double total_weight() const;
};

/// Runs the gate network controlled-shift^dag(0->1), F^dag(0),
/// controlled-shift^dag(1->2), controlled-phase(0->2), F^dag(0), F^dag(1)
/// on ancilla (x) psi. The ancilla is a general two-coordinate state;
/// use rank_one_ancilla for the product case.
CvConditionalTable infhw_apply(const GridWavefunction& ancilla,
                               const GridWavefunction& psi);

/// alpha(x) * conj(alpha(y)) as a two-coordinate state.
GridWavefunction rank_one_ancilla(const GridWavefunction& alpha);

/// One conditional of the network with the rank-one ancilla built from
/// alpha; convenience wrapper around infhw_apply.
GridWavefunction infhw_kraus(const GridWavefunction& alpha,
                             const GridWavefunction& psi, double t, double s);

/// Direct quadrature of the closed-form conditional
///   (1/sqrt(2 pi)) e^{-izs} alpha(z-t) int conj(alpha)(u-t) e^{ius} psi(u) du,
/// the independent oracle for the circuit path.
GridWavefunction coin_oracle(const GridWavefunction& alpha,
                             const GridWavefunction& psi, double t, double s);

/// Teleportation-style optics scheme: balanced beam splitter between the
/// input and the first ancilla, simulated momentum measurement (inverse
/// Fourier + position readout), then conditioned displacements by
/// sqrt(2)x, sqrt(2)y on the second ancilla. Returns the unnormalized
/// output mode for probe outcome (x, y).
GridWavefunction optics_kraus(const GridWavefunction& alpha,
                              const GridWavefunction& beta,
                              const GridWavefunction& psi, double x, double y);

/// Closed form of the same output,
///   sqrt(2/(2 pi)) e^{-ixy} <U_{s,t} conj(alpha)|psi> U_{s,t}|beta>,
/// with (s, t) = (sqrt(2) y, sqrt(2) x) and analytic ancilla evaluation.
/// The constant in front comes from undoing the beam-splitter argument
/// substitution.
GridWavefunction optics_oracle(const AnalyticGaussian& alpha,
                               const AnalyticGaussian& beta,
                               const GridWavefunction& psi, double x, double y);

struct OutcomeStatistics {
  double delta_x = 0.0;
  double delta_p = 0.0;
  double product = 0.0;
  double total_weight = 0.0;
  RealVector lattice;   // shared (t, s) abscissas
  RealMatrix density;   // outcome density, indexed (t, s)
};

/// Standard deviations of the position and momentum outcome marginals of
/// the scattering POVM applied to psi, computed from conditional
/// norms^2 over the full (t, s) grid lattice.
OutcomeStatistics outcome_statistics(double sigma1, double sigma2,
                                     const GridWavefunction& psi);

}  // namespace povmforge::contvar
