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

#include "povmforge/contvar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace povmforge::contvar {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

Eigen::Index wrap(Eigen::Index k, Eigen::Index n) { return ((k % n) + n) % n; }

/// Unitary DFT matrix W[m,k] = exp(-2 pi i m k / n) / sqrt(n).
ComplexMatrix dft_matrix(Eigen::Index n) {
  ComplexMatrix w(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double angle = -2.0 * kPi * static_cast<double>((m * k) % n) /
                           static_cast<double>(n);
      w(m, k) = scale * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return w;
}

/// Momentum value of DFT bin m on the periodic grid.
double dft_momentum(const Grid1D& grid, Eigen::Index m) {
  const Eigen::Index n = grid.points;
  const Eigen::Index folded = m < n / 2 ? m : m - n;
  return 2.0 * kPi * static_cast<double>(folded) /
         (static_cast<double>(n) * grid.spacing());
}

/// Exact (band-limited) translation by t as a dense matrix on samples.
ComplexMatrix translation_matrix(const Grid1D& grid, double t) {
  const Eigen::Index n = grid.points;
  const ComplexMatrix w = dft_matrix(n);
  ComplexVector phases(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double angle = -dft_momentum(grid, m) * t;
    phases(m) = Complex(std::cos(angle), std::sin(angle));
  }
  return w.adjoint() * phases.asDiagonal() * w;
}

std::vector<Eigen::Index> sizes_of(const std::vector<Grid1D>& grids) {
  std::vector<Eigen::Index> sizes;
  sizes.reserve(grids.size());
  for (const Grid1D& g : grids) sizes.push_back(g.points);
  return sizes;
}

/// Applies an n x n matrix along one coordinate of a multi-coordinate
/// sample vector. Blocks are viewed column-major so every product is a
/// plain GEMM.
ComplexVector apply_axis_matrix(const ComplexVector& v,
                                const std::vector<Eigen::Index>& sizes,
                                std::size_t wire, const ComplexMatrix& op) {
  Eigen::Index left = 1, right = 1;
  for (std::size_t w = 0; w < wire; ++w) left *= sizes[w];
  for (std::size_t w = wire + 1; w < sizes.size(); ++w) right *= sizes[w];
  const Eigen::Index n = sizes[wire];

  ComplexVector out(v.size());
  if (right == 1) {
    // flat index = l * n + j: a column-major (n x left) view
    Eigen::Map<const ComplexMatrix> m(v.data(), n, left);
    Eigen::Map<ComplexMatrix> o(out.data(), n, left);
    o.noalias() = op * m;
    return out;
  }
  const Eigen::Index block = n * right;
  for (Eigen::Index l = 0; l < left; ++l) {
    Eigen::Map<const ComplexMatrix> m(v.data() + l * block, right, n);
    Eigen::Map<ComplexMatrix> o(out.data() + l * block, right, n);
    o.noalias() = m * op.transpose();
  }
  return out;
}

struct Strides {
  std::vector<Eigen::Index> stride;
  explicit Strides(const std::vector<Eigen::Index>& sizes)
      : stride(sizes.size(), 1) {
    for (std::size_t w = sizes.size(); w-- > 1;) {
      stride[w - 1] = stride[w] * sizes[w];
    }
  }
};

void check_cv_wire(const GridWavefunction& psi, int wire) {
  if (wire < 0 || static_cast<std::size_t>(wire) >= psi.coords()) {
    throw ParameterError("cv gate: wire index out of range");
  }
}

void require_same_grid(const GridWavefunction& psi, int a, int b) {
  if (!(psi.grid(static_cast<std::size_t>(a)) ==
        psi.grid(static_cast<std::size_t>(b)))) {
    throw ParameterError("cv gate: wires must share one grid");
  }
}

/// psi(x_w + coeff * x_o) along wire w, exact for band-limited samples.
GridWavefunction apply_shear(const GridWavefunction& psi, int wire, int other,
                             double coeff) {
  check_cv_wire(psi, wire);
  check_cv_wire(psi, other);
  require_same_grid(psi, wire, other);
  const auto sizes = sizes_of(psi.grids());
  const auto sw = static_cast<std::size_t>(wire);
  const auto so = static_cast<std::size_t>(other);
  const Grid1D& g = psi.grid(sw);
  const Eigen::Index n = g.points;
  const ComplexMatrix w = dft_matrix(n);

  ComplexVector hat = apply_axis_matrix(psi.values(), sizes, sw, w);
  const Strides st(sizes);
  // multiply exp(+i p_m * coeff * x_other)
  ComplexMatrix table(n, sizes[so]);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < sizes[so]; ++k) {
      const double angle = dft_momentum(g, m) * coeff * psi.grid(so).x(k);
      table(m, k) = Complex(std::cos(angle), std::sin(angle));
    }
  }
  for (Eigen::Index i = 0; i < hat.size(); ++i) {
    const Eigen::Index m = (i / st.stride[sw]) % sizes[sw];
    const Eigen::Index k = (i / st.stride[so]) % sizes[so];
    hat(i) *= table(m, k);
  }
  ComplexVector back = apply_axis_matrix(hat, sizes, sw, w.adjoint());
  return GridWavefunction(psi.grids(), std::move(back), psi.unnormalized());
}

bool nearly_integer_matrix(const RealMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - std::round(m(i, j))) > 1e-12) return false;
    }
  }
  return true;
}

GridWavefunction resample_coordinates(const GridWavefunction& psi,
                                      const RealMatrix& map) {
  const auto c = static_cast<Eigen::Index>(psi.coords());
  if (map.rows() != c || map.cols() != c) {
    throw ParameterError("coordinate map: matrix must match coordinate count");
  }
  if (std::abs(std::abs(map.determinant()) - 1.0) > 1e-12) {
    throw ParameterError("coordinate map: must be area preserving");
  }
  for (std::size_t w = 1; w < psi.coords(); ++w) {
    if (!(psi.grid(w) == psi.grid(0))) {
      throw ParameterError("coordinate map: coordinates must share one grid");
    }
  }
  const Grid1D& g = psi.grid(0);
  const Eigen::Index n = g.points;
  const auto sizes = sizes_of(psi.grids());
  const Strides st(sizes);
  const ComplexVector& v = psi.values();
  ComplexVector out(v.size());

  if (nearly_integer_matrix(map)) {
    // integer maps take the lattice onto itself (periodically): pure gather
    Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> imap(c, c);
    for (Eigen::Index i = 0; i < c; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) {
        imap(i, j) = std::lround(map(i, j));
      }
    }
    std::vector<Eigen::Index> units(psi.coords());
    for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
      for (std::size_t w = 0; w < psi.coords(); ++w) {
        units[w] = (idx / st.stride[w]) % n - n / 2;
      }
      Eigen::Index src = 0;
      for (Eigen::Index i = 0; i < c; ++i) {
        long unit = 0;
        for (Eigen::Index j = 0; j < c; ++j) {
          unit += imap(i, j) * units[static_cast<std::size_t>(j)];
        }
        src += wrap(unit + n / 2, n) * st.stride[static_cast<std::size_t>(i)];
      }
      out(idx) = v(src);
    }
    return GridWavefunction(psi.grids(), std::move(out), psi.unnormalized());
  }

  // multilinear interpolation, zero outside the box, explicit renormalization
  std::vector<Eigen::Index> digits(psi.coords());
  std::vector<Eigen::Index> base(psi.coords());
  Eigen::VectorXd frac(c);
  const Eigen::Index corners = Eigen::Index{1} << c;
  for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
    for (std::size_t w = 0; w < psi.coords(); ++w) {
      digits[w] = (idx / st.stride[w]) % n;
    }
    bool outside = false;
    for (Eigen::Index i = 0; i < c; ++i) {
      double y = 0.0;
      for (Eigen::Index j = 0; j < c; ++j) {
        y += map(i, j) * g.x(digits[static_cast<std::size_t>(j)]);
      }
      const double u = (y + g.half_width) / g.spacing();
      const double fl = std::floor(u);
      if (fl < 0.0 || fl > static_cast<double>(n - 2)) {
        outside = true;
        break;
      }
      base[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(fl);
      frac(i) = u - fl;
    }
    Complex acc(0.0, 0.0);
    if (!outside) {
      for (Eigen::Index corner = 0; corner < corners; ++corner) {
        double weight = 1.0;
        Eigen::Index src = 0;
        for (Eigen::Index i = 0; i < c; ++i) {
          const bool high = (corner >> i) & 1;
          weight *= high ? frac(i) : 1.0 - frac(i);
          src += (base[static_cast<std::size_t>(i)] + (high ? 1 : 0)) *
                 st.stride[static_cast<std::size_t>(i)];
        }
        acc += weight * v(src);
      }
    }
    out(idx) = acc;
  }
  const double in_norm = v.norm();
  const double out_norm = out.norm();
  if (out_norm > 0.0) out *= in_norm / out_norm;
  return GridWavefunction(psi.grids(), std::move(out), psi.unnormalized());
}

}  // namespace

Grid1D::Grid1D(double half_width_, Eigen::Index points_)
    : half_width(half_width_), points(points_) {
  if (!(half_width > 0.0)) {
    throw ParameterError("Grid1D: half width must be > 0");
  }
  if (points < 8) throw ParameterError("Grid1D: need at least 8 points");
  if (points % 2 != 0) throw ParameterError("Grid1D: point count must be even");
}

Eigen::Index Grid1D::nearest_index(double value) const {
  const double u = (value + half_width) / spacing();
  const auto k = static_cast<Eigen::Index>(std::llround(u));
  if (k < 0 || k >= points) {
    throw ParameterError("Grid1D: value outside the box");
  }
  return k;
}

RealVector Grid1D::abscissas() const {
  RealVector xs(points);
  for (Eigen::Index k = 0; k < points; ++k) xs(k) = x(k);
  return xs;
}

GridWavefunction::GridWavefunction(std::vector<Grid1D> grids,
                                   ComplexVector values, bool unnormalized)
    : grids_(std::move(grids)),
      values_(std::move(values)),
      unnormalized_(unnormalized) {
  if (grids_.empty() || grids_.size() > 3) {
    throw ParameterError("GridWavefunction: 1 to 3 coordinates supported");
  }
  Eigen::Index expected = 1;
  for (const Grid1D& g : grids_) expected *= g.points;
  if (values_.size() != expected) {
    throw ParameterError("GridWavefunction: sample count mismatch");
  }
  if (!values_.allFinite()) {
    throw NumericError("GridWavefunction: samples contain NaN/Inf");
  }
  if (!unnormalized_ && std::abs(norm() - 1.0) > 1e-6) {
    throw NumericError("GridWavefunction: state is not normalized (norm " +
                       std::to_string(norm()) + ")");
  }
}

GridWavefunction GridWavefunction::product(const GridWavefunction& a,
                                           const GridWavefunction& b) {
  std::vector<Grid1D> grids = a.grids_;
  grids.insert(grids.end(), b.grids_.begin(), b.grids_.end());
  ComplexVector values(a.values_.size() * b.values_.size());
  for (Eigen::Index i = 0; i < a.values_.size(); ++i) {
    values.segment(i * b.values_.size(), b.values_.size()) =
        a.values_(i) * b.values_;
  }
  return GridWavefunction(std::move(grids), std::move(values),
                          a.unnormalized_ || b.unnormalized_);
}

double GridWavefunction::measure() const {
  double m = 1.0;
  for (const Grid1D& g : grids_) m *= g.spacing();
  return m;
}

double GridWavefunction::norm() const {
  return values_.norm() * std::sqrt(measure());
}

Complex GridWavefunction::inner(const GridWavefunction& other) const {
  if (grids_.size() != other.grids_.size() ||
      values_.size() != other.values_.size()) {
    throw ParameterError("GridWavefunction::inner: shape mismatch");
  }
  return values_.dot(other.values_) * measure();
}

Complex AnalyticGaussian::eval(double x) const {
  const double u = x - center;
  const double envelope = std::pow(sigma * sigma * kPi, -0.25) *
                          std::exp(-u * u / (2.0 * sigma * sigma));
  const double angle = momentum * x;
  return envelope * Complex(std::cos(angle), std::sin(angle));
}

GridWavefunction AnalyticGaussian::sample(const Grid1D& grid) const {
  ComplexVector values(grid.points);
  for (Eigen::Index k = 0; k < grid.points; ++k) {
    values(k) = eval(grid.x(k));
  }
  return GridWavefunction({grid}, std::move(values));
}

GridWavefunction gaussian_wavefn(double sigma, const Grid1D& grid) {
  return gaussian_packet(sigma, 0.0, 0.0, grid);
}

GridWavefunction gaussian_packet(double sigma, double center, double momentum,
                                 const Grid1D& grid) {
  if (!(sigma > 0.0)) throw ParameterError("gaussian: width must be > 0");
  if (sigma < 4.0 * grid.spacing() || sigma > grid.half_width / 4.0) {
    throw ResolutionError("gaussian: width outside [4 spacing, L/4]");
  }
  return AnalyticGaussian{sigma, center, momentum}.sample(grid);
}

GridWavefunction random_smooth_state(const Grid1D& grid, std::mt19937_64& rng) {
  // envelopes keep the packets at least five widths away from both the
  // box boundary and the band edge, so Fourier round trips hold to 1e-8
  std::uniform_real_distribution<double> width(0.8, 1.4);
  std::uniform_real_distribution<double> center(-1.5, 1.5);
  std::uniform_real_distribution<double> momentum(-1.2, 1.2);
  std::normal_distribution<double> coeff(0.0, 1.0);
  ComplexVector values = ComplexVector::Zero(grid.points);
  for (int packet = 0; packet < 4; ++packet) {
    const AnalyticGaussian g{width(rng), center(rng), momentum(rng)};
    const Complex c(coeff(rng), coeff(rng));
    for (Eigen::Index k = 0; k < grid.points; ++k) {
      values(k) += c * g.eval(grid.x(k));
    }
  }
  const double norm = values.norm() * std::sqrt(grid.spacing());
  if (norm < 1e-12) return random_smooth_state(grid, rng);
  values /= norm;
  return GridWavefunction({grid}, std::move(values));
}

ComplexMatrix grid_fourier(const Grid1D& grid) {
  const Eigen::Index n = grid.points;
  ComplexMatrix f(n, n);
  const double scale = grid.spacing() / kSqrt2Pi;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double angle = -grid.x(j) * grid.x(k);
      f(j, k) = scale * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return f;
}

CvGate CvGate::fourier(int wire) {
  CvGate g;
  g.kind = Kind::Fourier;
  g.wire = wire;
  return g;
}

CvGate CvGate::fourier_dagger(int wire) {
  CvGate g;
  g.kind = Kind::FourierDagger;
  g.wire = wire;
  return g;
}

CvGate CvGate::controlled_shift_dagger(int control, int target) {
  CvGate g;
  g.kind = Kind::ControlledShiftDagger;
  g.wire = control;
  g.wire2 = target;
  return g;
}

CvGate CvGate::controlled_phase(int control, int target) {
  CvGate g;
  g.kind = Kind::ControlledPhase;
  g.wire = control;
  g.wire2 = target;
  return g;
}

CvGate CvGate::reflection(int wire) {
  CvGate g;
  g.kind = Kind::Reflection;
  g.wire = wire;
  return g;
}

CvGate CvGate::displacement(double s, double t, int wire) {
  CvGate g;
  g.kind = Kind::Displacement;
  g.wire = wire;
  g.momentum_shift = s;
  g.position_shift = t;
  return g;
}

CvGate CvGate::beam_splitter(int w1, int w2) {
  CvGate g;
  g.kind = Kind::BeamSplitter;
  g.wire = w1;
  g.wire2 = w2;
  return g;
}

CvGate CvGate::coordinate_map(RealMatrix a) {
  CvGate g;
  g.kind = Kind::CoordinateMapResample;
  g.map = std::move(a);
  return g;
}

GridWavefunction apply_cv_gate(const GridWavefunction& psi,
                               const CvGate& gate) {
  const auto sizes = sizes_of(psi.grids());
  switch (gate.kind) {
    case CvGate::Kind::Fourier:
    case CvGate::Kind::FourierDagger: {
      check_cv_wire(psi, gate.wire);
      const auto w = static_cast<std::size_t>(gate.wire);
      ComplexMatrix f = grid_fourier(psi.grid(w));
      if (gate.kind == CvGate::Kind::FourierDagger) f = f.adjoint().eval();
      return GridWavefunction(psi.grids(),
                              apply_axis_matrix(psi.values(), sizes, w, f),
                              psi.unnormalized());
    }
    case CvGate::Kind::ControlledShiftDagger: {
      check_cv_wire(psi, gate.wire);
      check_cv_wire(psi, gate.wire2);
      require_same_grid(psi, gate.wire, gate.wire2);
      const auto c = static_cast<std::size_t>(gate.wire);
      const auto t = static_cast<std::size_t>(gate.wire2);
      const Eigen::Index n = sizes[t];
      const Strides st(sizes);
      const ComplexVector& v = psi.values();
      ComplexVector out(v.size());
      // psi(..., x_c, ..., y_t + x_c, ...): y_k + x_j sits at lattice
      // index k + j - n/2 on the shared grid
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const Eigen::Index j = (i / st.stride[c]) % n;
        const Eigen::Index k = (i / st.stride[t]) % n;
        const Eigen::Index src_k = wrap(k + j - n / 2, n);
        out(i) = v(i + (src_k - k) * st.stride[t]);
      }
      return GridWavefunction(psi.grids(), std::move(out), psi.unnormalized());
    }
    case CvGate::Kind::ControlledPhase: {
      check_cv_wire(psi, gate.wire);
      check_cv_wire(psi, gate.wire2);
      const auto c = static_cast<std::size_t>(gate.wire);
      const auto t = static_cast<std::size_t>(gate.wire2);
      const Strides st(sizes);
      ComplexMatrix table(sizes[c], sizes[t]);
      for (Eigen::Index j = 0; j < sizes[c]; ++j) {
        for (Eigen::Index k = 0; k < sizes[t]; ++k) {
          const double angle = -psi.grid(c).x(j) * psi.grid(t).x(k);
          table(j, k) = Complex(std::cos(angle), std::sin(angle));
        }
      }
      ComplexVector out = psi.values();
      for (Eigen::Index i = 0; i < out.size(); ++i) {
        const Eigen::Index j = (i / st.stride[c]) % sizes[c];
        const Eigen::Index k = (i / st.stride[t]) % sizes[t];
        out(i) *= table(j, k);
      }
      return GridWavefunction(psi.grids(), std::move(out), psi.unnormalized());
    }
    case CvGate::Kind::Reflection: {
      check_cv_wire(psi, gate.wire);
      const auto w = static_cast<std::size_t>(gate.wire);
      const Eigen::Index n = sizes[w];
      const Strides st(sizes);
      const ComplexVector& v = psi.values();
      ComplexVector out(v.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const Eigen::Index k = (i / st.stride[w]) % n;
        const Eigen::Index src_k = wrap(n - k, n);
        out(i) = v(i + (src_k - k) * st.stride[w]);
      }
      return GridWavefunction(psi.grids(), std::move(out), psi.unnormalized());
    }
    case CvGate::Kind::Displacement: {
      check_cv_wire(psi, gate.wire);
      const auto w = static_cast<std::size_t>(gate.wire);
      const Grid1D& g = psi.grid(w);
      const Eigen::Index n = g.points;
      const Strides st(sizes);
      ComplexVector shifted;
      const double steps = gate.position_shift / g.spacing();
      if (std::abs(steps - std::round(steps)) < 1e-9) {
        // on-lattice translation is an exact index move
        const auto r = static_cast<Eigen::Index>(std::llround(steps));
        const ComplexVector& v = psi.values();
        shifted.resize(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          const Eigen::Index k = (i / st.stride[w]) % n;
          const Eigen::Index src_k = wrap(k - r, n);
          shifted(i) = v(i + (src_k - k) * st.stride[w]);
        }
      } else {
        shifted = apply_axis_matrix(psi.values(), sizes, w,
                                    translation_matrix(g, gate.position_shift));
      }
      ComplexVector phases(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        const double angle = -g.x(k) * gate.momentum_shift;
        phases(k) = Complex(std::cos(angle), std::sin(angle));
      }
      for (Eigen::Index i = 0; i < shifted.size(); ++i) {
        shifted(i) *= phases((i / st.stride[w]) % n);
      }
      return GridWavefunction(psi.grids(), std::move(shifted),
                              psi.unnormalized());
    }
    case CvGate::Kind::BeamSplitter: {
      if (psi.coords() != 2 || gate.wire != 0 || gate.wire2 != 1) {
        throw ParameterError(
            "beam splitter: implemented for wires (0, 1) of a two-coordinate "
            "state");
      }
      require_same_grid(psi, 0, 1);
      // argument map [[1,1],[1,-1]]/sqrt2 = 45-degree rotation then y -> -y;
      // the rotation splits into three exact spectral shears
      const double a = -std::tan(kPi / 8.0);
      const double b = std::sin(kPi / 4.0);
      GridWavefunction out = apply_shear(psi, 0, 1, a);
      out = apply_shear(out, 1, 0, b);
      out = apply_shear(out, 0, 1, a);
      return apply_cv_gate(out, CvGate::reflection(1));
    }
    case CvGate::Kind::CoordinateMapResample:
      return resample_coordinates(psi, gate.map);
  }
  throw ParameterError("apply_cv_gate: unknown gate kind");
}

KernelOperator::KernelOperator(Grid1D g, ComplexMatrix k)
    : grid(g), kernel(std::move(k)) {
  if (kernel.rows() != grid.points || kernel.cols() != grid.points) {
    throw ParameterError("KernelOperator: kernel must be points x points");
  }
}

GridWavefunction KernelOperator::apply(const GridWavefunction& psi) const {
  if (psi.coords() != 1 || !(psi.grid(0) == grid)) {
    throw ParameterError("KernelOperator::apply: grid mismatch");
  }
  return GridWavefunction({grid}, op() * psi.values(), true);
}

double KernelOperator::trace() const {
  return std::real(kernel.trace()) * grid.spacing();
}

KernelOperator KernelOperator::compose(const KernelOperator& other) const {
  if (!(grid == other.grid)) {
    throw ParameterError("KernelOperator::compose: grid mismatch");
  }
  return KernelOperator(grid, kernel * other.kernel * grid.spacing());
}

double trace_distance(const KernelOperator& a, const KernelOperator& b) {
  if (!(a.grid == b.grid)) {
    throw ParameterError("trace_distance: grid mismatch");
  }
  const ComplexMatrix diff = (a.kernel - b.kernel) * a.grid.spacing();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (diff + diff.adjoint()));
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity_with_pure(const KernelOperator& a,
                          const GridWavefunction& phi) {
  if (phi.coords() != 1 || !(phi.grid(0) == a.grid)) {
    throw ParameterError("fidelity_with_pure: grid mismatch");
  }
  const Complex value =
      phi.values().dot(a.op() * phi.values()) * a.grid.spacing();
  return std::real(value);
}

double kernel_expectation_x2(const KernelOperator& a) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < a.grid.points; ++k) {
    const double x = a.grid.x(k);
    acc += x * x * std::real(a.kernel(k, k));
  }
  return acc * a.grid.spacing();
}

double kernel_expectation_p2(const KernelOperator& a) {
  const Eigen::Index n = a.grid.points;
  const ComplexMatrix w = dft_matrix(n);
  RealVector p2(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double p = dft_momentum(a.grid, m);
    p2(m) = p * p;
  }
  // sample matrices compose like operators, so the operator trace of
  // rho P^2 is the plain diagonal sum of (kernel * spacing) * P2
  const ComplexMatrix p2_matrix = w.adjoint() * p2.asDiagonal() * w;
  return std::real((a.op() * p2_matrix).trace());
}

GaussianState::GaussianState(Eigen::Index modes_, RealVector mean_,
                             RealMatrix covariance_)
    : modes(modes_),
      mean(std::move(mean_)),
      covariance(std::move(covariance_)) {
  if (modes < 1) throw ParameterError("GaussianState: need at least one mode");
  if (mean.size() != 2 * modes || covariance.rows() != 2 * modes ||
      covariance.cols() != 2 * modes) {
    throw ParameterError("GaussianState: size mismatch");
  }
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw NumericError("GaussianState: covariance is not symmetric");
  }
  const RealVector nu = symplectic_eigenvalues();
  if (nu.minCoeff() < 0.5 - 1e-9) {
    throw NumericError("GaussianState: uncertainty bound violated (nu_min " +
                       std::to_string(nu.minCoeff()) + ")");
  }
}

RealVector GaussianState::symplectic_eigenvalues() const {
  const Eigen::Index m = modes;
  RealMatrix omega = RealMatrix::Zero(2 * m, 2 * m);
  omega.topRightCorner(m, m) = RealMatrix::Identity(m, m);
  omega.bottomLeftCorner(m, m) = -RealMatrix::Identity(m, m);
  Eigen::EigenSolver<RealMatrix> es(omega * covariance);
  std::vector<double> mags;
  mags.reserve(static_cast<std::size_t>(2 * m));
  for (Eigen::Index i = 0; i < 2 * m; ++i) {
    mags.push_back(std::abs(es.eigenvalues()(i)));
  }
  std::sort(mags.begin(), mags.end());
  RealVector nu(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    nu(i) = 0.5 * (mags[static_cast<std::size_t>(2 * i)] +
                   mags[static_cast<std::size_t>(2 * i + 1)]);
  }
  return nu;
}

Eigen::Matrix2d GaussianState::mode_covariance(Eigen::Index mode) const {
  if (mode < 0 || mode >= modes) {
    throw ParameterError("mode_covariance: mode out of range");
  }
  Eigen::Matrix2d out;
  out << covariance(mode, mode), covariance(mode, modes + mode),
      covariance(modes + mode, mode), covariance(modes + mode, modes + mode);
  return out;
}

CoordinateMap::CoordinateMap(RealMatrix m) : position(std::move(m)) {
  if (position.rows() != position.cols()) {
    throw ParameterError("CoordinateMap: matrix must be square");
  }
  if (std::abs(std::abs(position.determinant()) - 1.0) > 1e-12) {
    throw ParameterError("CoordinateMap: |det| must equal 1");
  }
}

RealMatrix CoordinateMap::momentum_action() const {
  return position.transpose().inverse();
}

ScatteringMaps scattering_compose() {
  RealMatrix s21(3, 3), s23(3, 3), s31(3, 3), r3(3, 3);
  s21 << -1, 2, 0, 0, 1, 0, 0, 0, 1;
  s23 << 1, 0, 0, 0, 1, 0, 0, 2, -1;
  s31 << -1, 0, 2, 0, 1, 0, 0, 0, 1;
  r3 << 1, 0, 0, 0, 1, 0, 0, 0, -1;
  const RealMatrix composite = s31 * s23 * s21 * r3;
  return ScatteringMaps{CoordinateMap(s21), CoordinateMap(s23),
                        CoordinateMap(s31), CoordinateMap(r3),
                        CoordinateMap(composite)};
}

KernelOperator scattering_kraus_kernel(double sigma1, double sigma2, double x,
                                       double y, const Grid1D& grid) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw ParameterError("scattering kernel: widths must be > 0");
  }
  if (sigma1 < 4.0 * grid.spacing() || 2.0 * sigma2 < 4.0 * grid.spacing()) {
    throw ResolutionError("scattering kernel: grid cannot resolve the widths");
  }
  if (sigma1 > grid.half_width || sigma2 > grid.half_width) {
    throw ResolutionError("scattering kernel: widths exceed the box");
  }
  const AnalyticGaussian alpha{sigma1, 0.0, 0.0};
  const AnalyticGaussian beta{sigma2, 0.0, 0.0};
  const Eigen::Index n = grid.points;
  ComplexMatrix kernel(n, n);
  const double scale = 1.0 / kSqrt2Pi;
  for (Eigen::Index zi = 0; zi < n; ++zi) {
    const double z = grid.x(zi);
    for (Eigen::Index wi = 0; wi < n; ++wi) {
      const double w = grid.x(wi);
      const double angle = -0.5 * y * (w - z);
      kernel(zi, wi) = scale * std::real(alpha.eval(x + w + z)) *
                       std::real(beta.eval(0.5 * (w - z))) *
                       Complex(std::cos(angle), std::sin(angle));
    }
  }
  return KernelOperator(grid, std::move(kernel));
}

KernelPositivityReport kernel_positivity(double a, double b, double d,
                                         const Grid1D& grid) {
  if (!(d > 0.0)) throw ParameterError("kernel_positivity: d must be > 0");
  if (a < 0.0 || b < 0.0) {
    throw ParameterError("kernel_positivity: a, b must be >= 0");
  }
  for (double c : {a, b}) {
    if (c > 0.0 && 1.0 / std::sqrt(c) < 3.0 * grid.spacing()) {
      throw ResolutionError("kernel_positivity: width 1/sqrt(c) unresolved");
    }
  }
  const Eigen::Index n = grid.points;
  RealMatrix kernel(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double sum = grid.x(i) + grid.x(j);
      const double diff = grid.x(i) - grid.x(j);
      kernel(i, j) = d * std::exp(-a * sum * sum - b * diff * diff);
    }
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(kernel * grid.spacing());
  KernelPositivityReport report;
  report.min_eigenvalue = es.eigenvalues().minCoeff();
  report.max_eigenvalue = es.eigenvalues().maxCoeff();
  report.regime = b > a;
  report.positive =
      report.min_eigenvalue >= -1e-8 * std::abs(report.max_eigenvalue);
  return report;
}

MuConsistencyReport mu_consistency(double sigma1, double sigma2,
                                   const Grid1D& grid) {
  MuConsistencyReport report;
  report.regime_ok = sigma1 >= 2.0 * sigma2;

  const KernelOperator k00 =
      scattering_kraus_kernel(sigma1, sigma2, 0.0, 0.0, grid);
  KernelOperator mu = k00.compose(k00);
  mu.kernel *= 2.0 * kPi;

  // independent route: reduce the two-particle state
  // phi(x, y) = alpha(x+y) beta((x-y)/2) over its second coordinate
  const AnalyticGaussian alpha{sigma1, 0.0, 0.0};
  const AnalyticGaussian beta{sigma2, 0.0, 0.0};
  const Eigen::Index n = grid.points;
  RealMatrix phi(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      phi(i, j) = std::real(alpha.eval(grid.x(i) + grid.x(j))) *
                  std::real(beta.eval(0.5 * (grid.x(i) - grid.x(j))));
    }
  }
  const RealMatrix reduced = phi * phi.transpose() * grid.spacing();
  KernelOperator rho(grid, reduced.cast<Complex>());

  const double mu_trace = mu.trace();
  const double rho_trace = rho.trace();
  if (mu_trace <= 0.0 || rho_trace <= 0.0) {
    throw NumericError("mu_consistency: degenerate traces");
  }
  mu.kernel /= mu_trace;
  rho.kernel /= rho_trace;
  report.trace_distance = trace_distance(mu, rho);
  report.purity = std::real((rho.op() * rho.op()).trace());
  report.pass = report.trace_distance <= report.tolerance;
  return report;
}

CoordinateMap entangling_map() {
  RealMatrix g(2, 2);
  g << 1.0, 1.0, 0.5, -0.5;
  return CoordinateMap(std::move(g));
}

GaussianState covariance_transform(const CoordinateMap& g, double sigma1,
                                   double sigma2) {
  if (g.position.rows() != 2) {
    throw ParameterError("covariance_transform: expected a 2x2 map");
  }
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw ParameterError("covariance_transform: widths must be > 0");
  }
  RealMatrix sigma = RealMatrix::Zero(4, 4);
  sigma(0, 0) = sigma1 * sigma1 / 2.0;
  sigma(1, 1) = sigma2 * sigma2 / 2.0;
  sigma(2, 2) = 0.5 / (sigma1 * sigma1);
  sigma(3, 3) = 0.5 / (sigma2 * sigma2);

  RealMatrix left = RealMatrix::Zero(4, 4);
  left.topLeftCorner(2, 2) = g.position.inverse();
  left.bottomRightCorner(2, 2) = g.position.transpose();
  RealMatrix right = RealMatrix::Zero(4, 4);
  right.topLeftCorner(2, 2) = g.position.transpose().inverse();
  right.bottomRightCorner(2, 2) = g.position;

  RealMatrix out = left * sigma * right;
  out = 0.5 * (out + out.transpose()).eval();
  return GaussianState(2, RealVector::Zero(4), std::move(out));
}

ThermalParams thermal_params(double sigma1, double sigma2) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw ParameterError("thermal_params: widths must be > 0");
  }
  ThermalParams params;
  const double s1 = sigma1 * sigma1;
  const double s2 = sigma2 * sigma2;
  params.m_omega = std::sqrt((4.0 / s1 + 1.0 / s2) / (s1 + 4.0 * s2));
  const double arg = 2.0 + 4.0 * s2 / s1 + s1 / (4.0 * s2);
  params.mean_phonons = std::max(0.0, 0.5 * std::sqrt(arg) - 1.0);
  params.regime_ok = sigma1 >= 2.0 * sigma2;
  return params;
}

KernelOperator thermal_state(const ThermalParams& params, std::size_t cutoff,
                             const Grid1D& grid) {
  if (!(params.m_omega > 0.0)) {
    throw ParameterError("thermal_state: m*omega must be > 0");
  }
  if (cutoff < 1) throw ParameterError("thermal_state: cutoff must be >= 1");
  const double width = 1.0 / std::sqrt(params.m_omega);
  if (width < 4.0 * grid.spacing() || width > grid.half_width / 2.0) {
    throw ResolutionError("thermal_state: oscillator width unresolved");
  }

  const double mean = params.mean_phonons;
  std::vector<double> weights;
  if (mean < 1e-12) {
    weights = {1.0};
  } else {
    // Boltzmann ratio chosen so the mixture has covariance
    // (N+1)/2 diag(1/mw, mw), i.e. occupation expectation N/2. Writing the
    // ratio as exp(-1/N') just reparameterizes the temperature.
    const double q = mean / (mean + 2.0);
    if (std::pow(q, static_cast<double>(cutoff)) > 1e-8) {
      throw ParameterError(
          "thermal_state: cutoff leaves more than 1e-8 weight");
    }
    weights.reserve(cutoff);
    for (std::size_t n = 0; n < cutoff; ++n) {
      weights.push_back((1.0 - q) * std::pow(q, static_cast<double>(n)));
    }
  }

  // normalized oscillator eigenfunctions via the stable Hermite-function
  // recurrence h_{n+1} = xi sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1}
  const Eigen::Index n_pts = grid.points;
  const auto levels = static_cast<Eigen::Index>(weights.size());
  RealMatrix h(n_pts, levels);
  const double root_mw = std::sqrt(params.m_omega);
  for (Eigen::Index k = 0; k < n_pts; ++k) {
    const double xi = root_mw * grid.x(k);
    double prev = 0.0;
    double current = std::pow(kPi, -0.25) * std::exp(-0.5 * xi * xi);
    for (Eigen::Index level = 0; level < levels; ++level) {
      h(k, level) = std::sqrt(root_mw) * current;
      const double ln = static_cast<double>(level);
      const double next = xi * std::sqrt(2.0 / (ln + 1.0)) * current -
                          std::sqrt(ln / (ln + 1.0)) * prev;
      prev = current;
      current = next;
    }
  }
  const RealVector w = Eigen::Map<const RealVector>(weights.data(), levels);
  const RealMatrix kernel = h * w.asDiagonal() * h.transpose();
  return KernelOperator(grid, kernel.cast<Complex>());
}

GridWavefunction rank_one_ancilla(const GridWavefunction& alpha) {
  if (alpha.coords() != 1) {
    throw ParameterError("rank_one_ancilla: expected a one-coordinate state");
  }
  GridWavefunction conj_alpha({alpha.grid(0)}, alpha.values().conjugate(),
                              alpha.unnormalized());
  return GridWavefunction::product(alpha, conj_alpha);
}

CvConditionalTable infhw_apply(const GridWavefunction& ancilla,
                               const GridWavefunction& psi) {
  if (ancilla.coords() != 2 || psi.coords() != 1) {
    throw ParameterError(
        "infhw_apply: need a 2-coordinate ancilla and a 1-coordinate system");
  }
  if (!(ancilla.grid(0) == psi.grid(0)) ||
      !(ancilla.grid(1) == psi.grid(0))) {
    throw ParameterError("infhw_apply: all wires must share one grid");
  }
  GridWavefunction anc =
      apply_cv_gate(ancilla, CvGate::controlled_shift_dagger(0, 1));
  anc = apply_cv_gate(anc, CvGate::fourier_dagger(0));
  GridWavefunction full = GridWavefunction::product(anc, psi);
  full = apply_cv_gate(full, CvGate::controlled_shift_dagger(1, 2));
  full = apply_cv_gate(full, CvGate::controlled_phase(0, 2));
  full = apply_cv_gate(full, CvGate::fourier_dagger(0));
  full = apply_cv_gate(full, CvGate::fourier_dagger(1));
  return CvConditionalTable{psi.grid(0), std::move(full.values())};
}

GridWavefunction CvConditionalTable::conditional(double t, double s) const {
  if (std::abs(t) > grid.half_width / 2.0 ||
      std::abs(s) > grid.half_width / 2.0) {
    throw ParameterError("conditional: outcome outside |value| <= L/2");
  }
  const Eigen::Index it = grid.nearest_index(t);
  const Eigen::Index is = grid.nearest_index(s);
  const Eigen::Index n = grid.points;
  ComplexVector values = state.segment((it * n + is) * n, n);
  return GridWavefunction({grid}, std::move(values), true);
}

double CvConditionalTable::snap_distance(double t, double s) const {
  const double dt = t - grid.x(grid.nearest_index(t));
  const double ds = s - grid.x(grid.nearest_index(s));
  return std::max(std::abs(dt), std::abs(ds));
}

double CvConditionalTable::probability_density(double t, double s) const {
  const GridWavefunction cond = conditional(t, s);
  const double norm = cond.norm();
  return norm * norm;
}

double CvConditionalTable::total_weight() const {
  const double delta = grid.spacing();
  return state.squaredNorm() * delta * delta * delta;
}

GridWavefunction infhw_kraus(const GridWavefunction& alpha,
                             const GridWavefunction& psi, double t, double s) {
  return infhw_apply(rank_one_ancilla(alpha), psi).conditional(t, s);
}

GridWavefunction coin_oracle(const GridWavefunction& alpha,
                             const GridWavefunction& psi, double t, double s) {
  if (alpha.coords() != 1 || psi.coords() != 1 ||
      !(alpha.grid(0) == psi.grid(0))) {
    throw ParameterError("coin_oracle: states must share one grid");
  }
  const Grid1D& grid = alpha.grid(0);
  if (std::abs(t) > grid.half_width / 2.0 ||
      std::abs(s) > grid.half_width / 2.0) {
    throw ParameterError("coin_oracle: outcome outside |value| <= L/2");
  }
  const Eigen::Index n = grid.points;
  const Eigen::Index shift = grid.nearest_index(t) - n / 2;
  const double s_hat = grid.x(grid.nearest_index(s));

  Complex integral(0.0, 0.0);
  for (Eigen::Index u = 0; u < n; ++u) {
    const double angle = grid.x(u) * s_hat;
    integral += std::conj(alpha.values()(wrap(u - shift, n))) *
                Complex(std::cos(angle), std::sin(angle)) * psi.values()(u);
  }
  integral *= grid.spacing();

  ComplexVector out(n);
  for (Eigen::Index z = 0; z < n; ++z) {
    const double angle = -grid.x(z) * s_hat;
    out(z) = integral / kSqrt2Pi * Complex(std::cos(angle), std::sin(angle)) *
             alpha.values()(wrap(z - shift, n));
  }
  return GridWavefunction({grid}, std::move(out), true);
}

GridWavefunction optics_kraus(const GridWavefunction& alpha,
                              const GridWavefunction& beta,
                              const GridWavefunction& psi, double x,
                              double y) {
  if (alpha.coords() != 1 || beta.coords() != 1 || psi.coords() != 1) {
    throw ParameterError("optics_kraus: expected one-coordinate states");
  }
  const Grid1D& grid = psi.grid(0);
  if (!(alpha.grid(0) == grid) || !(beta.grid(0) == grid)) {
    throw ParameterError("optics_kraus: states must share one grid");
  }
  if (std::abs(x) > grid.half_width / 4.0 ||
      std::abs(y) > grid.half_width / 4.0) {
    throw ParameterError("optics_kraus: outcome outside |value| <= L/4");
  }
  GridWavefunction pair = GridWavefunction::product(psi, alpha);
  pair = apply_cv_gate(pair, CvGate::beam_splitter(0, 1));
  pair = apply_cv_gate(pair, CvGate::fourier_dagger(1));

  const Eigen::Index ix = grid.nearest_index(x);
  const Eigen::Index iy = grid.nearest_index(y);
  const Complex coefficient = pair.values()(ix * grid.points + iy);

  const double x_hat = grid.x(ix);
  const double y_hat = grid.x(iy);
  GridWavefunction out =
      apply_cv_gate(GridWavefunction({grid}, beta.values(), true),
                    CvGate::displacement(std::numbers::sqrt2 * y_hat,
                                         std::numbers::sqrt2 * x_hat, 0));
  out.values() *= coefficient;
  return out;
}

GridWavefunction optics_oracle(const AnalyticGaussian& alpha,
                               const AnalyticGaussian& beta,
                               const GridWavefunction& psi, double x,
                               double y) {
  if (psi.coords() != 1) {
    throw ParameterError("optics_oracle: expected a one-coordinate state");
  }
  const Grid1D& grid = psi.grid(0);
  const double x_hat = grid.x(grid.nearest_index(x));
  const double y_hat = grid.x(grid.nearest_index(y));
  const double t = std::numbers::sqrt2 * x_hat;
  const double s = std::numbers::sqrt2 * y_hat;

  Complex integral(0.0, 0.0);
  for (Eigen::Index u = 0; u < grid.points; ++u) {
    const double xu = grid.x(u);
    const double angle = xu * s;
    integral += alpha.eval(xu - t) *
                Complex(std::cos(angle), std::sin(angle)) * psi.values()(u);
  }
  integral *= grid.spacing();
  // un-substituting the beam-splitter arguments leaves an extra sqrt(2)
  // and the outcome-dependent phase exp(-i x y) in front of the projected
  // state; without them the two routes differ by a constant
  const double xy = -x_hat * y_hat;
  const Complex front = std::numbers::sqrt2 / kSqrt2Pi *
                        Complex(std::cos(xy), std::sin(xy));

  ComplexVector out(grid.points);
  for (Eigen::Index z = 0; z < grid.points; ++z) {
    const double xz = grid.x(z);
    const double angle = -xz * s;
    out(z) = front * integral * Complex(std::cos(angle), std::sin(angle)) *
             beta.eval(xz - t);
  }
  return GridWavefunction({grid}, std::move(out), true);
}

OutcomeStatistics outcome_statistics(double sigma1, double sigma2,
                                     const GridWavefunction& psi) {
  if (psi.coords() != 1) {
    throw ParameterError("outcome_statistics: expected a one-coordinate state");
  }
  if (!(sigma1 >= 2.0 * sigma2)) {
    throw ParameterError("outcome_statistics: requires sigma1 >= 2 sigma2");
  }
  const Grid1D& grid = psi.grid(0);
  const Eigen::Index n = grid.points;
  const double delta = grid.spacing();

  // spectral form of sqrt(mu); the truncation keeps every mode that can
  // contribute above double precision to the densities
  const KernelOperator root_mu =
      scattering_kraus_kernel(sigma1, sigma2, 0.0, 0.0, grid);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(root_mu.op());
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(es.eigenvalues()(i)) > 1e-7 * top) kept.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(kept.size());
  ComplexMatrix modes(n, k);
  RealVector weights(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    modes.col(i) = es.eigenvectors().col(kept[static_cast<std::size_t>(i)]);
    const double c = es.eigenvalues()(kept[static_cast<std::size_t>(i)]);
    weights(i) = c * c;
  }

  // probe matrix E[m, u] = exp(i x_u s_m) maps a windowed state to its
  // momentum-outcome row
  ComplexMatrix probe(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index u = 0; u < n; ++u) {
      const double angle = grid.x(u) * grid.x(m);
      probe(m, u) = Complex(std::cos(angle), std::sin(angle));
    }
  }

  RealMatrix density(n, n);  // indexed (t, s)
  ComplexMatrix windowed(n, k);
  ComplexVector shifted(n);
  for (Eigen::Index ti = 0; ti < n; ++ti) {
    const Eigen::Index r = ti - n / 2;
    for (Eigen::Index u = 0; u < n; ++u) {
      shifted(u) = psi.values()(wrap(u + r, n));  // psi(x + t)
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      windowed.col(i) = modes.col(i).conjugate().cwiseProduct(shifted);
    }
    const ComplexMatrix rows = probe * windowed;  // n x k
    for (Eigen::Index si = 0; si < n; ++si) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        acc += weights(i) * std::norm(rows(si, i));
      }
      density(ti, si) = acc * delta;
    }
  }

  OutcomeStatistics stats;
  double total = 0.0, mean_t = 0.0, mean_s = 0.0;
  for (Eigen::Index ti = 0; ti < n; ++ti) {
    for (Eigen::Index si = 0; si < n; ++si) {
      const double p = density(ti, si) * delta * delta;
      total += p;
      mean_t += grid.x(ti) * p;
      mean_s += grid.x(si) * p;
    }
  }
  if (std::abs(total - 1.0) > 0.05) {
    throw ResolutionError(
        "outcome_statistics: more than 5% of the outcome weight left the "
        "lattice");
  }
  mean_t /= total;
  mean_s /= total;
  double var_t = 0.0, var_s = 0.0;
  for (Eigen::Index ti = 0; ti < n; ++ti) {
    for (Eigen::Index si = 0; si < n; ++si) {
      const double p = density(ti, si) * delta * delta / total;
      var_t += (grid.x(ti) - mean_t) * (grid.x(ti) - mean_t) * p;
      var_s += (grid.x(si) - mean_s) * (grid.x(si) - mean_s) * p;
    }
  }
  stats.delta_x = std::sqrt(var_t);
  stats.delta_p = std::sqrt(var_s);
  stats.product = stats.delta_x * stats.delta_p;
  stats.total_weight = total;
  stats.lattice = grid.abscissas();
  stats.density = std::move(density);
  return stats;
}

}  // namespace povmforge::contvar
