#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qcp/errors.hpp"

namespace qcp {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;

// A discretized 1-D system on a periodic grid of D points spanning
// [-L/2, L/2). Momentum labels follow the signed DFT frequency
// convention k~ in (-D/2, D/2], so p = 0 is always an exact basis member.
class HilbertSpec {
 public:
  HilbertSpec(int dimension, double length, double hbar = 1.0, double mass = 1.0)
      : dimension_(dimension), length_(length), hbar_(hbar), mass_(mass) {
    if (dimension_ < 2) throw InvalidSpec("dimension must satisfy D >= 2");
    if (!(length_ > 0.0)) throw InvalidSpec("length must be positive");
    if (!(hbar_ > 0.0)) throw InvalidSpec("hbar must be positive");
    if (!(mass_ > 0.0)) throw InvalidSpec("mass must be positive");
  }

  int dimension() const { return dimension_; }
  double length() const { return length_; }
  double hbar() const { return hbar_; }
  double mass() const { return mass_; }

  double dx() const { return length_ / dimension_; }
  double dp() const { return 2.0 * kPi * hbar_ / length_; }

  double position_label(int j) const { return -0.5 * length_ + j * dx(); }

  // Signed frequency index in (-D/2, D/2] for DFT column k in [0, D).
  int signed_frequency(int k) const {
    return k <= dimension_ / 2 ? k : k - dimension_;
  }

  double momentum_label(int k) const { return signed_frequency(k) * dp(); }

  friend bool operator==(const HilbertSpec&, const HilbertSpec&) = default;

 private:
  int dimension_;
  double length_;
  double hbar_;
  double mass_;
};

// Normalized pure state. Construction normalizes the amplitudes and
// rejects the zero vector; instances are immutable afterwards.
class StateVector {
 public:
  StateVector(HilbertSpec space, Vector amplitudes, std::string label = {})
      : space_(space), amplitudes_(std::move(amplitudes)), label_(std::move(label)) {
    if (amplitudes_.size() != space_.dimension())
      throw DimensionMismatch("amplitude count does not match space dimension");
    const double norm = amplitudes_.norm();
    if (!(norm > 1e-150)) throw ZeroVector("cannot normalize a zero state vector");
    amplitudes_ /= norm;
  }

  const HilbertSpec& space() const { return space_; }
  const Vector& amplitudes() const { return amplitudes_; }
  const std::string& label() const { return label_; }
  int dimension() const { return space_.dimension(); }
  Complex amplitude(int j) const { return amplitudes_(j); }

 private:
  HilbertSpec space_;
  Vector amplitudes_;
  std::string label_;
};

inline void require_same_space(const HilbertSpec& a, const HilbertSpec& b) {
  if (!(a == b)) throw DimensionMismatch("states live in different spaces");
}

// <u|v>, conjugate-linear in the first argument.
inline Complex inner(const StateVector& u, const StateVector& v) {
  require_same_space(u.space(), v.space());
  return u.amplitudes().dot(v.amplitudes());
}

enum class BasisKind { position, momentum, energy, custom };

inline std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::position: return "position";
    case BasisKind::momentum: return "momentum";
    case BasisKind::energy: return "energy";
    case BasisKind::custom: return "custom";
  }
  return "custom";
}

// Orthonormal family of D states with real physical labels. Column k of
// matrix() holds the position-representation amplitudes of member k.
class BasisSet {
 public:
  // `verify` runs the O(D^3) orthonormality check; internal factories with
  // structurally orthonormal columns skip it.
  BasisSet(HilbertSpec space, Matrix columns, RealVector labels, BasisKind kind,
           bool verify = true)
      : space_(space), columns_(std::move(columns)), labels_(std::move(labels)),
        kind_(kind) {
    const int d = space_.dimension();
    if (columns_.rows() != d || columns_.cols() != d)
      throw DimensionMismatch("basis matrix must be D x D");
    if (labels_.size() != d)
      throw DimensionMismatch("basis needs one label per member");
    if (verify) {
      const double residual = orthonormality_residual();
      if (!(residual < 1e-10))
        throw InvalidArgument("basis columns are not orthonormal (residual " +
                              std::to_string(residual) + ")");
    }
  }

  const HilbertSpec& space() const { return space_; }
  const Matrix& matrix() const { return columns_; }
  const RealVector& labels() const { return labels_; }
  double label(int k) const { return labels_(k); }
  BasisKind kind() const { return kind_; }
  int size() const { return space_.dimension(); }

  StateVector member(int k) const {
    return StateVector(space_, columns_.col(k), to_string(kind_) + "[" + std::to_string(k) + "]");
  }

  // max-entry deviation of B†B from the identity
  double orthonormality_residual() const {
    Matrix gram = columns_.adjoint() * columns_;
    gram.diagonal().array() -= 1.0;
    return gram.cwiseAbs().maxCoeff();
  }

 private:
  HilbertSpec space_;
  Matrix columns_;
  RealVector labels_;
  BasisKind kind_;
};

// Standard grid basis: member j is the unit vector at grid point j,
// labeled x_j = -L/2 + j dx.
inline BasisSet make_position_basis(const HilbertSpec& space) {
  const int d = space.dimension();
  RealVector labels(d);
  for (int j = 0; j < d; ++j) labels(j) = space.position_label(j);
  return BasisSet(space, Matrix::Identity(d, d), std::move(labels),
                  BasisKind::position, /*verify=*/false);
}

// <x_j|p_k> = exp(i 2 pi j k~ / D) / sqrt(D). The angle is reduced with
// integer arithmetic so the matrix is reproducible bit-for-bit.
inline Complex dft_amplitude(const HilbertSpec& space, int j, int k) {
  const int d = space.dimension();
  const std::int64_t prod =
      static_cast<std::int64_t>(j) * static_cast<std::int64_t>(space.signed_frequency(k));
  const std::int64_t rem = ((prod % d) + d) % d;
  const double angle = 2.0 * kPi * static_cast<double>(rem) / d;
  return std::polar(1.0 / std::sqrt(static_cast<double>(d)), angle);
}

inline BasisSet make_momentum_basis(const HilbertSpec& space) {
  const int d = space.dimension();
  Matrix u(d, d);
  RealVector labels(d);
  for (int k = 0; k < d; ++k) {
    labels(k) = space.momentum_label(k);
    for (int j = 0; j < d; ++j) u(j, k) = dft_amplitude(space, j, k);
  }
  return BasisSet(space, std::move(u), std::move(labels), BasisKind::momentum,
                  /*verify=*/false);
}

// D x D operator in the position representation. Hermiticity is detected
// on construction (max |H - H†| entry < 1e-10).
class OperatorMatrix {
 public:
  OperatorMatrix(HilbertSpec space, Matrix entries)
      : space_(space), entries_(std::move(entries)) {
    const int d = space_.dimension();
    if (entries_.rows() != d || entries_.cols() != d)
      throw DimensionMismatch("operator matrix must be D x D");
    hermiticity_residual_ = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    hermitian_ = hermiticity_residual_ < 1e-10;
  }

  const HilbertSpec& space() const { return space_; }
  const Matrix& entries() const { return entries_; }
  bool hermitian() const { return hermitian_; }
  double hermiticity_residual() const { return hermiticity_residual_; }

  StateVector apply(const StateVector& psi) const {
    require_same_space(space_, psi.space());
    return StateVector(space_, entries_ * psi.amplitudes(), psi.label());
  }

 private:
  HilbertSpec space_;
  Matrix entries_;
  bool hermitian_ = false;
  double hermiticity_residual_ = 0.0;
};

// H = kinetic + diag(V(x_j)) with the kinetic term built spectrally: its
// momentum-basis eigenvalues are exactly p_k^2 / 2m. The kinetic matrix is a
// real circulant; the mirrored lookup keeps it symmetric to the last bit.
inline OperatorMatrix discretize_hamiltonian(const HilbertSpec& space,
                                             const std::function<double(double)>& potential) {
  const int d = space.dimension();
  std::vector<double> kinetic_row(d);
  for (int delta = 0; delta <= d / 2; ++delta) {
    double sum = 0.0;
    for (int k = 0; k < d; ++k) {
      const double p = space.momentum_label(k);
      const std::int64_t rem =
          (static_cast<std::int64_t>(space.signed_frequency(k)) * delta % d + d) % d;
      sum += p * p / (2.0 * space.mass()) *
             std::cos(2.0 * kPi * static_cast<double>(rem) / d);
    }
    kinetic_row[delta] = sum / d;
    if (delta != 0 && delta != d - delta) kinetic_row[d - delta] = kinetic_row[delta];
  }

  Matrix h(d, d);
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l)
      h(j, l) = Complex(kinetic_row[(j - l + d) % d], 0.0);

  for (int j = 0; j < d; ++j) {
    const double v = potential(space.position_label(j));
    if (!std::isfinite(v))
      throw NonFinitePotential("potential is not finite at x = " +
                               std::to_string(space.position_label(j)));
    h(j, j) += v;
  }
  return OperatorMatrix(space, std::move(h));
}

struct Eigensystem {
  RealVector energies;  // ascending
  BasisSet states;      // kind = energy, labels = energies
};

namespace detail {

// Global phase convention: rotate so the largest-magnitude component is
// real positive (first index wins ties), then pin that component exactly.
inline void fix_phase(Eigen::Ref<Vector> v) {
  int arg_max = 0;
  double best = std::abs(v(0));
  for (int j = 1; j < v.size(); ++j) {
    const double mag = std::abs(v(j));
    if (mag > best) {
      best = mag;
      arg_max = j;
    }
  }
  const Complex pivot = v(arg_max);
  const double mag = std::abs(pivot);
  if (mag > 0.0) v *= std::conj(pivot) / mag;
  v(arg_max) = Complex(std::abs(v(arg_max)), 0.0);
}

inline bool lexicographic_less(const Vector& a, const Vector& b) {
  for (int j = 0; j < a.size(); ++j) {
    if (a(j).real() != b(j).real()) return a(j).real() < b(j).real();
    if (a(j).imag() != b(j).imag()) return a(j).imag() < b(j).imag();
  }
  return false;
}

}  // namespace detail

// Full spectral decomposition with a deterministic phase and degeneracy
// convention. Real-symmetric inputs take the faster real solver path.
inline Eigensystem eigensystem(const OperatorMatrix& op) {
  if (!op.hermitian())
    throw NonHermitian("eigensystem requires a Hermitian operator (residual " +
                       std::to_string(op.hermiticity_residual()) + ")");
  const int d = op.space().dimension();
  const Matrix& h = op.entries();

  RealVector energies(d);
  Matrix vectors(d, d);
  const double scale = h.cwiseAbs().maxCoeff();
  if (h.imag().cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, scale)) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h.real());
    if (solver.info() != Eigen::Success)
      throw NumericFailure("real eigensolver failed to converge");
    energies = solver.eigenvalues();
    vectors = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success)
      throw NumericFailure("complex eigensolver failed to converge");
    energies = solver.eigenvalues();
    vectors = solver.eigenvectors();
  }

  for (int n = 0; n < d; ++n) detail::fix_phase(vectors.col(n));

  // Order degenerate clusters by lexicographic amplitude comparison.
  const double tol = 1e-12 * std::max(1.0, energies.cwiseAbs().maxCoeff());
  int start = 0;
  while (start < d) {
    int stop = start + 1;
    while (stop < d && energies(stop) - energies(stop - 1) <= tol) ++stop;
    if (stop - start > 1) {
      std::vector<Vector> cluster;
      cluster.reserve(stop - start);
      for (int n = start; n < stop; ++n) cluster.push_back(vectors.col(n));
      std::sort(cluster.begin(), cluster.end(), detail::lexicographic_less);
      for (int n = start; n < stop; ++n) vectors.col(n) = cluster[n - start];
    }
    start = stop;
  }

  BasisSet states(op.space(), std::move(vectors), energies, BasisKind::energy,
                  /*verify=*/false);
  return Eigensystem{std::move(energies), std::move(states)};
}

}  // namespace qcp
