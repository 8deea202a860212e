#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "qcp/hilbert.hpp"

namespace qcp {

// SplitMix64 (Steele/Vigna). Small state, full 64-bit period, and a
// declared splitting rule, which keeps every draw reproducible across
// platforms and thread counts; std::random distributions are
// implementation-defined and are deliberately avoided.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  // Stream for one Monte Carlo trial: seed = mix(master + (index+1) * gamma).
  static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    return RandomStream(mix(master_seed + (trial_index + 1) * kGamma));
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // uniform in [0, 1)
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; always consumes exactly two draws
  double normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

inline StateVector random_state(const HilbertSpec& space, RandomStream& stream,
                                std::string label = "random") {
  Vector amplitudes(space.dimension());
  for (int j = 0; j < space.dimension(); ++j) amplitudes(j) = stream.complex_normal();
  return StateVector(space, std::move(amplitudes), std::move(label));
}

inline OperatorMatrix random_hermitian(const HilbertSpec& space, RandomStream& stream) {
  const int d = space.dimension();
  Matrix a(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) a(r, c) = stream.complex_normal();
  Matrix h = 0.5 * (a + a.adjoint());
  return OperatorMatrix(space, std::move(h));
}

// Haar-style random orthonormal basis: QR of a Gaussian matrix with the
// R diagonal phase fixed so the result is deterministic.
inline BasisSet random_orthonormal_basis(const HilbertSpec& space, RandomStream& stream) {
  const int d = space.dimension();
  Matrix g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = stream.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < d; ++c) {
    const Complex diag = r(c, c);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(c) *= diag / mag;
  }
  RealVector labels = RealVector::LinSpaced(d, 0.0, d - 1.0);
  return BasisSet(space, std::move(q), std::move(labels), BasisKind::custom,
                  /*verify=*/false);
}

}  // namespace qcp
