#pragma once

#include <cmath>
#include <complex>

#include "qcp/hilbert.hpp"

namespace qcp {

// Continuum weak-value density for free propagation,
// P(x_t|x_0,p_0) = sqrt(-i m / (2 pi hbar t)) exp(i m (x_t-x_0-p_0 t/m)^2 / (2 hbar t)).
// The magnitude sqrt(m / (2 pi hbar t)) is position-independent.
inline Complex free_ccp_analytic(double x_t, double x_0, double p_0, double t,
                                 const HilbertSpec& space) {
  if (!(t > 0.0)) throw InvalidArgument("propagation time must be positive");
  const double m = space.mass();
  const double hbar = space.hbar();
  const double offset = x_t - x_0 - p_0 * t / m;
  const Complex prefactor = std::sqrt(Complex(0.0, -m / (2.0 * kPi * hbar * t)));
  return prefactor * std::polar(1.0, m * offset * offset / (2.0 * hbar * t));
}

// Continuum midpoint weak value,
// P(x_m|x_i,x_f) = sqrt(-i m / (pi hbar T)) exp(i m (x_m-(x_i+x_f)/2)^2 / (hbar T)).
inline Complex midpoint_ccp_analytic(double x_m, double x_i, double x_f, double t_leg,
                                     const HilbertSpec& space) {
  if (!(t_leg > 0.0)) throw InvalidArgument("propagation time must be positive");
  const double m = space.mass();
  const double hbar = space.hbar();
  const double offset = x_m - 0.5 * (x_i + x_f);
  const Complex prefactor = std::sqrt(Complex(0.0, -m / (kPi * hbar * t_leg)));
  return prefactor * std::polar(1.0, m * offset * offset / (hbar * t_leg));
}

// <x_{j+dj}|U(t)|x_j> for the free Hamiltonian on the ring, evaluated as the
// exact spectral mode sum (1/D) sum_k exp(i 2 pi dj k~ / D - i p_k^2 t / 2 m hbar).
// This is bit-for-bit the evolution generated by discretize_hamiltonian with
// zero potential, whose kinetic term is diagonal in the DFT basis.
inline Complex free_ring_propagator(const HilbertSpec& space, double t, int delta_j) {
  const int d = space.dimension();
  const double m = space.mass();
  const double hbar = space.hbar();
  Complex sum = 0.0;
  for (int k = 0; k < d; ++k) {
    const std::int64_t rem =
        ((static_cast<std::int64_t>(space.signed_frequency(k)) * delta_j) % d + d) % d;
    const double lattice_phase = 2.0 * kPi * static_cast<double>(rem) / d;
    const double p = space.momentum_label(k);
    sum += std::polar(1.0, lattice_phase - p * p * t / (2.0 * m * hbar));
  }
  return sum / static_cast<double>(d);
}

// Numerical counterpart of free_ccp_analytic built from the projector weak
// value <p_0|U†(t)|x_t><x_t|U(t)|x_0> / <p_0|x_0>, divided by dx so the
// discrete value is comparable to the continuum density.
inline Complex free_ccp_numeric(int j_t, int j_0, int k_0, double t,
                                const HilbertSpec& space) {
  const int d = space.dimension();
  if (j_t < 0 || j_t >= d || j_0 < 0 || j_0 >= d)
    throw InvalidArgument("grid index out of range");
  if (k_0 < 0 || k_0 >= d) throw InvalidArgument("momentum index out of range");
  if (!(t > 0.0)) throw InvalidArgument("propagation time must be positive");

  const double p_0 = space.momentum_label(k_0);
  if (!(std::abs(p_0 * t / space.mass()) < space.length() / 4.0))
    throw GuardViolation("classical displacement |p_0 t / m| exceeds L/4");

  // <p_0|U†(t)|x_t> = exp(i p_0^2 t / 2 m hbar) conj(<x_t|p_0>)
  const Complex bra_part =
      std::polar(1.0, p_0 * p_0 * t / (2.0 * space.mass() * space.hbar())) *
      std::conj(dft_amplitude(space, j_t, k_0));
  const Complex kernel = free_ring_propagator(space, t, j_t - j_0);
  const Complex denominator = std::conj(dft_amplitude(space, j_0, k_0));
  return bra_part * kernel / denominator / space.dx();
}

// Numerical counterpart of midpoint_ccp_analytic,
// <x_f|U(T)|x_m><x_m|U(T)|x_i> / <x_f|U(2T)|x_i> / dx.
inline Complex midpoint_ccp_numeric(int j_m, int j_i, int j_f, double t_leg,
                                    const HilbertSpec& space) {
  const int d = space.dimension();
  if (j_m < 0 || j_m >= d || j_i < 0 || j_i >= d || j_f < 0 || j_f >= d)
    throw InvalidArgument("grid index out of range");
  if (!(t_leg > 0.0)) throw InvalidArgument("propagation time must be positive");
  if (!(std::abs(space.position_label(j_f) - space.position_label(j_i)) <
        space.length() / 4.0))
    throw GuardViolation("endpoint separation |x_f - x_i| exceeds L/4");

  const Complex leg_out = free_ring_propagator(space, t_leg, j_f - j_m);
  const Complex leg_in = free_ring_propagator(space, t_leg, j_m - j_i);
  const Complex full = free_ring_propagator(space, 2.0 * t_leg, j_f - j_i);
  if (!(std::abs(full) >= 1e-300))
    throw NumericFailure("end-to-end propagator vanishes; midpoint weak value undefined");
  return leg_out * leg_in / full / space.dx();
}

}  // namespace qcp
