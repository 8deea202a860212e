#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "qcp/ccp.hpp"
#include "qcp/hilbert.hpp"

namespace qcp {

// psi(x) = sqrt(P(p0|E)/P(p0|x)) * P(x|E,p0) evaluated for every x. The raw
// amplitudes already carry unit norm up to rounding; the normalized form is
// returned alongside. Changing ref_index re-phases the components without
// touching |psi|^2 (the reference-momentum gauge).
struct ReconstructionResult {
  Vector raw;
  StateVector normalized;
  int ref_index;
  double reference_momentum;
};

inline ReconstructionResult reconstruct_wavefunction(const StateVector& state,
                                                     const BasisSet& xb,
                                                     const BasisSet& pb, int ref_index,
                                                     double eps_overlap = kDefaultOverlapEps) {
  require_same_space(state.space(), xb.space());
  require_same_space(state.space(), pb.space());
  const int d = state.dimension();
  if (ref_index < 0 || ref_index >= d)
    throw InvalidArgument("reference index out of range");

  const Vector p0 = pb.matrix().col(ref_index);
  const Complex p0_e = p0.dot(state.amplitudes());  // <p0|E>
  if (!(std::abs(p0_e) >= eps_overlap))
    throw ZeroReferenceOverlap("generating state orthogonal to the reference momentum");

  const Vector x_amp = xb.matrix().adjoint() * state.amplitudes();  // <x|E>
  Vector raw(d);
  for (int j = 0; j < d; ++j) {
    const Complex p0_x = p0.dot(xb.matrix().col(j));  // <p0|x_j>
    if (!(std::abs(p0_x) >= eps_overlap))
      throw ZeroReferenceOverlap("reference momentum orthogonal to position member " +
                                 std::to_string(j));
    const Complex conditional = p0_x * x_amp(j) / p0_e;  // P(x|E,p0)
    raw(j) = std::abs(p0_e) / std::abs(p0_x) * conditional;
  }

  StateVector normalized(state.space(), raw, state.label() + " (reconstructed)");
  return ReconstructionResult{std::move(raw), std::move(normalized), ref_index,
                              pb.label(ref_index)};
}

// Phase that best aligns the reconstruction with the target amplitudes,
// phi = arg sum_x conj(psi_rec(x)) <x|E>.
inline double optimal_global_phase(const Vector& reconstructed, const Vector& target) {
  return std::arg(reconstructed.dot(target));
}

}  // namespace qcp
