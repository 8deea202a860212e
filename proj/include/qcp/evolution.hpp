#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "qcp/hilbert.hpp"

namespace qcp {

enum class EvolutionMethod { exact_spectral };

struct EvolutionSpec {
  OperatorMatrix hamiltonian;
  double time = 0.0;
  EvolutionMethod method = EvolutionMethod::exact_spectral;
};

// Exact spectral propagator U(t) = V exp(-i E t / hbar) V†. The
// decomposition is computed once and is read-only afterwards, so one
// Evolver may serve concurrent evolve() calls.
class Evolver {
 public:
  explicit Evolver(const OperatorMatrix& hamiltonian)
      : space_(hamiltonian.space()), eigen_(eigensystem(hamiltonian)) {}

  const HilbertSpec& space() const { return space_; }
  const Eigensystem& eigen() const { return eigen_; }

  StateVector evolve(const StateVector& psi, double time) const {
    require_same_space(space_, psi.space());
    if (!std::isfinite(time)) throw InvalidArgument("evolution time must be finite");
    Vector modal = eigen_.states.matrix().adjoint() * psi.amplitudes();
    for (int n = 0; n < modal.size(); ++n)
      modal(n) *= std::polar(1.0, -eigen_.energies(n) * time / space_.hbar());
    return StateVector(space_, eigen_.states.matrix() * modal, psi.label());
  }

  // U(t) as a dense matrix; O(D^3), intended for small spaces and tests.
  Matrix evolution_operator(double time) const {
    const int d = space_.dimension();
    Matrix phases = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n)
      phases(n, n) = std::polar(1.0, -eigen_.energies(n) * time / space_.hbar());
    return eigen_.states.matrix() * phases * eigen_.states.matrix().adjoint();
  }

 private:
  HilbertSpec space_;
  Eigensystem eigen_;
};

inline StateVector evolve(const StateVector& psi, const EvolutionSpec& spec) {
  return Evolver(spec.hamiltonian).evolve(psi, spec.time);
}

}  // namespace qcp
