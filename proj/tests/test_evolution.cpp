#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "qcp/evolution.hpp"
#include "qcp/random.hpp"

using namespace qcp;

namespace {

const auto harmonic = [](double x) { return 0.5 * x * x; };

}  // namespace

TEST_CASE("zero-time evolution is the identity", "[evolution]") {
  const HilbertSpec space(32, 12.0);
  const Evolver evolver(discretize_hamiltonian(space, harmonic));
  RandomStream stream(41);
  const StateVector psi = random_state(space, stream);
  const StateVector evolved = evolver.evolve(psi, 0.0);
  REQUIRE((evolved.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigenstates only pick up phases", "[evolution]") {
  const HilbertSpec space(64, 20.0);
  const OperatorMatrix h = discretize_hamiltonian(space, harmonic);
  const Evolver evolver(h);
  const Eigensystem& eig = evolver.eigen();

  const double t = 0.83;
  for (const int n : {0, 3, 11}) {
    const StateVector psi = eig.states.member(n);
    const StateVector evolved = evolver.evolve(psi, t);
    const Complex phase = std::polar(1.0, -eig.energies(n) * t / space.hbar());
    REQUIRE((evolved.amplitudes() - phase * psi.amplitudes()).cwiseAbs().maxCoeff() <
            1e-10);
  }
}

TEST_CASE("free evolution is diagonal in the momentum basis", "[evolution]") {
  const HilbertSpec space(32, 16.0);
  const Evolver evolver(discretize_hamiltonian(space, [](double) { return 0.0; }));
  const BasisSet pb = make_momentum_basis(space);
  RandomStream stream(43);
  const StateVector psi = random_state(space, stream);
  const double t = 1.7;

  const Vector before = pb.matrix().adjoint() * psi.amplitudes();
  const Vector after = pb.matrix().adjoint() * evolver.evolve(psi, t).amplitudes();
  for (int k = 0; k < 32; ++k) {
    const double p = space.momentum_label(k);
    const Complex phase = std::polar(1.0, -p * p * t / (2.0 * space.mass() * space.hbar()));
    REQUIRE(std::abs(after(k) - phase * before(k)) < 1e-9);
  }
}

TEST_CASE("norm preservation and the group law", "[evolution]") {
  const HilbertSpec space(48, 16.0);
  const Evolver evolver(discretize_hamiltonian(space, harmonic));
  RandomStream stream(47);
  const StateVector psi = random_state(space, stream);

  for (const double t : {0.1, 1.0, 10.0, 100.0}) {
    const StateVector evolved = evolver.evolve(psi, t);
    REQUIRE(std::abs(evolved.amplitudes().norm() - 1.0) < 1e-10);
  }

  const double t1 = 0.37, t2 = 1.91;
  const StateVector split = evolver.evolve(evolver.evolve(psi, t1), t2);
  const StateVector direct = evolver.evolve(psi, t1 + t2);
  REQUIRE((split.amplitudes() - direct.amplitudes()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("evolution operator is unitary", "[evolution]") {
  const HilbertSpec space(24, 10.0);
  const Evolver evolver(discretize_hamiltonian(space, harmonic));
  const Matrix u = evolver.evolution_operator(2.3);
  const Matrix gram = u.adjoint() * u;
  REQUIRE((gram - Matrix::Identity(24, 24)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("non-hermitian hamiltonians are rejected", "[evolution]") {
  const HilbertSpec space(2, 2.0);
  Matrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  const EvolutionSpec spec{OperatorMatrix(space, m), 1.0};
  Vector amp(2);
  amp << 1.0, 0.0;
  REQUIRE_THROWS_AS(evolve(StateVector(space, amp), spec), NonHermitian);
}

TEST_CASE("evolve free function matches the evolver", "[evolution]") {
  const HilbertSpec space(16, 8.0);
  const OperatorMatrix h = discretize_hamiltonian(space, harmonic);
  RandomStream stream(53);
  const StateVector psi = random_state(space, stream);
  const StateVector via_spec = evolve(psi, EvolutionSpec{h, 0.9});
  const StateVector via_evolver = Evolver(h).evolve(psi, 0.9);
  REQUIRE((via_spec.amplitudes() - via_evolver.amplitudes()).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("states and evolution respect normalization within the state type",
          "[evolution]") {
  // StateVector re-normalizes on construction, so evolution cannot leak norm
  const HilbertSpec space(16, 8.0);
  const Evolver evolver(discretize_hamiltonian(space, harmonic));
  RandomStream stream(59);
  StateVector psi = random_state(space, stream);
  for (int step = 0; step < 20; ++step) psi = evolver.evolve(psi, 0.31);
  REQUIRE(std::abs(psi.amplitudes().norm() - 1.0) < 1e-12);
}
