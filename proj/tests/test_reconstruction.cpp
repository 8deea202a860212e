#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "qcp/reconstruction.hpp"
#include "qcp/random.hpp"

using namespace qcp;

namespace {

double max_deviation_after_phase(const Vector& reconstructed, const Vector& target) {
  const double phi = optimal_global_phase(reconstructed, target);
  return (reconstructed * std::polar(1.0, phi) - target).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("two-point reconstructions", "[reconstruction]") {
  const HilbertSpec space(2, 2.0);
  const BasisSet xb = make_position_basis(space);
  const BasisSet pb = make_momentum_basis(space);

  SECTION("basis state with the zero-momentum reference") {
    Vector amp(2);
    amp << 0.0, 1.0;
    const StateVector e(space, amp, "E");
    const ReconstructionResult result = reconstruct_wavefunction(e, xb, pb, 0);
    REQUIRE(max_deviation_after_phase(result.raw, e.amplitudes()) < 1e-12);
    REQUIRE(result.reference_momentum == Catch::Approx(0.0));
  }

  SECTION("gauge change re-phases components but preserves probabilities") {
    Vector amp(2);
    amp << 1.0, Complex(0.0, 1.0);
    const StateVector e(space, amp, "E");
    const ReconstructionResult ref0 = reconstruct_wavefunction(e, xb, pb, 0);
    const ReconstructionResult ref1 = reconstruct_wavefunction(e, xb, pb, 1);

    REQUIRE(max_deviation_after_phase(ref0.raw, e.amplitudes()) < 1e-12);
    for (int j = 0; j < 2; ++j)
      REQUIRE(std::abs(std::norm(ref0.raw(j)) - std::norm(ref1.raw(j))) < 1e-12);

    // hand computation of the k~=1 gauge: component phases shift by -2 pi j / D
    const double relative0 = std::arg(ref0.raw(1) / ref0.raw(0));
    const double relative1 = std::arg(ref1.raw(1) / ref1.raw(0));
    REQUIRE(std::abs(relative1 - (relative0 - kPi)) < 1e-12);
  }
}

TEST_CASE("reconstruction matches eigenstates up to a global phase", "[reconstruction]") {
  const HilbertSpec space(128, 30.0);
  const BasisSet xb = make_position_basis(space);
  const BasisSet pb = make_momentum_basis(space);
  RandomStream stream(31);

  for (int rep = 0; rep < 3; ++rep) {
    const StateVector e = random_state(space, stream, "E");
    const ReconstructionResult result = reconstruct_wavefunction(e, xb, pb, 0);
    REQUIRE(max_deviation_after_phase(result.raw, e.amplitudes()) < 1e-10);
    for (int j = 0; j < 128; ++j)
      REQUIRE(std::abs(std::norm(result.raw(j)) - std::norm(e.amplitude(j))) < 1e-12);
    REQUIRE(std::abs(result.raw.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("reconstruction guards", "[reconstruction]") {
  const HilbertSpec space(4, 4.0);
  const BasisSet xb = make_position_basis(space);
  const BasisSet pb = make_momentum_basis(space);

  Vector amp(4);
  amp << 1.0, -1.0, 1.0, -1.0;  // orthogonal to p = 0
  const StateVector e(space, amp, "alternating");
  REQUIRE_THROWS_AS(reconstruct_wavefunction(e, xb, pb, 0), ZeroReferenceOverlap);
  REQUIRE_THROWS_AS(reconstruct_wavefunction(e, xb, pb, 99), InvalidArgument);
}
