#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qcp/propagators.hpp"

using namespace qcp;

namespace {

// At t* = m L^2 / (2 pi hbar D) the ring propagator coincides with the
// sampled continuum kernel exactly (finite Gauss-sum identity), which pins
// the numeric route against the analytic formula at machine precision.
double resonant_time(const HilbertSpec& space) {
  return space.mass() * space.length() * space.length() /
         (2.0 * kPi * space.hbar() * space.dimension());
}

}  // namespace

TEST_CASE("free analytic weak value", "[propagators]") {
  const HilbertSpec space(64, 20.0);  // m = hbar = 1

  SECTION("on the classical trajectory") {
    const Complex value = free_ccp_analytic(1.3, 0.3, 1.0, 1.0, space);
    const Complex expected = std::sqrt(1.0 / (2.0 * kPi)) * std::polar(1.0, -kPi / 4.0);
    REQUIRE(std::abs(value - expected) < 1e-14);
    REQUIRE(std::abs(value) == Catch::Approx(0.3989422804014327).epsilon(1e-12));
  }

  SECTION("unit offset adds the exponent phase m delta^2 / (2 hbar t)") {
    const Complex on = free_ccp_analytic(1.3, 0.3, 1.0, 1.0, space);
    const Complex off = free_ccp_analytic(2.3, 0.3, 1.0, 1.0, space);
    REQUIRE(std::abs(off / on - std::polar(1.0, 0.5)) < 1e-13);
    REQUIRE(std::abs(off) == Catch::Approx(std::abs(on)));
  }

  SECTION("prefactor scales with mass and time") {
    const HilbertSpec heavy(64, 20.0, 1.0, 2.0);
    const Complex value = free_ccp_analytic(0.0, 0.0, 0.0, 0.5, heavy);
    REQUIRE(std::abs(value) == Catch::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-12));
  }

  SECTION("nonpositive time is rejected") {
    REQUIRE_THROWS_AS(free_ccp_analytic(0.0, 0.0, 0.0, 0.0, space), InvalidArgument);
    REQUIRE_THROWS_AS(free_ccp_analytic(0.0, 0.0, 0.0, -1.0, space), InvalidArgument);
  }
}

TEST_CASE("midpoint analytic weak value", "[propagators]") {
  const HilbertSpec space(64, 20.0);

  SECTION("classical midpoint") {
    const Complex value = midpoint_ccp_analytic(0.5, 0.0, 1.0, 1.0, space);
    const Complex expected = std::sqrt(1.0 / kPi) * std::polar(1.0, -kPi / 4.0);
    REQUIRE(std::abs(value - expected) < 1e-14);
    REQUIRE(std::abs(value) == Catch::Approx(0.5641895835477563).epsilon(1e-12));
  }

  SECTION("unit offset from the midpoint adds phase exp(i)") {
    const Complex mid = midpoint_ccp_analytic(0.5, 0.0, 1.0, 1.0, space);
    const Complex off = midpoint_ccp_analytic(1.5, 0.0, 1.0, 1.0, space);
    REQUIRE(std::abs(off / mid - std::polar(1.0, 1.0)) < 1e-13);
  }

  SECTION("prefactor for T = 2") {
    const Complex value = midpoint_ccp_analytic(0.0, 0.0, 0.0, 2.0, space);
    REQUIRE(std::abs(value) == Catch::Approx(std::sqrt(1.0 / (2.0 * kPi))).epsilon(1e-12));
  }

  SECTION("nonpositive leg time is rejected") {
    REQUIRE_THROWS_AS(midpoint_ccp_analytic(0.0, 0.0, 0.0, 0.0, space), InvalidArgument);
  }
}

TEST_CASE("ring propagator composes under the group law", "[propagators]") {
  const HilbertSpec space(64, 20.0);
  const double t = 0.4;
  for (const int delta : {0, 5, 17}) {
    Complex convolved = 0.0;
    for (int m = 0; m < 64; ++m)
      convolved += free_ring_propagator(space, 0.5 * t, delta - m) *
                   free_ring_propagator(space, 0.5 * t, m);
    const Complex direct = free_ring_propagator(space, t, delta);
    REQUIRE(std::abs(convolved - direct) < 1e-9);
  }
}

TEST_CASE("free numeric equals analytic at the resonant time", "[propagators]") {
  const HilbertSpec space(512, 40.0);
  const double t = resonant_time(space);
  const int j_0 = 160;
  const int k_0 = 9;  // p_0 = 9 dp
  const double p_0 = space.momentum_label(k_0);
  REQUIRE(std::abs(p_0 * t) < space.length() / 4.0);

  for (const int j_t : {160, 200, 256, 301, 350}) {
    const Complex numeric = free_ccp_numeric(j_t, j_0, k_0, t, space);
    const Complex analytic = free_ccp_analytic(space.position_label(j_t),
                                               space.position_label(j_0), p_0, t, space);
    REQUIRE(std::abs(numeric - analytic) < 1e-10 * std::abs(analytic));
  }
}

TEST_CASE("free numeric guards", "[propagators]") {
  const HilbertSpec space(128, 10.0);
  // k = 32 -> p = 32 dp = 32 * 2 pi / 10 ~ 20.1; displacement beyond L/4
  REQUIRE_THROWS_AS(free_ccp_numeric(64, 32, 32, 1.0, space), GuardViolation);
  REQUIRE_THROWS_AS(free_ccp_numeric(-1, 0, 0, 1.0, space), InvalidArgument);
  REQUIRE_THROWS_AS(free_ccp_numeric(0, 0, 0, 0.0, space), InvalidArgument);
}

TEST_CASE("midpoint numeric properties", "[propagators]") {
  SECTION("symmetric offsets about the midpoint give equal values") {
    const HilbertSpec space(256, 40.0);
    const double t = 0.8 * resonant_time(space);
    const int j_i = 108, j_f = 148;
    const int mid = (j_i + j_f) / 2;
    for (const int offset : {1, 4, 9}) {
      const Complex plus = midpoint_ccp_numeric(mid + offset, j_i, j_f, t, space);
      const Complex minus = midpoint_ccp_numeric(mid - offset, j_i, j_f, t, space);
      REQUIRE(std::abs(plus - minus) < 1e-12 * std::abs(plus));
    }
  }

  SECTION("completeness: sum over midpoints of P dx = 1") {
    const HilbertSpec space(512, 40.0);
    const double t = 0.6;
    const int j_i = 236, j_f = 276;
    Complex sum = 0.0;
    for (int j_m = 0; j_m < 512; ++j_m)
      sum += midpoint_ccp_numeric(j_m, j_i, j_f, t, space) * space.dx();
    REQUIRE(std::abs(sum - 1.0) < 1e-6);
  }

  SECTION("legs at quarter resonance track the analytic formula") {
    // nu_T = 1/4 puts the denominator exactly on the continuum kernel and
    // leaves ~1/(pi sqrt(2 nu D)) Fresnel truncation error in the legs
    const int d = 1 << 17;
    const HilbertSpec space(d, 256.0);
    const double t = 0.25 * space.length() * space.length() /
                     (kPi * space.hbar() * d / space.mass());
    const int j_i = d / 2 - 300, j_f = d / 2 + 300;
    const double x_i = space.position_label(j_i);
    const double x_f = space.position_label(j_f);
    for (const int j_m : {d / 2, d / 2 + 150, d / 2 - 450}) {
      const Complex numeric = midpoint_ccp_numeric(j_m, j_i, j_f, t, space);
      const Complex analytic =
          midpoint_ccp_analytic(space.position_label(j_m), x_i, x_f, t, space);
      REQUIRE(std::abs(numeric - analytic) < 5e-3 * std::abs(analytic));
    }
  }

  SECTION("guards") {
    const HilbertSpec space(128, 10.0);
    REQUIRE_THROWS_AS(midpoint_ccp_numeric(64, 10, 100, 0.1, space), GuardViolation);
    REQUIRE_THROWS_AS(midpoint_ccp_numeric(64, 60, 70, -0.1, space), InvalidArgument);
  }
}
