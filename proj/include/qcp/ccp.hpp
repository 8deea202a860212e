#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qcp/hilbert.hpp"

namespace qcp {

inline constexpr double kDefaultOverlapEps = 1e-12;

// One complex conditional probability P(m|a,b) together with its polar
// decomposition: value = magnitude * exp(i S / hbar), with the action
// phase S kept on the principal branch (-pi*hbar, pi*hbar].
struct CCPValue {
  Complex value;
  double magnitude;
  double action_phase;
  std::array<std::string, 3> context;  // (m | a, b)
  Complex denominator_overlap;         // <b|a>
};

namespace detail {

inline double principal_action(Complex value, double hbar) {
  double s = hbar * std::arg(value);
  if (s <= -kPi * hbar) s += 2.0 * kPi * hbar;
  return s;
}

}  // namespace detail

// P(m|a,b) = <b|m><m|a> / <b|a>. Orthogonal pre/post-selection leaves the
// conditional undefined and is reported as an error.
inline CCPValue ccp(const StateVector& m, const StateVector& a, const StateVector& b,
                    double eps_overlap = kDefaultOverlapEps) {
  const Complex denominator = inner(b, a);
  if (!(std::abs(denominator) >= eps_overlap))
    throw OrthogonalConditions("pre- and post-selection are orthogonal: |<b|a>| = " +
                               std::to_string(std::abs(denominator)));
  const Complex value = inner(b, m) * inner(m, a) / denominator;
  return CCPValue{value, std::abs(value),
                  detail::principal_action(value, m.space().hbar()),
                  {m.label(), a.label(), b.label()}, denominator};
}

// P(x|E,p) = <p|x><x|E> / <p|E> with the exact magnitude identity
// |P(x|E,p)| = sqrt(P(p|x) P(x|E) / P(p|E)) verified on every call.
inline CCPValue action_phase_decompose(const StateVector& energy_state,
                                       const StateVector& position_state,
                                       const StateVector& momentum_state,
                                       double eps_overlap = kDefaultOverlapEps) {
  CCPValue result = ccp(position_state, energy_state, momentum_state, eps_overlap);
  const double p_given_x = std::norm(inner(momentum_state, position_state));
  const double x_given_e = std::norm(inner(position_state, energy_state));
  const double p_given_e = std::norm(result.denominator_overlap);
  const double expected = std::sqrt(p_given_x * x_given_e / p_given_e);
  if (std::abs(result.magnitude - expected) > 1e-12 * std::max(1.0, expected))
    throw NumericFailure("action-phase magnitude identity violated");
  return result;
}

// P(m|E,p0) as the sum over a complete intermediate basis,
// sum_x P(m|x,p0) P(x|E,p0). Telescopes exactly to the direct value.
inline Complex chain_rule_compose(const StateVector& m, const StateVector& energy_state,
                                  const BasisSet& intermediate,
                                  const StateVector& reference_momentum,
                                  double eps_overlap = kDefaultOverlapEps) {
  require_same_space(m.space(), energy_state.space());
  require_same_space(m.space(), intermediate.space());
  require_same_space(m.space(), reference_momentum.space());

  const Complex p0_e = inner(reference_momentum, energy_state);
  if (!(std::abs(p0_e) >= eps_overlap))
    throw OrthogonalConditions("reference momentum orthogonal to the generating state");

  const Vector p0_x = intermediate.matrix().adjoint() * reference_momentum.amplitudes();
  const Vector x_e = intermediate.matrix().adjoint() * energy_state.amplitudes();
  const Vector x_m = intermediate.matrix().adjoint() * m.amplitudes();
  const Complex p0_m = inner(reference_momentum, m);

  Complex sum = 0.0;
  for (int j = 0; j < intermediate.size(); ++j) {
    const Complex p0_xj = std::conj(p0_x(j));  // <p0|x_j>
    if (!(std::abs(p0_xj) >= eps_overlap))
      throw OrthogonalConditions("reference momentum orthogonal to intermediate member " +
                                 std::to_string(j));
    const Complex m_given_x = p0_m * std::conj(x_m(j)) / p0_xj;  // <p0|m><m|x_j>/<p0|x_j>
    const Complex x_given_e = p0_xj * x_e(j) / p0_e;             // <p0|x_j><x_j|E>/<p0|E>
    sum += m_given_x * x_given_e;
  }
  return sum;
}

// Non-overlapping block averages along the given values; the tail that does
// not fill a block is dropped.
inline std::vector<Complex> coarse_grain(std::span<const Complex> values, int window) {
  if (values.empty()) throw InvalidArgument("coarse_grain requires a non-empty input");
  if (window < 1) throw InvalidArgument("coarse_grain window must be >= 1");
  if (static_cast<std::size_t>(window) > values.size())
    throw InvalidArgument("coarse_grain window exceeds the input length");
  const std::size_t blocks = values.size() / static_cast<std::size_t>(window);
  std::vector<Complex> averaged(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    Complex sum = 0.0;
    for (int i = 0; i < window; ++i) sum += values[b * window + i];
    averaged[b] = sum / static_cast<double>(window);
  }
  return averaged;
}

inline std::vector<Complex> coarse_grain(const std::vector<Complex>& values, int window) {
  return coarse_grain(std::span<const Complex>(values), window);
}

inline std::vector<Complex> coarse_grain(std::span<const CCPValue> values, int window) {
  std::vector<Complex> raw(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) raw[i] = values[i].value;
  return coarse_grain(std::span<const Complex>(raw), window);
}

}  // namespace qcp
