#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "qcp/hilbert.hpp"

namespace qcp {

using Potential = std::function<double(double)>;

namespace detail {

// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
// Legendre recurrence.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline QuadratureRule gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

inline double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int iter = 0; iter < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo) + std::abs(hi));
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Classically allowed interval [lower, upper] where V(x) <= E, located by a
// grid scan plus bisection. Requires a single closed interval strictly
// inside the box.
struct TurningPoints {
  double lower;
  double upper;
};

inline TurningPoints find_turning_points(const Potential& potential, double energy,
                                         const HilbertSpec& space) {
  const int d = space.dimension();
  std::vector<char> allowed(d);
  int first = -1, last = -1, runs = 0;
  for (int j = 0; j < d; ++j) {
    allowed[j] = potential(space.position_label(j)) < energy ? 1 : 0;
    if (allowed[j] && (j == 0 || !allowed[j - 1])) ++runs;
    if (allowed[j]) {
      if (first < 0) first = j;
      last = j;
    }
  }
  if (first < 0)
    throw NoAllowedRegion("no grid point with V(x) < E; no classically allowed region");
  if (runs > 1)
    throw InvalidArgument("potential has multiple allowed intervals at this energy");
  if (first == 0 || last == d - 1)
    throw OpenOrbit("allowed region touches the box boundary; orbit is not closed");

  const auto gap = [&](double x) { return energy - potential(x); };
  const double lower =
      detail::bisect_root(gap, space.position_label(first - 1), space.position_label(first));
  const double upper =
      detail::bisect_root(gap, space.position_label(last), space.position_label(last + 1));
  return TurningPoints{lower, upper};
}

// Microcanonical position marginal of delta(E - H)/T for one closed orbit.
// The marginal is stored as exact per-cell averages, (2/T) * (time spent in
// the cell) / dx, so the discrete normalization sum P dx = 1 holds to
// quadrature accuracy even though 1/|v| diverges at the turning points.
struct ClassicalDensity {
  double energy;
  RealVector marginal;  // P(x_j|E), cell-averaged
  double period;
  TurningPoints turning;
};

namespace detail {

// Orbit-time integrand after x = c + r sin(theta); finite at the endpoints.
class OrbitTimeIntegrand {
 public:
  OrbitTimeIntegrand(const Potential& potential, double energy, double mass,
                     TurningPoints turning)
      : potential_(potential), energy_(energy), mass_(mass),
        center_(0.5 * (turning.lower + turning.upper)),
        radius_(0.5 * (turning.upper - turning.lower)) {}

  double operator()(double theta) const {
    const double x = center_ + radius_ * std::sin(theta);
    const double gap = energy_ - potential_(x);
    if (!(gap > 0.0))
      throw NumericFailure("orbit integrand hit a non-positive energy gap");
    return std::sqrt(0.5 * mass_) * radius_ * std::cos(theta) / std::sqrt(gap);
  }

  double theta_of(double x) const {
    const double s = std::clamp((x - center_) / radius_, -1.0, 1.0);
    return std::asin(s);
  }

 private:
  const Potential& potential_;
  double energy_;
  double mass_;
  double center_;
  double radius_;
};

inline double integrate(const OrbitTimeIntegrand& f, double lo, double hi,
                        const QuadratureRule& rule) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

}  // namespace detail

inline ClassicalDensity classical_density(const Potential& potential, double energy,
                                          const HilbertSpec& space) {
  const TurningPoints turning = find_turning_points(potential, energy, space);
  const detail::OrbitTimeIntegrand integrand(potential, energy, space.mass(), turning);

  // Half period, adaptively refined until two successive orders agree.
  double half_period = 0.0;
  double previous = -1.0;
  for (int n = 64; n <= 4096; n *= 2) {
    half_period = detail::integrate(integrand, -0.5 * kPi, 0.5 * kPi,
                                    detail::gauss_legendre(n));
    if (previous >= 0.0 && std::abs(half_period - previous) <= 5e-13 * half_period) break;
    previous = half_period;
  }
  const double period = 2.0 * half_period;

  const int d = space.dimension();
  RealVector marginal = RealVector::Zero(d);
  const auto cell_rule = detail::gauss_legendre(16);
  for (int j = 0; j < d; ++j) {
    const double left = std::max(space.position_label(j) - 0.5 * space.dx(), turning.lower);
    const double right = std::min(space.position_label(j) + 0.5 * space.dx(), turning.upper);
    if (right <= left) continue;
    const double cell_time = detail::integrate(integrand, integrand.theta_of(left),
                                               integrand.theta_of(right), cell_rule);
    marginal(j) = 2.0 * cell_time / (period * space.dx());
  }
  return ClassicalDensity{energy, std::move(marginal), period, turning};
}

// f_p(x, E): the classical momentum solving H(x, f_p) = E, on the requested
// branch.
inline double classical_momentum_branch(const Potential& potential, double energy,
                                        double x, int sign, const HilbertSpec& space) {
  if (sign != 1 && sign != -1) throw InvalidArgument("branch sign must be +1 or -1");
  const double gap = energy - potential(x);
  if (gap < 0.0)
    throw ForbiddenRegion("x lies outside the classically allowed region");
  return sign * std::sqrt(2.0 * space.mass() * gap);
}

// Classical conditional position distribution given (E, p): the microcanonical
// weight delta(E - p^2/2m - V(x)) collapses onto the solutions of
// V(x) = E - p^2/2m, each carrying mass 1/|V'(x*)|, assigned to the nearest
// grid cell and normalized.
inline RealVector classical_position_conditional(const Potential& potential, double energy,
                                                 double momentum, const HilbertSpec& space) {
  const double reduced = energy - momentum * momentum / (2.0 * space.mass());
  const TurningPoints roots = find_turning_points(potential, reduced, space);

  const int d = space.dimension();
  RealVector distribution = RealVector::Zero(d);
  double total = 0.0;
  for (const double x_star : {roots.lower, roots.upper}) {
    const double h = 1e-6 * std::max(1.0, std::abs(x_star));
    const double slope = (potential(x_star + h) - potential(x_star - h)) / (2.0 * h);
    if (!(std::abs(slope) > 1e-12))
      throw NumericFailure("potential is stationary at a conditional support point");
    const double weight = 1.0 / std::abs(slope);
    int j = static_cast<int>(std::lround((x_star + 0.5 * space.length()) / space.dx()));
    j = std::clamp(j, 0, d - 1);
    distribution(j) += weight;
    total += weight;
  }
  return distribution / total;
}

}  // namespace qcp
