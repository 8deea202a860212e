#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "qcp/ccp.hpp"
#include "qcp/classical.hpp"
#include "qcp/hilbert.hpp"

namespace qcp {

// Sequential phase unwrapping: consecutive differences are folded into
// (-pi, pi] before accumulating, i.e. 2*pi*hbar jumps are inserted whenever
// a raw difference exceeds pi*hbar.
inline std::vector<double> unwrap_phases(std::span<const double> principal_args,
                                         double hbar) {
  std::vector<double> action(principal_args.size());
  if (principal_args.empty()) return action;
  action[0] = hbar * principal_args[0];
  for (std::size_t i = 1; i < principal_args.size(); ++i) {
    double diff = principal_args[i] - principal_args[i - 1];
    diff -= 2.0 * kPi * std::floor((diff + kPi) / (2.0 * kPi));
    action[i] = action[i - 1] + hbar * diff;
  }
  return action;
}

// Unwrapping for branch-mixed data. Eigenstates of real Hamiltonians are
// real, so the conditional's phase is only defined modulo pi: every node
// flips the sign and the principal phase hops by exactly pi instead of
// accumulating. Folding differences into (-pi/2, pi/2] and crediting each
// fold with branch_sign * pi turns the hops into the monotone action
// staircase whose mean slope Eq.-of-motion diagnostics need. Smooth data is
// unaffected as long as the true per-step phase advance stays below pi/2.
inline std::vector<double> unwrap_phases_folded(std::span<const double> principal_args,
                                                double hbar, int branch_sign) {
  std::vector<double> action(principal_args.size());
  if (principal_args.empty()) return action;
  action[0] = 0.0;
  for (std::size_t i = 1; i < principal_args.size(); ++i) {
    double diff = principal_args[i] - principal_args[i - 1];
    diff -= 2.0 * kPi * std::floor((diff + kPi) / (2.0 * kPi));
    double folds = 0.0;
    while (diff <= -0.5 * kPi) {
      diff += kPi;
      folds += 1.0;
    }
    while (diff > 0.5 * kPi) {
      diff -= kPi;
      folds += 1.0;
    }
    action[i] = action[i - 1] + hbar * (diff + branch_sign * folds * kPi);
  }
  return action;
}

struct GradientOptions {
  // Differencing half-width in units of the local node spacing pi*hbar/f_p;
  // the finite difference must straddle several sign flips to see the
  // staircase slope instead of individual steps.
  double node_windows = 4.0;
  double mask_fraction = 0.7;
  double eps_overlap = kDefaultOverlapEps;
};

struct GradientRow {
  int index;
  double x;
  double action;           // unwrapped S(x), branch (+) convention
  double gradient;         // central finite difference of S
  double prediction;       // branch-matched f_p(x,E) - p
  int branch;              // +1 or -1
  int stride;              // half-width in grid steps
  double rel_error;
};

struct GradientReport {
  std::vector<GradientRow> rows;
  double median_rel_error = 0.0;
  TurningPoints turning{0.0, 0.0};
  double momentum = 0.0;
};

// Eq.-of-motion diagnostic: compares the finite-difference gradient of the
// action phase of rho(x,p|E) with the classical momentum difference
// f_p(x,E) - p, row by row inside the classically allowed core.
inline GradientReport gradient_check(const StateVector& energy_state, double energy_value,
                                     const BasisSet& pb, int momentum_index,
                                     const Potential& potential,
                                     GradientOptions options = {}) {
  const HilbertSpec& space = energy_state.space();
  require_same_space(space, pb.space());
  const int d = space.dimension();
  if (momentum_index < 0 || momentum_index >= d)
    throw InvalidArgument("momentum index out of range");

  const Vector p_column = pb.matrix().col(momentum_index);
  const Complex p_e = p_column.dot(energy_state.amplitudes());  // <p|E>
  if (!(std::abs(p_e) >= options.eps_overlap))
    throw OrthogonalConditions("eigenstate orthogonal to the chosen momentum member");
  const double p_value = pb.label(momentum_index);

  // rho(x_j, p|E) = <p|x_j> psi(x_j) <E|p>; the phase is what matters here.
  std::vector<double> args(d);
  for (int j = 0; j < d; ++j) {
    const Complex rho = std::conj(p_column(j)) * energy_state.amplitude(j) * std::conj(p_e);
    args[j] = std::arg(rho);
  }
  const std::vector<double> action_plus = unwrap_phases_folded(args, space.hbar(), +1);
  const std::vector<double> action_minus = unwrap_phases_folded(args, space.hbar(), -1);

  const TurningPoints turning = find_turning_points(potential, energy_value, space);
  const double center = 0.5 * (turning.lower + turning.upper);
  const double mask_lo = center + options.mask_fraction * (turning.lower - center);
  const double mask_hi = center + options.mask_fraction * (turning.upper - center);

  GradientReport report;
  report.turning = turning;
  report.momentum = p_value;
  const double dx = space.dx();
  for (int j = 0; j < d; ++j) {
    const double x = space.position_label(j);
    if (x < mask_lo || x > mask_hi) continue;
    const double gap = energy_value - potential(x);
    if (!(gap > 0.0)) continue;
    const double f_p = std::sqrt(2.0 * space.mass() * gap);
    const int stride = std::max(
        1, static_cast<int>(std::lround(options.node_windows * kPi * space.hbar() /
                                        (f_p * dx))));
    if (j - stride < 0 || j + stride >= d) continue;

    const double fd_plus =
        (action_plus[j + stride] - action_plus[j - stride]) / (2.0 * stride * dx);
    const double fd_minus =
        (action_minus[j + stride] - action_minus[j - stride]) / (2.0 * stride * dx);
    const double pred_plus = f_p - p_value;
    const double pred_minus = -f_p - p_value;
    const double err_plus = std::abs(fd_plus - pred_plus);
    const double err_minus = std::abs(fd_minus - pred_minus);

    GradientRow row;
    row.index = j;
    row.x = x;
    row.stride = stride;
    if (err_plus <= err_minus) {
      row.branch = +1;
      row.action = action_plus[j];
      row.gradient = fd_plus;
      row.prediction = pred_plus;
      row.rel_error = err_plus / std::max(std::abs(pred_plus), 1e-12);
    } else {
      row.branch = -1;
      row.action = action_minus[j];
      row.gradient = fd_minus;
      row.prediction = pred_minus;
      row.rel_error = err_minus / std::max(std::abs(pred_minus), 1e-12);
    }
    report.rows.push_back(row);
  }
  if (report.rows.empty())
    throw NoAdmissibleRegion("no rows survive the classical-core mask");

  std::vector<double> errors;
  errors.reserve(report.rows.size());
  for (const auto& row : report.rows) errors.push_back(row.rel_error);
  std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
  report.median_rel_error = errors[errors.size() / 2];
  return report;
}

}  // namespace qcp
