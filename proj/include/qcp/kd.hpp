#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qcp/ccp.hpp"
#include "qcp/hilbert.hpp"

namespace qcp {

// Kirkwood-Dirac quasiprobability rho(x,p|E) = <p|x><x|E><E|p>.
// Rows run over the first (position-like) basis, columns over the second
// (momentum-like) one. Row sums are the Born probabilities P(x|E), column
// sums P(p|E), and the total is 1.
struct KDDistribution {
  Matrix matrix;            // (row j, col k) = <p_k|x_j><x_j|E><E|p_k>
  RealVector row_labels;    // x values
  RealVector column_labels; // p values
  std::string generating_label;

  Complex total() const { return matrix.sum(); }
  Vector row_marginals() const { return matrix.rowwise().sum(); }
  Vector column_marginals() const { return matrix.colwise().sum().transpose(); }
};

inline KDDistribution kd_distribution(const StateVector& state, const BasisSet& xb,
                                      const BasisSet& pb) {
  require_same_space(state.space(), xb.space());
  require_same_space(state.space(), pb.space());

  const Vector x_amp = xb.matrix().adjoint() * state.amplitudes();  // <x_j|E>
  const Vector p_amp = pb.matrix().adjoint() * state.amplitudes();  // <p_k|E>
  const Matrix cross = pb.matrix().adjoint() * xb.matrix();         // <p_k|x_j>

  const int d = state.dimension();
  Matrix rho(d, d);
  for (int k = 0; k < d; ++k) {
    const Complex e_p = std::conj(p_amp(k));  // <E|p_k>
    for (int j = 0; j < d; ++j) rho(j, k) = cross(k, j) * x_amp(j) * e_p;
  }
  return KDDistribution{std::move(rho), xb.labels(), pb.labels(), state.label()};
}

// Pointwise test of |P(x|E,p)|^2 P(p|E) = P(p|x) P(x|E). Columns with
// |<p|E>| below eps are excluded rather than treated as errors so a full
// (x,p) scan survives isolated orthogonal post-selections.
struct ErgodicityReport {
  RealMatrix residuals;       // (j,k); zero where excluded
  std::vector<char> column_excluded;
  double max_residual = 0.0;  // over non-excluded entries
  RealVector p_given_e;       // P(p|E)
  RealVector x_given_e;       // P(x|E)
  RealMatrix p_given_x;       // (j,k) = |<p_k|x_j>|^2
};

inline ErgodicityReport ergodicity_check(const StateVector& state, const BasisSet& xb,
                                         const BasisSet& pb,
                                         double eps_overlap = kDefaultOverlapEps) {
  require_same_space(state.space(), xb.space());
  require_same_space(state.space(), pb.space());

  const Vector x_amp = xb.matrix().adjoint() * state.amplitudes();
  const Vector p_amp = pb.matrix().adjoint() * state.amplitudes();
  const Matrix cross = pb.matrix().adjoint() * xb.matrix();

  const int d = state.dimension();
  ErgodicityReport report;
  report.residuals = RealMatrix::Zero(d, d);
  report.column_excluded.assign(d, 0);
  report.p_given_e = p_amp.cwiseAbs2();
  report.x_given_e = x_amp.cwiseAbs2();
  report.p_given_x.resize(d, d);

  for (int k = 0; k < d; ++k) {
    const bool excluded = !(std::abs(p_amp(k)) >= eps_overlap);
    report.column_excluded[k] = excluded ? 1 : 0;
    for (int j = 0; j < d; ++j) {
      const double p_given_x = std::norm(cross(k, j));
      report.p_given_x(j, k) = p_given_x;
      if (excluded) continue;
      const Complex conditional = cross(k, j) * x_amp(j) / p_amp(k);  // P(x|E,p)
      const double lhs = std::norm(conditional) * report.p_given_e(k);
      const double rhs = p_given_x * report.x_given_e(j);
      const double residual = std::abs(lhs - rhs);
      report.residuals(j, k) = residual;
      if (residual > report.max_residual) report.max_residual = residual;
    }
  }
  return report;
}

}  // namespace qcp
