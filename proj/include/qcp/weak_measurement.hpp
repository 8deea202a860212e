#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <thread>
#include <utility>
#include <vector>

#include "qcp/hilbert.hpp"
#include "qcp/random.hpp"

namespace qcp {

// Von Neumann pointer model: a Gaussian meter with position wavefunction
// ~ exp(-q^2 / 4 sigma^2) is coupled through exp(-i g A (x) P_ptr / hbar),
// the system is projected onto the post-selection, and the surviving
// pointer is sampled in position or momentum. With this meter convention
//   Re(A_w) = <q> / g,   Im(A_w) = 2 sigma^2 <p> / (g hbar)
// to first order in g.
struct WeakSimConfig {
  StateVector pre;
  StateVector post;
  OperatorMatrix observable;
  double coupling = 0.0;       // g; may be zero for diagnostics
  double pointer_width = 1.0;  // sigma
  std::int64_t trials = 0;
  std::uint64_t master_seed = 0;
  double eps_overlap = kDefaultOverlapEps;
};

struct MeasurementRecord {
  std::int64_t accepted_trials = 0;
  std::int64_t total_trials = 0;
  std::vector<double> positions;  // even accepted ordinals
  std::vector<double> momenta;    // odd accepted ordinals
  double coupling = 0.0;
  double pointer_width = 1.0;
  double hbar = 1.0;
  std::uint64_t master_seed = 0;
};

struct WeakValueEstimate {
  double re = 0.0;
  double im = 0.0;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::int64_t position_samples = 0;
  std::int64_t momentum_samples = 0;
};

inline Complex weak_value_analytic(const StateVector& pre, const StateVector& post,
                                   const OperatorMatrix& observable,
                                   double eps_overlap = kDefaultOverlapEps) {
  require_same_space(pre.space(), post.space());
  require_same_space(pre.space(), observable.space());
  const Complex denominator = inner(post, pre);
  if (!(std::abs(denominator) >= eps_overlap))
    throw OrthogonalConditions("pre- and post-selection are orthogonal");
  const Complex numerator = post.amplitudes().dot(observable.entries() * pre.amplitudes());
  return numerator / denominator;
}

inline OperatorMatrix projector(const StateVector& state) {
  Matrix entries = state.amplitudes() * state.amplitudes().adjoint();
  return OperatorMatrix(state.space(), std::move(entries));
}

namespace detail {

// The joint state after the coupling is sum_c w_c |br_c> (x) phi(q - u_c),
// where c runs over distinct eigenvalue clusters of A, w_c = <b|Pi_c|a> and
// u_c = g lambda_c. Everything downstream is closed-form Gaussian algebra
// over these branches.
struct PointerBranches {
  std::vector<double> shifts;
  std::vector<Complex> weights;
  double sigma = 1.0;
  double hbar = 1.0;
  double coupling = 0.0;
  double acceptance = 0.0;  // integral |chi|^2
  double weight_sum = 0.0;  // W = sum_c |w_c|

  double overlap(std::size_t c, std::size_t d) const {          // Omega_cd
    const double delta = shifts[c] - shifts[d];
    return std::exp(-delta * delta / (8.0 * sigma * sigma));
  }
};

inline PointerBranches make_branches(const WeakSimConfig& config) {
  require_same_space(config.pre.space(), config.post.space());
  require_same_space(config.pre.space(), config.observable.space());
  if (!config.observable.hermitian())
    throw NonHermitian("weak measurement observable must be Hermitian");
  if (config.coupling < 0.0) throw InvalidArgument("coupling must be non-negative");
  if (!(config.pointer_width > 0.0))
    throw InvalidArgument("pointer width must be positive");
  if (config.trials < 1) throw InvalidArgument("trial count must be at least 1");
  if (!(std::abs(inner(config.post, config.pre)) >= config.eps_overlap))
    throw OrthogonalConditions("pre- and post-selection are orthogonal");

  const Eigensystem eig = eigensystem(config.observable);
  const Vector a = eig.states.matrix().adjoint() * config.pre.amplitudes();
  const Vector b = eig.states.matrix().adjoint() * config.post.amplitudes();

  PointerBranches branches;
  branches.sigma = config.pointer_width;
  branches.hbar = config.pre.space().hbar();
  branches.coupling = config.coupling;

  const double scale = std::max(1.0, eig.energies.cwiseAbs().maxCoeff());
  int start = 0;
  const int d = config.pre.dimension();
  while (start < d) {
    int stop = start + 1;
    while (stop < d && eig.energies(stop) - eig.energies(stop - 1) <= 1e-10 * scale) ++stop;
    Complex weight = 0.0;
    for (int n = start; n < stop; ++n) weight += std::conj(b(n)) * a(n);
    branches.shifts.push_back(config.coupling * eig.energies(start));
    branches.weights.push_back(weight);
    start = stop;
  }

  double acceptance = 0.0;
  double weight_sum = 0.0;
  for (std::size_t c = 0; c < branches.weights.size(); ++c) {
    weight_sum += std::abs(branches.weights[c]);
    for (std::size_t e = 0; e < branches.weights.size(); ++e)
      acceptance += (branches.weights[c] * std::conj(branches.weights[e]) *
                     branches.overlap(c, e))
                        .real();
  }
  branches.acceptance = std::clamp(acceptance, 0.0, 1.0);
  branches.weight_sum = weight_sum;
  return branches;
}

inline double sample_position(const PointerBranches& br, RandomStream& stream) {
  const std::size_t n = br.weights.size();
  const double sigma2 = br.sigma * br.sigma;
  for (int guard = 0; guard < 1000000; ++guard) {
    // proposal: mixture of the branch Gaussians weighted by |w_c|
    double pick = stream.uniform01() * br.weight_sum;
    std::size_t c = 0;
    for (; c + 1 < n; ++c) {
      pick -= std::abs(br.weights[c]);
      if (pick <= 0.0) break;
    }
    const double q = br.shifts[c] + br.sigma * stream.normal();

    Complex chi = 0.0;
    double proposal = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
      const double z = q - br.shifts[e];
      const double gauss = std::exp(-z * z / (4.0 * sigma2));
      chi += br.weights[e] * gauss;
      proposal += std::abs(br.weights[e]) * gauss * gauss;
    }
    // |chi|^2 <= W * sum_c |w_c| phi_c^2 by Jensen, so the ratio is in [0,1]
    if (proposal <= 0.0) continue;
    if (stream.uniform01() * br.weight_sum * proposal < std::norm(chi)) return q;
  }
  throw NumericFailure("pointer position sampling failed to accept");
}

inline double sample_momentum(const PointerBranches& br, RandomStream& stream) {
  const double s = br.hbar / (2.0 * br.sigma);  // momentum-space width
  const double bound = br.weight_sum * br.weight_sum;
  for (int guard = 0; guard < 1000000; ++guard) {
    const double p = s * stream.normal();
    Complex amp = 0.0;
    for (std::size_t e = 0; e < br.weights.size(); ++e)
      amp += br.weights[e] * std::polar(1.0, -p * br.shifts[e] / br.hbar);
    if (stream.uniform01() * bound < std::norm(amp)) return p;
  }
  throw NumericFailure("pointer momentum sampling failed to accept");
}

inline void parallel_for(std::int64_t count, int threads,
                         const std::function<void(std::int64_t, std::int64_t)>& body) {
  if (threads <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = t * chunk;
    const std::int64_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Exact (closed-form) accepted-pointer statistics; the Monte Carlo estimates
// converge to these, and these converge to the weak value as g -> 0.
inline double acceptance_probability(const WeakSimConfig& config) {
  return detail::make_branches(config).acceptance;
}

inline double exact_pointer_position_mean(const WeakSimConfig& config) {
  const auto br = detail::make_branches(config);
  double numerator = 0.0;
  for (std::size_t c = 0; c < br.weights.size(); ++c)
    for (std::size_t e = 0; e < br.weights.size(); ++e)
      numerator += (br.weights[c] * std::conj(br.weights[e]) * br.overlap(c, e)).real() *
                   0.5 * (br.shifts[c] + br.shifts[e]);
  return numerator / br.acceptance;
}

inline double exact_pointer_momentum_mean(const WeakSimConfig& config) {
  const auto br = detail::make_branches(config);
  const double s = br.hbar / (2.0 * br.sigma);
  double numerator = 0.0;
  for (std::size_t c = 0; c < br.weights.size(); ++c)
    for (std::size_t e = 0; e < br.weights.size(); ++e) {
      const Complex cross = br.weights[c] * std::conj(br.weights[e]);
      numerator += (cross * Complex(0.0, -1.0)).real() * s * s *
                   (br.shifts[c] - br.shifts[e]) / br.hbar * br.overlap(c, e);
    }
  return numerator / br.acceptance;
}

// Runs the trials. Each trial consumes only its own RandomStream derived
// from (master_seed, trial index), and the position/momentum schedule is
// fixed by the accepted ordinal, so the record is bit-identical for any
// thread count.
inline MeasurementRecord simulate(const WeakSimConfig& config, int threads = 1) {
  const detail::PointerBranches branches = detail::make_branches(config);
  const std::int64_t n = config.trials;

  std::vector<std::uint8_t> accepted(n);
  detail::parallel_for(n, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      RandomStream stream = RandomStream::for_trial(config.master_seed, i);
      accepted[i] = stream.uniform01() < branches.acceptance ? 1 : 0;
    }
  });

  std::vector<std::int64_t> rank(n, -1);
  std::int64_t accepted_count = 0;
  for (std::int64_t i = 0; i < n; ++i)
    if (accepted[i]) rank[i] = accepted_count++;

  const std::int64_t n_position = (accepted_count + 1) / 2;
  std::vector<double> positions(n_position);
  std::vector<double> momenta(accepted_count - n_position);
  detail::parallel_for(n, threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      if (!accepted[i]) continue;
      RandomStream stream = RandomStream::for_trial(config.master_seed, i);
      stream.uniform01();  // replay the acceptance draw
      if (rank[i] % 2 == 0)
        positions[rank[i] / 2] = detail::sample_position(branches, stream);
      else
        momenta[rank[i] / 2] = detail::sample_momentum(branches, stream);
    }
  });

  MeasurementRecord record;
  record.accepted_trials = accepted_count;
  record.total_trials = n;
  record.positions = std::move(positions);
  record.momenta = std::move(momenta);
  record.coupling = config.coupling;
  record.pointer_width = config.pointer_width;
  record.hbar = config.pre.space().hbar();
  record.master_seed = config.master_seed;
  return record;
}

namespace detail {

inline std::pair<double, double> mean_and_stderr(const std::vector<double>& samples) {
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (const double v : samples) ss += (v - mean) * (v - mean);
  const double stddev = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, stddev / std::sqrt(n)};
}

}  // namespace detail

// First-order pointer-shift estimators with sampling standard errors.
inline WeakValueEstimate estimate_weak_value(const MeasurementRecord& record) {
  if (record.accepted_trials < 100)
    throw TooFewSamples("need at least 100 accepted trials, got " +
                        std::to_string(record.accepted_trials));
  if (!(record.coupling > 0.0))
    throw InvalidArgument("weak-value estimation requires positive coupling");

  const auto [q_mean, q_err] = detail::mean_and_stderr(record.positions);
  const auto [p_mean, p_err] = detail::mean_and_stderr(record.momenta);
  const double sigma2 = record.pointer_width * record.pointer_width;
  const double momentum_scale = 2.0 * sigma2 / (record.coupling * record.hbar);

  WeakValueEstimate estimate;
  estimate.re = q_mean / record.coupling;
  estimate.stderr_re = q_err / record.coupling;
  estimate.im = momentum_scale * p_mean;
  estimate.stderr_im = momentum_scale * p_err;
  estimate.position_samples = static_cast<std::int64_t>(record.positions.size());
  estimate.momentum_samples = static_cast<std::int64_t>(record.momenta.size());
  return estimate;
}

struct BiasScanRow {
  double coupling;
  WeakValueEstimate estimate;
  double bias;           // |estimate - analytic| in the complex plane
  double stderr_total;   // quadrature sum of component standard errors
  bool indistinguishable_from_next = false;
};

// Sweeps the coupling from strong to weak against the analytic weak value.
// Consecutive rows whose bias difference is inside the combined 2-stderr
// band are flagged; outside those bands the bias must shrink with g.
inline std::vector<BiasScanRow> bias_scan(const WeakSimConfig& base,
                                          const std::vector<double>& couplings,
                                          int threads = 1) {
  if (couplings.empty()) throw InvalidArgument("bias scan needs at least one coupling");
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    if (!(couplings[i] > 0.0)) throw InvalidArgument("couplings must be positive");
    if (i > 0 && !(couplings[i] < couplings[i - 1]))
      throw InvalidArgument("couplings must be sorted in descending order");
  }
  const Complex analytic = weak_value_analytic(base.pre, base.post, base.observable,
                                               base.eps_overlap);

  std::vector<BiasScanRow> rows;
  rows.reserve(couplings.size());
  for (const double g : couplings) {
    WeakSimConfig config = base;
    config.coupling = g;
    const WeakValueEstimate estimate = estimate_weak_value(simulate(config, threads));
    BiasScanRow row;
    row.coupling = g;
    row.estimate = estimate;
    row.bias = std::abs(Complex(estimate.re, estimate.im) - analytic);
    row.stderr_total = std::hypot(estimate.stderr_re, estimate.stderr_im);
    rows.push_back(row);
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double band =
        2.0 * std::hypot(rows[i].stderr_total, rows[i + 1].stderr_total);
    rows[i].indistinguishable_from_next =
        std::abs(rows[i].bias - rows[i + 1].bias) <= band;
  }
  return rows;
}

}  // namespace qcp
