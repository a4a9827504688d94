#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "ctmc/model.hpp"
#include "ctmc/path.hpp"

namespace ctmc {

struct McConfig {
  std::size_t paths = 0;
  std::uint64_t seed = 0;
  /// 0 selects std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned threads = 0;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;

  /// |mean - reference| / std_error; 0 when the two agree to 1e-13 relative.
  double z_score(double reference) const;
};

/// Compressed view of one simulated path: enough to evaluate any functional
/// of the terminal state and of integrals of state functions.
struct PathSummary {
  State initial = 0;
  State terminal = 0;
  std::size_t jumps = 0;
  double horizon = 0.0;
  std::span<const double> occupancy;  // time spent in each state

  double integral(const Vector& f) const;
};

using PathFunctional = std::function<double(const PathSummary&)>;

/// Paths are generated in fixed-size chunks, chunk c drawing from
/// Rng::stream(seed, c). Partial sums are reduced in chunk order, so the
/// estimate is bit-identical for any thread count.
inline constexpr std::size_t kMcChunk = 4096;

/// Sample mean of f over paths of the chain with generator `law`.
McEstimate mc_expectation(const GeneratorMatrix& law, State initial, double horizon,
                          const McConfig& config, const PathFunctional& f);

/// Estimates E[exp(-int_0^tau r(J_s) ds) phi(J_tau) | J_0 = initial] under Q.
McEstimate mc_price_claim(const Model& model, const Vector& payoff, State initial, double tau,
                          const McConfig& config);

struct PathStatistics {
  Vector terminal_frequency;   // fraction of paths ending in each state
  Vector occupancy_fraction;   // fraction of total time spent in each state
  Vector mean_jumps_out;       // average number of departures from each state per path
  std::size_t paths = 0;
};

PathStatistics simulate_statistics(const GeneratorMatrix& law, State initial, double horizon,
                                   const McConfig& config);

}  // namespace ctmc
