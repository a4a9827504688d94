#include "ctmc/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "ctmc/errors.hpp"

namespace ctmc {

namespace {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

// One path, written into `occupancy` and `departures` (both sized n).
PathSummary sample_summary(const JumpSampler& sampler, State initial, double horizon,
                           Rng& rng, std::vector<double>& occupancy,
                           std::vector<double>* departures) {
  std::fill(occupancy.begin(), occupancy.end(), 0.0);
  State state = initial;
  double t = 0.0;
  std::size_t jumps = 0;
  for (;;) {
    const double hold = sampler.holding_time(state, rng);
    if (!(t + hold <= horizon)) {
      occupancy[state] += horizon - t;
      break;
    }
    occupancy[state] += hold;
    t += hold;
    if (departures) (*departures)[state] += 1.0;
    state = sampler.next_state(state, rng);
    ++jumps;
  }
  return {initial, state, jumps, horizon, occupancy};
}

void check_args(const GeneratorMatrix& law, State initial, double horizon,
                const McConfig& config) {
  if (config.paths == 0) throw InputError("Monte Carlo needs at least one path");
  if (initial >= law.size()) throw InputError("Monte Carlo initial state out of range");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw InputError("Monte Carlo horizon must be finite and >= 0");
  }
}

unsigned worker_count(const McConfig& config, std::size_t chunks) {
  unsigned t = config.threads ? config.threads : std::thread::hardware_concurrency();
  t = std::max(1u, t);
  return static_cast<unsigned>(std::min<std::size_t>(t, chunks));
}

// Runs `body(chunk_index, first_path, count)` for every chunk, spread over
// workers by striding.
template <typename Body>
void for_each_chunk(const McConfig& config, Body&& body) {
  const std::size_t chunks = (config.paths + kMcChunk - 1) / kMcChunk;
  const unsigned workers = worker_count(config, chunks);
  auto run = [&](unsigned w) {
    for (std::size_t c = w; c < chunks; c += workers) {
      const std::size_t first = c * kMcChunk;
      body(c, std::min(kMcChunk, config.paths - first));
    }
  };
  if (workers == 1) {
    run(0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
}

}  // namespace

double McEstimate::z_score(double reference) const {
  const double diff = std::abs(mean - reference);
  // Deterministic estimators (e.g. a one-state chain) have zero standard
  // error; agreement to rounding counts as exact.
  if (diff <= 1e-13 * std::max(1.0, std::abs(reference))) return 0.0;
  if (std_error == 0.0) return std::numeric_limits<double>::infinity();
  return diff / std_error;
}

double PathSummary::integral(const Vector& f) const {
  double total = 0.0;
  for (std::size_t i = 0; i < occupancy.size(); ++i) total += occupancy[i] * f(i);
  return total;
}

McEstimate mc_expectation(const GeneratorMatrix& law, State initial, double horizon,
                          const McConfig& config, const PathFunctional& f) {
  check_args(law, initial, horizon, config);
  const JumpSampler sampler(law);
  const std::size_t chunks = (config.paths + kMcChunk - 1) / kMcChunk;
  std::vector<Moments> partial(chunks);

  for_each_chunk(config, [&](std::size_t c, std::size_t count) {
    Rng rng = Rng::stream(config.seed, c);
    std::vector<double> occupancy(law.size());
    Moments m;
    for (std::size_t p = 0; p < count; ++p) {
      const double x = f(sample_summary(sampler, initial, horizon, rng, occupancy, nullptr));
      m.sum += x;
      m.sum_sq += x * x;
    }
    partial[c] = m;
  });

  Moments total;
  for (const auto& m : partial) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }
  const auto n = static_cast<double>(config.paths);
  const double mean = total.sum / n;
  double var = 0.0;
  if (config.paths > 1) var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), config.paths};
}

McEstimate mc_price_claim(const Model& model, const Vector& payoff, State initial, double tau,
                          const McConfig& config) {
  if (static_cast<std::size_t>(payoff.size()) != model.size()) {
    throw InputError("payoff length does not match the number of states");
  }
  const Vector& r = model.rates().rates();
  return mc_expectation(model.generator(), initial, tau, config,
                        [&](const PathSummary& s) {
                          return std::exp(-s.integral(r)) * payoff(s.terminal);
                        });
}

PathStatistics simulate_statistics(const GeneratorMatrix& law, State initial, double horizon,
                                   const McConfig& config) {
  check_args(law, initial, horizon, config);
  const std::size_t n = law.size();
  const JumpSampler sampler(law);
  const std::size_t chunks = (config.paths + kMcChunk - 1) / kMcChunk;
  struct Partial {
    std::vector<double> terminal, occupancy, departures;
  };
  std::vector<Partial> partial(chunks);

  for_each_chunk(config, [&](std::size_t c, std::size_t count) {
    Rng rng = Rng::stream(config.seed, c);
    Partial acc{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    std::vector<double> occupancy(n);
    for (std::size_t p = 0; p < count; ++p) {
      const auto s = sample_summary(sampler, initial, horizon, rng, occupancy, &acc.departures);
      acc.terminal[s.terminal] += 1.0;
      for (std::size_t i = 0; i < n; ++i) acc.occupancy[i] += occupancy[i];
    }
    partial[c] = std::move(acc);
  });

  PathStatistics out{Vector::Zero(n), Vector::Zero(n), Vector::Zero(n), config.paths};
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < n; ++i) {
      out.terminal_frequency(i) += p.terminal[i];
      out.occupancy_fraction(i) += p.occupancy[i];
      out.mean_jumps_out(i) += p.departures[i];
    }
  }
  const auto paths = static_cast<double>(config.paths);
  out.terminal_frequency /= paths;
  out.mean_jumps_out /= paths;
  if (horizon > 0.0) out.occupancy_fraction /= paths * horizon;
  return out;
}

}  // namespace ctmc
