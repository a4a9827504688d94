#include "ctmc/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctmc/errors.hpp"
#include "ctmc/numeric_policy.hpp"

namespace ctmc {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  Rng rng(0);
  rng.engine_.seed(seq);
  return rng;
}

double Rng::exponential(double rate) {
  // 1 - u lies in (0, 1], so the log is finite.
  return -std::log1p(-uniform()) / rate;
}

State ChainPath::state_at(double t) const {
  if (t < 0.0 || t > horizon) throw InputError("state_at: time outside [0, horizon]");
  const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  if (it == jump_times.begin()) return initial_state;
  return post_jump_states[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

void ChainPath::check(std::size_t n) const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InputError("path horizon must be positive and finite");
  }
  if (jump_times.size() != post_jump_states.size()) {
    throw InputError("path has mismatched jump times and states");
  }
  if (initial_state >= n) throw InputError("path initial state outside the state space");
  State prev = initial_state;
  double prev_t = 0.0;
  for (std::size_t k = 0; k < jump_times.size(); ++k) {
    if (!(jump_times[k] > prev_t) || jump_times[k] > horizon) {
      throw InputError("path jump times must be strictly increasing in (0, horizon]");
    }
    if (post_jump_states[k] >= n) throw InputError("path visits a state outside the space");
    if (post_jump_states[k] == prev) throw InputError("path jump does not change state");
    prev = post_jump_states[k];
    prev_t = jump_times[k];
  }
}

JumpSampler::JumpSampler(const GeneratorMatrix& generator) {
  const std::size_t n = generator.size();
  exit_rates_.resize(n);
  cumulative_.resize(n);
  targets_.resize(n);
  for (State i = 0; i < n; ++i) {
    exit_rates_[i] = generator.exit_rate(i);
    double acc = 0.0;
    for (State j = 0; j < n; ++j) {
      if (j == i || !(generator(i, j) > 0.0)) continue;
      acc += generator(i, j);
      cumulative_[i].push_back(acc);
      targets_[i].push_back(j);
    }
    // Normalise by the accumulated off-diagonal mass so the last bucket is 1.
    for (auto& c : cumulative_[i]) c /= acc;
    if (!cumulative_[i].empty()) cumulative_[i].back() = 1.0;
  }
}

double JumpSampler::holding_time(State i, Rng& rng) const {
  if (!(exit_rates_[i] > 0.0)) return std::numeric_limits<double>::infinity();
  return rng.exponential(exit_rates_[i]);
}

State JumpSampler::next_state(State i, Rng& rng) const {
  const auto& cum = cumulative_[i];
  const double u = rng.uniform();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()),
                                         cum.size() - 1);
  return targets_[i][idx];
}

ChainPath simulate_path(const JumpSampler& sampler, State initial, double horizon, Rng& rng) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InputError("simulate_path: horizon must be positive and finite");
  }
  if (initial >= sampler.size()) throw InputError("simulate_path: initial state out of range");
  ChainPath path;
  path.initial_state = initial;
  path.horizon = horizon;
  State state = initial;
  double t = 0.0;
  for (;;) {
    t += sampler.holding_time(state, rng);
    if (!(t <= horizon)) break;
    state = sampler.next_state(state, rng);
    path.jump_times.push_back(t);
    path.post_jump_states.push_back(state);
  }
  return path;
}

ChainPath simulate_path(const GeneratorMatrix& generator, State initial, double horizon,
                        std::uint64_t seed) {
  const JumpSampler sampler(generator);
  Rng rng(seed);
  return simulate_path(sampler, initial, horizon, rng);
}

IntegratedRate integrate_rate(const ChainPath& path, const RateMap& rates, double from,
                              double to) {
  if (!(from >= 0.0) || !(to >= from) || to > path.horizon) {
    throw InputError("integrate_rate: interval must satisfy 0 <= from <= to <= horizon");
  }
  double total = 0.0;
  double seg_start = 0.0;
  State state = path.initial_state;
  for (std::size_t k = 0; k <= path.jump_times.size(); ++k) {
    const double seg_end = k < path.jump_times.size() ? path.jump_times[k] : path.horizon;
    const double lo = std::max(seg_start, from);
    const double hi = std::min(seg_end, to);
    if (hi > lo) total += (hi - lo) * rates(state);
    if (seg_end >= to) break;
    if (k < path.jump_times.size()) state = path.post_jump_states[k];
    seg_start = seg_end;
  }
  return {total};
}

}  // namespace ctmc
