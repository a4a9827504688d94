#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "ctmc/model.hpp"

namespace ctmc {

/// Seedable 64-bit Mersenne Twister with portable variate generation, so
/// outputs depend only on (seed, stream) and not on the standard library's
/// distribution implementations.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed);
  /// Independent stream for worker / chunk `stream` of a run seeded by `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Exponential with the given rate (> 0).
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

/// A realised trajectory on [0, horizon]. States are right-continuous: the
/// state at a jump time is the post-jump state.
struct ChainPath {
  State initial_state = 0;
  std::vector<double> jump_times;
  std::vector<State> post_jump_states;
  double horizon = 0.0;

  std::size_t jump_count() const noexcept { return jump_times.size(); }
  State state_at(double t) const;
  State terminal_state() const {
    return post_jump_states.empty() ? initial_state : post_jump_states.back();
  }
  /// Throws InputError if the path breaks its invariants or leaves [0, n).
  void check(std::size_t n) const;
};

/// Precomputed exit rates and jump distributions for one generator.
class JumpSampler {
 public:
  explicit JumpSampler(const GeneratorMatrix& generator);

  std::size_t size() const noexcept { return exit_rates_.size(); }
  double exit_rate(State i) const { return exit_rates_[i]; }
  /// Holding time in state i; +inf when the state is absorbing (n = 1).
  double holding_time(State i, Rng& rng) const;
  /// Post-jump state drawn with probability g_ij / -g_ii.
  State next_state(State i, Rng& rng) const;

 private:
  std::vector<double> exit_rates_;
  std::vector<std::vector<double>> cumulative_;  // per row, over j != i in order
  std::vector<std::vector<State>> targets_;
};

ChainPath simulate_path(const GeneratorMatrix& generator, State initial, double horizon,
                        std::uint64_t seed);
ChainPath simulate_path(const JumpSampler& sampler, State initial, double horizon, Rng& rng);

struct IntegratedRate {
  double value = 0.0;
};

/// Exact integral of r(J_s) over [from, to] for the piecewise-constant path.
IntegratedRate integrate_rate(const ChainPath& path, const RateMap& rates, double from,
                              double to);

}  // namespace ctmc
