#pragma once

#include <optional>
#include <vector>

#include "ctmc/model.hpp"
#include "ctmc/path.hpp"
#include "ctmc/pricing.hpp"

namespace ctmc {

/// Distinct bond maturities used as hedge instruments, all after the claim
/// maturity.
class BondBasis {
 public:
  /// Throws InputError unless the maturities are finite, distinct and all
  /// strictly greater than claim_maturity.
  BondBasis(std::vector<double> maturities, double claim_maturity);

  const std::vector<double>& maturities() const noexcept { return maturities_; }
  std::size_t size() const noexcept { return maturities_.size(); }
  double claim_maturity() const noexcept { return claim_maturity_; }

 private:
  std::vector<double> maturities_;
  double claim_maturity_;
};

/// For each state, the states the chain may jump to. The full structure uses
/// every other state; a reduced structure (e.g. birth-death) lets the hedge
/// use fewer bonds.
class JumpStructure {
 public:
  explicit JumpStructure(std::vector<std::vector<State>> targets);

  /// Every state can reach every other: n - 1 bonds are needed.
  static JumpStructure full(std::size_t n);
  /// Jumps only to i - 1 and i + 1: two bonds suffice.
  static JumpStructure birth_death(std::size_t n);

  std::size_t size() const noexcept { return targets_.size(); }
  const std::vector<State>& targets(State i) const { return targets_[i]; }
  bool allows(State from, State to) const;
  /// Bonds needed: the largest number of targets from any state.
  std::size_t bonds_required() const;
  /// Throws InputError if G has a positive rate to an undeclared target.
  void check_covers(const GeneratorMatrix& generator) const;

 private:
  std::vector<std::vector<State>> targets_;
};

/// Jump-difference system at (t, current). bond_differences(i, j) is
/// B(t, s_j; T_i) - B(t, current; T_i) where s_j runs over the reachable
/// states in ascending order, skipping `current`; claim_differences(j) is
/// the matching claim-price difference. The hedge D satisfies
/// sum_i D_i * bond_differences(i, j) = claim_differences(j) for every j.
struct HedgeSystem {
  Matrix bond_differences;
  Vector claim_differences;
  std::vector<State> target_states;
  double bond_scale = 1.0;  // largest bond price entering the system
};

/// System for the Arrow-Debreu claim paying 1 at T if J_T = k.
HedgeSystem hedge_system(const Model& model, double t, State current, double T,
                         const BondBasis& basis, State k);

/// System for an arbitrary payoff; `jumps` defaults to the full structure.
HedgeSystem hedge_system(const Model& model, double t, State current, const ClaimPayoff& payoff,
                         const BondBasis& basis,
                         const std::optional<JumpStructure>& jumps = std::nullopt);

/// Ratio of max(largest singular value, largest bond price) to the smallest
/// singular value. Infinite for a rank-deficient system.
double hedge_condition(const Matrix& bond_differences, double bond_scale = 1.0);

/// Solves sum_i D_i dB(i, j) = dA(j). Square systems are solved directly;
/// with fewer equations than bonds the minimum-norm solution is returned.
/// Throws UnhedgeableBasisError when the condition estimate exceeds the
/// policy bound or the system is overdetermined and inconsistent.
Vector solve_hedge(const Matrix& bond_differences, const Vector& claim_differences,
                   double bond_scale = 1.0);

struct HedgePosition {
  double time = 0.0;
  State state = 0;
  Vector positions;           // bonds held per basis maturity
  double money_market = 0.0;  // claim value minus bond holdings
  double claim_value = 0.0;
  Vector bond_prices;         // B(t, state; T_i)
};

/// Hedge for a claim at every (t, J_t).
class HedgePlan {
 public:
  HedgePlan(const Model& model, ClaimPayoff payoff, BondBasis basis,
            std::optional<JumpStructure> jumps = std::nullopt);

  /// Throws UnhedgeableBasisError naming (t, state) and the maturities.
  HedgePosition at(double t, State state) const;

  const BondBasis& basis() const noexcept { return basis_; }
  const ClaimPayoff& payoff() const noexcept { return payoff_; }
  const JumpStructure& jumps() const noexcept { return jumps_; }

 private:
  Model model_;
  ClaimPayoff payoff_;
  BondBasis basis_;
  JumpStructure jumps_;
};

HedgePosition hedge_for_payoff(const Model& model, double t, State current,
                               const ClaimPayoff& payoff, const BondBasis& basis,
                               const std::optional<JumpStructure>& jumps = std::nullopt);

struct ReplicationReport {
  double terminal_error = 0.0;      // |X_T - phi(J_T)|
  double max_tracking_error = 0.0;  // max over event times of |X_t - u(t, J_t; T)|
  double max_jump_mismatch = 0.0;   // max |value change - (u(t,j) - u(t,i))| at jumps
  double step = 0.0;
  double initial_value = 0.0;
  double terminal_value = 0.0;
  double target_value = 0.0;
  std::size_t rebalances = 0;
  std::size_t jumps = 0;
  State initial_state = 0;
  State terminal_state = 0;
};

/// Runs the self-financing portfolio along `path`: X_0 = u(0, J_0; T);
/// positions are solved at each rebalance time and held until the next, the
/// money-market residual accrues at the current short rate, and the grid of
/// spacing dt is augmented with the path's jump times. At a jump the
/// portfolio is rebalanced in the pre-jump state, carried through the jump,
/// then rebalanced in the post-jump state.
ReplicationReport replicate_on_path(const Model& model, const ChainPath& path,
                                    const ClaimPayoff& payoff, const BondBasis& basis, double dt,
                                    const std::optional<JumpStructure>& jumps = std::nullopt);

}  // namespace ctmc
