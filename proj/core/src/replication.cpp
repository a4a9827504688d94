#include "ctmc/replication.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "ctmc/errors.hpp"
#include "ctmc/matrix_exp.hpp"
#include "ctmc/numeric_policy.hpp"

namespace ctmc {

namespace {

// Prices needed at one time: bonds(i, s) = B(t, s; T_i), claim(s) = u(t, s; T).
struct Snapshot {
  double time = 0.0;
  Matrix bonds;
  Vector claim;
};

Snapshot snapshot(const Model& model, const ClaimPayoff& payoff, const BondBasis& basis,
                  double t) {
  const auto n = static_cast<Eigen::Index>(model.size());
  Snapshot s{t, Matrix(static_cast<Eigen::Index>(basis.size()), n), Vector()};
  for (std::size_t i = 0; i < basis.size(); ++i) {
    s.bonds.row(static_cast<Eigen::Index>(i)) =
        bond_prices(model, t, basis.maturities()[i]).values.transpose();
  }
  s.claim = price_claim(model, payoff, t).values;
  return s;
}

HedgeSystem system_from(const Snapshot& snap, State current, const std::vector<State>& targets) {
  const auto m = snap.bonds.rows();
  const auto k = static_cast<Eigen::Index>(targets.size());
  HedgeSystem sys{Matrix(m, k), Vector(k), targets, 0.0};
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto s = static_cast<Eigen::Index>(targets[static_cast<std::size_t>(j)]);
    sys.bond_differences.col(j) = snap.bonds.col(s) - snap.bonds.col(static_cast<Eigen::Index>(current));
    sys.claim_differences(j) = snap.claim(s) - snap.claim(static_cast<Eigen::Index>(current));
  }
  sys.bond_scale = m > 0 ? snap.bonds.cwiseAbs().maxCoeff() : 1.0;
  return sys;
}

std::vector<State> all_other_states(std::size_t n, State current) {
  std::vector<State> out;
  for (State j = 0; j < n; ++j) {
    if (j != current) out.push_back(j);
  }
  return out;
}

std::string describe_basis(const BondBasis& basis) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < basis.size(); ++i) os << (i ? ", " : "") << basis.maturities()[i];
  return os.str();
}

void check_payoff_basis(const Model& model, const ClaimPayoff& payoff, const BondBasis& basis,
                        std::size_t bonds_required) {
  if (static_cast<std::size_t>(payoff.values.size()) != model.size()) {
    throw InputError("payoff length does not match the number of states");
  }
  if (payoff.maturity != basis.claim_maturity()) {
    throw InputError("bond basis was built for a different claim maturity");
  }
  if (basis.size() != bonds_required) {
    throw InputError("bond basis has " + std::to_string(basis.size()) + " maturities but " +
                     std::to_string(bonds_required) + " are required");
  }
}

HedgePosition position_from(const Snapshot& snap, State state, const std::vector<State>& targets,
                            const BondBasis& basis) {
  const HedgeSystem sys = system_from(snap, state, targets);
  Vector d;
  try {
    d = solve_hedge(sys.bond_differences, sys.claim_differences, sys.bond_scale);
  } catch (const UnhedgeableBasisError& e) {
    std::ostringstream os;
    os.precision(17);
    os << "unhedgeable basis at (t=" << snap.time << ", state=" << state + 1
       << ") with maturities {" << describe_basis(basis) << "}: " << e.what();
    throw UnhedgeableBasisError(os.str());
  }
  HedgePosition p;
  p.time = snap.time;
  p.state = state;
  p.positions = std::move(d);
  p.bond_prices = snap.bonds.col(static_cast<Eigen::Index>(state));
  p.claim_value = snap.claim(static_cast<Eigen::Index>(state));
  p.money_market = p.claim_value - p.positions.dot(p.bond_prices);
  return p;
}

}  // namespace

BondBasis::BondBasis(std::vector<double> maturities, double claim_maturity)
    : maturities_(std::move(maturities)), claim_maturity_(claim_maturity) {
  if (!std::isfinite(claim_maturity_)) throw InputError("claim maturity must be finite");
  std::set<double> seen;
  for (double m : maturities_) {
    if (!std::isfinite(m)) throw InputError("bond maturities must be finite");
    if (!(m > claim_maturity_)) {
      std::ostringstream os;
      os.precision(17);
      os << "bond maturity " << m << " must be after the claim maturity " << claim_maturity_;
      throw InputError(os.str());
    }
    if (!seen.insert(m).second) throw InputError("bond maturities must be distinct");
  }
}

JumpStructure::JumpStructure(std::vector<std::vector<State>> targets)
    : targets_(std::move(targets)) {
  const auto n = targets_.size();
  if (n == 0) throw InputError("jump structure needs at least one state");
  for (State i = 0; i < n; ++i) {
    auto& row = targets_[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (State j : row) {
      if (j >= n || j == i) throw InputError("jump structure has an invalid target");
    }
  }
}

JumpStructure JumpStructure::full(std::size_t n) {
  std::vector<std::vector<State>> t(n);
  for (State i = 0; i < n; ++i) t[i] = all_other_states(n, i);
  return JumpStructure(std::move(t));
}

JumpStructure JumpStructure::birth_death(std::size_t n) {
  std::vector<std::vector<State>> t(n);
  for (State i = 0; i < n; ++i) {
    if (i > 0) t[i].push_back(i - 1);
    if (i + 1 < n) t[i].push_back(i + 1);
  }
  return JumpStructure(std::move(t));
}

bool JumpStructure::allows(State from, State to) const {
  const auto& row = targets_.at(from);
  return std::binary_search(row.begin(), row.end(), to);
}

std::size_t JumpStructure::bonds_required() const {
  std::size_t m = 0;
  for (const auto& row : targets_) m = std::max(m, row.size());
  return m;
}

void JumpStructure::check_covers(const GeneratorMatrix& generator) const {
  if (generator.size() != size()) throw InputError("jump structure size does not match model");
  for (State i = 0; i < size(); ++i) {
    for (State j = 0; j < size(); ++j) {
      if (i != j && generator(i, j) > 0.0 && !allows(i, j)) {
        throw InputError("generator allows a jump " + std::to_string(i + 1) + " -> " +
                         std::to_string(j + 1) + " outside the declared jump structure");
      }
    }
  }
}

HedgeSystem hedge_system(const Model& model, double t, State current, double T,
                         const BondBasis& basis, State k) {
  if (k >= model.size()) throw InputError("Arrow-Debreu target state out of range");
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(model.size()));
  phi(static_cast<Eigen::Index>(k)) = 1.0;
  return hedge_system(model, t, current, ClaimPayoff{phi, T}, basis);
}

HedgeSystem hedge_system(const Model& model, double t, State current, const ClaimPayoff& payoff,
                         const BondBasis& basis, const std::optional<JumpStructure>& jumps) {
  if (current >= model.size()) throw InputError("current state out of range");
  if (t > payoff.maturity) throw InputError("hedge_system: t must not exceed the claim maturity");
  const auto targets = jumps ? jumps->targets(current) : all_other_states(model.size(), current);
  check_payoff_basis(model, payoff, basis,
                     jumps ? jumps->bonds_required() : model.size() - 1);
  return system_from(snapshot(model, payoff, basis, t), current, targets);
}

double hedge_condition(const Matrix& bond_differences, double bond_scale) {
  if (bond_differences.size() == 0) return 1.0;
  const Eigen::JacobiSVD<Matrix> svd(bond_differences);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (!(smallest > 0.0)) return std::numeric_limits<double>::infinity();
  return std::max(s(0), bond_scale) / smallest;
}

Vector solve_hedge(const Matrix& bond_differences, const Vector& claim_differences,
                   double bond_scale) {
  if (bond_differences.cols() != claim_differences.size()) {
    throw InputError("solve_hedge: system dimensions disagree");
  }
  const Eigen::Index bonds = bond_differences.rows();
  const Matrix a = bond_differences.transpose();  // equations x bonds
  const double rhs_norm = claim_differences.size() ? claim_differences.cwiseAbs().maxCoeff() : 0.0;
  // D = 0 already meets the residual bound.
  if (rhs_norm <= kPolicy.hedge_residual) return Vector::Zero(bonds);
  if (bonds == 0) {
    throw UnhedgeableBasisError("no hedge instruments but the claim has jump exposure");
  }

  const double cond = hedge_condition(bond_differences, bond_scale);
  if (!(cond <= kPolicy.singular_condition)) {
    std::ostringstream os;
    os << "condition estimate " << cond << " exceeds " << kPolicy.singular_condition;
    throw UnhedgeableBasisError(os.str());
  }
  Vector d;
  if (a.rows() == a.cols()) {
    d = a.partialPivLu().solve(claim_differences);
  } else {
    d = a.completeOrthogonalDecomposition().solve(claim_differences);
  }
  const double residual = (a * d - claim_differences).cwiseAbs().maxCoeff();
  if (!(residual <= kPolicy.hedge_residual * (1.0 + rhs_norm))) {
    std::ostringstream os;
    os << "hedge residual " << residual << " exceeds tolerance";
    throw UnhedgeableBasisError(os.str());
  }
  return d;
}

HedgePlan::HedgePlan(const Model& model, ClaimPayoff payoff, BondBasis basis,
                     std::optional<JumpStructure> jumps)
    : model_(model),
      payoff_(std::move(payoff)),
      basis_(std::move(basis)),
      jumps_(jumps ? std::move(*jumps) : JumpStructure::full(model.size())) {
  jumps_.check_covers(model_.generator());
  check_payoff_basis(model_, payoff_, basis_, jumps_.bonds_required());
}

HedgePosition HedgePlan::at(double t, State state) const {
  if (state >= model_.size()) throw InputError("hedge state out of range");
  if (!(t >= 0.0) || t > payoff_.maturity) {
    throw InputError("hedge time must lie in [0, claim maturity]");
  }
  return position_from(snapshot(model_, payoff_, basis_, t), state, jumps_.targets(state),
                       basis_);
}

HedgePosition hedge_for_payoff(const Model& model, double t, State current,
                               const ClaimPayoff& payoff, const BondBasis& basis,
                               const std::optional<JumpStructure>& jumps) {
  return HedgePlan(model, payoff, basis, jumps).at(t, current);
}

ReplicationReport replicate_on_path(const Model& model, const ChainPath& path,
                                    const ClaimPayoff& payoff, const BondBasis& basis, double dt,
                                    const std::optional<JumpStructure>& jumps) {
  const double T = payoff.maturity;
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("rebalance step must be positive");
  if (!(T > 0.0)) throw InputError("claim maturity must be positive");
  path.check(model.size());
  if (path.horizon < T) throw InputError("path horizon is shorter than the claim maturity");
  const HedgePlan plan(model, payoff, basis, jumps);
  const JumpStructure& structure = plan.jumps();

  struct Event {
    double time;
    std::optional<State> jump_to;
  };
  std::vector<Event> events;
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  for (std::size_t k = 1; k < steps; ++k) events.push_back({static_cast<double>(k) * dt, {}});
  events.push_back({T, {}});
  for (std::size_t k = 0; k < path.jump_count() && path.jump_times[k] <= T; ++k) {
    const double tj = path.jump_times[k];
    auto it = std::lower_bound(events.begin(), events.end(), tj,
                               [](const Event& e, double t) { return e.time < t; });
    if (it != events.end() && it->time == tj) {
      it->jump_to = path.post_jump_states[k];
    } else {
      events.insert(it, Event{tj, path.post_jump_states[k]});
    }
  }

  ReplicationReport rep;
  rep.step = dt;
  rep.initial_state = path.initial_state;

  State state = path.initial_state;
  Snapshot snap = snapshot(model, payoff, basis, 0.0);
  HedgePosition pos = position_from(snap, state, structure.targets(state), basis);
  double value = pos.claim_value;
  double cash = pos.money_market;
  rep.initial_value = value;
  double prev = 0.0;

  for (const Event& ev : events) {
    snap = snapshot(model, payoff, basis, ev.time);
    cash *= std::exp(model.rates()(state) * (ev.time - prev));
    prev = ev.time;
    const auto col = [&](State s) { return snap.bonds.col(static_cast<Eigen::Index>(s)); };
    value = cash + pos.positions.dot(col(state));

    if (ev.jump_to) {
      const State next = *ev.jump_to;
      if (!structure.allows(state, next)) {
        throw InputError("path jumps " + std::to_string(state + 1) + " -> " +
                         std::to_string(next + 1) + " outside the declared jump structure");
      }
      pos = position_from(snap, state, structure.targets(state), basis);
      cash = value - pos.positions.dot(col(state));
      const double after = cash + pos.positions.dot(col(next));
      const double expected = snap.claim(static_cast<Eigen::Index>(next)) -
                              snap.claim(static_cast<Eigen::Index>(state));
      rep.max_jump_mismatch = std::max(rep.max_jump_mismatch, std::abs((after - value) - expected));
      value = after;
      state = next;
      ++rep.jumps;
    }
    rep.max_tracking_error = std::max(
        rep.max_tracking_error, std::abs(value - snap.claim(static_cast<Eigen::Index>(state))));
    if (ev.time < T) {
      pos = position_from(snap, state, structure.targets(state), basis);
      cash = value - pos.positions.dot(col(state));
      ++rep.rebalances;
    }
  }

  rep.terminal_state = state;
  rep.terminal_value = value;
  rep.target_value = payoff.values(static_cast<Eigen::Index>(state));
  rep.terminal_error = std::abs(value - rep.target_value);
  return rep;
}

}  // namespace ctmc
