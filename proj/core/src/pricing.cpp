#include "ctmc/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "ctmc/errors.hpp"
#include "ctmc/matrix_exp.hpp"

namespace ctmc {

namespace {

void check_times(double t, double T, const char* what) {
  if (!std::isfinite(t) || !std::isfinite(T)) {
    throw InputError(std::string(what) + ": times must be finite");
  }
  if (t > T) {
    throw InputError(std::string(what) + ": valuation time t must not exceed maturity T");
  }
}

void check_state(const Model& model, State i) {
  if (i >= model.size()) throw InputError("state index out of range");
}

}  // namespace

ArrowDebreuMatrix arrow_debreu(const Model& model, double t, double T) {
  check_times(t, T, "arrow_debreu");
  const auto n = static_cast<Eigen::Index>(model.size());
  if (t == T) return {Matrix::Identity(n, n), t, T};
  return {matrix_exponential((T - t) * model.discounted_generator()), t, T};
}

PriceVector price_claim(const Model& model, const ClaimPayoff& payoff, double t) {
  check_times(t, payoff.maturity, "price_claim");
  if (static_cast<std::size_t>(payoff.values.size()) != model.size()) {
    throw InputError("payoff has " + std::to_string(payoff.values.size()) +
                     " values but the model has " + std::to_string(model.size()) + " states");
  }
  if (!payoff.values.allFinite()) throw InputError("payoff values must be finite");
  if (t == payoff.maturity) return {payoff.values, t, payoff.maturity};
  return {arrow_debreu(model, t, payoff.maturity).entries * payoff.values, t, payoff.maturity};
}

PriceVector bond_prices(const Model& model, double t, double T) {
  return price_claim(model, {Vector::Ones(static_cast<Eigen::Index>(model.size())), T}, t);
}

std::vector<PriceVector> bond_curve(const Model& model, double t,
                                    std::span<const double> maturities) {
  std::vector<PriceVector> out(maturities.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(
      std::min<std::size_t>(hw, std::max<std::size_t>(1, maturities.size() / 64)));
  auto run = [&](unsigned w) {
    for (std::size_t k = w; k < maturities.size(); k += workers) {
      out[k] = bond_prices(model, t, maturities[k]);
    }
  };
  // Validate up front so errors surface on the calling thread.
  for (double T : maturities) check_times(t, T, "bond_curve");
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  return out;
}

double yield(const Model& model, double t, double T, State i) {
  check_state(model, i);
  if (!(T > t)) throw InputError("yield: requires t < T (undefined at t = T)");
  const double b = bond_prices(model, t, T).values(i);
  return -std::log(b) / (T - t);
}

double forward_rate(const Model& model, double t, State i, double T, double Tb) {
  check_state(model, i);
  check_times(t, T, "forward_rate");
  if (!(Tb > T)) throw InputError("forward_rate: requires T < Tb");
  const double b_reset = bond_prices(model, t, T).values(i);
  const double b_settle = bond_prices(model, t, Tb).values(i);
  return (b_reset / b_settle - 1.0) / (Tb - T);
}

PriceVector price_forward_rate_option(const Model& model, double t, double T, double Tb,
                                      const ForwardPayoff& h) {
  check_times(t, T, "price_forward_rate_option");
  if (!(Tb > T)) throw InputError("price_forward_rate_option: requires T < Tb");
  const Vector settle = bond_prices(model, T, Tb).values;
  const double accrual = Tb - T;
  Vector psi(settle.size());
  for (Eigen::Index j = 0; j < settle.size(); ++j) {
    // At t = T the reset bond is worth exactly 1.
    const double forward = (1.0 / settle(j) - 1.0) / accrual;
    psi(j) = settle(j) * h(forward);
  }
  return price_claim(model, {psi, T}, t);
}

PriceVector caplet(const Model& model, double t, double T, double Tb, double strike) {
  return price_forward_rate_option(model, t, T, Tb,
                                   [strike](double f) { return std::max(f - strike, 0.0); });
}

PriceVector floorlet(const Model& model, double t, double T, double Tb, double strike) {
  return price_forward_rate_option(model, t, T, Tb,
                                   [strike](double f) { return std::max(strike - f, 0.0); });
}

}  // namespace ctmc
