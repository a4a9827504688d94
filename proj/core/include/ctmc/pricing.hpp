#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ctmc/model.hpp"

namespace ctmc {

/// European claim paying values(j) at `maturity` if J_T = j.
struct ClaimPayoff {
  Vector values;
  double maturity = 0.0;
};

/// Claim values per current state at valuation_time.
struct PriceVector {
  Vector values;
  double valuation_time = 0.0;
  double maturity = 0.0;
};

/// entries(i, j): price in state i of one unit paid at maturity if J_T = j.
struct ArrowDebreuMatrix {
  Matrix entries;
  double valuation_time = 0.0;
  double maturity = 0.0;
};

/// e^{(T-t)(G-R)}. Throws InputError if t > T.
ArrowDebreuMatrix arrow_debreu(const Model& model, double t, double T);

/// e^{(T-t)(G-R)} Phi; returns Phi unchanged when t == T.
PriceVector price_claim(const Model& model, const ClaimPayoff& payoff, double t);

/// Zero-coupon bond prices B(t, i; T) for every i.
PriceVector bond_prices(const Model& model, double t, double T);

/// Bond prices for several maturities, evaluated independently (and, for
/// long batches, concurrently) so results match one-at-a-time calls bit
/// for bit.
std::vector<PriceVector> bond_curve(const Model& model, double t,
                                    std::span<const double> maturities);

/// -log B(t, i; T) / (T - t). Requires t < T: the short-maturity limit r(i)
/// is left to the caller.
double yield(const Model& model, double t, double T, State i);

/// Simple forward rate (B(t,i;T) / B(t,i;Tb) - 1) / (Tb - T), t <= T < Tb.
double forward_rate(const Model& model, double t, State i, double T, double Tb);

/// h applied to the forward rate set at T for the period [T, Tb].
using ForwardPayoff = std::function<double(double)>;

/// Value at t of the option paying h(F(T, J_T; T, Tb)) at Tb. The payment is
/// discounted into a T-maturity claim psi(j) = B(T, j; Tb) h(F(T, j; T, Tb))
/// and priced with price_claim.
PriceVector price_forward_rate_option(const Model& model, double t, double T, double Tb,
                                      const ForwardPayoff& h);

PriceVector caplet(const Model& model, double t, double T, double Tb, double strike);
PriceVector floorlet(const Model& model, double t, double T, double Tb, double strike);

}  // namespace ctmc
