#include "ctmc/pricing.hpp"

#include <random>

#include <gtest/gtest.h>

#include "ctmc/errors.hpp"
#include "ctmc/matrix_exp.hpp"
#include "ctmc/monte_carlo.hpp"
#include "ctmc/two_state.hpp"
#include "oracles.hpp"

namespace ctmc {
namespace {

using testing::max_abs_diff;

Model fig_model() { return two_state::TwoStateModel(0.5, 0.1).to_model(); }

Model zero_rate_model(std::mt19937_64& rng, std::size_t n) {
  return Model(StateSpace(n), testing::random_generator(n, rng),
               Vector::Zero(static_cast<Eigen::Index>(n)));
}

// Reference values: 40-digit evaluation of e^{(G - R)} for lambda = 1/2,
// r = 0.1.
constexpr double kBond1 = 0.98218134649618507;
constexpr double kBond2 = 0.92202752994235890;

TEST(PriceClaim, UnitPayoffIsBond) {
  std::mt19937_64 rng(1);
  const Model m = testing::random_model(4, rng);
  const auto claim = price_claim(m, {Vector::Ones(4), 3.0}, 0.5);
  const auto bond = bond_prices(m, 0.5, 3.0);
  EXPECT_EQ(claim.values, bond.values);
}

TEST(PriceClaim, ZeroRatesGiveConvexCombination) {
  std::mt19937_64 rng(2);
  const Model m = zero_rate_model(rng, 4);
  const Vector phi{{1.0, 3.0, -2.0, 0.5}};
  const auto pv = price_claim(m, {phi, 2.0}, 0.0);
  EXPECT_LE(max_abs_diff(pv.values, transition_matrix(m.generator(), 2.0) * phi), 1e-14);
  EXPECT_LE(pv.values.maxCoeff(), phi.maxCoeff());
  EXPECT_GE(pv.values.minCoeff(), phi.minCoeff());
  const auto ones = bond_prices(m, 0.0, 2.0);
  EXPECT_LE((ones.values.array() - 1.0).abs().maxCoeff(), 1e-14);
}

TEST(PriceClaim, ArrowDebreuColumnMatchesClosedForm) {
  const two_state::TwoStateModel ts(0.5, 0.1);
  const auto pv = price_claim(ts.to_model(), {Vector{{1.0, 0.0}}, 1.0}, 0.0);
  const auto a = two_state::closed_form_ad(ts, 0.0, 1.0);
  EXPECT_NEAR(pv.values(0), a(0, 0), 1e-15);
  EXPECT_NEAR(pv.values(1), a(1, 0), 1e-15);
}

TEST(PriceClaim, AtMaturityReturnsPayoffExactly) {
  std::mt19937_64 rng(3);
  const Model m = testing::random_model(3, rng);
  const Vector phi{{0.1, 0.2, 0.3}};
  EXPECT_EQ(price_claim(m, {phi, 2.0}, 2.0).values, phi);
  EXPECT_THROW(price_claim(m, {phi, 2.0}, 2.5), InputError);
  EXPECT_THROW(price_claim(m, {Vector::Ones(2), 2.0}, 0.0), InputError);
}

TEST(BondPrices, TwoStateValues) {
  const auto b = bond_prices(fig_model(), 0.0, 1.0).values;
  EXPECT_NEAR(b(0), kBond1, 1e-15);
  EXPECT_NEAR(b(1), kBond2, 1e-15);
  // Five-digit values for this model agree to 1e-4.
  EXPECT_NEAR(b(0), 0.98211, 1e-4);
  EXPECT_NEAR(b(1), 0.92196, 1e-4);
}

TEST(BondPrices, UnitAtMaturityAndScalarModel) {
  EXPECT_EQ(bond_prices(fig_model(), 3.0, 3.0).values, Vector::Ones(2));
  const Model one(StateSpace(1), Matrix::Zero(1, 1), Vector::Constant(1, 0.07));
  EXPECT_NEAR(bond_prices(one, 1.0, 4.0).values(0), std::exp(-0.07 * 3.0), 1e-16);
}

TEST(BondPrices, InUnitIntervalForNonnegativeRates) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Model m = testing::random_model(1 + trial % 6, rng);
    const auto b = bond_prices(m, 0.0, 0.1 + trial * 0.2).values;
    EXPECT_GT(b.minCoeff(), 0.0);
    EXPECT_LE(b.maxCoeff(), 1.0 + 1e-15);
  }
}

TEST(BondCurve, IdenticalToIndividualCalls) {
  std::mt19937_64 rng(5);
  const Model m = testing::random_model(5, rng);
  std::vector<double> maturities;
  for (int k = 1; k <= 300; ++k) maturities.push_back(0.05 * k);
  const auto curve = bond_curve(m, 0.0, maturities);
  for (std::size_t k = 0; k < maturities.size(); ++k) {
    EXPECT_EQ(curve[k].values, bond_prices(m, 0.0, maturities[k]).values);
  }
}

TEST(Yield, TwoStateValues) {
  const Model m = fig_model();
  EXPECT_NEAR(yield(m, 0.0, 1.0, 0), 0.017979317110801301, 1e-15);
  EXPECT_NEAR(yield(m, 0.0, 1.0, 1), 0.081180196931660754, 1e-15);
  EXPECT_NEAR(yield(m, 0.0, 50.0, 0), 0.046582474696055304, 1e-14);
  EXPECT_NEAR(yield(m, 0.0, 50.0, 1), 0.048579156274039455, 1e-14);
}

TEST(Yield, ShortMaturityTendsToShortRate) {
  const Model m = fig_model();
  EXPECT_NEAR(yield(m, 0.0, 1e-7, 0), 0.0, 1e-7);
  EXPECT_NEAR(yield(m, 0.0, 1e-7, 1), 0.1, 1e-7);
}

TEST(Yield, LongMaturityTendsToLimit) {
  const Model m = fig_model();
  const double limit = two_state::limiting_yield(two_state::TwoStateModel(0.5, 0.1));
  EXPECT_NEAR(limit, 0.047506, 1e-6);
  for (State i : {0u, 1u}) EXPECT_NEAR(yield(m, 0.0, 500.0, i), limit, 1.1e-4);
}

TEST(Yield, UndefinedAtMaturity) {
  EXPECT_THROW(yield(fig_model(), 1.0, 1.0, 0), InputError);
  EXPECT_THROW(yield(fig_model(), 0.0, 1.0, 2), InputError);
}

TEST(Yield, BoundedByShortRates) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.01, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 7;
    const Model m = testing::random_model(n, rng);
    const double T = u(rng);
    for (State i = 0; i < n; ++i) {
      const double y = yield(m, 0.0, T, i);
      EXPECT_GE(y, m.rates().min() - 1e-14);
      EXPECT_LE(y, m.rates().max() + 1e-14);
    }
  }
}

TEST(ForwardRate, ZeroRatesAndScalarModel) {
  std::mt19937_64 rng(7);
  const Model flat = zero_rate_model(rng, 3);
  EXPECT_NEAR(forward_rate(flat, 0.0, 1, 1.0, 2.0), 0.0, 1e-14);
  const Model one(StateSpace(1), Matrix::Zero(1, 1), Vector::Constant(1, 0.05));
  EXPECT_NEAR(forward_rate(one, 0.3, 0, 1.0, 1.5), std::expm1(0.05 * 0.5) / 0.5, 1e-14);
}

TEST(ForwardRate, TwoStateValues) {
  const Model m = fig_model();
  EXPECT_NEAR(forward_rate(m, 0.0, 0, 1.0, 2.0), 0.037601961200133948, 1e-14);
  EXPECT_NEAR(forward_rate(m, 0.0, 1, 1.0, 2.0), 0.061965758892849873, 1e-14);
  EXPECT_THROW(forward_rate(m, 0.0, 0, 2.0, 2.0), InputError);
}

TEST(ForwardRateOption, DegeneratePayoffs) {
  std::mt19937_64 rng(8);
  const Model m = testing::random_model(4, rng);
  const auto zero = price_forward_rate_option(m, 0.0, 1.0, 1.5, [](double) { return 0.0; });
  EXPECT_EQ(zero.values, Vector::Zero(4));
  const auto unit = price_forward_rate_option(m, 0.0, 1.0, 1.5, [](double) { return 1.0; });
  EXPECT_LE(max_abs_diff(unit.values, bond_prices(m, 0.0, 1.5).values), 1e-14);
}

TEST(ForwardRateOption, ZeroStrikeCapletIsBondSpread) {
  std::mt19937_64 rng(9);
  const Model m = testing::random_model(4, rng);
  const auto cap = caplet(m, 0.2, 1.0, 1.5, 0.0);
  const Vector spread =
      (bond_prices(m, 0.2, 1.0).values - bond_prices(m, 0.2, 1.5).values) / 0.5;
  EXPECT_LE(max_abs_diff(cap.values, spread), 1e-13);
}

TEST(CapletFloorlet, ExtremeStrikes) {
  std::mt19937_64 rng(10);
  const Model m = testing::random_model(3, rng);
  EXPECT_EQ(caplet(m, 0.0, 1.0, 2.0, 1e6).values, Vector::Zero(3));
  EXPECT_EQ(floorlet(m, 0.0, 1.0, 2.0, 0.0).values, Vector::Zero(3));
}

TEST(CapletFloorlet, ParityOnRandomModels) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> strike(0.0, 0.2);
  for (int trial = 0; trial < 100; ++trial) {
    const Model m = testing::random_model(1 + trial % 6, rng);
    const double K = strike(rng);
    const double t = 0.1 * (trial % 5);
    const double T = t + 0.5 + 0.1 * (trial % 7);
    const double Tb = T + 0.25 + 0.05 * (trial % 4);
    const Vector lhs = caplet(m, t, T, Tb, K).values - floorlet(m, t, T, Tb, K).values;
    const Vector bt = bond_prices(m, t, T).values;
    const Vector btb = bond_prices(m, t, Tb).values;
    const Vector rhs = (bt - btb) / (Tb - T) - K * btb;
    EXPECT_LE(max_abs_diff(lhs, rhs), 1e-10) << "trial " << trial;
  }
}

TEST(ArrowDebreu, IdentityAtMaturityAndClosedForm) {
  EXPECT_EQ(arrow_debreu(fig_model(), 2.0, 2.0).entries, Matrix::Identity(2, 2));
  const auto a = arrow_debreu(fig_model(), 0.0, 1.0).entries;
  const auto ref = two_state::closed_form_ad(two_state::TwoStateModel(0.5, 0.1), 0.0, 1.0);
  EXPECT_LE(max_abs_diff(a, ref), 1e-15);
  EXPECT_THROW(arrow_debreu(fig_model(), 1.0, 0.5), InputError);
}

TEST(ArrowDebreu, LinearityRowSumsAndChapmanKolmogorov) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const auto ni = static_cast<Eigen::Index>(n);
    const Model m = testing::random_model(n, rng);
    const double t = 0.3;
    const double s = 1.1;
    const double T = 2.0 + trial % 3;
    const Vector p1 = Vector::NullaryExpr(ni, [&] { return u(rng); });
    const Vector p2 = Vector::NullaryExpr(ni, [&] { return u(rng); });
    const double a = u(rng);
    const double b = u(rng);
    const Vector combined = price_claim(m, {a * p1 + b * p2, T}, t).values;
    const Vector separate =
        a * price_claim(m, {p1, T}, t).values + b * price_claim(m, {p2, T}, t).values;
    EXPECT_LE(max_abs_diff(combined, separate), 1e-12);

    const auto ad = arrow_debreu(m, t, T).entries;
    EXPECT_LE(max_abs_diff(ad.rowwise().sum(), bond_prices(m, t, T).values), 1e-10);
    EXPECT_GE(ad.minCoeff(), 0.0);
    EXPECT_LE(max_abs_diff(ad * p1, price_claim(m, {p1, T}, t).values), 1e-12);
    EXPECT_LE(max_abs_diff(ad, arrow_debreu(m, t, s).entries * arrow_debreu(m, s, T).entries),
              1e-9);
  }
}

TEST(PriceClaim, MonteCarloAgreement) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    const std::size_t n = 2 + trial;
    const Model m = testing::random_model(n, rng);
    const Vector phi = Vector::NullaryExpr(static_cast<Eigen::Index>(n), [&] { return u(rng); });
    const double T = 1.0 + trial;
    const auto exact = price_claim(m, {phi, T}, 0.0).values;
    const auto est = mc_price_claim(m, phi, 0, T, {200000, 1000u + trial, 0});
    EXPECT_LT(est.z_score(exact(0)), 3.5) << "trial " << trial;
  }
}

}  // namespace
}  // namespace ctmc
