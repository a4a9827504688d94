#include "ctmc/monte_carlo.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ctmc/errors.hpp"
#include "ctmc/pricing.hpp"
#include "oracles.hpp"

namespace ctmc {
namespace {

TEST(MonteCarlo, BitIdenticalAcrossThreadCounts) {
  std::mt19937_64 gen(1);
  const Model m = testing::random_model(3, gen);
  const Vector phi{{1.0, -0.5, 2.0}};
  const auto one = mc_price_claim(m, phi, 0, 2.0, {20000, 17, 1});
  const auto four = mc_price_claim(m, phi, 0, 2.0, {20000, 17, 4});
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.std_error, four.std_error);
}

TEST(MonteCarlo, ConstantFunctionalHasZeroError) {
  std::mt19937_64 gen(2);
  const Model m = testing::random_model(3, gen);
  const auto est = mc_expectation(m.generator(), 0, 1.0, {5000, 3, 1},
                                  [](const PathSummary&) { return 1.0; });
  EXPECT_EQ(est.mean, 1.0);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(MonteCarlo, OccupancyIntegratesToHorizon) {
  std::mt19937_64 gen(3);
  const Model m = testing::random_model(4, gen);
  const auto est = mc_expectation(m.generator(), 2, 3.0, {2000, 5, 1}, [](const PathSummary& s) {
    double t = 0.0;
    for (double o : s.occupancy) t += o;
    return t;
  });
  EXPECT_NEAR(est.mean, 3.0, 1e-12);
}

TEST(MonteCarlo, PriceAgreesWithAnalytic) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 3; ++trial) {
    const Model m = testing::random_model(3, gen);
    const Vector phi{{0.3, 1.0, -0.2}};
    const auto exact = price_claim(m, {phi, 2.0}, 0.0).values;
    for (State i = 0; i < 3; ++i) {
      const auto est = mc_price_claim(m, phi, i, 2.0, {100000, 100 + i, 0});
      EXPECT_LT(est.z_score(exact(i)), 4.0) << "trial " << trial << " state " << i;
    }
  }
}

TEST(MonteCarlo, StatisticsAreNormalised) {
  std::mt19937_64 gen(5);
  const Model m = testing::random_model(3, gen);
  const auto stats = simulate_statistics(m.generator(), 0, 4.0, {10000, 9, 1});
  EXPECT_NEAR(stats.terminal_frequency.sum(), 1.0, 1e-12);
  EXPECT_NEAR(stats.occupancy_fraction.sum(), 1.0, 1e-12);
  EXPECT_GT(stats.mean_jumps_out.sum(), 0.0);
}

TEST(MonteCarlo, RejectsZeroPaths) {
  std::mt19937_64 gen(6);
  const Model m = testing::random_model(2, gen);
  EXPECT_THROW(mc_price_claim(m, Vector::Ones(2), 0, 1.0, {0, 1, 1}), InputError);
  EXPECT_THROW(simulate_statistics(m.generator(), 0, 1.0, {0, 1, 1}), InputError);
}

TEST(McEstimate, ZScoreOfDeterministicEstimate) {
  const McEstimate exact{0.5, 0.0, 10};
  EXPECT_EQ(exact.z_score(0.5 + 1e-16), 0.0);
  EXPECT_TRUE(std::isinf(exact.z_score(0.6)));
  EXPECT_NEAR((McEstimate{1.0, 0.1, 10}).z_score(1.25), 2.5, 1e-12);
}

}  // namespace
}  // namespace ctmc
