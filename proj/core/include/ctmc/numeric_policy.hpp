#pragma once

namespace ctmc {

// Every tolerance the library enforces lives here so tests can refer to the
// same numbers.
struct NumericPolicy {
  // |row sum| <= row_sum * max(1, max |g_ij|)
  double row_sum = 1e-12;
  // an off-diagonal entry counts as an edge when it exceeds this
  double positive_support = 1e-14;
  // stochastic rows sum to one within this
  double stochastic = 1e-10;
  // smallest tolerated negative entry in a transition matrix
  double negative_entry = 1e-12;
  // bond-difference systems with a larger condition estimate are refused
  double singular_condition = 1e12;
  // |(G - R) pi - rho pi|_inf
  double eigen_residual = 1e-10;
  // relative residual allowed when solving a hedge system
  double hedge_residual = 1e-10;
};

inline constexpr NumericPolicy kPolicy{};

}  // namespace ctmc
