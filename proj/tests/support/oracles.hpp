#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "ctmc/model.hpp"

namespace ctmc::testing {

using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

/// e^M by Taylor series in extended precision: scale to 1-norm <= 1/8,
/// sum 30 terms, square back.
inline Matrix taylor_expm(const Matrix& m) {
  const auto n = m.rows();
  MatrixL a = m.cast<long double>();
  const long double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0L, squarings) > 0.125L) ++squarings;
  a /= std::ldexp(1.0L, squarings);
  MatrixL term = MatrixL::Identity(n, n);
  MatrixL sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = (term * a) / static_cast<long double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum.cast<double>();
}

/// Random irreducible generator: every off-diagonal uniform in
/// (0.05, max_rate], so the support is complete.
inline Matrix random_generator(std::size_t n, std::mt19937_64& rng, double max_rate = 2.0) {
  std::uniform_real_distribution<double> u(0.05, max_rate);
  Matrix g = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (i == j) continue;
      g(i, j) = u(rng);
      s += g(i, j);
    }
    g(i, i) = -s;
  }
  return g;
}

/// Random birth-death generator (jumps only to neighbours).
inline Matrix random_birth_death(std::size_t n, std::mt19937_64& rng, double max_rate = 2.0) {
  std::uniform_real_distribution<double> u(0.1, max_rate);
  const auto m = static_cast<Eigen::Index>(n);
  Matrix g = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (i > 0) g(i, i - 1) = u(rng);
    if (i + 1 < m) g(i, i + 1) = u(rng);
    g(i, i) = -g.row(i).sum();
  }
  return g;
}

/// Rates uniform in [0, max_rate], with at least one strictly positive.
inline Vector random_rates(std::size_t n, std::mt19937_64& rng, double max_rate = 0.2) {
  std::uniform_real_distribution<double> u(0.0, max_rate);
  Vector r(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = u(rng);
  r(0) = std::max(r(0), 0.01);
  return r;
}

inline Model random_model(std::size_t n, std::mt19937_64& rng, double max_generator = 2.0,
                          double max_rate = 0.2) {
  return Model(StateSpace(n), random_generator(n, rng, max_generator),
               random_rates(n, rng, max_rate));
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// max_ij |a_ij - b_ij| / |b_ij|, treating entries below `floor` as absolute.
inline double max_rel_diff(const Matrix& a, const Matrix& b, double floor = 1e-300) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double denom = std::max(std::abs(b(i, j)), floor);
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / denom);
    }
  }
  return worst;
}

}  // namespace ctmc::testing
