#pragma once

#include <Eigen/Dense>

#include "ctmc/model.hpp"

namespace ctmc::two_state {

// Closed forms for G = [[-l, l], [l, -l]], R = diag(0, r). Written
// independently of the general engine and used to test it.

using Matrix2 = Eigen::Matrix2d;
using Vector2 = Eigen::Vector2d;

class TwoStateModel {
 public:
  /// Throws InputError unless lambda > 0 and rate > 0.
  TwoStateModel(double lambda, double rate);

  double lambda() const noexcept { return lambda_; }
  double rate() const noexcept { return rate_; }
  /// sqrt((2 lambda)^2 + r^2)
  double gamma() const noexcept { return gamma_; }

  /// The same model as a general engine Model.
  Model to_model() const;

 private:
  double lambda_;
  double rate_;
  double gamma_;
};

struct EigenPair {
  double rho;
  Vector2 pi;  // unit norm
};

struct EigenPairs {
  EigenPair plus;   // rho_+ = (-2l - r + gamma) / 2, the Perron pair
  EigenPair minus;  // rho_- = (-2l - r - gamma) / 2
};

EigenPairs eigen_pairs(const TwoStateModel& m);

/// A_t^T, T >= t.
Matrix2 closed_form_ad(const TwoStateModel& m, double t, double T);

/// B_t^T, T >= t.
Vector2 closed_form_bonds(const TwoStateModel& m, double t, double T);

/// lim_{T -> inf} Y(t, i; T) = (r + 2l - gamma) / 2 for either state.
double limiting_yield(const TwoStateModel& m);

/// Bonds of maturity T1 held to replicate the k-th Arrow-Debreu claim
/// (k in {0, 1}); the same in both states. Throws UnhedgeableBasisError
/// when the two bond prices coincide to within the singularity bound.
double closed_form_hedge(const TwoStateModel& m, double t, double T, double T1, State k);

/// G^pi with off-diagonals 2 l^2 / (gamma + r) and (gamma + r) / 2.
Matrix2 closed_form_recovered_generator(const TwoStateModel& m);

}  // namespace ctmc::two_state
