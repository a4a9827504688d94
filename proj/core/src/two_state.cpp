#include "ctmc/two_state.hpp"

#include <cmath>
#include <sstream>

#include "ctmc/errors.hpp"
#include "ctmc/numeric_policy.hpp"

namespace ctmc::two_state {

namespace {

void check_times(double t, double T) {
  if (!(T >= t)) throw InputError("two_state: requires t <= T");
}

// gamma - 2l, without cancellation.
double gamma_minus_two_lambda(const TwoStateModel& m) {
  return m.rate() * m.rate() / (m.gamma() + 2.0 * m.lambda());
}

}  // namespace

TwoStateModel::TwoStateModel(double lambda, double rate)
    : lambda_(lambda), rate_(rate), gamma_(std::hypot(2.0 * lambda, rate)) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be positive");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InputError("rate must be positive");
}

Model TwoStateModel::to_model() const {
  Matrix g(2, 2);
  g << -lambda_, lambda_, lambda_, -lambda_;
  Vector r(2);
  r << 0.0, rate_;
  return Model(StateSpace(2), std::move(g), std::move(r));
}

EigenPairs eigen_pairs(const TwoStateModel& m) {
  const double l = m.lambda();
  const double r = m.rate();
  const double g = m.gamma();
  const auto unit = [&](double first) {
    Vector2 v(first, 2.0 * l);
    return Vector2(v / std::hypot(first, 2.0 * l));
  };
  // rho_+ goes through gamma - 2l to stay accurate for large lambda.
  const double gm2l = gamma_minus_two_lambda(m);
  return {{(gm2l - r) / 2.0, unit(r + g)}, {(-2.0 * l - r - g) / 2.0, unit(r - g)}};
}

Matrix2 closed_form_ad(const TwoStateModel& m, double t, double T) {
  check_times(t, T);
  const double l = m.lambda();
  const double r = m.rate();
  const double g = m.gamma();
  const double tau = T - t;
  if (tau == 0.0) return Matrix2::Identity();
  // Written with e^{rho_+ tau} and e^{rho_- tau} so long maturities neither
  // overflow nor underflow.
  const EigenPairs e = eigen_pairs(m);
  const double ep = std::exp(e.plus.rho * tau);
  const double em = std::exp(e.minus.rho * tau);
  const double off = -2.0 * l * ep * std::expm1(-g * tau);
  Matrix2 a;
  a << (g - r) * em + (g + r) * ep, off, off, (g + r) * em + (g - r) * ep;
  return a / (2.0 * g);
}

Vector2 closed_form_bonds(const TwoStateModel& m, double t, double T) {
  check_times(t, T);
  const double l = m.lambda();
  const double r = m.rate();
  const double g = m.gamma();
  const double tau = T - t;
  if (tau == 0.0) return Vector2::Ones();
  const EigenPairs e = eigen_pairs(m);
  const double ep = std::exp(e.plus.rho * tau);
  const double em = std::exp(e.minus.rho * tau);
  const double gm2l = gamma_minus_two_lambda(m);
  return Vector2((gm2l - r) * em + (g + 2.0 * l + r) * ep, (gm2l + r) * em + (g + 2.0 * l - r) * ep) /
         (2.0 * g);
}

double limiting_yield(const TwoStateModel& m) { return (m.rate() - gamma_minus_two_lambda(m)) / 2.0; }

double closed_form_hedge(const TwoStateModel& m, double t, double T, double T1, State k) {
  if (k > 1) throw InputError("two_state: Arrow-Debreu index must be 0 or 1");
  if (!(T1 > T)) throw InputError("two_state: hedge bond must mature after the claim");
  const Matrix2 a = closed_form_ad(m, t, T);
  const Vector2 b = closed_form_bonds(m, t, T1);
  const double db = b(1) - b(0);
  const double scale = std::max(b(0), b(1));
  if (!(std::abs(db) * kPolicy.singular_condition >= scale)) {
    std::ostringstream os;
    os << "unhedgeable basis: bond prices in the two states differ by " << db;
    throw UnhedgeableBasisError(os.str());
  }
  return (a(1, static_cast<Eigen::Index>(k)) - a(0, static_cast<Eigen::Index>(k))) / db;
}

Matrix2 closed_form_recovered_generator(const TwoStateModel& m) {
  const double up = 2.0 * m.lambda() * m.lambda() / (m.gamma() + m.rate());
  const double down = (m.gamma() + m.rate()) / 2.0;
  Matrix2 g;
  g << -up, up, down, -down;
  return g;
}

}  // namespace ctmc::two_state
