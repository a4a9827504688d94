#include "ctmc/recovery.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ctmc/errors.hpp"
#include "ctmc/numeric_policy.hpp"

namespace ctmc {

namespace {

// Unit norm, oriented so the entries sum positive.
Vector orient(Vector v) {
  if (v.sum() < 0.0) v = -v;
  return v / v.norm();
}

void check_pair(const Model& model, const PerronPair& pair) {
  if (!((pair.pi.array() > 0.0).all())) {
    throw NumericalError("Perron eigenvector has a non-positive entry");
  }
  const double res = eigen_residual(model, pair);
  const double scale = std::max(1.0, model.discounted_generator().cwiseAbs().maxCoeff());
  if (!(res <= kPolicy.eigen_residual * scale)) {
    std::ostringstream os;
    os << "Perron eigen-residual " << res << " exceeds tolerance";
    throw NumericalError(os.str());
  }
}

}  // namespace

double eigen_residual(const Model& model, const PerronPair& pair) {
  return (model.discounted_generator() * pair.pi - pair.rho * pair.pi).cwiseAbs().maxCoeff();
}

PerronPair perron_pair(const Model& model) {
  const Matrix& a = model.discounted_generator();
  const auto n = a.rows();
  PerronPair pair;
  if (n == 1) {
    pair = {a(0, 0), Vector::Ones(1)};
  } else {
    const Eigen::EigenSolver<Matrix> es(a, true);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed to converge");
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < n; ++k) {
      if (es.eigenvalues()(k).real() > es.eigenvalues()(best).real()) best = k;
    }
    // The Perron root of a Metzler irreducible matrix is real and simple.
    pair.rho = es.eigenvalues()(best).real();
    pair.pi = orient(es.eigenvectors().col(best).real());
  }
  if (model.rates().identically_zero() || pair.rho >= 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "recovery hypothesis violated: rho nonnegative (rho = " << pair.rho
       << "); the short rate must not vanish identically";
    throw RecoveryHypothesisError(os.str());
  }
  if (!((pair.pi.array() > 0.0).all())) {
    // Dense route lost positivity on a tiny component; fall back.
    pair = perron_pair_power_iteration(model);
  }
  check_pair(model, pair);
  return pair;
}

PerronPair perron_pair_power_iteration(const Model& model, double tolerance,
                                       std::size_t max_iterations) {
  const Matrix& a = model.discounted_generator();
  const auto n = a.rows();
  double shift = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) shift = std::max(shift, -a(i, i));
  // A positive extra shift makes G - R + cI primitive (positive diagonal).
  shift += 1.0;
  const Matrix b = a + shift * Matrix::Identity(n, n);
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  for (std::size_t it = 0; it < max_iterations; ++it) {
    Vector w = b * v;
    w /= w.norm();
    const double change = (w - v).cwiseAbs().maxCoeff();
    v = std::move(w);
    if (change <= tolerance) break;
  }
  PerronPair pair{v.dot(a * v), orient(v)};
  return pair;
}

RecoveredMeasure recover_generator(const PerronPair& pair, const GeneratorMatrix& generator) {
  const auto n = static_cast<Eigen::Index>(generator.size());
  if (pair.pi.size() != n) throw InputError("Perron vector length does not match generator");
  if (!((pair.pi.array() > 0.0).all())) throw InputError("Perron vector must be positive");
  Matrix gp = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      gp(i, j) = pair.pi(j) / pair.pi(i) * generator.entries()(i, j);
      off += gp(i, j);
    }
    gp(i, i) = -off;
  }
  return {GeneratorMatrix(std::move(gp)), pair.rho, pair.pi};
}

double radon_nikodym_along_path(const PerronPair& pair, const RateMap& rates,
                                const ChainPath& path, double T) {
  if (path.horizon < T) throw InputError("path horizon is shorter than T");
  const double integral = integrate_rate(path, rates, 0.0, T).value;
  const State end = path.state_at(T);
  return std::exp(-integral - pair.rho * T) * pair.pi(static_cast<Eigen::Index>(end)) /
         pair.pi(static_cast<Eigen::Index>(path.initial_state));
}

McEstimate mc_density_mean(const Model& model, const PerronPair& pair, State initial, double T,
                           const McConfig& config) {
  const Vector& r = model.rates().rates();
  const double pi0 = pair.pi(static_cast<Eigen::Index>(initial));
  return mc_expectation(model.generator(), initial, T, config, [&](const PathSummary& s) {
    return std::exp(-s.integral(r) - pair.rho * T) * pair.pi(static_cast<Eigen::Index>(s.terminal)) /
           pi0;
  });
}

McEstimate tipk_price(const PerronPair& pair, const RecoveredMeasure& recovered,
                      const Vector& payoff, double t, double T, State i,
                      const McConfig& config) {
  if (t > T) throw InputError("tipk_price: t must not exceed T");
  if (config.paths == 0) throw InputError("tipk_price: path count must be positive");
  if (payoff.size() != pair.pi.size()) throw InputError("payoff length mismatch");
  if (i >= recovered.generator_p.size()) throw InputError("state out of range");
  const double scale = pair.pi(static_cast<Eigen::Index>(i)) * std::exp(pair.rho * (T - t));
  if (t == T) {
    return {payoff(static_cast<Eigen::Index>(i)), 0.0, config.paths};
  }
  const McEstimate inner =
      mc_expectation(recovered.generator_p, i, T - t, config, [&](const PathSummary& s) {
        const auto j = static_cast<Eigen::Index>(s.terminal);
        return payoff(j) / pair.pi(j);
      });
  return {scale * inner.mean, scale * inner.std_error, inner.paths};
}

}  // namespace ctmc
