#pragma once

#include "ctmc/model.hpp"
#include "ctmc/monte_carlo.hpp"
#include "ctmc/path.hpp"

namespace ctmc {

/// Eigenvalue of G - R with maximal real part and its eigenvector, scaled to
/// unit Euclidean norm with positive entries.
struct PerronPair {
  double rho = 0.0;
  Vector pi;
};

/// Dense eigendecomposition of G - R, selecting the eigenvalue of largest
/// real part. Throws RecoveryHypothesisError when rho >= 0 (r identically
/// zero) and NumericalError if the selected eigenvector is not strictly
/// positive or fails the residual check.
PerronPair perron_pair(const Model& model);

/// The same pair by power iteration on G - R + cI, c = max_i(r(i) - g_ii).
/// Slower; used to cross-check perron_pair. Does not apply the rho < 0 gate.
PerronPair perron_pair_power_iteration(const Model& model, double tolerance = 1e-13,
                                       std::size_t max_iterations = 2'000'000);

/// max_i |((G - R) pi - rho pi)_i|
double eigen_residual(const Model& model, const PerronPair& pair);

/// Real-world dynamics: the generator G^pi, with the pair it came from.
struct RecoveredMeasure {
  GeneratorMatrix generator_p;
  double rho;
  Vector pi;
};

/// g^pi_ij = pi(j) / pi(i) g_ij off the diagonal, diagonal set to minus the
/// off-diagonal row sum. The result is validated as a generator.
RecoveredMeasure recover_generator(const PerronPair& pair, const GeneratorMatrix& generator);

/// Z_T = exp(-int_0^T r(J_s) ds - rho T) pi(J_T) / pi(J_0) along `path`.
double radon_nikodym_along_path(const PerronPair& pair, const RateMap& rates,
                                const ChainPath& path, double T);

/// Monte Carlo estimate of E^Q[Z_T | J_0 = initial], which equals 1.
McEstimate mc_density_mean(const Model& model, const PerronPair& pair, State initial, double T,
                           const McConfig& config);

/// pi(i) e^{rho (T - t)} E^pi[phi(J_T) / pi(J_T) | J_t = i], simulating under
/// G^pi. Throws InputError for t > T or zero paths.
McEstimate tipk_price(const PerronPair& pair, const RecoveredMeasure& recovered,
                      const Vector& payoff, double t, double T, State i,
                      const McConfig& config);

}  // namespace ctmc
