#pragma once

#include "ctmc/model.hpp"

namespace ctmc {

/// e^M by scaling and squaring with a diagonal Pade approximant of degree
/// 3, 5, 7, 9 or 13, selected from the 1-norm of the trace-shifted matrix.
/// Throws InputError on non-square or non-finite input.
Matrix matrix_exponential(const Matrix& m);

/// e^{tG}. Throws InputError for t < 0.
Matrix transition_matrix(const GeneratorMatrix& generator, double t);

/// Long-run distribution of an irreducible chain (left null vector of G).
Vector stationary_distribution(const GeneratorMatrix& generator);

}  // namespace ctmc
