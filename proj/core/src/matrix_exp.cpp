#include "ctmc/matrix_exp.hpp"

#include <array>
#include <cmath>

#include "ctmc/errors.hpp"

namespace ctmc {

namespace {

// Largest 1-norm for which the degree-m approximant reaches unit roundoff in
// double precision (backward error bound).
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

struct PadeTerms {
  Matrix u;  // odd part
  Matrix v;  // even part
};

PadeTerms pade3(const Matrix& a, const Matrix& id) {
  constexpr std::array<double, 4> b{120.0, 60.0, 12.0, 1.0};
  const Matrix a2 = a * a;
  return {a * (b[3] * a2 + b[1] * id), b[2] * a2 + b[0] * id};
}

PadeTerms pade5(const Matrix& a, const Matrix& id) {
  constexpr std::array<double, 6> b{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  return {a * (b[5] * a4 + b[3] * a2 + b[1] * id), b[4] * a4 + b[2] * a2 + b[0] * id};
}

PadeTerms pade7(const Matrix& a, const Matrix& id) {
  constexpr std::array<double, 8> b{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                    25200.0,    1512.0,    56.0,      1.0};
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  return {a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id),
          b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id};
}

PadeTerms pade9(const Matrix& a, const Matrix& id) {
  constexpr std::array<double, 10> b{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                     30270240.0,    2162160.0,    110880.0,     3960.0,
                                     90.0,          1.0};
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix a8 = a6 * a2;
  return {a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id),
          b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id};
}

PadeTerms pade13(const Matrix& a, const Matrix& id) {
  constexpr std::array<double, 14> b{
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const Matrix u = a * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Matrix v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  const Matrix v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return {u, v};
}

double one_norm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

Matrix solve_pade(const PadeTerms& t) {
  // r(A) = (V - U)^{-1} (V + U)
  return (t.v - t.u).partialPivLu().solve(t.v + t.u);
}

}  // namespace

Matrix matrix_exponential(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("matrix_exponential needs a square matrix");
  if (!m.allFinite()) throw InputError("matrix_exponential: non-finite entries");
  const Eigen::Index n = m.rows();
  if (n == 0) return m;
  if (n == 1) return Matrix::Constant(1, 1, std::exp(m(0, 0)));

  // Shifting by the mean diagonal shrinks the norm of generator-like matrices
  // and is undone exactly by a scalar factor.
  const double shift = m.trace() / static_cast<double>(n);
  const Matrix id = Matrix::Identity(n, n);
  Matrix a = m - shift * id;
  const double norm = one_norm(a);

  Matrix result;
  if (norm <= kTheta3) {
    result = solve_pade(pade3(a, id));
  } else if (norm <= kTheta5) {
    result = solve_pade(pade5(a, id));
  } else if (norm <= kTheta7) {
    result = solve_pade(pade7(a, id));
  } else if (norm <= kTheta9) {
    result = solve_pade(pade9(a, id));
  } else {
    int squarings = 0;
    if (norm > kTheta13) {
      squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
      a /= std::ldexp(1.0, squarings);
    }
    result = solve_pade(pade13(a, id));
    for (int k = 0; k < squarings; ++k) result = result * result;
  }
  if (shift != 0.0) result *= std::exp(shift);
  return result;
}

Matrix transition_matrix(const GeneratorMatrix& generator, double t) {
  if (!(t >= 0.0)) throw InputError("transition_matrix: t must be >= 0");
  const auto n = static_cast<Eigen::Index>(generator.size());
  if (t == 0.0) return Matrix::Identity(n, n);
  return matrix_exponential(t * generator.entries());
}

Vector stationary_distribution(const GeneratorMatrix& generator) {
  // Solve p^T G = 0 with sum(p) = 1 by replacing one equation with the
  // normalisation.
  const auto n = static_cast<Eigen::Index>(generator.size());
  Matrix a = generator.entries().transpose();
  a.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;
  return a.fullPivLu().solve(rhs);
}

}  // namespace ctmc
