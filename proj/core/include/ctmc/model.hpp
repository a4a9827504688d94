#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ctmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Zero-based index into the state space. User-facing surfaces print i + 1.
using State = std::size_t;

class StateSpace {
 public:
  explicit StateSpace(std::size_t n);
  explicit StateSpace(std::vector<std::string> labels);

  std::size_t size() const noexcept { return n_; }
  bool has_labels() const noexcept { return !labels_.empty(); }
  /// Display name: the label if one was given, otherwise the 1-based index.
  std::string label(State i) const;
  std::optional<State> find(const std::string& label) const;

 private:
  std::size_t n_;
  std::vector<std::string> labels_;
};

enum class ViolationKind {
  kRowSum,
  kNegativeOffDiagonal,
  kPositiveDiagonal,
  kNotIrreducible,
  kNonFinite,
  kNegativeRate,
};

struct Violation {
  ViolationKind kind;
  std::optional<std::size_t> row;  // offending generator row / rate index
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string summary() const;
};

/// Collects every violated generator invariant. Throws InputError if G is
/// not square.
ValidationReport validate_generator(const Matrix& generator);

/// Collects generator and rate violations. Throws InputError when the
/// dimensions of G, r and S disagree.
ValidationReport validate_model(const Matrix& generator, const Vector& rates,
                                const StateSpace& states);

/// True when the graph i -> j (g_ij > positive_support) is strongly connected.
bool is_irreducible(const Matrix& generator);

/// Validated CTMC generator. Immutable once constructed.
class GeneratorMatrix {
 public:
  /// Throws ValidationError listing every violation.
  explicit GeneratorMatrix(Matrix entries);

  const Matrix& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(State i, State j) const { return entries_(i, j); }
  /// -g_ii, the total jump intensity out of state i.
  double exit_rate(State i) const { return -entries_(i, i); }

 private:
  Matrix entries_;
};

/// Nonnegative short rate per state.
class RateMap {
 public:
  explicit RateMap(Vector rates);

  const Vector& rates() const noexcept { return rates_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(rates_.size()); }
  double operator()(State i) const { return rates_(i); }
  Matrix diagonal() const { return rates_.asDiagonal(); }
  double min() const { return rates_.minCoeff(); }
  double max() const { return rates_.maxCoeff(); }
  bool identically_zero() const { return (rates_.array() == 0.0).all(); }

 private:
  Vector rates_;
};

/// Short-rate model: state space, Q-generator and rate map, validated together.
class Model {
 public:
  /// Throws InputError on dimension mismatch, ValidationError otherwise.
  Model(StateSpace states, Matrix generator, Vector rates);
  Model(StateSpace states, GeneratorMatrix generator, RateMap rates);

  const StateSpace& states() const noexcept { return states_; }
  const GeneratorMatrix& generator() const noexcept { return generator_; }
  const RateMap& rates() const noexcept { return rates_; }
  std::size_t size() const noexcept { return states_.size(); }

  /// G - R, the operator whose exponential gives state prices.
  const Matrix& discounted_generator() const noexcept { return discounted_; }

 private:
  StateSpace states_;
  GeneratorMatrix generator_;
  RateMap rates_;
  Matrix discounted_;
};

}  // namespace ctmc
