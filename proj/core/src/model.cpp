#include "ctmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ctmc/errors.hpp"
#include "ctmc/numeric_policy.hpp"

namespace ctmc {

namespace {

std::vector<bool> reachable_from_zero(const Matrix& g, bool reversed) {
  const auto n = static_cast<std::size_t>(g.rows());
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || seen[j]) continue;
      const double w = reversed ? g(j, i) : g(i, j);
      if (w > kPolicy.positive_support) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

StateSpace::StateSpace(std::size_t n) : n_(n) {
  if (n == 0) throw InputError("state space must have at least one state");
}

StateSpace::StateSpace(std::vector<std::string> labels)
    : n_(labels.size()), labels_(std::move(labels)) {
  if (n_ == 0) throw InputError("state space must have at least one state");
  std::set<std::string> unique(labels_.begin(), labels_.end());
  if (unique.size() != labels_.size()) throw InputError("state labels must be distinct");
  for (const auto& l : labels_) {
    if (l.empty()) throw InputError("state labels must be non-empty");
  }
}

std::string StateSpace::label(State i) const {
  if (i >= n_) throw InputError("state index out of range");
  return labels_.empty() ? std::to_string(i + 1) : labels_[i];
}

std::optional<State> StateSpace::find(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    if (k) os << "; ";
    os << violations[k].message;
  }
  return os.str();
}

bool is_irreducible(const Matrix& generator) {
  if (generator.rows() <= 1) return true;
  const auto fwd = reachable_from_zero(generator, false);
  const auto bwd = reachable_from_zero(generator, true);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

ValidationReport validate_generator(const Matrix& g) {
  if (g.rows() != g.cols()) {
    throw InputError("generator must be square, got " + std::to_string(g.rows()) + "x" +
                     std::to_string(g.cols()));
  }
  if (g.rows() == 0) throw InputError("generator must be non-empty");

  ValidationReport report;
  const auto n = static_cast<std::size_t>(g.rows());
  if (!g.allFinite()) {
    report.violations.push_back({ViolationKind::kNonFinite, std::nullopt,
                                 "generator has non-finite entries"});
    return report;
  }
  const double tol = kPolicy.row_sum * std::max(1.0, g.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < n; ++i) {
    const double sum = g.row(i).sum();
    if (std::abs(sum) > tol) {
      report.violations.push_back({ViolationKind::kRowSum, i,
                                   "generator row " + std::to_string(i + 1) + " sums to " +
                                       format_double(sum) + " (must be 0)"});
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && g(i, j) < 0.0) {
        report.violations.push_back(
            {ViolationKind::kNegativeOffDiagonal, i,
             "generator entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                 ") = " + format_double(g(i, j)) + " is a negative off-diagonal rate"});
      }
    }
    if (g(i, i) > 0.0) {
      report.violations.push_back({ViolationKind::kPositiveDiagonal, i,
                                   "generator diagonal " + std::to_string(i + 1) +
                                       " is positive"});
    }
  }
  if (!is_irreducible(g)) {
    report.violations.push_back({ViolationKind::kNotIrreducible, std::nullopt,
                                 "generator is not irreducible"});
  }
  return report;
}

ValidationReport validate_model(const Matrix& generator, const Vector& rates,
                                const StateSpace& states) {
  const auto n = states.size();
  if (static_cast<std::size_t>(generator.rows()) != n ||
      static_cast<std::size_t>(generator.cols()) != n) {
    throw InputError("generator is " + std::to_string(generator.rows()) + "x" +
                     std::to_string(generator.cols()) + " but the state space has " +
                     std::to_string(n) + " states");
  }
  if (static_cast<std::size_t>(rates.size()) != n) {
    throw InputError("rate map has " + std::to_string(rates.size()) +
                     " entries but the state space has " + std::to_string(n) + " states");
  }
  ValidationReport report = validate_generator(generator);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(rates(i))) {
      report.violations.push_back({ViolationKind::kNonFinite, i,
                                   "rate " + std::to_string(i + 1) + " is not finite"});
    } else if (rates(i) < 0.0) {
      report.violations.push_back({ViolationKind::kNegativeRate, i,
                                   "rate " + std::to_string(i + 1) + " = " +
                                       format_double(rates(i)) + " is negative"});
    }
  }
  return report;
}

GeneratorMatrix::GeneratorMatrix(Matrix entries) : entries_(std::move(entries)) {
  const auto report = validate_generator(entries_);
  if (!report.ok()) throw ValidationError("invalid generator: " + report.summary());
}

RateMap::RateMap(Vector rates) : rates_(std::move(rates)) {
  if (rates_.size() == 0) throw InputError("rate map must be non-empty");
  for (Eigen::Index i = 0; i < rates_.size(); ++i) {
    if (!std::isfinite(rates_(i)) || rates_(i) < 0.0) {
      throw ValidationError("rate " + std::to_string(i + 1) + " must be finite and >= 0");
    }
  }
}

namespace {

GeneratorMatrix checked_generator(const StateSpace& s, const Matrix& g, const Vector& r) {
  const auto report = validate_model(g, r, s);
  if (!report.ok()) throw ValidationError("invalid model: " + report.summary());
  return GeneratorMatrix(g);
}

}  // namespace

Model::Model(StateSpace states, Matrix generator, Vector rates)
    : states_(std::move(states)),
      generator_(checked_generator(states_, generator, rates)),
      rates_(std::move(rates)),
      discounted_(generator_.entries() - rates_.diagonal()) {}

Model::Model(StateSpace states, GeneratorMatrix generator, RateMap rates)
    : states_(std::move(states)),
      generator_(std::move(generator)),
      rates_(std::move(rates)),
      discounted_(generator_.entries() - rates_.diagonal()) {
  if (generator_.size() != states_.size() || rates_.size() != states_.size()) {
    throw InputError("model components disagree on the number of states");
  }
}

}  // namespace ctmc
