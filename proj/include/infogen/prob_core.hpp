#pragma once

// Exact probability machinery on finite outcome sets. Masses are stored as
// natural logarithms; every reduction over log masses goes through a
// max-shifted log-sum-exp.

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace infogen {

/// Absolute tolerance for probability comparisons after exponentiation.
inline constexpr double kProbTolerance = 1e-12;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised when P has an atom on which the reference measure puts no mass.
class AbsoluteContinuityViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// log(sum(exp(xs))) with the maximum factored out. Returns -inf for an
/// empty input or when every term is -inf.
double log_sum_exp(std::span<const double> xs);

/// Natural log that maps 0 to -inf instead of raising a pole error.
double safe_log(double p);

/// Labeled outcomes with per-outcome natural-log masses.
class FiniteDistribution {
 public:
  FiniteDistribution() = default;

  /// Masses must be nonnegative and sum to 1 within kProbTolerance.
  static FiniteDistribution from_probs(std::vector<std::string> labels,
                                       std::span<const double> probs);
  static FiniteDistribution from_log_masses(std::vector<std::string> labels,
                                            std::vector<double> log_masses);
  static FiniteDistribution uniform(std::vector<std::string> labels);
  static FiniteDistribution point_mass(std::vector<std::string> labels,
                                       std::size_t index);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<double>& log_masses() const { return log_mass_; }
  double log_mass(std::size_t i) const { return log_mass_[i]; }
  double mass(std::size_t i) const;
  std::vector<double> masses() const;
  bool in_support(std::size_t i) const { return log_mass_[i] != kNegInf; }
  std::vector<std::size_t> support() const;

  /// Throws std::out_of_range for an unknown label.
  std::size_t index_of(const std::string& label) const;

 private:
  FiniteDistribution(std::vector<std::string> labels, std::vector<double> log_masses);

  std::vector<std::string> labels_;
  std::vector<double> log_mass_;
};

/// Conditional distribution: one FiniteDistribution over a shared output
/// label set per input label.
class Kernel {
 public:
  Kernel() = default;
  Kernel(std::vector<std::string> inputs, std::vector<std::string> outputs,
         std::vector<FiniteDistribution> rows);

  std::size_t num_inputs() const { return inputs_.size(); }
  std::size_t num_outputs() const { return outputs_.size(); }
  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  const FiniteDistribution& row(std::size_t input) const { return rows_.at(input); }
  double prob(std::size_t input, std::size_t output) const {
    return rows_[input].mass(output);
  }
  double log_prob(std::size_t input, std::size_t output) const {
    return rows_[input].log_mass(output);
  }

 private:
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::vector<FiniteDistribution> rows_;
};

/// Distribution over a product label space, stored row-major (last
/// coordinate varies fastest).
class JointTable {
 public:
  JointTable() = default;
  static JointTable from_log_masses(std::vector<std::vector<std::string>> axes,
                                    std::vector<double> log_masses);

  std::size_t rank() const { return axes_.size(); }
  std::size_t size() const { return log_mass_.size(); }
  const std::vector<std::string>& axis(std::size_t k) const { return axes_.at(k); }
  std::size_t extent(std::size_t k) const { return axes_.at(k).size(); }

  const std::vector<double>& log_masses() const { return log_mass_; }
  double log_mass(std::size_t flat) const { return log_mass_[flat]; }
  double mass(std::size_t flat) const;

  std::vector<std::size_t> unravel(std::size_t flat) const;
  std::size_t flat_index(std::span<const std::size_t> idx) const;

  /// Tuple labels joined with '|'.
  std::string tuple_label(std::size_t flat) const;
  FiniteDistribution as_distribution() const;

 private:
  JointTable(std::vector<std::vector<std::string>> axes, std::vector<double> log_masses);

  std::vector<std::vector<std::string>> axes_;
  std::vector<std::size_t> strides_;
  std::vector<double> log_mass_;
};

JointTable product(const FiniteDistribution& p, const FiniteDistribution& q);

/// Distribution of n iid draws; labels are the draws joined with ','.
FiniteDistribution iid_power(const FiniteDistribution& p, std::size_t n);

/// Sums out every coordinate not listed in `keep` (kept in the given order).
FiniteDistribution marginalize(const JointTable& joint, std::span<const std::size_t> keep);

/// Maximum of `values` over the positive-mass outcomes of `dist`.
double ess_sup(std::span<const double> values, const FiniteDistribution& dist);

}  // namespace infogen
