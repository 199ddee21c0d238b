#pragma once

// Ground truth for the bounds: exact laws of gen / ĝen, exact coverage of
// every high-probability bound, the exponential inequalities the bounds are
// derived from, and a handful of self-checking property suites.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infogen/bounds_standard.hpp"
#include "infogen/bounds_subset.hpp"

namespace infogen {

// ---- exponential inequalities ------------------------------------------------

struct ExpCheck {
  double worst_log_value = kNegInf;
  double worst_lambda = 0.0;
  double worst_value() const;
  /// worst value ≤ 1 + 1e-9.
  bool passes() const;
};

/// {0} ∪ ±{0.1, 1, 10, 100} · unit.
std::vector<double> default_lambda_grid(double unit);

/// max_λ E_{P_WZ}[exp(λ gen − λ²σ²/(2n) − ι)]. `sigma` overrides the loss's
/// sub-Gaussian parameter (used to inject faults); the default grid unit is n/σ².
ExpCheck check_exp_inequality_standard(const StandardSystem& sys,
                                       const std::vector<double>& lambdas = {},
                                       std::optional<double> sigma = std::nullopt);
/// max_λ E_{P_WZ̃S}[exp(λ ĝen − λ²C/(2n) − ι)]; grid unit n/C.
ExpCheck check_exp_inequality_subset(const SubsetSystem& sys,
                                     const std::vector<double>& lambdas = {},
                                     std::optional<double> c = std::nullopt);

// ---- exact laws ---------------------------------------------------------------

/// Finite law on the reals; equal values (within 1e-12) are merged.
class ValueDistribution {
 public:
  ValueDistribution() = default;
  ValueDistribution(std::vector<double> values, std::vector<double> masses);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& masses() const { return masses_; }
  double mean() const;
  /// Smallest v with P[X ≤ v] ≥ q (within 1e-12).
  double quantile(double q) const;
  double prob_greater(double threshold) const;
  ValueDistribution absolute() const;

 private:
  std::vector<double> values_;
  std::vector<double> masses_;
};

ValueDistribution exact_gen_distribution(const StandardSystem& sys);
ValueDistribution exact_gen_hat_distribution(const SubsetSystem& sys);
/// Law of gen(W, Z(S)).
ValueDistribution exact_subset_gen_distribution(const SubsetSystem& sys);

// ---- coverage -----------------------------------------------------------------

struct BoundRequest {
  std::string bound_id;
  double delta = 0.1;
  std::optional<MomentOrder> t;
  std::optional<double> alpha;
  /// Fixed γ for the tail bounds; automatic when unset.
  std::optional<double> gamma;
};

/// A bound evaluated on every outcome of its probability space: the training
/// set (PAC-Bayes, standard), (z̃, s) (PAC-Bayes, subset) or the full atom
/// (single-draw). `value` is the quantity the bound controls.
struct OutcomeEvaluation {
  BoundResult summary;
  std::vector<double> mass;
  std::vector<double> value;
  std::vector<double> epsilon;
  std::vector<char> feasible;
  /// Exact (1−δ)-quantile of `value`.
  double truth_quantile(double delta) const;
};

struct CoverageReport {
  std::string bound_id;
  double delta = 0.0;
  double exact_violation_prob = 1.0;
  bool holds = false;
};

std::vector<std::string> standard_bound_ids();
std::vector<std::string> subset_bound_ids();

/// Throws std::invalid_argument for an unknown bound_id.
OutcomeEvaluation evaluate_bound(const StandardSystem& sys, const BoundRequest& req);
OutcomeEvaluation evaluate_bound(const SubsetSystem& sys, const BoundRequest& req);

/// Violation: |value| > ε + 1e-12 or the bound is infeasible at the outcome.
CoverageReport coverage_of(const OutcomeEvaluation& ev, double delta);
CoverageReport coverage(const StandardSystem& sys, const BoundRequest& req);
CoverageReport coverage(const SubsetSystem& sys, const BoundRequest& req);

// ---- lemmas -------------------------------------------------------------------

struct ConverseCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};
/// P[E] ≤ P[log dP/dQ > γ] + e^γ Q[E]. Atoms of E must satisfy P ≪ Q.
ConverseCheck strong_converse_check(const FiniteDistribution& p, const FiniteDistribution& q,
                                    const std::vector<bool>& event, double gamma);

/// 2 exp(−n ε² / (2σ²)).
double hoeffding_tail(double sigma, std::size_t n, double eps);
/// P_{Z^n}[|L_Z(w) − L_{P_Z}(w)| ≥ ε].
double exact_deviation_prob(const StandardSystem& sys, std::size_t w, double eps);

struct GaussianValidation {
  double closed_form = 0.0;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
  bool within_three_se = false;
};
/// Z_i ~ N(0, prior_var), W = mean(Z) + N(0, noise_var). Compares the Monte
/// Carlo mean of ι(W, Z) with (1/2) log(1 + prior_var / (n noise_var)).
GaussianValidation gaussian_mi_validation(std::size_t n, double noise_var, double prior_var,
                                          std::size_t samples, std::uint64_t seed);

// ---- instances ----------------------------------------------------------------

/// Canonical instances: A is ERM on two fair bits, B selects the single
/// training sample, C ignores its data.
StandardSystem canonical_inst_a();
SubsetSystem canonical_inst_a_subset();
StandardSystem canonical_inst_b_standard();
SubsetSystem canonical_inst_b();
StandardSystem canonical_inst_c();
SubsetSystem canonical_inst_c_subset();

struct RandomProblem {
  FiniteDistribution pz;
  std::size_t n = 1;
  LossTable loss;
  double beta = 0.0;
  Kernel learner;
};
/// |Z| ∈ {2,3}, |W| ∈ {2,3,4}, n ∈ {1,2,3}, Dirichlet(1) P_Z, uniform [0,1]
/// losses, Gibbs learner with β ∈ [0, 8]. Fully determined by (seed, index).
RandomProblem random_problem(std::uint64_t seed, std::uint64_t index);

struct NamedStandard {
  std::string name;
  StandardSystem sys;
};
struct NamedSubset {
  std::string name;
  SubsetSystem sys;
};
struct InstancePool {
  std::vector<NamedStandard> standard;
  std::vector<NamedSubset> subset;
};
InstancePool canonical_pool();
/// `count` random problems, each assembled in both settings.
InstancePool random_pool(std::uint64_t seed, std::size_t count);

// ---- suites -------------------------------------------------------------------

struct CheckFailure {
  std::string instance;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::vector<CheckFailure> failures;
  bool passed() const { return failures.empty(); }
};

struct SuiteOptions {
  std::vector<double> deltas{0.3, 0.1, 0.05};
  std::vector<MomentOrder> t_grid{MomentOrder::finite(1.0), MomentOrder::finite(2.0),
                                  MomentOrder::infinity()};
  std::vector<double> alpha_grid{1.5, 2.0, 4.0, 16.0};
  /// Divide σ by 4 (and C by 16) in the exponential checks.
  bool inject_sigma_fault = false;
};

std::vector<std::string> suite_names();
/// Throws std::invalid_argument for an unknown suite name.
SuiteResult run_suite(const std::string& name, const InstancePool& pool, const SuiteOptions& opts,
                      std::uint64_t seed);

}  // namespace infogen
