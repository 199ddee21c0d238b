#pragma once

// Fully enumerable learning problems: losses, learner kernels, the standard
// joint over (hypothesis, training set) and the random-subset joint over
// (hypothesis, supersample, selector).

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "infogen/prob_core.hpp"

namespace infogen {

/// Systems larger than this many joint atoms are refused.
inline constexpr std::size_t kEnumerationBudget = 5'000'000;

class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// ℓ(w, z) for every hypothesis/instance pair, with its declared range [lo, hi]
/// and sub-Gaussian parameter (default (hi - lo) / 2).
class LossTable {
 public:
  LossTable() = default;
  LossTable(std::vector<std::string> hypotheses, std::vector<std::string> instances,
            std::vector<std::vector<double>> values, double lo, double hi,
            std::optional<double> sigma = std::nullopt);

  /// 0/1 loss on a shared label set: ℓ(w, z) = [w != z].
  static LossTable zero_one(std::vector<std::string> labels);

  std::size_t num_hypotheses() const { return hypotheses_.size(); }
  std::size_t num_instances() const { return instances_.size(); }
  const std::vector<std::string>& hypotheses() const { return hypotheses_; }
  const std::vector<std::string>& instances() const { return instances_; }
  double operator()(std::size_t w, std::size_t z) const { return values_[w][z]; }
  const std::vector<std::vector<double>>& values() const { return values_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double sigma() const { return sigma_; }
  double range() const { return hi_ - lo_; }

  LossTable with_sigma(double sigma) const;

 private:
  std::vector<std::string> hypotheses_;
  std::vector<std::string> instances_;
  std::vector<std::vector<double>> values_;
  double lo_ = 0.0;
  double hi_ = 1.0;
  double sigma_ = 0.5;
};

/// Row-major codec between index vectors over an alphabet and flat indices
/// (first coordinate most significant, matching iid_power).
class IndexCodec {
 public:
  IndexCodec(std::size_t base, std::size_t length);
  std::size_t base() const { return base_; }
  std::size_t length() const { return length_; }
  std::size_t count() const { return count_; }
  std::vector<std::size_t> decode(std::size_t flat) const;
  std::size_t encode(std::span<const std::size_t> digits) const;

 private:
  std::size_t base_;
  std::size_t length_;
  std::size_t count_;
};

/// Labels of all length-n vectors over `alphabet`, joined with ','.
std::vector<std::string> vector_labels(const std::vector<std::string>& alphabet, std::size_t n);

enum class TieRule { lowest_index, uniform_over_argmin };

/// P(w | z) ∝ exp(-β · n · L_z(w)); β = 0 is uniform over hypotheses.
Kernel gibbs_kernel(const LossTable& loss, std::size_t n, double beta);
/// Point mass (or uniform mass under a tie) on argmin_w L_z(w).
Kernel erm_kernel(const LossTable& loss, std::size_t n, TieRule tie = TieRule::lowest_index);
/// Ignores the data: every row equals `output`.
Kernel constant_kernel(const LossTable& loss, std::size_t n, const FiniteDistribution& output);
/// n = 1 only: W is the single training sample, read as a hypothesis label.
Kernel identity_kernel(const LossTable& loss);

class StandardSystem {
 public:
  const FiniteDistribution& pz() const { return pz_; }
  std::size_t n() const { return n_; }
  const Kernel& learner() const { return learner_; }
  const LossTable& loss() const { return loss_; }
  const FiniteDistribution& data_distribution() const { return pzn_; }
  /// Coordinates: (W, Z-vector).
  const JointTable& joint() const { return joint_; }
  const FiniteDistribution& pw() const { return pw_; }
  const IndexCodec& codec() const { return codec_; }

  std::size_t num_hypotheses() const { return loss_.num_hypotheses(); }
  std::size_t num_datasets() const { return pzn_.size(); }
  std::size_t atom(std::size_t w, std::size_t data) const { return w * num_datasets() + data; }

  double population_loss(std::size_t w) const { return population_loss_[w]; }
  double empirical_loss(std::size_t w, std::size_t data) const;

 private:
  friend StandardSystem assemble_standard(const FiniteDistribution&, std::size_t, const Kernel&,
                                          const LossTable&);
  StandardSystem(FiniteDistribution pz, std::size_t n, Kernel learner, LossTable loss);

  FiniteDistribution pz_;
  std::size_t n_;
  Kernel learner_;
  LossTable loss_;
  IndexCodec codec_;
  FiniteDistribution pzn_;
  JointTable joint_;
  FiniteDistribution pw_;
  std::vector<double> population_loss_;
};

StandardSystem assemble_standard(const FiniteDistribution& pz, std::size_t n,
                                 const Kernel& learner, const LossTable& loss);

class SubsetSystem {
 public:
  const FiniteDistribution& pz() const { return pz_; }
  std::size_t n() const { return n_; }
  const Kernel& learner() const { return learner_; }
  const LossTable& loss() const { return loss_; }
  const FiniteDistribution& supersample_distribution() const { return psuper_; }
  const FiniteDistribution& selector_distribution() const { return ps_; }
  /// Coordinates: (W, Z̃, S).
  const JointTable& joint() const { return joint_; }

  std::size_t num_hypotheses() const { return loss_.num_hypotheses(); }
  std::size_t num_supersamples() const { return psuper_.size(); }
  std::size_t num_selectors() const { return ps_.size(); }
  std::size_t atom(std::size_t w, std::size_t zt, std::size_t s) const {
    return (w * num_supersamples() + zt) * num_selectors() + s;
  }

  /// Index (into the learner's inputs) of the training vector z(s).
  std::size_t selected(std::size_t zt, std::size_t s) const {
    return selected_[zt * num_selectors() + s];
  }
  /// Index of z(s̄), the held-out half.
  std::size_t held_out(std::size_t zt, std::size_t s) const {
    return selected(zt, num_selectors() - 1 - s);
  }
  double cond_prob(std::size_t w, std::size_t zt, std::size_t s) const {
    return learner_.prob(selected(zt, s), w);
  }
  /// P_{W|Z̃}(w | z̃) = 2^{-n} Σ_s P(w | z(s)).
  double marginal_cond_prob(std::size_t w, std::size_t zt) const {
    return pw_given_super_[zt * num_hypotheses() + w];
  }
  FiniteDistribution marginal_row(std::size_t zt) const;

  double population_loss(std::size_t w) const { return population_loss_[w]; }
  double empirical_loss(std::size_t w, std::size_t data) const;

 private:
  friend SubsetSystem assemble_subset(const FiniteDistribution&, std::size_t, const Kernel&,
                                      const LossTable&);
  SubsetSystem(FiniteDistribution pz, std::size_t n, Kernel learner, LossTable loss);

  FiniteDistribution pz_;
  std::size_t n_;
  Kernel learner_;
  LossTable loss_;
  FiniteDistribution psuper_;
  FiniteDistribution ps_;
  JointTable joint_;
  std::vector<std::size_t> selected_;
  std::vector<double> pw_given_super_;
  std::vector<double> population_loss_;
};

SubsetSystem assemble_subset(const FiniteDistribution& pz, std::size_t n, const Kernel& learner,
                             const LossTable& loss);

/// gen(w, z) = L_{P_Z}(w) - L_z(w).
double gen(const StandardSystem& sys, std::size_t w, std::size_t data);
double gen(const StandardSystem& sys, const std::string& w, const std::string& data);
/// E_{P_WZ}[gen(W, Z)].
double expected_gen(const StandardSystem& sys);
/// E_{P_{W|z}}[gen(W, z)].
double posterior_gen(const StandardSystem& sys, std::size_t data);

/// (1/n) Σ_i [ℓ(w, z_i(s̄_i)) - ℓ(w, z_i(s_i))].
double gen_hat(const SubsetSystem& sys, std::size_t w, std::size_t zt, std::size_t s);
double gen_hat(const SubsetSystem& sys, const std::string& w, const std::string& zt,
               const std::string& s);
/// gen(w, z(s)) against the population loss.
double subset_gen(const SubsetSystem& sys, std::size_t w, std::size_t zt, std::size_t s);
/// E_{P_WZ̃S}[gen(W, Z(S))].
double expected_subset_gen(const SubsetSystem& sys);
double expected_gen_hat(const SubsetSystem& sys);

}  // namespace infogen
