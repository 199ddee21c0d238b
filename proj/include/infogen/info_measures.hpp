#pragma once

// Information quantities on finite systems: information densities,
// divergences, the alpha families, leakages and central moments of the
// density, in both the standard and the random-subset setting. All values
// are in nats.

#include <cstddef>
#include <optional>
#include <vector>

#include "infogen/learning_models.hpp"
#include "infogen/prob_core.hpp"

namespace infogen {

/// Orders within this distance of 1 dispatch to the KL / MI / CMI limit.
inline constexpr double kAlphaOneTolerance = 1e-6;

/// Order t of a moment: a positive real or infinity. Infinity is a separate
/// state rather than a float sentinel.
class MomentOrder {
 public:
  static MomentOrder finite(double t);
  static MomentOrder infinity() { return MomentOrder(); }

  bool is_infinite() const { return infinite_; }
  /// Only meaningful for finite orders.
  double value() const { return t_; }
  /// 1/t, which is 0 for t = infinity.
  double reciprocal() const { return infinite_ ? 0.0 : 1.0 / t_; }

  bool operator==(const MomentOrder&) const = default;

 private:
  MomentOrder() = default;
  bool infinite_ = true;
  double t_ = 0.0;
};

/// ι = log(P/Q) over a flat atom index shared by P and Q. Built only when
/// P ≪ Q; atoms outside supp(P) carry ι = -inf and are never read.
class DensityTable {
 public:
  DensityTable() = default;
  DensityTable(std::vector<double> log_p, std::vector<double> log_q);

  std::size_t size() const { return log_p_.size(); }
  bool in_support(std::size_t i) const { return log_p_[i] != kNegInf; }
  double value(std::size_t i) const { return iota_[i]; }
  double log_p(std::size_t i) const { return log_p_[i]; }
  double log_q(std::size_t i) const { return log_q_[i]; }
  double p(std::size_t i) const;
  const std::vector<double>& values() const { return iota_; }
  const std::vector<double>& log_p() const { return log_p_; }
  const std::vector<std::size_t>& support() const { return support_; }

  /// E_P[ι].
  double mean() const;
  /// P[ι ≥ gamma].
  double tail(double gamma) const;
  /// Largest ι over supp(P).
  double max() const;

 private:
  std::vector<double> log_p_;
  std::vector<double> log_q_;
  std::vector<double> iota_;
  std::vector<std::size_t> support_;
};

// ---- generic divergences --------------------------------------------------

/// Throws AbsoluteContinuityViolation unless P ≪ Q.
DensityTable density(const JointTable& p, const JointTable& q);
DensityTable density(const FiniteDistribution& p, const FiniteDistribution& q);

double kl(const FiniteDistribution& p, const FiniteDistribution& q);
/// (1/(α−1)) log E_Q[(dP/dQ)^α]. For α < 1 only the common support
/// contributes and absolute continuity is not required.
double renyi_divergence(const FiniteDistribution& p, const FiniteDistribution& q, double alpha);
/// Same functional evaluated from a prebuilt density table.
double renyi_divergence(const DensityTable& tbl, double alpha);

/// (E_P|ι − E_P ι|^t)^{1/t}; ess sup |ι − E_P ι| for t = infinity.
double central_moment(const DensityTable& tbl, MomentOrder t);
/// (E|v|^t)^{1/t} of nonnegative per-outcome values; ess sup for infinity.
double raw_moment(const std::vector<double>& values, const std::vector<double>& log_masses,
                  MomentOrder t);

// ---- standard setting -----------------------------------------------------

/// ι(w, z) against q_w × P_Z^n (default q_w = P_W), laid out like sys.joint().
DensityTable density(const StandardSystem& sys,
                     const std::optional<FiniteDistribution>& q_w = std::nullopt);
/// KL(P_{W|z} ‖ q_w) for every training vector z.
std::vector<double> posterior_kl(const StandardSystem& sys,
                                 const std::optional<FiniteDistribution>& q_w = std::nullopt);

double mutual_information(const StandardSystem& sys,
                          const std::optional<FiniteDistribution>& q_w = std::nullopt);
/// Sibson form (α/(α−1)) log Σ_w (E_{P_Z^n} P(w|Z)^α)^{1/α}. The reference
/// marginal cancels, so no auxiliary Q_W is accepted.
double alpha_mi(const StandardSystem& sys, double alpha);
/// log Σ_w max_{z ∈ supp} P(w|z).
double maximal_leakage(const StandardSystem& sys);
/// ess sup of ι under P_WZ.
double max_information(const StandardSystem& sys,
                       const std::optional<FiniteDistribution>& q_w = std::nullopt);

// ---- random-subset setting ------------------------------------------------

/// ι(w, s | z̃) against q(w | z̃) P_Z̃ P_S (default q = P_{W|Z̃}), laid out like
/// sys.joint().
DensityTable conditional_density(const SubsetSystem& sys,
                                 const std::optional<Kernel>& q = std::nullopt);
/// KL(P_{W|z̃,s} ‖ q(·|z̃)) indexed by zt * |S| + s.
std::vector<double> conditional_posterior_kl(const SubsetSystem& sys,
                                             const std::optional<Kernel>& q = std::nullopt);

double cond_mutual_information(const SubsetSystem& sys,
                               const std::optional<Kernel>& q = std::nullopt);
double cond_renyi_divergence(const SubsetSystem& sys, double alpha,
                             const std::optional<Kernel>& q = std::nullopt);
/// (1/(α−1)) log E_Z̃[(E_{W|Z̃}[(E_S e^{αι})^{1/α}])^α], α > 1.
double cond_alpha_mi(const SubsetSystem& sys, double alpha);
/// log max_{z̃ ∈ supp} Σ_w max_s P(w | z(s)).
double cond_maximal_leakage(const SubsetSystem& sys);
/// I(W; Z̃).
double supersample_mutual_information(const SubsetSystem& sys);

/// The standard system whose training set is Z(S); by symmetry Z(S) ~ P_Z^n.
StandardSystem induced_standard_system(const SubsetSystem& sys);

}  // namespace infogen
