#pragma once

// Generalization bounds in the standard setting, where the learner sees n iid
// samples from P_Z. Every bound is a closed form sqrt(scale * radicand); the
// radicand helpers are exposed so the coverage engine can evaluate a bound on
// every outcome from precomputed tables.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infogen/info_measures.hpp"
#include "infogen/learning_models.hpp"

namespace infogen {

enum class Flavor { average, pac_bayes, single_draw };
enum class Scope { data_dependent, data_independent };

std::string to_string(Flavor f);
std::string to_string(Scope s);

struct BoundParams {
  std::optional<double> delta;
  std::optional<MomentOrder> t;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<double> lambda;
  /// Sub-Gaussian parameter (standard setting).
  std::optional<double> sigma;
  /// Range constant C (random-subset setting).
  std::optional<double> range_constant;
  std::size_t n = 0;
};

struct BoundResult {
  std::string bound_id;
  Flavor flavor = Flavor::average;
  Scope scope = Scope::data_independent;
  /// +inf when infeasible.
  double epsilon = kInf;
  bool feasible = false;
  std::string reason;
  BoundParams params;
};

struct StandardOptions {
  /// Auxiliary reference replacing P_W; defaults to the exact marginal.
  std::optional<FiniteDistribution> q_w;
};

/// Scalar pieces shared by the bound functions and the coverage engine.
namespace radicand {

void check_delta(double delta);
void check_order(double alpha);

/// 2σ²/n.
double standard_scale(double sigma, std::size_t n);

/// info + log(1/δ): data-dependent PAC-Bayes and single-draw forms.
double with_confidence(double info, double delta);
/// center + moment / (δ/2)^{1/t} + log(2/δ); pass log_numerator = log 4 for
/// the hypothesis-testing relaxation.
double moment(double center, double moment_t, MomentOrder t, double delta,
              double log_numerator);
/// L + 2 log(2/δ).
double leakage(double leak, double delta);
/// ((α−1)/α) D_α + ((γ−1)/γ) D_γ + 2 log(2/δ), γ = α/(α−1).
double renyi_pair(double d_alpha, double d_gamma, double alpha, double delta);
/// γ + log(2/(δ − tail)); NaN when tail ≥ δ.
double tail(double gamma, double tail_prob, double delta);

struct TailChoice {
  double gamma = 0.0;
  double tail_prob = 1.0;
  double radicand = 0.0;
  bool feasible = false;
};
/// Minimizes the tail radicand over the attained density values and each
/// value + 1e-9 (the right edge of every step of γ ↦ P[ι ≥ γ]).
TailChoice best_tail(const DensityTable& tbl, double delta);
TailChoice fixed_tail(const DensityTable& tbl, double delta, double gamma);

/// Conjugate exponent α/(α−1).
double conjugate(double alpha);

}  // namespace radicand

/// Packs sqrt(scale * r) into a result; a negative or non-finite radicand
/// yields an infeasible result carrying `reason`.
BoundResult finish_bound(std::string id, Flavor flavor, Scope scope, double scale, double r,
                         BoundParams params, const std::string& reason = "negative radicand");

/// sqrt(2σ²/n · I(W;Z)).
BoundResult avg_mi_bound(const StandardSystem& sys, const StandardOptions& opts = {});
/// sqrt(2σ²/n · (KL(P_{W|z} ‖ P_W) + log(1/δ))).
BoundResult pacb_bound(const StandardSystem& sys, std::size_t data, double delta,
                       const StandardOptions& opts = {});
BoundResult pacb_moment_bound(const StandardSystem& sys, double delta, MomentOrder t,
                              const StandardOptions& opts = {});
BoundResult sd_density_bound(const StandardSystem& sys, std::size_t w, std::size_t data,
                             double delta, const StandardOptions& opts = {});
BoundResult sd_moment_bound(const StandardSystem& sys, double delta, MomentOrder t,
                            const StandardOptions& opts = {});
BoundResult sd_leakage_bound(const StandardSystem& sys, double delta,
                             const StandardOptions& opts = {});
BoundResult sd_renyi_bound(const StandardSystem& sys, double delta, double alpha,
                           const StandardOptions& opts = {});
/// gamma = nullopt selects γ automatically.
BoundResult sd_tail_bound(const StandardSystem& sys, double delta, std::optional<double> gamma,
                          const StandardOptions& opts = {});
/// (moment relaxation, leakage relaxation) of the tail bound.
std::pair<BoundResult, BoundResult> tail_relaxations(const StandardSystem& sys, double delta,
                                                     MomentOrder t,
                                                     const StandardOptions& opts = {});

struct ChainReport {
  double leakage = 0.0;
  double max_information = 0.0;
  double mutual_information = 0.0;
  double m_inf = 0.0;
  /// L ≤ I_max ≤ I + M_∞ (within 1e-12).
  bool chain_holds = false;
  /// L ≤ I_max + log(2/δ): the leakage bound beats the max-information one.
  bool leakage_tighter = false;
  double mi_plus_m_inf() const { return mutual_information + m_inf; }
};
ChainReport chain_report(const StandardSystem& sys, double delta);

}  // namespace infogen
