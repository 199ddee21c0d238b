#pragma once

// Bounds in the random-subset setting. They control the test-minus-train gap
// ĝen over a supersample and scale with a range constant C, which is (b−a)²
// for a bounded loss or E[Δ(Z1,Z2)²] for a dominating difference function.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>

#include "infogen/bounds_standard.hpp"

namespace infogen {

enum class RangeMode { bounded_range, delta_expectation };

struct RangeConstant {
  double value = 1.0;
  RangeMode mode = RangeMode::bounded_range;
};

/// (b − a)².
RangeConstant range_constant(const LossTable& loss);
/// Σ P(z1)P(z2) Δ(z1,z2)². Throws std::invalid_argument if Δ fails to
/// dominate |ℓ(w,z1) − ℓ(w,z2)| somewhere on the table.
RangeConstant delta_constant(const std::function<double(std::size_t, std::size_t)>& delta_fn,
                             const LossTable& loss, const FiniteDistribution& pz);

struct SubsetOptions {
  /// Defaults to range_constant(loss).
  std::optional<RangeConstant> constant;
  /// Auxiliary Q_{W|Z̃} replacing P_{W|Z̃}; inputs are supersample labels.
  std::optional<Kernel> q;
};

namespace radicand {
/// 2C/n.
double subset_scale(double c, std::size_t n);
}  // namespace radicand

/// The constant C in effect for `sys` under `opts`.
double effective_constant(const SubsetSystem& sys, const SubsetOptions& opts);

/// sqrt(2C/n · I(W;S|Z̃)); bounds |E[gen(W, Z(S))]|.
BoundResult cmi_avg_bound(const SubsetSystem& sys, const SubsetOptions& opts = {});
BoundResult cond_pacb_bound(const SubsetSystem& sys, std::size_t zt, std::size_t s, double delta,
                            const SubsetOptions& opts = {});
BoundResult cond_pacb_moment_bound(const SubsetSystem& sys, double delta, MomentOrder t,
                                   const SubsetOptions& opts = {});
BoundResult cond_sd_density_bound(const SubsetSystem& sys, std::size_t w, std::size_t zt,
                                  std::size_t s, double delta, const SubsetOptions& opts = {});
BoundResult cond_sd_moment_bound(const SubsetSystem& sys, double delta, MomentOrder t,
                                 const SubsetOptions& opts = {});
BoundResult cond_sd_leakage_bound(const SubsetSystem& sys, double delta,
                                  const SubsetOptions& opts = {});
BoundResult cond_sd_renyi_pair_bound(const SubsetSystem& sys, double delta, double alpha,
                                     const SubsetOptions& opts = {});
BoundResult cond_tail_bound(const SubsetSystem& sys, double delta, std::optional<double> gamma,
                            const SubsetOptions& opts = {});
std::pair<BoundResult, BoundResult> cond_tail_relaxations(const SubsetSystem& sys, double delta,
                                                          MomentOrder t,
                                                          const SubsetOptions& opts = {});

/// Event over atoms (w, zt, s).
using AtomEvent = std::function<bool(std::size_t, std::size_t, std::size_t)>;

/// Two-factor Hölder upper bound on P_{WZ̃S}[E]; every exponent must exceed 1
/// and the conjugates are derived.
double holder_event_bound(const SubsetSystem& sys, const AtomEvent& event, double alpha = 2.0,
                          double alpha_prime = 2.0, double tilde_alpha = 2.0);

/// sqrt(2C/n · (I_α(W;S|Z̃) + log 2 + (α/(α−1)) log(1/δ))).
BoundResult cond_alpha_mi_bound(const SubsetSystem& sys, double delta, double alpha,
                                const SubsetOptions& opts = {});
/// α → ∞ limit: conditional leakage + log 2 + log(1/δ).
BoundResult cond_alpha_mi_leakage_bound(const SubsetSystem& sys, double delta,
                                        const SubsetOptions& opts = {});
/// I_α replaced by the conditional Rényi divergence of order α.
BoundResult cond_alpha_mi_renyi_bound(const SubsetSystem& sys, double delta, double alpha,
                                      const SubsetOptions& opts = {});

/// Converts a ĝen bound into a gen bound: eps_fn(δ/2) + sqrt((b−a)²/(2n) log(4/δ)).
BoundResult genhat_to_gen(const std::function<double(double)>& eps_fn, const LossTable& loss,
                          std::size_t n, double delta);
/// sqrt((b−a)²/(2n) log(4/δ)).
double genhat_to_gen_penalty(const LossTable& loss, std::size_t n, double delta);

struct LeakageOrdering {
  double conditional = 0.0;
  double standard = 0.0;
  bool holds = false;
};
/// L(S→W|Z̃) against L(Z(S)→W) on the induced standard system.
LeakageOrdering leakage_ordering_check(const SubsetSystem& sys);

}  // namespace infogen
