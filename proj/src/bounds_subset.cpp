#include "infogen/bounds_subset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace infogen {

RangeConstant range_constant(const LossTable& loss) {
  return {loss.range() * loss.range(), RangeMode::bounded_range};
}

RangeConstant delta_constant(const std::function<double(std::size_t, std::size_t)>& delta_fn,
                             const LossTable& loss, const FiniteDistribution& pz) {
  if (pz.labels() != loss.instances()) {
    throw std::invalid_argument("delta_constant: P_Z labels must match the instance space");
  }
  double acc = 0.0;
  for (std::size_t z1 = 0; z1 < pz.size(); ++z1) {
    for (std::size_t z2 = 0; z2 < pz.size(); ++z2) {
      const double d = delta_fn(z1, z2);
      for (std::size_t w = 0; w < loss.num_hypotheses(); ++w) {
        if (std::abs(loss(w, z1) - loss(w, z2)) > d + 1e-12) {
          throw std::invalid_argument("delta_constant: Delta(" + pz.label(z1) + "," + pz.label(z2) +
                                      ") does not dominate the loss difference at hypothesis " +
                                      loss.hypotheses()[w]);
        }
      }
      acc += pz.mass(z1) * pz.mass(z2) * d * d;
    }
  }
  return {acc, RangeMode::delta_expectation};
}

namespace radicand {
double subset_scale(double c, std::size_t n) { return 2.0 * c / static_cast<double>(n); }
}  // namespace radicand

double effective_constant(const SubsetSystem& sys, const SubsetOptions& opts) {
  const double c = opts.constant ? opts.constant->value : range_constant(sys.loss()).value;
  if (!(c >= 0.0)) throw std::invalid_argument("range constant must be nonnegative");
  return c;
}

namespace {

BoundParams base_params(const SubsetSystem& sys, double c) {
  BoundParams p;
  p.range_constant = c;
  p.n = sys.n();
  return p;
}

struct Ctx {
  double c;
  double scale;
  BoundParams params;
};

Ctx context(const SubsetSystem& sys, const SubsetOptions& opts) {
  const double c = effective_constant(sys, opts);
  return {c, radicand::subset_scale(c, sys.n()), base_params(sys, c)};
}

}  // namespace

BoundResult cmi_avg_bound(const SubsetSystem& sys, const SubsetOptions& opts) {
  const auto ctx = context(sys, opts);
  return finish_bound("cmi_avg", Flavor::average, Scope::data_independent, ctx.scale,
                      cond_mutual_information(sys, opts.q), ctx.params);
}

BoundResult cond_pacb_bound(const SubsetSystem& sys, std::size_t zt, std::size_t s, double delta,
                            const SubsetOptions& opts) {
  radicand::check_delta(delta);
  if (zt >= sys.num_supersamples() || s >= sys.num_selectors()) {
    throw std::out_of_range("cond_pacb_bound: unknown (supersample, selector)");
  }
  auto ctx = context(sys, opts);
  ctx.params.delta = delta;
  const double k = conditional_posterior_kl(sys, opts.q)[zt * sys.num_selectors() + s];
  return finish_bound("cond_pacb", Flavor::pac_bayes, Scope::data_dependent, ctx.scale,
                      radicand::with_confidence(k, delta), ctx.params);
}

BoundResult cond_pacb_moment_bound(const SubsetSystem& sys, double delta, MomentOrder t,
                                   const SubsetOptions& opts) {
  radicand::check_delta(delta);
  auto ctx = context(sys, opts);
  ctx.params.delta = delta;
  ctx.params.t = t;
  // Law of (Z̃, S) on the zt * |S| + s layout.
  std::vector<double> lm(sys.num_supersamples() * sys.num_selectors());
  for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
    for (std::size_t s = 0; s < sys.num_selectors(); ++s) {
      lm[zt * sys.num_selectors() + s] = sys.supersample_distribution().log_mass(zt) +
                                         sys.selector_distribution().log_mass(s);
    }
  }
  const double m = raw_moment(conditional_posterior_kl(sys, opts.q), lm, t);
  return finish_bound("cond_pacb_moment", Flavor::pac_bayes, Scope::data_independent, ctx.scale,
                      radicand::moment(0.0, m, t, delta, std::log(2.0)), ctx.params);
}

BoundResult cond_sd_density_bound(const SubsetSystem& sys, std::size_t w, std::size_t zt,
                                  std::size_t s, double delta, const SubsetOptions& opts) {
  radicand::check_delta(delta);
  if (w >= sys.num_hypotheses() || zt >= sys.num_supersamples() || s >= sys.num_selectors()) {
    throw std::out_of_range("cond_sd_density_bound: unknown atom");
  }
  auto ctx = context(sys, opts);
  ctx.params.delta = delta;
  const auto tbl = conditional_density(sys, opts.q);
  const std::size_t a = sys.atom(w, zt, s);
  if (!tbl.in_support(a)) {
    return finish_bound("cond_sd_density", Flavor::single_draw, Scope::data_dependent, ctx.scale,
                        kNegInf, ctx.params, "atom outside the support of P_WZ~S");
  }
  return finish_bound("cond_sd_density", Flavor::single_draw, Scope::data_dependent, ctx.scale,
                      radicand::with_confidence(tbl.value(a), delta), ctx.params);
}

BoundResult cond_sd_moment_bound(const SubsetSystem& sys, double delta, MomentOrder t,
                                 const SubsetOptions& opts) {
  radicand::check_delta(delta);
  auto ctx = context(sys, opts);
  ctx.params.delta = delta;
  ctx.params.t = t;
  const auto tbl = conditional_density(sys, opts.q);
  return finish_bound("cond_sd_moment", Flavor::single_draw, Scope::data_independent, ctx.scale,
                      radicand::moment(tbl.mean(), central_moment(tbl, t), t, delta, std::log(2.0)),
                      ctx.params);
}

BoundResult cond_sd_leakage_bound(const SubsetSystem& sys, double delta, const SubsetOptions& opts) {
  radicand::check_delta(delta);
  if (opts.q) (void)conditional_density(sys, opts.q);
  auto ctx = context(sys, opts);
  ctx.params.delta = delta;
  return finish_bound("cond_sd_leakage", Flavor::single_draw, Scope::data_independent, ctx.scale,
                      radicand::leakage(cond_maximal_leakage(sys), delta), ctx.params);
}

BoundResult cond_sd_renyi_pair_bound(const SubsetSystem& sys, double delta, double alpha,
                                     const SubsetOptions& opts) {
  radicand::check_delta(delta);
  radicand::check_order(alpha);
  auto ctx = context(sys, opts);
  ctx.params.delta = delta;
  ctx.params.alpha = alpha;
  const auto tbl = conditional_density(sys, opts.q);
  const double da = renyi_divergence(tbl, alpha);
  const double dg = renyi_divergence(tbl, radicand::conjugate(alpha));
  return finish_bound("cond_sd_renyi_pair", Flavor::single_draw, Scope::data_independent,
                      ctx.scale, radicand::renyi_pair(da, dg, alpha, delta), ctx.params);
}

BoundResult cond_tail_bound(const SubsetSystem& sys, double delta, std::optional<double> gamma,
                            const SubsetOptions& opts) {
  radicand::check_delta(delta);
  const auto tbl = conditional_density(sys, opts.q);
  const auto choice = gamma ? radicand::fixed_tail(tbl, delta, *gamma) : radicand::best_tail(tbl, delta);
  auto ctx = context(sys, opts);
  ctx.params.delta = delta;
  ctx.params.gamma = choice.gamma;
  return finish_bound("cond_tail", Flavor::single_draw, Scope::data_independent, ctx.scale,
                      choice.feasible ? choice.radicand : std::nan(""), ctx.params,
                      "P[i >= gamma] >= delta for every admissible gamma");
}

std::pair<BoundResult, BoundResult> cond_tail_relaxations(const SubsetSystem& sys, double delta,
                                                          MomentOrder t, const SubsetOptions& opts) {
  radicand::check_delta(delta);
  const auto tbl = conditional_density(sys, opts.q);
  auto ctx = context(sys, opts);
  ctx.params.delta = delta;
  auto pm = ctx.params;
  pm.t = t;
  const double rm = radicand::moment(tbl.mean(), central_moment(tbl, t), t, delta, std::log(4.0));
  const double rl = cond_maximal_leakage(sys) + std::log(2.0) + 2.0 * std::log(2.0 / delta);
  return {finish_bound("cond_tail_moment_relax", Flavor::single_draw, Scope::data_independent,
                       ctx.scale, rm, pm),
          finish_bound("cond_tail_leakage_relax", Flavor::single_draw, Scope::data_independent,
                       ctx.scale, rl, ctx.params)};
}

double holder_event_bound(const SubsetSystem& sys, const AtomEvent& event, double alpha,
                          double alpha_prime, double tilde_alpha) {
  for (double a : {alpha, alpha_prime, tilde_alpha}) {
    if (!(a > 1.0) || !std::isfinite(a)) {
      throw std::invalid_argument("holder_event_bound: every exponent must be finite and > 1");
    }
  }
  const double gamma = radicand::conjugate(alpha);
  const double gamma_prime = radicand::conjugate(alpha_prime);
  const double tilde_gamma = radicand::conjugate(tilde_alpha);
  const auto& pzt = sys.supersample_distribution();
  const auto& ps = sys.selector_distribution();

  // Both factors are accumulated as log-sums over z̃ of the outer integrand.
  std::vector<double> f1_terms;
  std::vector<double> f2_terms;
  std::vector<double> w1;
  std::vector<double> w2;
  std::vector<double> per_s;
  for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
    if (!pzt.in_support(zt)) continue;
    w1.clear();
    w2.clear();
    for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
      const double pw = sys.marginal_cond_prob(w, zt);
      if (!(pw > 0.0)) continue;
      const double lpw = std::log(pw);
      double event_mass = 0.0;
      per_s.clear();
      for (std::size_t s = 0; s < sys.num_selectors(); ++s) {
        if (event(w, zt, s)) event_mass += ps.mass(s);
        const double lp = sys.learner().log_prob(sys.selected(zt, s), w);
        if (lp != kNegInf) per_s.push_back(ps.log_mass(s) + alpha * (lp - lpw));
      }
      // E_{W|z̃}[P_S[E]^{γ'/γ}] and E_{W|z̃}[(E_S e^{αι})^{α'/α}].
      w1.push_back(event_mass > 0.0 ? lpw + gamma_prime / gamma * std::log(event_mass) : kNegInf);
      w2.push_back(lpw + alpha_prime / alpha * log_sum_exp(per_s));
    }
    f1_terms.push_back(pzt.log_mass(zt) + tilde_gamma / gamma_prime * log_sum_exp(w1));
    f2_terms.push_back(pzt.log_mass(zt) + tilde_alpha / alpha_prime * log_sum_exp(w2));
  }
  const double log_f1 = log_sum_exp(f1_terms) / tilde_gamma;
  const double log_f2 = log_sum_exp(f2_terms) / tilde_alpha;
  if (log_f1 == kNegInf) return 0.0;
  return std::exp(log_f1 + log_f2);
}

BoundResult cond_alpha_mi_bound(const SubsetSystem& sys, double delta, double alpha,
                                const SubsetOptions& opts) {
  radicand::check_delta(delta);
  radicand::check_order(alpha);
  auto ctx = context(sys, opts);
  ctx.params.delta = delta;
  ctx.params.alpha = alpha;
  const double r = cond_alpha_mi(sys, alpha) + std::log(2.0) +
                   radicand::conjugate(alpha) * std::log(1.0 / delta);
  return finish_bound("cond_alpha_mi", Flavor::single_draw, Scope::data_independent, ctx.scale, r,
                      ctx.params);
}

BoundResult cond_alpha_mi_leakage_bound(const SubsetSystem& sys, double delta,
                                        const SubsetOptions& opts) {
  radicand::check_delta(delta);
  auto ctx = context(sys, opts);
  ctx.params.delta = delta;
  ctx.params.alpha = kInf;
  const double r = cond_maximal_leakage(sys) + std::log(2.0) + std::log(1.0 / delta);
  return finish_bound("cond_alpha_mi_leakage", Flavor::single_draw, Scope::data_independent,
                      ctx.scale, r, ctx.params);
}

BoundResult cond_alpha_mi_renyi_bound(const SubsetSystem& sys, double delta, double alpha,
                                      const SubsetOptions& opts) {
  radicand::check_delta(delta);
  radicand::check_order(alpha);
  auto ctx = context(sys, opts);
  ctx.params.delta = delta;
  ctx.params.alpha = alpha;
  const double r = cond_renyi_divergence(sys, alpha) + std::log(2.0) +
                   radicand::conjugate(alpha) * std::log(1.0 / delta);
  return finish_bound("cond_alpha_mi_renyi", Flavor::single_draw, Scope::data_independent,
                      ctx.scale, r, ctx.params);
}

double genhat_to_gen_penalty(const LossTable& loss, std::size_t n, double delta) {
  radicand::check_delta(delta);
  if (n == 0) throw std::invalid_argument("genhat_to_gen: n must be at least 1");
  return std::sqrt(loss.range() * loss.range() / (2.0 * static_cast<double>(n)) *
                   std::log(4.0 / delta));
}

BoundResult genhat_to_gen(const std::function<double(double)>& eps_fn, const LossTable& loss,
                          std::size_t n, double delta) {
  const double penalty = genhat_to_gen_penalty(loss, n, delta);
  BoundResult out;
  out.bound_id = "genhat_to_gen";
  out.flavor = Flavor::single_draw;
  out.scope = Scope::data_independent;
  out.params.delta = delta;
  out.params.n = n;
  out.params.range_constant = loss.range() * loss.range();
  const double inner = eps_fn(delta / 2.0);
  if (std::isfinite(inner) && inner >= 0.0) {
    out.epsilon = inner + penalty;
    out.feasible = true;
  } else {
    out.reason = "the plugged-in bound is infeasible at delta/2";
  }
  return out;
}

LeakageOrdering leakage_ordering_check(const SubsetSystem& sys) {
  LeakageOrdering r;
  r.conditional = cond_maximal_leakage(sys);
  r.standard = maximal_leakage(induced_standard_system(sys));
  r.holds = r.conditional <= r.standard + 1e-12;
  return r;
}

}  // namespace infogen
