#include "infogen/bounds_standard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infogen {

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::average: return "average";
    case Flavor::pac_bayes: return "pac-bayes";
    case Flavor::single_draw: return "single-draw";
  }
  return "unknown";
}

std::string to_string(Scope s) {
  return s == Scope::data_dependent ? "data-dependent" : "data-independent";
}

namespace radicand {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

void check_order(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("order alpha must be finite and greater than 1");
  }
}

double standard_scale(double sigma, std::size_t n) {
  return 2.0 * sigma * sigma / static_cast<double>(n);
}

double with_confidence(double info, double delta) { return info + std::log(1.0 / delta); }

double moment(double center, double moment_t, MomentOrder t, double delta, double log_numerator) {
  const double inflation = t.is_infinite() ? 1.0 : std::pow(delta / 2.0, -t.reciprocal());
  return center + moment_t * inflation + log_numerator - std::log(delta);
}

double leakage(double leak, double delta) { return leak + 2.0 * std::log(2.0 / delta); }

double conjugate(double alpha) { return alpha / (alpha - 1.0); }

double renyi_pair(double d_alpha, double d_gamma, double alpha, double delta) {
  const double gamma = conjugate(alpha);
  return (alpha - 1.0) / alpha * d_alpha + (gamma - 1.0) / gamma * d_gamma +
         2.0 * std::log(2.0 / delta);
}

double tail(double gamma, double tail_prob, double delta) {
  if (!(tail_prob < delta)) return std::nan("");
  return gamma + std::log(2.0 / (delta - tail_prob));
}

TailChoice fixed_tail(const DensityTable& tbl, double delta, double gamma) {
  TailChoice c;
  c.gamma = gamma;
  c.tail_prob = tbl.tail(gamma);
  c.radicand = tail(gamma, c.tail_prob, delta);
  c.feasible = std::isfinite(c.radicand) && c.radicand >= 0.0;
  return c;
}

TailChoice best_tail(const DensityTable& tbl, double delta) {
  std::vector<std::pair<double, double>> atoms;  // (ι, mass)
  atoms.reserve(tbl.support().size());
  for (std::size_t i : tbl.support()) atoms.emplace_back(tbl.value(i), tbl.p(i));
  std::sort(atoms.begin(), atoms.end());

  // suffix[k] = P[ι ≥ atoms[k].first] for the first index k of each value.
  std::vector<double> suffix(atoms.size() + 1, 0.0);
  for (std::size_t k = atoms.size(); k-- > 0;) suffix[k] = suffix[k + 1] + atoms[k].second;

  auto tail_at = [&](double gamma) {
    const auto it = std::lower_bound(atoms.begin(), atoms.end(), std::make_pair(gamma, -kInf));
    return std::min(1.0, suffix[static_cast<std::size_t>(it - atoms.begin())]);
  };

  TailChoice best;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (k > 0 && atoms[k].first == atoms[k - 1].first) continue;
    for (double gamma : {atoms[k].first, atoms[k].first + 1e-9}) {
      TailChoice c;
      c.gamma = gamma;
      c.tail_prob = tail_at(gamma);
      c.radicand = tail(gamma, c.tail_prob, delta);
      c.feasible = std::isfinite(c.radicand) && c.radicand >= 0.0;
      if (c.feasible && (!best.feasible || c.radicand < best.radicand)) best = c;
    }
  }
  return best;
}

}  // namespace radicand

BoundResult finish_bound(std::string id, Flavor flavor, Scope scope, double scale, double r,
                         BoundParams params, const std::string& reason) {
  BoundResult out;
  out.bound_id = std::move(id);
  out.flavor = flavor;
  out.scope = scope;
  out.params = std::move(params);
  if (std::isfinite(r) && r >= 0.0) {
    out.epsilon = std::sqrt(scale * r);
    out.feasible = true;
  } else {
    out.epsilon = kInf;
    out.feasible = false;
    out.reason = reason;
  }
  return out;
}

namespace {

BoundParams base_params(const StandardSystem& sys) {
  BoundParams p;
  p.sigma = sys.loss().sigma();
  p.n = sys.n();
  return p;
}

double scale_of(const StandardSystem& sys) {
  return radicand::standard_scale(sys.loss().sigma(), sys.n());
}

}  // namespace

BoundResult avg_mi_bound(const StandardSystem& sys, const StandardOptions& opts) {
  return finish_bound("avg_mi", Flavor::average, Scope::data_independent, scale_of(sys),
                      mutual_information(sys, opts.q_w), base_params(sys));
}

BoundResult pacb_bound(const StandardSystem& sys, std::size_t data, double delta,
                       const StandardOptions& opts) {
  radicand::check_delta(delta);
  if (data >= sys.num_datasets()) throw std::out_of_range("pacb_bound: unknown training vector");
  auto p = base_params(sys);
  p.delta = delta;
  const double k = posterior_kl(sys, opts.q_w)[data];
  return finish_bound("pacb", Flavor::pac_bayes, Scope::data_dependent, scale_of(sys),
                      radicand::with_confidence(k, delta), p);
}

BoundResult pacb_moment_bound(const StandardSystem& sys, double delta, MomentOrder t,
                              const StandardOptions& opts) {
  radicand::check_delta(delta);
  auto p = base_params(sys);
  p.delta = delta;
  p.t = t;
  const double m = raw_moment(posterior_kl(sys, opts.q_w), sys.data_distribution().log_masses(), t);
  return finish_bound("pacb_moment", Flavor::pac_bayes, Scope::data_independent, scale_of(sys),
                      radicand::moment(0.0, m, t, delta, std::log(2.0)), p);
}

BoundResult sd_density_bound(const StandardSystem& sys, std::size_t w, std::size_t data,
                             double delta, const StandardOptions& opts) {
  radicand::check_delta(delta);
  if (w >= sys.num_hypotheses() || data >= sys.num_datasets()) {
    throw std::out_of_range("sd_density_bound: unknown atom");
  }
  auto p = base_params(sys);
  p.delta = delta;
  const auto tbl = density(sys, opts.q_w);
  const std::size_t a = sys.atom(w, data);
  if (!tbl.in_support(a)) {
    return finish_bound("sd_density", Flavor::single_draw, Scope::data_dependent, scale_of(sys),
                        kNegInf, p, "atom outside the support of P_WZ");
  }
  return finish_bound("sd_density", Flavor::single_draw, Scope::data_dependent, scale_of(sys),
                      radicand::with_confidence(tbl.value(a), delta), p);
}

BoundResult sd_moment_bound(const StandardSystem& sys, double delta, MomentOrder t,
                            const StandardOptions& opts) {
  radicand::check_delta(delta);
  auto p = base_params(sys);
  p.delta = delta;
  p.t = t;
  const auto tbl = density(sys, opts.q_w);
  return finish_bound("sd_moment", Flavor::single_draw, Scope::data_independent, scale_of(sys),
                      radicand::moment(tbl.mean(), central_moment(tbl, t), t, delta, std::log(2.0)),
                      p);
}

BoundResult sd_leakage_bound(const StandardSystem& sys, double delta, const StandardOptions& opts) {
  radicand::check_delta(delta);
  // The ess-sup weakening needs P_WZ ≪ Q_W P_Z as well as ≪ P_W P_Z.
  if (opts.q_w) (void)density(sys, opts.q_w);
  auto p = base_params(sys);
  p.delta = delta;
  return finish_bound("sd_leakage", Flavor::single_draw, Scope::data_independent, scale_of(sys),
                      radicand::leakage(maximal_leakage(sys), delta), p);
}

BoundResult sd_renyi_bound(const StandardSystem& sys, double delta, double alpha,
                           const StandardOptions& opts) {
  radicand::check_delta(delta);
  radicand::check_order(alpha);
  auto p = base_params(sys);
  p.delta = delta;
  p.alpha = alpha;
  const auto tbl = density(sys, opts.q_w);
  const double da = renyi_divergence(tbl, alpha);
  const double dg = renyi_divergence(tbl, radicand::conjugate(alpha));
  return finish_bound("sd_renyi", Flavor::single_draw, Scope::data_independent, scale_of(sys),
                      radicand::renyi_pair(da, dg, alpha, delta), p);
}

BoundResult sd_tail_bound(const StandardSystem& sys, double delta, std::optional<double> gamma,
                          const StandardOptions& opts) {
  radicand::check_delta(delta);
  const auto tbl = density(sys, opts.q_w);
  const auto choice = gamma ? radicand::fixed_tail(tbl, delta, *gamma) : radicand::best_tail(tbl, delta);
  auto p = base_params(sys);
  p.delta = delta;
  p.gamma = choice.gamma;
  return finish_bound("sd_tail", Flavor::single_draw, Scope::data_independent, scale_of(sys),
                      choice.feasible ? choice.radicand : std::nan(""), p,
                      "P[i >= gamma] >= delta for every admissible gamma");
}

std::pair<BoundResult, BoundResult> tail_relaxations(const StandardSystem& sys, double delta,
                                                     MomentOrder t, const StandardOptions& opts) {
  radicand::check_delta(delta);
  const auto tbl = density(sys, opts.q_w);
  auto p = base_params(sys);
  p.delta = delta;
  auto pm = p;
  pm.t = t;
  const double rm = radicand::moment(tbl.mean(), central_moment(tbl, t), t, delta, std::log(4.0));
  const double rl = maximal_leakage(sys) + std::log(2.0) + 2.0 * std::log(2.0 / delta);
  return {finish_bound("sd_tail_moment_relax", Flavor::single_draw, Scope::data_independent,
                       scale_of(sys), rm, pm),
          finish_bound("sd_tail_leakage_relax", Flavor::single_draw, Scope::data_independent,
                       scale_of(sys), rl, p)};
}

ChainReport chain_report(const StandardSystem& sys, double delta) {
  radicand::check_delta(delta);
  const auto tbl = density(sys);
  ChainReport r;
  r.leakage = maximal_leakage(sys);
  r.max_information = tbl.max();
  r.mutual_information = std::max(0.0, tbl.mean());
  r.m_inf = central_moment(tbl, MomentOrder::infinity());
  constexpr double tol = 1e-12;
  r.chain_holds = r.leakage <= r.max_information + tol && r.max_information <= r.mi_plus_m_inf() + tol;
  r.leakage_tighter = r.leakage <= r.max_information + std::log(2.0 / delta) + tol;
  return r;
}

}  // namespace infogen
