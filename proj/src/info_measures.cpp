#include "infogen/info_measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace infogen {

MomentOrder MomentOrder::finite(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("moment order must be a positive finite real or infinity");
  }
  MomentOrder m;
  m.infinite_ = false;
  m.t_ = t;
  return m;
}

DensityTable::DensityTable(std::vector<double> log_p, std::vector<double> log_q)
    : log_p_(std::move(log_p)), log_q_(std::move(log_q)) {
  if (log_p_.size() != log_q_.size()) throw std::invalid_argument("DensityTable: size mismatch");
  iota_.assign(log_p_.size(), kNegInf);
  for (std::size_t i = 0; i < log_p_.size(); ++i) {
    if (log_p_[i] == kNegInf) continue;
    if (log_q_[i] == kNegInf) {
      throw AbsoluteContinuityViolation("atom " + std::to_string(i) +
                                        " has positive P-mass but zero reference mass");
    }
    iota_[i] = log_p_[i] - log_q_[i];
    support_.push_back(i);
  }
}

double DensityTable::p(std::size_t i) const { return std::exp(log_p_[i]); }

double DensityTable::mean() const {
  double acc = 0.0;
  for (std::size_t i : support_) acc += p(i) * iota_[i];
  return acc;
}

double DensityTable::tail(double gamma) const {
  double acc = 0.0;
  for (std::size_t i : support_) {
    if (iota_[i] >= gamma) acc += p(i);
  }
  return std::min(acc, 1.0);
}

double DensityTable::max() const {
  double best = kNegInf;
  for (std::size_t i : support_) best = std::max(best, iota_[i]);
  return best;
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("order alpha must be positive and finite");
  }
}

bool near_one(double alpha) { return std::abs(alpha - 1.0) <= kAlphaOneTolerance; }

std::vector<std::vector<std::string>> axes_of(const JointTable& j) {
  std::vector<std::vector<std::string>> out;
  for (std::size_t k = 0; k < j.rank(); ++k) out.push_back(j.axis(k));
  return out;
}

}  // namespace

DensityTable density(const JointTable& p, const JointTable& q) {
  if (axes_of(p) != axes_of(q)) throw std::invalid_argument("density: label spaces differ");
  return DensityTable(p.log_masses(), q.log_masses());
}

DensityTable density(const FiniteDistribution& p, const FiniteDistribution& q) {
  if (p.labels() != q.labels()) throw std::invalid_argument("density: label spaces differ");
  return DensityTable(p.log_masses(), q.log_masses());
}

double kl(const FiniteDistribution& p, const FiniteDistribution& q) {
  return std::max(0.0, density(p, q).mean());
}

double renyi_divergence(const DensityTable& tbl, double alpha) {
  check_alpha(alpha);
  if (near_one(alpha)) return tbl.mean();
  // E_Q[(P/Q)^α] = Σ_{supp P} exp(α log p − (α−1) log q).
  std::vector<double> terms;
  terms.reserve(tbl.support().size());
  for (std::size_t i : tbl.support()) terms.push_back(alpha * tbl.log_p(i) - (alpha - 1.0) * tbl.log_q(i));
  return log_sum_exp(terms) / (alpha - 1.0);
}

double renyi_divergence(const FiniteDistribution& p, const FiniteDistribution& q, double alpha) {
  check_alpha(alpha);
  if (near_one(alpha)) return kl(p, q);
  if (alpha > 1.0) return renyi_divergence(density(p, q), alpha);
  if (p.labels() != q.labels()) throw std::invalid_argument("renyi_divergence: label spaces differ");
  std::vector<double> terms;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.in_support(i) && q.in_support(i)) {
      terms.push_back(alpha * p.log_mass(i) + (1.0 - alpha) * q.log_mass(i));
    }
  }
  return log_sum_exp(terms) / (alpha - 1.0);
}

double raw_moment(const std::vector<double>& values, const std::vector<double>& log_masses,
                  MomentOrder t) {
  if (values.size() != log_masses.size()) throw std::invalid_argument("raw_moment: size mismatch");
  if (t.is_infinite()) {
    double best = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (log_masses[i] != kNegInf) best = std::max(best, std::abs(values[i]));
    }
    return best;
  }
  // Log space keeps atoms with tiny mass from underflowing before the root.
  std::vector<double> terms;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::abs(values[i]);
    if (log_masses[i] == kNegInf || v == 0.0) continue;
    terms.push_back(log_masses[i] + t.value() * std::log(v));
  }
  if (terms.empty()) return 0.0;
  return std::exp(log_sum_exp(terms) / t.value());
}

double central_moment(const DensityTable& tbl, MomentOrder t) {
  const double m = tbl.mean();
  std::vector<double> dev;
  std::vector<double> lm;
  dev.reserve(tbl.support().size());
  lm.reserve(tbl.support().size());
  for (std::size_t i : tbl.support()) {
    dev.push_back(tbl.value(i) - m);
    lm.push_back(tbl.log_p(i));
  }
  return raw_moment(dev, lm, t);
}

// ---- standard setting ------------------------------------------------------

namespace {

std::vector<double> reference_log_w(const StandardSystem& sys,
                                    const std::optional<FiniteDistribution>& q_w) {
  if (!q_w) return sys.pw().log_masses();
  if (q_w->labels() != sys.loss().hypotheses()) {
    throw std::invalid_argument("auxiliary Q_W must be over the hypothesis labels");
  }
  return q_w->log_masses();
}

}  // namespace

DensityTable density(const StandardSystem& sys, const std::optional<FiniteDistribution>& q_w) {
  const auto lqw = reference_log_w(sys, q_w);
  const auto& pzn = sys.data_distribution();
  std::vector<double> lq(sys.joint().size());
  for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
    for (std::size_t d = 0; d < sys.num_datasets(); ++d) lq[sys.atom(w, d)] = lqw[w] + pzn.log_mass(d);
  }
  return DensityTable(sys.joint().log_masses(), std::move(lq));
}

std::vector<double> posterior_kl(const StandardSystem& sys,
                                 const std::optional<FiniteDistribution>& q_w) {
  const auto lqw = reference_log_w(sys, q_w);
  std::vector<double> out(sys.num_datasets(), 0.0);
  for (std::size_t d = 0; d < sys.num_datasets(); ++d) {
    const bool reachable = sys.data_distribution().in_support(d);
    double acc = 0.0;
    for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
      const double lp = sys.learner().log_prob(d, w);
      if (lp == kNegInf) continue;
      if (lqw[w] == kNegInf) {
        if (reachable) {
          throw AbsoluteContinuityViolation("posterior puts mass on a hypothesis the reference excludes");
        }
        acc = kInf;
        break;
      }
      acc += std::exp(lp) * (lp - lqw[w]);
    }
    out[d] = std::max(0.0, acc);
  }
  return out;
}

double mutual_information(const StandardSystem& sys, const std::optional<FiniteDistribution>& q_w) {
  return std::max(0.0, density(sys, q_w).mean());
}

double alpha_mi(const StandardSystem& sys, double alpha) {
  check_alpha(alpha);
  if (near_one(alpha)) return mutual_information(sys);
  const auto& pzn = sys.data_distribution();
  std::vector<double> per_w(sys.num_hypotheses());
  std::vector<double> terms(sys.num_datasets());
  for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
    for (std::size_t d = 0; d < sys.num_datasets(); ++d) {
      const double lp = sys.learner().log_prob(d, w);
      terms[d] = (lp == kNegInf || !pzn.in_support(d)) ? kNegInf : pzn.log_mass(d) + alpha * lp;
    }
    per_w[w] = log_sum_exp(terms) / alpha;
  }
  return alpha / (alpha - 1.0) * log_sum_exp(per_w);
}

double maximal_leakage(const StandardSystem& sys) {
  const auto& pzn = sys.data_distribution();
  std::vector<double> best(sys.num_hypotheses(), kNegInf);
  for (std::size_t d = 0; d < sys.num_datasets(); ++d) {
    if (!pzn.in_support(d)) continue;
    for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
      best[w] = std::max(best[w], sys.learner().log_prob(d, w));
    }
  }
  return std::max(0.0, log_sum_exp(best));
}

double max_information(const StandardSystem& sys, const std::optional<FiniteDistribution>& q_w) {
  return density(sys, q_w).max();
}

// ---- random-subset setting -------------------------------------------------

namespace {

// log q(w | z̃) indexed by zt * |W| + w.
std::vector<double> reference_log_cond(const SubsetSystem& sys, const std::optional<Kernel>& q) {
  const std::size_t nw = sys.num_hypotheses();
  std::vector<double> out(sys.num_supersamples() * nw);
  if (q) {
    if (q->inputs() != sys.supersample_distribution().labels() ||
        q->outputs() != sys.loss().hypotheses()) {
      throw std::invalid_argument(
          "auxiliary Q_{W|Z~} must map supersample labels to hypothesis labels");
    }
  }
  for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
    for (std::size_t w = 0; w < nw; ++w) {
      out[zt * nw + w] = q ? q->log_prob(zt, w) : safe_log(sys.marginal_cond_prob(w, zt));
    }
  }
  return out;
}

}  // namespace

DensityTable conditional_density(const SubsetSystem& sys, const std::optional<Kernel>& q) {
  const auto lq_cond = reference_log_cond(sys, q);
  const auto& pzt = sys.supersample_distribution();
  const auto& ps = sys.selector_distribution();
  const std::size_t nw = sys.num_hypotheses();
  std::vector<double> lq(sys.joint().size());
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
      for (std::size_t s = 0; s < sys.num_selectors(); ++s) {
        lq[sys.atom(w, zt, s)] = pzt.log_mass(zt) + ps.log_mass(s) + lq_cond[zt * nw + w];
      }
    }
  }
  return DensityTable(sys.joint().log_masses(), std::move(lq));
}

std::vector<double> conditional_posterior_kl(const SubsetSystem& sys, const std::optional<Kernel>& q) {
  const auto lq_cond = reference_log_cond(sys, q);
  const std::size_t nw = sys.num_hypotheses();
  const std::size_t ns = sys.num_selectors();
  std::vector<double> out(sys.num_supersamples() * ns, 0.0);
  for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
    const bool reachable = sys.supersample_distribution().in_support(zt);
    for (std::size_t s = 0; s < ns; ++s) {
      double acc = 0.0;
      for (std::size_t w = 0; w < nw; ++w) {
        const double lp = sys.learner().log_prob(sys.selected(zt, s), w);
        if (lp == kNegInf) continue;
        const double lqw = lq_cond[zt * nw + w];
        if (lqw == kNegInf) {
          if (reachable) {
            throw AbsoluteContinuityViolation("posterior puts mass on a hypothesis the reference excludes");
          }
          acc = kInf;
          break;
        }
        acc += std::exp(lp) * (lp - lqw);
      }
      out[zt * ns + s] = std::max(0.0, acc);
    }
  }
  return out;
}

double cond_mutual_information(const SubsetSystem& sys, const std::optional<Kernel>& q) {
  return std::max(0.0, conditional_density(sys, q).mean());
}

double cond_renyi_divergence(const SubsetSystem& sys, double alpha, const std::optional<Kernel>& q) {
  check_alpha(alpha);
  if (near_one(alpha)) return cond_mutual_information(sys, q);
  return renyi_divergence(conditional_density(sys, q), alpha);
}

double cond_alpha_mi(const SubsetSystem& sys, double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("conditional alpha-MI requires a finite order alpha > 1");
  }
  if (near_one(alpha)) return cond_mutual_information(sys);
  const auto& pzt = sys.supersample_distribution();
  const auto& ps = sys.selector_distribution();
  std::vector<double> outer;
  std::vector<double> per_w(sys.num_hypotheses());
  std::vector<double> per_s(sys.num_selectors());
  for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
    if (!pzt.in_support(zt)) continue;
    for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
      for (std::size_t s = 0; s < sys.num_selectors(); ++s) {
        const double lp = sys.learner().log_prob(sys.selected(zt, s), w);
        per_s[s] = lp == kNegInf ? kNegInf : ps.log_mass(s) + alpha * lp;
      }
      // The q(w|z̃) weights of the middle expectation cancel against ι.
      per_w[w] = log_sum_exp(per_s) / alpha;
    }
    outer.push_back(pzt.log_mass(zt) + alpha * log_sum_exp(per_w));
  }
  return std::max(0.0, log_sum_exp(outer) / (alpha - 1.0));
}

double cond_maximal_leakage(const SubsetSystem& sys) {
  const auto& pzt = sys.supersample_distribution();
  double best = kNegInf;
  std::vector<double> per_w(sys.num_hypotheses());
  for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
    if (!pzt.in_support(zt)) continue;
    for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
      double m = kNegInf;
      for (std::size_t s = 0; s < sys.num_selectors(); ++s) {
        m = std::max(m, sys.learner().log_prob(sys.selected(zt, s), w));
      }
      per_w[w] = m;
    }
    best = std::max(best, log_sum_exp(per_w));
  }
  return std::max(0.0, best);
}

double supersample_mutual_information(const SubsetSystem& sys) {
  const auto& pzt = sys.supersample_distribution();
  const std::size_t nw = sys.num_hypotheses();
  std::vector<double> pw(nw, 0.0);
  for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
    for (std::size_t w = 0; w < nw; ++w) pw[w] += pzt.mass(zt) * sys.marginal_cond_prob(w, zt);
  }
  double acc = 0.0;
  for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
    if (!pzt.in_support(zt)) continue;
    for (std::size_t w = 0; w < nw; ++w) {
      const double c = sys.marginal_cond_prob(w, zt);
      if (c > 0.0) acc += pzt.mass(zt) * c * (std::log(c) - std::log(pw[w]));
    }
  }
  return std::max(0.0, acc);
}

StandardSystem induced_standard_system(const SubsetSystem& sys) {
  return assemble_standard(sys.pz(), sys.n(), sys.learner(), sys.loss());
}

}  // namespace infogen
