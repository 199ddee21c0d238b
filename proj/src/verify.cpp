#include "infogen/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace infogen {

// ---- exponential inequalities ------------------------------------------------

double ExpCheck::worst_value() const { return std::exp(worst_log_value); }
bool ExpCheck::passes() const { return worst_log_value <= std::log1p(1e-9); }

std::vector<double> default_lambda_grid(double unit) {
  std::vector<double> grid{0.0};
  for (double m : {0.1, 1.0, 10.0, 100.0}) {
    grid.push_back(m * unit);
    grid.push_back(-m * unit);
  }
  return grid;
}

namespace {

// Under P, exp(−ι) turns the expectation into one under the reference Q, so
// each term is log Q(a) + exponent(a) over supp(P).
ExpCheck worst_over_grid(const DensityTable& tbl, const std::vector<double>& gaps,
                         const std::vector<double>& lambdas, double variance_term) {
  ExpCheck out;
  std::vector<double> terms(tbl.support().size());
  for (double lambda : lambdas) {
    const double penalty = lambda * lambda * variance_term;
    std::size_t k = 0;
    for (std::size_t a : tbl.support()) terms[k++] = tbl.log_q(a) + lambda * gaps[a] - penalty;
    const double v = log_sum_exp(terms);
    if (v > out.worst_log_value) {
      out.worst_log_value = v;
      out.worst_lambda = lambda;
    }
  }
  return out;
}

std::vector<double> gen_by_atom(const StandardSystem& sys) {
  std::vector<double> out(sys.joint().size());
  for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
    for (std::size_t d = 0; d < sys.num_datasets(); ++d) out[sys.atom(w, d)] = gen(sys, w, d);
  }
  return out;
}

template <typename F>
std::vector<double> subset_by_atom(const SubsetSystem& sys, F&& f) {
  std::vector<double> out(sys.joint().size());
  for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
    for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
      for (std::size_t s = 0; s < sys.num_selectors(); ++s) out[sys.atom(w, zt, s)] = f(w, zt, s);
    }
  }
  return out;
}

std::vector<double> gen_hat_by_atom(const SubsetSystem& sys) {
  return subset_by_atom(sys, [&](std::size_t w, std::size_t zt, std::size_t s) {
    return gen_hat(sys, w, zt, s);
  });
}

std::vector<double> subset_gen_by_atom(const SubsetSystem& sys) {
  return subset_by_atom(sys, [&](std::size_t w, std::size_t zt, std::size_t s) {
    return subset_gen(sys, w, zt, s);
  });
}

}  // namespace

ExpCheck check_exp_inequality_standard(const StandardSystem& sys, const std::vector<double>& lambdas,
                                       std::optional<double> sigma) {
  const double sg = sigma.value_or(sys.loss().sigma());
  if (!(sg > 0.0)) throw std::invalid_argument("sigma must be positive");
  const double n = static_cast<double>(sys.n());
  const auto grid = lambdas.empty() ? default_lambda_grid(n / (sg * sg)) : lambdas;
  return worst_over_grid(density(sys), gen_by_atom(sys), grid, sg * sg / (2.0 * n));
}

ExpCheck check_exp_inequality_subset(const SubsetSystem& sys, const std::vector<double>& lambdas,
                                     std::optional<double> c) {
  const double cc = c.value_or(range_constant(sys.loss()).value);
  if (!(cc > 0.0)) throw std::invalid_argument("range constant must be positive");
  const double n = static_cast<double>(sys.n());
  const auto grid = lambdas.empty() ? default_lambda_grid(n / cc) : lambdas;
  return worst_over_grid(conditional_density(sys), gen_hat_by_atom(sys), grid, cc / (2.0 * n));
}

// ---- exact laws ---------------------------------------------------------------

ValueDistribution::ValueDistribution(std::vector<double> values, std::vector<double> masses) {
  if (values.size() != masses.size()) throw std::invalid_argument("ValueDistribution: size mismatch");
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (masses[i] > 0.0) pairs.emplace_back(values[i], masses[i]);
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [v, m] : pairs) {
    if (!values_.empty() && v - values_.back() <= 1e-12) {
      masses_.back() += m;
    } else {
      values_.push_back(v);
      masses_.push_back(m);
    }
  }
}

double ValueDistribution::mean() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) acc += values_[i] * masses_[i];
  return acc;
}

double ValueDistribution::quantile(double q) const {
  if (values_.empty()) throw std::logic_error("quantile of an empty distribution");
  double cum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    cum += masses_[i];
    if (cum >= q - 1e-12) return values_[i];
  }
  return values_.back();
}

double ValueDistribution::prob_greater(double threshold) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > threshold) acc += masses_[i];
  }
  return acc;
}

ValueDistribution ValueDistribution::absolute() const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](double x) { return std::abs(x); });
  return ValueDistribution(std::move(v), masses_);
}

namespace {

ValueDistribution pushforward(const JointTable& joint, const std::vector<double>& values) {
  std::vector<double> masses(joint.size());
  for (std::size_t a = 0; a < joint.size(); ++a) masses[a] = joint.mass(a);
  return ValueDistribution(values, std::move(masses));
}

}  // namespace

ValueDistribution exact_gen_distribution(const StandardSystem& sys) {
  return pushforward(sys.joint(), gen_by_atom(sys));
}

ValueDistribution exact_gen_hat_distribution(const SubsetSystem& sys) {
  return pushforward(sys.joint(), gen_hat_by_atom(sys));
}

ValueDistribution exact_subset_gen_distribution(const SubsetSystem& sys) {
  return pushforward(sys.joint(), subset_gen_by_atom(sys));
}

// ---- coverage -----------------------------------------------------------------

double OutcomeEvaluation::truth_quantile(double delta) const {
  std::vector<double> v(value.size());
  std::transform(value.begin(), value.end(), v.begin(), [](double x) { return std::abs(x); });
  return ValueDistribution(std::move(v), mass).quantile(1.0 - delta);
}

std::vector<std::string> standard_bound_ids() {
  return {"pacb",       "pacb_moment", "sd_density", "sd_moment",           "sd_leakage",
          "sd_renyi",   "sd_tail",     "sd_tail_moment_relax", "sd_tail_leakage_relax"};
}

std::vector<std::string> subset_bound_ids() {
  return {"cond_pacb",
          "cond_pacb_moment",
          "cond_sd_density",
          "cond_sd_moment",
          "cond_sd_leakage",
          "cond_sd_renyi_pair",
          "cond_tail",
          "cond_tail_moment_relax",
          "cond_tail_leakage_relax",
          "cond_alpha_mi",
          "cond_alpha_mi_leakage",
          "cond_alpha_mi_renyi",
          "gen_from_cond_pacb",
          "gen_from_cond_pacb_moment",
          "gen_from_cond_sd_density",
          "gen_from_cond_sd_moment"};
}

namespace {

constexpr double kCoverageSlack = 1e-12;

MomentOrder order_of(const BoundRequest& req) {
  return req.t.value_or(MomentOrder::finite(2.0));
}
double alpha_of(const BoundRequest& req) { return req.alpha.value_or(2.0); }

// Fills the summary of a data-dependent bound: E[ε] over the outcome law when
// every positive-mass outcome is feasible.
void summarize_data_dependent(OutcomeEvaluation& ev, std::string id, Flavor flavor,
                              BoundParams params) {
  double mean = 0.0;
  double infeasible_mass = 0.0;
  for (std::size_t i = 0; i < ev.mass.size(); ++i) {
    if (!(ev.mass[i] > 0.0)) continue;
    if (ev.feasible[i]) {
      mean += ev.mass[i] * ev.epsilon[i];
    } else {
      infeasible_mass += ev.mass[i];
    }
  }
  ev.summary.bound_id = std::move(id);
  ev.summary.flavor = flavor;
  ev.summary.scope = Scope::data_dependent;
  ev.summary.params = std::move(params);
  if (infeasible_mass > 0.0) {
    ev.summary.feasible = false;
    ev.summary.epsilon = kInf;
    std::ostringstream os;
    os << "infeasible on outcomes of total mass " << infeasible_mass;
    ev.summary.reason = os.str();
  } else {
    ev.summary.feasible = true;
    ev.summary.epsilon = mean;
  }
}

void fill_constant(OutcomeEvaluation& ev, const BoundResult& r) {
  ev.summary = r;
  ev.epsilon.assign(ev.mass.size(), r.epsilon);
  ev.feasible.assign(ev.mass.size(), r.feasible ? 1 : 0);
}

void set_eps(OutcomeEvaluation& ev, std::size_t i, double scale, double r) {
  if (std::isfinite(r) && r >= 0.0) {
    ev.epsilon[i] = std::sqrt(scale * r);
    ev.feasible[i] = 1;
  } else {
    ev.epsilon[i] = kInf;
    ev.feasible[i] = 0;
  }
}

}  // namespace

OutcomeEvaluation evaluate_bound(const StandardSystem& sys, const BoundRequest& req) {
  radicand::check_delta(req.delta);
  const auto& ids = standard_bound_ids();
  if (std::find(ids.begin(), ids.end(), req.bound_id) == ids.end()) {
    throw std::invalid_argument("unknown standard-setting bound '" + req.bound_id + "'");
  }
  const double delta = req.delta;
  const double scale = radicand::standard_scale(sys.loss().sigma(), sys.n());
  OutcomeEvaluation ev;
  BoundParams params;
  params.delta = delta;
  params.sigma = sys.loss().sigma();
  params.n = sys.n();

  const bool pac_bayes = req.bound_id.rfind("pacb", 0) == 0;
  if (pac_bayes) {
    const auto& pzn = sys.data_distribution();
    ev.mass = pzn.masses();
    ev.value.resize(sys.num_datasets());
    for (std::size_t d = 0; d < sys.num_datasets(); ++d) ev.value[d] = std::abs(posterior_gen(sys, d));
    if (req.bound_id == "pacb") {
      const auto k = posterior_kl(sys);
      ev.epsilon.resize(k.size());
      ev.feasible.resize(k.size());
      for (std::size_t d = 0; d < k.size(); ++d) set_eps(ev, d, scale, radicand::with_confidence(k[d], delta));
      summarize_data_dependent(ev, "pacb", Flavor::pac_bayes, params);
    } else {
      fill_constant(ev, pacb_moment_bound(sys, delta, order_of(req)));
    }
    return ev;
  }

  ev.mass.resize(sys.joint().size());
  for (std::size_t a = 0; a < ev.mass.size(); ++a) ev.mass[a] = sys.joint().mass(a);
  ev.value = gen_by_atom(sys);
  for (double& v : ev.value) v = std::abs(v);

  if (req.bound_id == "sd_density") {
    const auto tbl = density(sys);
    ev.epsilon.assign(tbl.size(), kInf);
    ev.feasible.assign(tbl.size(), 0);
    for (std::size_t a : tbl.support()) set_eps(ev, a, scale, radicand::with_confidence(tbl.value(a), delta));
    summarize_data_dependent(ev, "sd_density", Flavor::single_draw, params);
  } else if (req.bound_id == "sd_moment") {
    fill_constant(ev, sd_moment_bound(sys, delta, order_of(req)));
  } else if (req.bound_id == "sd_leakage") {
    fill_constant(ev, sd_leakage_bound(sys, delta));
  } else if (req.bound_id == "sd_renyi") {
    fill_constant(ev, sd_renyi_bound(sys, delta, alpha_of(req)));
  } else if (req.bound_id == "sd_tail") {
    fill_constant(ev, sd_tail_bound(sys, delta, req.gamma));
  } else if (req.bound_id == "sd_tail_moment_relax") {
    fill_constant(ev, tail_relaxations(sys, delta, order_of(req)).first);
  } else {
    fill_constant(ev, tail_relaxations(sys, delta, order_of(req)).second);
  }
  return ev;
}

OutcomeEvaluation evaluate_bound(const SubsetSystem& sys, const BoundRequest& req) {
  radicand::check_delta(req.delta);
  const auto& ids = subset_bound_ids();
  const std::string& id = req.bound_id;
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    throw std::invalid_argument("unknown random-subset bound '" + id + "'");
  }
  const double delta = req.delta;
  const double c = range_constant(sys.loss()).value;
  const double scale = radicand::subset_scale(c, sys.n());
  const std::size_t ns = sys.num_selectors();
  const bool to_gen = id.rfind("gen_from_", 0) == 0;
  // gen compositions run the ĝen bound at δ/2 and add the Hoeffding penalty.
  const double inner_delta = to_gen ? delta / 2.0 : delta;
  const double penalty = to_gen ? genhat_to_gen_penalty(sys.loss(), sys.n(), delta) : 0.0;

  OutcomeEvaluation ev;
  BoundParams params;
  params.delta = delta;
  params.range_constant = c;
  params.n = sys.n();

  auto add_penalty = [&](OutcomeEvaluation& e) {
    if (!to_gen) return;
    for (std::size_t i = 0; i < e.epsilon.size(); ++i) {
      if (e.feasible[i]) e.epsilon[i] += penalty;
    }
  };
  auto constant = [&](BoundResult r) {
    if (to_gen) {
      r.bound_id = id;
      r.params.delta = delta;
      if (r.feasible) r.epsilon += penalty;
    }
    fill_constant(ev, r);
  };

  const bool pac_bayes = id.find("pacb") != std::string::npos;
  if (pac_bayes) {
    const std::size_t count = sys.num_supersamples() * ns;
    ev.mass.resize(count);
    ev.value.assign(count, 0.0);
    for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
      for (std::size_t s = 0; s < ns; ++s) {
        const std::size_t i = zt * ns + s;
        ev.mass[i] = sys.supersample_distribution().mass(zt) * sys.selector_distribution().mass(s);
        double acc = 0.0;
        for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
          const double p = sys.cond_prob(w, zt, s);
          if (p > 0.0) acc += p * (to_gen ? subset_gen(sys, w, zt, s) : gen_hat(sys, w, zt, s));
        }
        ev.value[i] = std::abs(acc);
      }
    }
    if (id == "cond_pacb" || id == "gen_from_cond_pacb") {
      const auto k = conditional_posterior_kl(sys);
      ev.epsilon.resize(count);
      ev.feasible.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        set_eps(ev, i, scale, radicand::with_confidence(k[i], inner_delta));
      }
      add_penalty(ev);
      summarize_data_dependent(ev, id, Flavor::pac_bayes, params);
    } else {
      auto r = cond_pacb_moment_bound(sys, inner_delta, order_of(req));
      constant(r);
    }
    return ev;
  }

  ev.mass.resize(sys.joint().size());
  for (std::size_t a = 0; a < ev.mass.size(); ++a) ev.mass[a] = sys.joint().mass(a);
  ev.value = to_gen ? subset_gen_by_atom(sys) : gen_hat_by_atom(sys);
  for (double& v : ev.value) v = std::abs(v);

  if (id == "cond_sd_density" || id == "gen_from_cond_sd_density") {
    const auto tbl = conditional_density(sys);
    ev.epsilon.assign(tbl.size(), kInf);
    ev.feasible.assign(tbl.size(), 0);
    for (std::size_t a : tbl.support()) {
      set_eps(ev, a, scale, radicand::with_confidence(tbl.value(a), inner_delta));
    }
    add_penalty(ev);
    summarize_data_dependent(ev, id, Flavor::single_draw, params);
  } else if (id == "cond_sd_moment" || id == "gen_from_cond_sd_moment") {
    constant(cond_sd_moment_bound(sys, inner_delta, order_of(req)));
  } else if (id == "cond_sd_leakage") {
    constant(cond_sd_leakage_bound(sys, delta));
  } else if (id == "cond_sd_renyi_pair") {
    constant(cond_sd_renyi_pair_bound(sys, delta, alpha_of(req)));
  } else if (id == "cond_tail") {
    constant(cond_tail_bound(sys, delta, req.gamma));
  } else if (id == "cond_tail_moment_relax") {
    constant(cond_tail_relaxations(sys, delta, order_of(req)).first);
  } else if (id == "cond_tail_leakage_relax") {
    constant(cond_tail_relaxations(sys, delta, order_of(req)).second);
  } else if (id == "cond_alpha_mi") {
    constant(cond_alpha_mi_bound(sys, delta, alpha_of(req)));
  } else if (id == "cond_alpha_mi_leakage") {
    constant(cond_alpha_mi_leakage_bound(sys, delta));
  } else {
    constant(cond_alpha_mi_renyi_bound(sys, delta, alpha_of(req)));
  }
  return ev;
}

CoverageReport coverage_of(const OutcomeEvaluation& ev, double delta) {
  CoverageReport r;
  r.bound_id = ev.summary.bound_id;
  r.delta = delta;
  double violation = 0.0;
  for (std::size_t i = 0; i < ev.mass.size(); ++i) {
    if (!(ev.mass[i] > 0.0)) continue;
    if (!ev.feasible[i] || ev.value[i] > ev.epsilon[i] + kCoverageSlack) violation += ev.mass[i];
  }
  r.exact_violation_prob = std::min(1.0, violation);
  r.holds = r.exact_violation_prob <= delta + kCoverageSlack;
  return r;
}

CoverageReport coverage(const StandardSystem& sys, const BoundRequest& req) {
  auto r = coverage_of(evaluate_bound(sys, req), req.delta);
  r.bound_id = req.bound_id;
  return r;
}

CoverageReport coverage(const SubsetSystem& sys, const BoundRequest& req) {
  auto r = coverage_of(evaluate_bound(sys, req), req.delta);
  r.bound_id = req.bound_id;
  return r;
}

// ---- lemmas -------------------------------------------------------------------

ConverseCheck strong_converse_check(const FiniteDistribution& p, const FiniteDistribution& q,
                                    const std::vector<bool>& event, double gamma) {
  if (p.labels() != q.labels() || event.size() != p.size()) {
    throw std::invalid_argument("strong_converse_check: mismatched outcome spaces");
  }
  double pe = 0.0;
  double qe = 0.0;
  double p_tail = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (event[i]) {
      if (p.in_support(i) && !q.in_support(i)) {
        throw AbsoluteContinuityViolation("event atom '" + p.label(i) + "' has P > 0 = Q");
      }
      pe += p.mass(i);
      qe += q.mass(i);
    }
    if (p.in_support(i)) {
      const double iota = q.in_support(i) ? p.log_mass(i) - q.log_mass(i) : kInf;
      if (iota > gamma) p_tail += p.mass(i);
    }
  }
  ConverseCheck r;
  r.lhs = pe;
  r.rhs = p_tail + std::exp(gamma) * qe;
  r.holds = r.lhs <= r.rhs + 1e-12;
  return r;
}

double hoeffding_tail(double sigma, std::size_t n, double eps) {
  return 2.0 * std::exp(-static_cast<double>(n) * eps * eps / (2.0 * sigma * sigma));
}

double exact_deviation_prob(const StandardSystem& sys, std::size_t w, double eps) {
  double acc = 0.0;
  const auto& pzn = sys.data_distribution();
  for (std::size_t d = 0; d < sys.num_datasets(); ++d) {
    if (!pzn.in_support(d)) continue;
    if (std::abs(sys.empirical_loss(w, d) - sys.population_loss(w)) >= eps - 1e-12) acc += pzn.mass(d);
  }
  return acc;
}

GaussianValidation gaussian_mi_validation(std::size_t n, double noise_var, double prior_var,
                                          std::size_t samples, std::uint64_t seed) {
  if (!(noise_var > 0.0) || !(prior_var > 0.0)) {
    throw std::invalid_argument("gaussian_mi_validation: variances must be positive");
  }
  if (n == 0 || samples < 2) {
    throw std::invalid_argument("gaussian_mi_validation: need n >= 1 and at least 2 samples");
  }
  const double nn = static_cast<double>(n);
  const double marginal_var = prior_var / nn + noise_var;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd_prior = std::sqrt(prior_var);
  const double sd_noise = std::sqrt(noise_var);

  // Welford running mean and variance of ι.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 1; k <= samples; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += sd_prior * normal(rng);
    const double m = sum / nn;
    const double w = m + sd_noise * normal(rng);
    const double iota = 0.5 * std::log(marginal_var / noise_var) -
                        (w - m) * (w - m) / (2.0 * noise_var) + w * w / (2.0 * marginal_var);
    const double d = iota - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (iota - mean);
  }
  GaussianValidation r;
  r.closed_form = 0.5 * std::log1p(prior_var / (nn * noise_var));
  r.estimate = mean;
  r.samples = samples;
  r.standard_error = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
  r.within_three_se = std::abs(r.estimate - r.closed_form) <= 3.0 * r.standard_error;
  return r;
}

// ---- instances ----------------------------------------------------------------

namespace {

const std::vector<std::string> kBits{"0", "1"};

FiniteDistribution fair_bit() { return FiniteDistribution::uniform(kBits); }

Kernel uniform_constant(const LossTable& loss, std::size_t n) {
  return constant_kernel(loss, n, FiniteDistribution::uniform(loss.hypotheses()));
}

}  // namespace

StandardSystem canonical_inst_a() {
  const auto loss = LossTable::zero_one(kBits);
  return assemble_standard(fair_bit(), 2, erm_kernel(loss, 2), loss);
}

SubsetSystem canonical_inst_a_subset() {
  const auto loss = LossTable::zero_one(kBits);
  return assemble_subset(fair_bit(), 2, erm_kernel(loss, 2), loss);
}

StandardSystem canonical_inst_b_standard() {
  const auto loss = LossTable::zero_one(kBits);
  return assemble_standard(fair_bit(), 1, identity_kernel(loss), loss);
}

SubsetSystem canonical_inst_b() {
  const auto loss = LossTable::zero_one(kBits);
  return assemble_subset(fair_bit(), 1, identity_kernel(loss), loss);
}

StandardSystem canonical_inst_c() {
  const auto loss = LossTable::zero_one(kBits);
  return assemble_standard(fair_bit(), 2, uniform_constant(loss, 2), loss);
}

SubsetSystem canonical_inst_c_subset() {
  const auto loss = LossTable::zero_one(kBits);
  return assemble_subset(fair_bit(), 2, uniform_constant(loss, 2), loss);
}

RandomProblem random_problem(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  const std::size_t nz = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
  const std::size_t nw = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);

  // Dirichlet(1, ..., 1) via normalized unit exponentials.
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> probs(nz);
  double total = 0.0;
  for (double& p : probs) total += (p = expo(rng));
  for (double& p : probs) p /= total;

  std::vector<std::string> zl;
  std::vector<std::string> wl;
  for (std::size_t i = 0; i < nz; ++i) zl.push_back("z" + std::to_string(i));
  for (std::size_t i = 0; i < nw; ++i) wl.push_back("w" + std::to_string(i));

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> values(nw, std::vector<double>(nz));
  for (auto& row : values) {
    for (double& v : row) v = unit(rng);
  }
  const double beta = 8.0 * unit(rng);

  RandomProblem out;
  out.pz = FiniteDistribution::from_probs(zl, probs);
  out.n = n;
  out.loss = LossTable(wl, zl, std::move(values), 0.0, 1.0);
  out.beta = beta;
  out.learner = gibbs_kernel(out.loss, n, beta);
  return out;
}

InstancePool canonical_pool() {
  InstancePool pool;
  pool.standard.push_back({"erm_n2", canonical_inst_a()});
  pool.standard.push_back({"identity_n1", canonical_inst_b_standard()});
  pool.standard.push_back({"constant_n2", canonical_inst_c()});
  pool.subset.push_back({"erm_n2", canonical_inst_a_subset()});
  pool.subset.push_back({"identity_n1", canonical_inst_b()});
  pool.subset.push_back({"constant_n2", canonical_inst_c_subset()});
  return pool;
}

InstancePool random_pool(std::uint64_t seed, std::size_t count) {
  InstancePool pool;
  for (std::size_t i = 0; i < count; ++i) {
    const auto p = random_problem(seed, i);
    const std::string name = "random(seed=" + std::to_string(seed) + ",index=" + std::to_string(i) + ")";
    pool.standard.push_back({name, assemble_standard(p.pz, p.n, p.learner, p.loss)});
    pool.subset.push_back({name, assemble_subset(p.pz, p.n, p.learner, p.loss)});
  }
  return pool;
}

// ---- suites -------------------------------------------------------------------

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string order_label(MomentOrder t) { return t.is_infinite() ? "inf" : fmt(t.value()); }

struct Recorder {
  SuiteResult& out;
  void check(bool ok, const std::string& instance, const std::string& detail) {
    ++out.checks;
    if (!ok) out.failures.push_back({instance, detail});
  }
};

bool needs_t(const std::string& id) {
  return id.find("moment") != std::string::npos;
}
bool needs_alpha(const std::string& id) {
  return id == "sd_renyi" || id == "cond_sd_renyi_pair" || id == "cond_alpha_mi" ||
         id == "cond_alpha_mi_renyi";
}

std::vector<BoundRequest> expand(const std::string& id, double delta, const SuiteOptions& o) {
  std::vector<BoundRequest> out;
  if (needs_t(id)) {
    for (auto t : o.t_grid) out.push_back({id, delta, t, std::nullopt, std::nullopt});
  } else if (needs_alpha(id)) {
    for (double a : o.alpha_grid) out.push_back({id, delta, std::nullopt, a, std::nullopt});
  } else {
    out.push_back({id, delta, std::nullopt, std::nullopt, std::nullopt});
  }
  return out;
}

std::string describe(const BoundRequest& r) {
  std::string s = r.bound_id + " delta=" + fmt(r.delta);
  if (r.t) s += " t=" + order_label(*r.t);
  if (r.alpha) s += " alpha=" + fmt(*r.alpha);
  return s;
}

void suite_exp(Recorder& rec, const InstancePool& pool, const SuiteOptions& o) {
  for (const auto& [name, sys] : pool.standard) {
    const auto sigma = o.inject_sigma_fault ? std::optional<double>(sys.loss().sigma() / 4.0) : std::nullopt;
    const auto r = check_exp_inequality_standard(sys, {}, sigma);
    rec.check(r.passes(), name,
              "standard exponential inequality: worst value " + fmt(r.worst_value()) +
                  " at lambda=" + fmt(r.worst_lambda));
  }
  for (const auto& [name, sys] : pool.subset) {
    const double c = range_constant(sys.loss()).value;
    const auto cc = o.inject_sigma_fault ? std::optional<double>(c / 16.0) : std::nullopt;
    const auto r = check_exp_inequality_subset(sys, {}, cc);
    rec.check(r.passes(), name,
              "subset exponential inequality: worst value " + fmt(r.worst_value()) +
                  " at lambda=" + fmt(r.worst_lambda));
  }
}

void suite_coverage(Recorder& rec, const InstancePool& pool, const SuiteOptions& o) {
  for (const auto& [name, sys] : pool.standard) {
    for (const auto& id : standard_bound_ids()) {
      for (double d : o.deltas) {
        for (const auto& req : expand(id, d, o)) {
          const auto c = coverage(sys, req);
          rec.check(c.holds, name, describe(req) + ": violation probability " + fmt(c.exact_violation_prob));
        }
      }
    }
  }
  for (const auto& [name, sys] : pool.subset) {
    for (const auto& id : subset_bound_ids()) {
      for (double d : o.deltas) {
        for (const auto& req : expand(id, d, o)) {
          const auto c = coverage(sys, req);
          rec.check(c.holds, name, describe(req) + ": violation probability " + fmt(c.exact_violation_prob));
        }
      }
    }
  }
}

void suite_average(Recorder& rec, const InstancePool& pool) {
  for (const auto& [name, sys] : pool.standard) {
    const auto b = avg_mi_bound(sys);
    const double truth = std::abs(expected_gen(sys));
    rec.check(b.feasible && b.epsilon + 1e-12 >= truth, name,
              "avg_mi " + fmt(b.epsilon) + " < |E gen| " + fmt(truth));
  }
  for (const auto& [name, sys] : pool.subset) {
    const auto b = cmi_avg_bound(sys);
    const double truth = std::abs(expected_subset_gen(sys));
    rec.check(b.feasible && b.epsilon + 1e-12 >= truth, name,
              "cmi_avg " + fmt(b.epsilon) + " < |E gen(W,Z(S))| " + fmt(truth));
    const double hat = std::abs(expected_gen_hat(sys));
    rec.check(b.epsilon + 1e-12 >= hat, name, "cmi_avg " + fmt(b.epsilon) + " < |E gen_hat| " + fmt(hat));
  }
}

void suite_chain(Recorder& rec, const InstancePool& pool, const SuiteOptions& o) {
  for (const auto& [name, sys] : pool.standard) {
    const auto c = chain_report(sys, o.deltas.front());
    rec.check(c.chain_holds, name,
              "chain L=" + fmt(c.leakage) + " Imax=" + fmt(c.max_information) +
                  " I+Minf=" + fmt(c.mi_plus_m_inf()));
  }
  for (const auto& [name, sys] : pool.subset) {
    const auto l = leakage_ordering_check(sys);
    rec.check(l.holds, name,
              "leakage ordering conditional=" + fmt(l.conditional) + " standard=" + fmt(l.standard));
  }
}

bool same_within(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

void suite_gaps(Recorder& rec, const InstancePool& pool, const SuiteOptions& o) {
  const double ln2 = std::numbers::ln2;
  for (const auto& [name, sys] : pool.standard) {
    const double scale = radicand::standard_scale(sys.loss().sigma(), sys.n());
    for (double d : o.deltas) {
      for (auto t : o.t_grid) {
        const auto [rm, rl] = tail_relaxations(sys, d, t);
        const auto m = sd_moment_bound(sys, d, t);
        const double gap = rm.epsilon * rm.epsilon - m.epsilon * m.epsilon;
        rec.check(same_within(gap, scale * ln2, 1e-12), name,
                  "moment relaxation gap " + fmt(gap) + " at delta=" + fmt(d) + " t=" + order_label(t));
      }
      const auto rl = tail_relaxations(sys, d, MomentOrder::infinity()).second;
      const auto l = sd_leakage_bound(sys, d);
      const double gap = rl.epsilon * rl.epsilon - l.epsilon * l.epsilon;
      rec.check(same_within(gap, scale * ln2, 1e-12), name,
                "leakage relaxation gap " + fmt(gap) + " at delta=" + fmt(d));
    }
  }
  for (const auto& [name, sys] : pool.subset) {
    const double scale = radicand::subset_scale(range_constant(sys.loss()).value, sys.n());
    for (double d : o.deltas) {
      for (auto t : o.t_grid) {
        const auto rm = cond_tail_relaxations(sys, d, t).first;
        const auto m = cond_sd_moment_bound(sys, d, t);
        const double gap = rm.epsilon * rm.epsilon - m.epsilon * m.epsilon;
        rec.check(same_within(gap, scale * ln2, 1e-12), name,
                  "conditional moment relaxation gap " + fmt(gap) + " at delta=" + fmt(d));
      }
      const auto rl = cond_tail_relaxations(sys, d, MomentOrder::infinity()).second;
      const auto l = cond_sd_leakage_bound(sys, d);
      const double gap = rl.epsilon * rl.epsilon - l.epsilon * l.epsilon;
      rec.check(same_within(gap, scale * ln2, 1e-12), name,
                "conditional leakage relaxation gap " + fmt(gap) + " at delta=" + fmt(d));

      // The α → ∞ alpha-MI bound beats the leakage bound by log(2/δ) inside.
      const auto al = cond_alpha_mi_leakage_bound(sys, d);
      const double gap_inf = l.epsilon * l.epsilon - al.epsilon * al.epsilon;
      rec.check(same_within(gap_inf, scale * std::log(2.0 / d), 1e-12), name,
                "alpha-MI limit gap " + fmt(gap_inf) + " at delta=" + fmt(d));

      // Rényi relaxation never decreases the alpha-MI bound; at α = 2 it is
      // below the Rényi-pair bound.
      for (double a : o.alpha_grid) {
        const auto ami = cond_alpha_mi_bound(sys, d, a);
        const auto ren = cond_alpha_mi_renyi_bound(sys, d, a);
        rec.check(ren.epsilon + 1e-12 >= ami.epsilon, name,
                  "Renyi relaxation below alpha-MI bound at alpha=" + fmt(a));
      }
      const auto ren2 = cond_alpha_mi_renyi_bound(sys, d, 2.0);
      const auto pair2 = cond_sd_renyi_pair_bound(sys, d, 2.0);
      rec.check(ren2.epsilon <= pair2.epsilon + 1e-12, name,
                "alpha=2 Renyi relaxation " + fmt(ren2.epsilon) + " exceeds Renyi-pair bound " +
                    fmt(pair2.epsilon));
    }
  }
}

double min_log_mass(const FiniteDistribution& d) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.in_support(i)) m = std::min(m, d.log_mass(i));
  }
  return m;
}

void suite_limits(Recorder& rec, const InstancePool& pool, const SuiteOptions& o) {
  const double big = 1e4;
  for (const auto& [name, sys] : pool.standard) {
    const auto tbl = density(sys);
    const double kl_value = tbl.mean();
    const double var = std::pow(central_moment(tbl, MomentOrder::finite(2.0)), 2);
    for (double a : {1.0 - 1e-4, 1.0 + 1e-4}) {
      const double r = renyi_divergence(tbl, a);
      // D_α − KL = (α−1) Var(ι)/2 + O((α−1)²).
      const double tol = std::max(1e-5, std::abs(a - 1.0) * var);
      rec.check(std::abs(r - kl_value) <= tol, name,
                "Renyi(" + fmt(a) + ")=" + fmt(r) + " vs KL " + fmt(kl_value));
    }
    const double leak = maximal_leakage(sys);
    const double ami = alpha_mi(sys, big);
    const double tol = std::max(1e-3, (leak - min_log_mass(sys.data_distribution())) / (big - 1.0));
    rec.check(std::abs(ami - leak) <= tol, name, "alpha-MI(1e4)=" + fmt(ami) + " vs leakage " + fmt(leak));

    double prev = -kInf;
    for (double a : {0.5, 0.9, 1.0, 1.5, 2.0, 4.0, 16.0}) {
      const double r = renyi_divergence(tbl, a);
      rec.check(r >= -1e-12 && r + 1e-12 >= prev, name, "Renyi not monotone/nonnegative at alpha=" + fmt(a));
      prev = r;
    }
    rec.check(mutual_information(sys) >= -1e-12 && leak >= -1e-12 && alpha_mi(sys, 2.0) >= -1e-12, name,
              "negative information measure");
  }
  for (const auto& [name, sys] : pool.subset) {
    const double leak = cond_maximal_leakage(sys);
    const double ami = cond_alpha_mi(sys, big);
    const double slack = leak + static_cast<double>(sys.n()) * std::numbers::ln2 -
                         min_log_mass(sys.supersample_distribution());
    const double tol = std::max(1e-3, slack / (big - 1.0));
    rec.check(std::abs(ami - leak) <= tol, name,
              "conditional alpha-MI(1e4)=" + fmt(ami) + " vs conditional leakage " + fmt(leak));
    for (double a : o.alpha_grid) {
      const double lhs = cond_alpha_mi(sys, a);
      const double rhs = cond_renyi_divergence(sys, a);
      rec.check(lhs <= rhs + 1e-12, name,
                "conditional alpha-MI " + fmt(lhs) + " > conditional Renyi " + fmt(rhs) + " at alpha=" + fmt(a));
    }
    const double cmi = cond_mutual_information(sys);
    rec.check(cmi >= -1e-12 && cmi <= static_cast<double>(sys.n()) * std::numbers::ln2 + 1e-12, name,
              "CMI outside [0, n log 2]: " + fmt(cmi));
  }
}

void suite_converse(Recorder& rec, const InstancePool& pool, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (const auto& [name, sys] : pool.standard) {
    const auto p = sys.joint().as_distribution();
    const auto prod = product(sys.pw(), sys.data_distribution());
    const auto q = FiniteDistribution::from_log_masses(p.labels(), prod.log_masses());
    std::vector<std::vector<bool>> events;
    std::vector<bool> big_gen(p.size());
    std::vector<bool> positive(p.size());
    for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
      for (std::size_t d = 0; d < sys.num_datasets(); ++d) {
        big_gen[sys.atom(w, d)] = std::abs(gen(sys, w, d)) > 0.3;
        positive[sys.atom(w, d)] = gen(sys, w, d) > 0.0;
      }
    }
    events.push_back(big_gen);
    events.push_back(positive);
    for (int k = 0; k < 3; ++k) {
      std::vector<bool> e(p.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = coin(rng);
      events.push_back(e);
    }
    for (const auto& e : events) {
      for (double g : {-1.0, 0.0, 0.5, 1.0, 3.0}) {
        const auto c = strong_converse_check(p, q, e, g);
        rec.check(c.holds, name, "strong converse " + fmt(c.lhs) + " > " + fmt(c.rhs) + " at gamma=" + fmt(g));
      }
    }
    for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
      for (double eps : {0.05, 0.1, 0.25, 0.5, 1.0}) {
        const double exact = exact_deviation_prob(sys, w, eps);
        const double h = hoeffding_tail(sys.loss().sigma(), sys.n(), eps);
        rec.check(exact <= h + 1e-12, name,
                  "Hoeffding " + fmt(h) + " below exact deviation " + fmt(exact) + " at eps=" + fmt(eps));
      }
    }
  }
  rec.check(hoeffding_tail(0.5, 2, 0.5) == 2.0 * std::exp(-1.0), "hoeffding", "hoeffding_tail(1/2,2,1/2) != 2/e");
}

void suite_gaussian(Recorder& rec, std::uint64_t seed) {
  const auto g = gaussian_mi_validation(4, 1.0, 1.0, 100000, seed);
  rec.check(g.within_three_se, "gaussian",
            "Monte Carlo " + fmt(g.estimate) + " +- " + fmt(g.standard_error) + " vs closed form " +
                fmt(g.closed_form));
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"exp", "coverage", "average", "chain", "gaps", "limits", "converse", "gaussian"};
}

SuiteResult run_suite(const std::string& name, const InstancePool& pool, const SuiteOptions& opts,
                      std::uint64_t seed) {
  SuiteResult out;
  out.name = name;
  Recorder rec{out};
  if (name == "exp") {
    suite_exp(rec, pool, opts);
  } else if (name == "coverage") {
    suite_coverage(rec, pool, opts);
  } else if (name == "average") {
    suite_average(rec, pool);
  } else if (name == "chain") {
    suite_chain(rec, pool, opts);
  } else if (name == "gaps") {
    suite_gaps(rec, pool, opts);
  } else if (name == "limits") {
    suite_limits(rec, pool, opts);
  } else if (name == "converse") {
    suite_converse(rec, pool, seed);
  } else if (name == "gaussian") {
    suite_gaussian(rec, seed);
  } else {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
  return out;
}

}  // namespace infogen
