#include "infogen/learning_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace infogen {

LossTable::LossTable(std::vector<std::string> hypotheses, std::vector<std::string> instances,
                     std::vector<std::vector<double>> values, double lo, double hi,
                     std::optional<double> sigma)
    : hypotheses_(std::move(hypotheses)),
      instances_(std::move(instances)),
      values_(std::move(values)),
      lo_(lo),
      hi_(hi) {
  if (hypotheses_.empty() || instances_.empty()) {
    throw std::invalid_argument("LossTable: empty hypothesis or instance space");
  }
  if (!(lo_ <= hi_)) throw std::invalid_argument("LossTable: range lower end exceeds upper end");
  if (values_.size() != hypotheses_.size()) {
    throw std::invalid_argument("LossTable: one row per hypothesis required");
  }
  for (const auto& row : values_) {
    if (row.size() != instances_.size()) {
      throw std::invalid_argument("LossTable: one column per instance required");
    }
    for (double v : row) {
      if (!(v >= lo_ && v <= hi_)) {
        throw std::invalid_argument("LossTable: loss value outside declared range");
      }
    }
  }
  const double hoeffding = (hi_ - lo_) / 2.0;
  sigma_ = sigma.value_or(hoeffding);
  if (!(sigma_ >= hoeffding)) {
    throw std::invalid_argument("LossTable: sigma below (b-a)/2 is not a valid sub-Gaussian parameter");
  }
}

LossTable LossTable::zero_one(std::vector<std::string> labels) {
  std::vector<std::vector<double>> values(labels.size(), std::vector<double>(labels.size(), 1.0));
  for (std::size_t i = 0; i < labels.size(); ++i) values[i][i] = 0.0;
  return LossTable(labels, labels, std::move(values), 0.0, 1.0);
}

LossTable LossTable::with_sigma(double sigma) const {
  return LossTable(hypotheses_, instances_, values_, lo_, hi_, sigma);
}

IndexCodec::IndexCodec(std::size_t base, std::size_t length) : base_(base), length_(length) {
  if (base_ == 0 || length_ == 0) throw std::invalid_argument("IndexCodec: empty alphabet or length");
  count_ = 1;
  for (std::size_t i = 0; i < length_; ++i) {
    if (count_ > std::numeric_limits<std::size_t>::max() / base_) {
      throw BudgetExceeded("IndexCodec: vector space too large to index");
    }
    count_ *= base_;
  }
}

std::vector<std::size_t> IndexCodec::decode(std::size_t flat) const {
  std::vector<std::size_t> digits(length_);
  for (std::size_t i = length_; i-- > 0;) {
    digits[i] = flat % base_;
    flat /= base_;
  }
  return digits;
}

std::size_t IndexCodec::encode(std::span<const std::size_t> digits) const {
  std::size_t flat = 0;
  for (std::size_t d : digits) flat = flat * base_ + d;
  return flat;
}

std::vector<std::string> vector_labels(const std::vector<std::string>& alphabet, std::size_t n) {
  const IndexCodec codec(alphabet.size(), n);
  std::vector<std::string> out(codec.count());
  for (std::size_t i = 0; i < codec.count(); ++i) {
    const auto digits = codec.decode(i);
    std::string label;
    for (std::size_t k = 0; k < digits.size(); ++k) {
      if (k) label += ',';
      label += alphabet[digits[k]];
    }
    out[i] = std::move(label);
  }
  return out;
}

namespace {

void check_budget(std::size_t a, std::size_t b, std::size_t c = 1) {
  const double atoms = static_cast<double>(a) * static_cast<double>(b) * static_cast<double>(c);
  if (atoms > static_cast<double>(kEnumerationBudget)) {
    throw BudgetExceeded("system has " + std::to_string(static_cast<long double>(atoms)) +
                         " joint atoms; the enumeration budget is " +
                         std::to_string(kEnumerationBudget));
  }
}

// Σ_i ℓ(w, z_i) for every (dataset, hypothesis).
std::vector<std::vector<double>> total_losses(const LossTable& loss, const IndexCodec& codec) {
  std::vector<std::vector<double>> totals(codec.count(),
                                          std::vector<double>(loss.num_hypotheses(), 0.0));
  for (std::size_t d = 0; d < codec.count(); ++d) {
    const auto z = codec.decode(d);
    for (std::size_t w = 0; w < loss.num_hypotheses(); ++w) {
      for (std::size_t zi : z) totals[d][w] += loss(w, zi);
    }
  }
  return totals;
}

}  // namespace

Kernel gibbs_kernel(const LossTable& loss, std::size_t n, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("gibbs_kernel: beta must be finite and nonnegative");
  }
  const IndexCodec codec(loss.num_instances(), n);
  check_budget(codec.count(), loss.num_hypotheses());
  const auto totals = total_losses(loss, codec);
  std::vector<FiniteDistribution> rows;
  rows.reserve(codec.count());
  for (std::size_t d = 0; d < codec.count(); ++d) {
    std::vector<double> logits(loss.num_hypotheses());
    for (std::size_t w = 0; w < logits.size(); ++w) logits[w] = -beta * totals[d][w];
    const double norm = log_sum_exp(logits);
    for (double& l : logits) l -= norm;
    rows.push_back(FiniteDistribution::from_log_masses(loss.hypotheses(), std::move(logits)));
  }
  return Kernel(vector_labels(loss.instances(), n), loss.hypotheses(), std::move(rows));
}

Kernel erm_kernel(const LossTable& loss, std::size_t n, TieRule tie) {
  const IndexCodec codec(loss.num_instances(), n);
  check_budget(codec.count(), loss.num_hypotheses());
  const auto totals = total_losses(loss, codec);
  std::vector<FiniteDistribution> rows;
  rows.reserve(codec.count());
  for (std::size_t d = 0; d < codec.count(); ++d) {
    const double best = *std::min_element(totals[d].begin(), totals[d].end());
    std::vector<std::size_t> argmin;
    for (std::size_t w = 0; w < totals[d].size(); ++w) {
      if (totals[d][w] <= best + 1e-12) argmin.push_back(w);
    }
    std::vector<double> lm(loss.num_hypotheses(), kNegInf);
    if (tie == TieRule::lowest_index) {
      lm[argmin.front()] = 0.0;
    } else {
      const double share = -std::log(static_cast<double>(argmin.size()));
      for (std::size_t w : argmin) lm[w] = share;
    }
    rows.push_back(FiniteDistribution::from_log_masses(loss.hypotheses(), std::move(lm)));
  }
  return Kernel(vector_labels(loss.instances(), n), loss.hypotheses(), std::move(rows));
}

Kernel constant_kernel(const LossTable& loss, std::size_t n, const FiniteDistribution& output) {
  if (output.labels() != loss.hypotheses()) {
    throw std::invalid_argument("constant_kernel: output labels must be the hypotheses");
  }
  const IndexCodec codec(loss.num_instances(), n);
  check_budget(codec.count(), loss.num_hypotheses());
  return Kernel(vector_labels(loss.instances(), n), loss.hypotheses(),
                std::vector<FiniteDistribution>(codec.count(), output));
}

Kernel identity_kernel(const LossTable& loss) {
  std::vector<FiniteDistribution> rows;
  for (const auto& z : loss.instances()) {
    auto it = std::find(loss.hypotheses().begin(), loss.hypotheses().end(), z);
    if (it == loss.hypotheses().end()) {
      throw std::invalid_argument("identity_kernel: instance '" + z + "' is not a hypothesis");
    }
    rows.push_back(FiniteDistribution::point_mass(
        loss.hypotheses(), static_cast<std::size_t>(it - loss.hypotheses().begin())));
  }
  return Kernel(loss.instances(), loss.hypotheses(), std::move(rows));
}

namespace {

void check_learner(const Kernel& learner, const LossTable& loss, const FiniteDistribution& pz,
                   std::size_t n) {
  if (pz.labels() != loss.instances()) {
    throw std::invalid_argument("P_Z labels must match the loss table's instance space");
  }
  if (learner.outputs() != loss.hypotheses()) {
    throw std::invalid_argument("learner outputs must match the loss table's hypotheses");
  }
  if (learner.inputs() != vector_labels(loss.instances(), n)) {
    throw std::invalid_argument("learner must have one row per length-" + std::to_string(n) +
                                " training vector");
  }
}

std::vector<double> population_losses(const LossTable& loss, const FiniteDistribution& pz) {
  std::vector<double> out(loss.num_hypotheses(), 0.0);
  for (std::size_t w = 0; w < out.size(); ++w) {
    for (std::size_t z = 0; z < pz.size(); ++z) out[w] += pz.mass(z) * loss(w, z);
  }
  return out;
}

}  // namespace

StandardSystem::StandardSystem(FiniteDistribution pz, std::size_t n, Kernel learner,
                               LossTable loss)
    : pz_(std::move(pz)),
      n_(n),
      learner_(std::move(learner)),
      loss_(std::move(loss)),
      codec_(pz_.size(), n_),
      pzn_(iid_power(pz_, n_)) {
  const std::size_t nw = loss_.num_hypotheses();
  std::vector<double> lm(nw * pzn_.size());
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t d = 0; d < pzn_.size(); ++d) {
      lm[w * pzn_.size() + d] = pzn_.log_mass(d) + learner_.log_prob(d, w);
    }
  }
  joint_ = JointTable::from_log_masses({loss_.hypotheses(), pzn_.labels()}, std::move(lm));
  const std::size_t keep_w[] = {0};
  pw_ = marginalize(joint_, keep_w);
  population_loss_ = population_losses(loss_, pz_);
}

double StandardSystem::empirical_loss(std::size_t w, std::size_t data) const {
  double total = 0.0;
  for (std::size_t zi : codec_.decode(data)) total += loss_(w, zi);
  return total / static_cast<double>(n_);
}

StandardSystem assemble_standard(const FiniteDistribution& pz, std::size_t n,
                                 const Kernel& learner, const LossTable& loss) {
  if (n == 0) throw std::invalid_argument("assemble_standard: n must be at least 1");
  const IndexCodec codec(pz.size(), n);
  check_budget(loss.num_hypotheses(), codec.count());
  check_learner(learner, loss, pz, n);
  return StandardSystem(pz, n, learner, loss);
}

SubsetSystem::SubsetSystem(FiniteDistribution pz, std::size_t n, Kernel learner, LossTable loss)
    : pz_(std::move(pz)),
      n_(n),
      learner_(std::move(learner)),
      loss_(std::move(loss)),
      psuper_(iid_power(pz_, 2 * n_)),
      ps_(FiniteDistribution::uniform(
          vector_labels(std::vector<std::string>{"0", "1"}, n_))) {
  const IndexCodec super_codec(pz_.size(), 2 * n_);
  const IndexCodec data_codec(pz_.size(), n_);
  const IndexCodec sel_codec(2, n_);
  const std::size_t nzt = psuper_.size();
  const std::size_t ns = ps_.size();
  const std::size_t nw = loss_.num_hypotheses();

  selected_.resize(nzt * ns);
  std::vector<std::size_t> picked(n_);
  for (std::size_t zt = 0; zt < nzt; ++zt) {
    const auto zdigits = super_codec.decode(zt);
    for (std::size_t s = 0; s < ns; ++s) {
      const auto sbits = sel_codec.decode(s);
      for (std::size_t i = 0; i < n_; ++i) picked[i] = zdigits[i + sbits[i] * n_];
      selected_[zt * ns + s] = data_codec.encode(picked);
    }
  }

  pw_given_super_.assign(nzt * nw, 0.0);
  for (std::size_t zt = 0; zt < nzt; ++zt) {
    for (std::size_t w = 0; w < nw; ++w) {
      double acc = 0.0;
      for (std::size_t s = 0; s < ns; ++s) acc += learner_.prob(selected(zt, s), w);
      pw_given_super_[zt * nw + w] = acc / static_cast<double>(ns);
    }
  }

  std::vector<double> lm(nw * nzt * ns);
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t zt = 0; zt < nzt; ++zt) {
      for (std::size_t s = 0; s < ns; ++s) {
        lm[atom(w, zt, s)] =
            psuper_.log_mass(zt) + ps_.log_mass(s) + learner_.log_prob(selected(zt, s), w);
      }
    }
  }
  joint_ = JointTable::from_log_masses({loss_.hypotheses(), psuper_.labels(), ps_.labels()},
                                       std::move(lm));
  population_loss_ = population_losses(loss_, pz_);
}

FiniteDistribution SubsetSystem::marginal_row(std::size_t zt) const {
  std::vector<double> probs(num_hypotheses());
  for (std::size_t w = 0; w < probs.size(); ++w) probs[w] = marginal_cond_prob(w, zt);
  // Renormalize away the rounding of the 2^-n average.
  double total = 0.0;
  for (double p : probs) total += p;
  for (double& p : probs) p /= total;
  return FiniteDistribution::from_probs(loss_.hypotheses(), probs);
}

double SubsetSystem::empirical_loss(std::size_t w, std::size_t data) const {
  const IndexCodec codec(pz_.size(), n_);
  double total = 0.0;
  for (std::size_t zi : codec.decode(data)) total += loss_(w, zi);
  return total / static_cast<double>(n_);
}

SubsetSystem assemble_subset(const FiniteDistribution& pz, std::size_t n, const Kernel& learner,
                             const LossTable& loss) {
  if (n == 0) throw std::invalid_argument("assemble_subset: n must be at least 1");
  const IndexCodec super_codec(pz.size(), 2 * n);
  const IndexCodec sel_codec(2, n);
  check_budget(loss.num_hypotheses(), super_codec.count(), sel_codec.count());
  check_learner(learner, loss, pz, n);
  return SubsetSystem(pz, n, learner, loss);
}

double gen(const StandardSystem& sys, std::size_t w, std::size_t data) {
  return sys.population_loss(w) - sys.empirical_loss(w, data);
}

double gen(const StandardSystem& sys, const std::string& w, const std::string& data) {
  const std::size_t wi = sys.pw().index_of(w);
  const std::size_t di = sys.data_distribution().index_of(data);
  return gen(sys, wi, di);
}

double expected_gen(const StandardSystem& sys) {
  double acc = 0.0;
  for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
    for (std::size_t d = 0; d < sys.num_datasets(); ++d) {
      const std::size_t a = sys.atom(w, d);
      if (sys.joint().log_mass(a) == kNegInf) continue;
      acc += sys.joint().mass(a) * gen(sys, w, d);
    }
  }
  return acc;
}

double posterior_gen(const StandardSystem& sys, std::size_t data) {
  double acc = 0.0;
  for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
    const double p = sys.learner().prob(data, w);
    if (p > 0.0) acc += p * gen(sys, w, data);
  }
  return acc;
}

double gen_hat(const SubsetSystem& sys, std::size_t w, std::size_t zt, std::size_t s) {
  return sys.empirical_loss(w, sys.held_out(zt, s)) - sys.empirical_loss(w, sys.selected(zt, s));
}

double gen_hat(const SubsetSystem& sys, const std::string& w, const std::string& zt,
               const std::string& s) {
  return gen_hat(sys, sys.learner().row(0).index_of(w), sys.supersample_distribution().index_of(zt),
                 sys.selector_distribution().index_of(s));
}

double subset_gen(const SubsetSystem& sys, std::size_t w, std::size_t zt, std::size_t s) {
  return sys.population_loss(w) - sys.empirical_loss(w, sys.selected(zt, s));
}

namespace {

template <typename F>
double subset_expectation(const SubsetSystem& sys, F&& f) {
  double acc = 0.0;
  for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
    for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
      for (std::size_t s = 0; s < sys.num_selectors(); ++s) {
        const std::size_t a = sys.atom(w, zt, s);
        if (sys.joint().log_mass(a) == kNegInf) continue;
        acc += sys.joint().mass(a) * f(w, zt, s);
      }
    }
  }
  return acc;
}

}  // namespace

double expected_subset_gen(const SubsetSystem& sys) {
  return subset_expectation(sys, [&](std::size_t w, std::size_t zt, std::size_t s) {
    return subset_gen(sys, w, zt, s);
  });
}

double expected_gen_hat(const SubsetSystem& sys) {
  return subset_expectation(sys, [&](std::size_t w, std::size_t zt, std::size_t s) {
    return gen_hat(sys, w, zt, s);
  });
}

}  // namespace infogen
