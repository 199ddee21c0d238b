#include "infogen/prob_core.hpp"

#include <algorithm>
#include <cmath>

namespace infogen {

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return kNegInf;
  const double hi = *std::max_element(xs.begin(), xs.end());
  if (hi == kNegInf) return kNegInf;
  if (hi == kInf) return kInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

namespace {

void check_normalized(std::span<const double> log_masses, const char* what) {
  for (double lm : log_masses) {
    if (std::isnan(lm) || lm > 0.0 + kProbTolerance) {
      throw std::invalid_argument(std::string(what) + ": mass outside [0,1]");
    }
  }
  const double total = std::exp(log_sum_exp(log_masses));
  if (!(std::abs(total - 1.0) <= kProbTolerance)) {
    throw std::invalid_argument(std::string(what) + ": masses sum to " +
                                std::to_string(total) + ", not 1");
  }
}

}  // namespace

FiniteDistribution::FiniteDistribution(std::vector<std::string> labels,
                                       std::vector<double> log_masses)
    : labels_(std::move(labels)), log_mass_(std::move(log_masses)) {
  if (labels_.size() != log_mass_.size()) {
    throw std::invalid_argument("FiniteDistribution: label/mass count mismatch");
  }
  if (labels_.empty()) throw std::invalid_argument("FiniteDistribution: empty outcome set");
  check_normalized(log_mass_, "FiniteDistribution");
}

FiniteDistribution FiniteDistribution::from_probs(std::vector<std::string> labels,
                                                  std::span<const double> probs) {
  std::vector<double> lm(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0)) throw std::invalid_argument("FiniteDistribution: negative mass");
    lm[i] = safe_log(probs[i]);
  }
  return FiniteDistribution(std::move(labels), std::move(lm));
}

FiniteDistribution FiniteDistribution::from_log_masses(std::vector<std::string> labels,
                                                       std::vector<double> log_masses) {
  return FiniteDistribution(std::move(labels), std::move(log_masses));
}

FiniteDistribution FiniteDistribution::uniform(std::vector<std::string> labels) {
  const double lm = -std::log(static_cast<double>(labels.size()));
  std::vector<double> masses(labels.size(), lm);
  return FiniteDistribution(std::move(labels), std::move(masses));
}

FiniteDistribution FiniteDistribution::point_mass(std::vector<std::string> labels,
                                                  std::size_t index) {
  if (index >= labels.size()) throw std::out_of_range("point_mass: index out of range");
  std::vector<double> masses(labels.size(), kNegInf);
  masses[index] = 0.0;
  return FiniteDistribution(std::move(labels), std::move(masses));
}

double FiniteDistribution::mass(std::size_t i) const { return std::exp(log_mass_[i]); }

std::vector<double> FiniteDistribution::masses() const {
  std::vector<double> out(log_mass_.size());
  std::transform(log_mass_.begin(), log_mass_.end(), out.begin(),
                 [](double lm) { return std::exp(lm); });
  return out;
}

std::vector<std::size_t> FiniteDistribution::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < log_mass_.size(); ++i) {
    if (in_support(i)) out.push_back(i);
  }
  return out;
}

std::size_t FiniteDistribution::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("unknown label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

Kernel::Kernel(std::vector<std::string> inputs, std::vector<std::string> outputs,
               std::vector<FiniteDistribution> rows)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), rows_(std::move(rows)) {
  if (rows_.size() != inputs_.size()) throw std::invalid_argument("Kernel: one row per input required");
  for (const auto& r : rows_) {
    if (r.labels() != outputs_) throw std::invalid_argument("Kernel: row labels differ from outputs");
  }
}

JointTable::JointTable(std::vector<std::vector<std::string>> axes, std::vector<double> log_masses)
    : axes_(std::move(axes)), log_mass_(std::move(log_masses)) {
  if (axes_.empty()) throw std::invalid_argument("JointTable: no coordinates");
  strides_.assign(axes_.size(), 1);
  std::size_t total = 1;
  for (std::size_t k = axes_.size(); k-- > 0;) {
    if (axes_[k].empty()) throw std::invalid_argument("JointTable: empty coordinate");
    strides_[k] = total;
    total *= axes_[k].size();
  }
  if (total != log_mass_.size()) throw std::invalid_argument("JointTable: mass count mismatch");
  check_normalized(log_mass_, "JointTable");
}

JointTable JointTable::from_log_masses(std::vector<std::vector<std::string>> axes,
                                       std::vector<double> log_masses) {
  return JointTable(std::move(axes), std::move(log_masses));
}

double JointTable::mass(std::size_t flat) const { return std::exp(log_mass_[flat]); }

std::vector<std::size_t> JointTable::unravel(std::size_t flat) const {
  std::vector<std::size_t> idx(axes_.size());
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    idx[k] = flat / strides_[k];
    flat %= strides_[k];
  }
  return idx;
}

std::size_t JointTable::flat_index(std::span<const std::size_t> idx) const {
  if (idx.size() != axes_.size()) throw std::invalid_argument("flat_index: rank mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= axes_[k].size()) throw std::out_of_range("flat_index: coordinate out of range");
    flat += idx[k] * strides_[k];
  }
  return flat;
}

std::string JointTable::tuple_label(std::size_t flat) const {
  const auto idx = unravel(flat);
  std::string out;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) out += '|';
    out += axes_[k][idx[k]];
  }
  return out;
}

FiniteDistribution JointTable::as_distribution() const {
  std::vector<std::string> labels(size());
  for (std::size_t i = 0; i < size(); ++i) labels[i] = tuple_label(i);
  return FiniteDistribution::from_log_masses(std::move(labels), log_mass_);
}

JointTable product(const FiniteDistribution& p, const FiniteDistribution& q) {
  std::vector<double> lm;
  lm.reserve(p.size() * q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) lm.push_back(p.log_mass(i) + q.log_mass(j));
  }
  return JointTable::from_log_masses({p.labels(), q.labels()}, std::move(lm));
}

FiniteDistribution iid_power(const FiniteDistribution& p, std::size_t n) {
  if (n == 0) throw std::invalid_argument("iid_power: n must be at least 1");
  std::vector<std::string> labels = p.labels();
  std::vector<double> lm = p.log_masses();
  for (std::size_t step = 1; step < n; ++step) {
    std::vector<std::string> next_labels;
    std::vector<double> next_lm;
    next_labels.reserve(labels.size() * p.size());
    next_lm.reserve(labels.size() * p.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        next_labels.push_back(labels[i] + "," + p.label(j));
        next_lm.push_back(lm[i] + p.log_mass(j));
      }
    }
    labels = std::move(next_labels);
    lm = std::move(next_lm);
  }
  return FiniteDistribution::from_log_masses(std::move(labels), std::move(lm));
}

FiniteDistribution marginalize(const JointTable& joint, std::span<const std::size_t> keep) {
  if (keep.empty()) throw std::invalid_argument("marginalize: empty keep set");
  for (std::size_t k : keep) {
    if (k >= joint.rank()) throw std::out_of_range("marginalize: no such coordinate");
  }
  std::vector<std::size_t> kept_stride(keep.size(), 1);
  std::size_t kept_total = 1;
  for (std::size_t k = keep.size(); k-- > 0;) {
    kept_stride[k] = kept_total;
    kept_total *= joint.extent(keep[k]);
  }
  std::vector<std::vector<double>> groups(kept_total);
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const auto idx = joint.unravel(flat);
    std::size_t g = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) g += idx[keep[k]] * kept_stride[k];
    groups[g].push_back(joint.log_mass(flat));
  }
  std::vector<std::string> labels(kept_total);
  std::vector<double> lm(kept_total);
  for (std::size_t g = 0; g < kept_total; ++g) {
    std::size_t rem = g;
    std::string label;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      if (k) label += '|';
      label += joint.axis(keep[k])[rem / kept_stride[k]];
      rem %= kept_stride[k];
    }
    labels[g] = std::move(label);
    lm[g] = log_sum_exp(groups[g]);
  }
  return FiniteDistribution::from_log_masses(std::move(labels), std::move(lm));
}

double ess_sup(std::span<const double> values, const FiniteDistribution& dist) {
  if (values.size() != dist.size()) throw std::invalid_argument("ess_sup: size mismatch");
  double best = kNegInf;
  bool any = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!dist.in_support(i)) continue;
    best = any ? std::max(best, values[i]) : values[i];
    any = true;
  }
  if (!any) throw std::invalid_argument("ess_sup: empty support");
  return best;
}

}  // namespace infogen
