#pragma once

// Problem and experiment-config files (JSON).
//
// Problem:
//   {"name": "...", "instances": ["0","1"], "hypotheses": ["0","1"],
//    "pz": {"probs": [0.5, "1/2"]}, "n": 2,
//    "loss": {"matrix": [[...], ...], "range": [0, 1], "sigma": 0.5},
//    "learner": {"kind": "gibbs", "beta": 2} | {"kind": "erm", "tie": "lowest"|"uniform"}
//             | {"kind": "constant", "probs": [...]} | {"kind": "identity"}
//             | {"kind": "kernel", "rows": {"0,1": [...], ...}},
//    "setting": "standard" | "subset"}
// "loss": "zero_one" is shorthand for the 0/1 loss when hypotheses == instances.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "infogen/info_measures.hpp"
#include "infogen/learning_models.hpp"

namespace infogen {

/// Malformed problem or config; maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Setting { standard, subset };
std::string to_string(Setting s);

struct LearnerSpec {
  std::string kind = "gibbs";
  double beta = 1.0;
  TieRule tie = TieRule::lowest_index;
  std::vector<double> probs;
  std::map<std::string, std::vector<double>> rows;
};

struct Problem {
  std::string name;
  FiniteDistribution pz;
  std::size_t n = 1;
  LossTable loss;
  LearnerSpec learner;
  std::optional<Setting> setting;

  /// Learner kernel for sample size `n` (defaults to this->n).
  Kernel build_learner(std::optional<std::size_t> n_override = std::nullopt) const;
  StandardSystem standard() const;
  SubsetSystem subset() const;
};

Problem parse_problem(const std::string& text);
Problem load_problem(const std::filesystem::path& path);

enum class Format { csv, json };

struct SweepSpec {
  std::string axis;  // delta | t | alpha | beta | n
  std::vector<std::string> values;
};

struct ExperimentConfig {
  Problem problem;
  Setting setting = Setting::standard;
  std::vector<double> deltas{0.1};
  std::vector<MomentOrder> t_grid{MomentOrder::finite(2.0)};
  std::vector<double> alpha_grid{2.0};
  /// Empty: tail bounds pick γ automatically.
  std::vector<double> gamma_grid;
  std::vector<std::string> bounds;
  std::uint64_t seed = 2024;
  std::optional<std::filesystem::path> out;
  Format format = Format::csv;
  std::optional<SweepSpec> sweep;
  std::vector<std::string> suites;
  bool inject_fault = false;
  std::size_t random_instances = 50;
  std::size_t exp_instances = 200;
};

/// Shortest round-tripping decimal (%.15g or %.17g); ±∞ as "inf"/"-inf".
std::string format_number(double x);

/// Parses "inf"/"infinity" or a positive number.
MomentOrder parse_order(const std::string& s);

/// `base_dir` resolves a relative "problem" path; "bounds": "all" expands to
/// report_bound_ids(setting). Probabilities may be numbers or strings
/// ("0.25", "1/3") and are renormalized when within 1e-9 of summing to 1.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Bound ids accepted by reports in each setting.
std::vector<std::string> report_bound_ids(Setting s);

}  // namespace infogen
