#include "infogen/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "infogen/verify.hpp"

namespace infogen {

using nlohmann::json;

std::string to_string(Setting s) { return s == Setting::subset ? "subset" : "standard"; }

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where + ": missing \"" + key + "\"");
  return j.at(key);
}

double parse_number_text(const std::string& s, const std::string& where) {
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash != std::string::npos) {
      const double num = std::stod(s.substr(0, slash));
      const std::string den_text = s.substr(slash + 1);
      const double den = std::stod(den_text, &used);
      if (used != den_text.size() || den == 0.0) fail(where + ": bad fraction \"" + s + "\"");
      return num / den;
    }
    const double v = std::stod(s, &used);
    if (used != s.size()) fail(where + ": bad number \"" + s + "\"");
    return v;
  } catch (const std::logic_error&) {
    fail(where + ": bad number \"" + s + "\"");
  }
}

double as_number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number_text(j.get<std::string>(), where);
  fail(where + ": expected a number");
}

std::vector<double> as_probs(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where + ": expected a nonempty array of probabilities");
  std::vector<double> out;
  double total = 0.0;
  for (const auto& e : j) {
    const double v = as_number(e, where);
    if (!(v >= 0.0) || !std::isfinite(v)) fail(where + ": probabilities must be finite and >= 0");
    out.push_back(v);
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(where + ": probabilities sum to " + std::to_string(total));
  for (double& v : out) v /= total;
  return out;
}

std::vector<std::string> as_labels(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where + ": expected a nonempty array of labels");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (e.is_string()) {
      out.push_back(e.get<std::string>());
    } else if (e.is_number_integer()) {
      out.push_back(std::to_string(e.get<long long>()));
    } else {
      fail(where + ": labels must be strings or integers");
    }
  }
  return out;
}

std::size_t as_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(where + ": expected a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

Setting parse_setting(const json& j) {
  if (!j.is_string()) fail("setting must be a string");
  const auto s = j.get<std::string>();
  if (s == "standard") return Setting::standard;
  if (s == "subset") return Setting::subset;
  fail("unknown setting \"" + s + "\"");
}

LossTable parse_loss(const json& j, const std::vector<std::string>& hyps,
                     const std::vector<std::string>& insts) {
  if (j.is_string()) {
    if (j.get<std::string>() != "zero_one") fail("loss: unknown shorthand");
    if (hyps != insts) fail("loss: zero_one needs identical hypothesis and instance labels");
    return LossTable::zero_one(hyps);
  }
  const auto& m = require(j, "matrix", "loss");
  if (!m.is_array() || m.size() != hyps.size()) fail("loss.matrix: need one row per hypothesis");
  std::vector<std::vector<double>> values;
  for (const auto& row : m) {
    if (!row.is_array() || row.size() != insts.size()) fail("loss.matrix: need one column per instance");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(as_number(v, "loss.matrix"));
    values.push_back(std::move(r));
  }
  double lo = 0.0;
  double hi = 1.0;
  if (j.contains("range")) {
    const auto& r = j.at("range");
    if (!r.is_array() || r.size() != 2) fail("loss.range: expected [a, b]");
    lo = as_number(r[0], "loss.range");
    hi = as_number(r[1], "loss.range");
    if (!(hi > lo)) fail("loss.range: need a < b");
  }
  std::optional<double> sigma;
  if (j.contains("sigma")) sigma = as_number(j.at("sigma"), "loss.sigma");
  try {
    return LossTable(hyps, insts, std::move(values), lo, hi, sigma);
  } catch (const std::invalid_argument& e) {
    fail(std::string("loss: ") + e.what());
  }
}

LearnerSpec parse_learner(const json& j, const std::vector<std::string>& hyps) {
  LearnerSpec spec;
  spec.kind = require(j, "kind", "learner").get<std::string>();
  if (spec.kind == "gibbs") {
    spec.beta = as_number(require(j, "beta", "learner"), "learner.beta");
    if (!(spec.beta >= 0.0) || !std::isfinite(spec.beta)) fail("learner.beta must be finite and >= 0");
  } else if (spec.kind == "erm") {
    const std::string tie = j.value("tie", std::string("lowest"));
    if (tie == "lowest") {
      spec.tie = TieRule::lowest_index;
    } else if (tie == "uniform") {
      spec.tie = TieRule::uniform_over_argmin;
    } else {
      fail("learner.tie must be \"lowest\" or \"uniform\"");
    }
  } else if (spec.kind == "constant") {
    if (j.contains("hypothesis")) {
      const auto h = as_labels(json::array({j.at("hypothesis")}), "learner.hypothesis").front();
      spec.probs.assign(hyps.size(), 0.0);
      bool found = false;
      for (std::size_t i = 0; i < hyps.size(); ++i) {
        if (hyps[i] == h) {
          spec.probs[i] = 1.0;
          found = true;
        }
      }
      if (!found) fail("learner.hypothesis \"" + h + "\" is not a hypothesis");
    } else {
      spec.probs = as_probs(require(j, "probs", "learner"), "learner.probs");
      if (spec.probs.size() != hyps.size()) fail("learner.probs: need one entry per hypothesis");
    }
  } else if (spec.kind == "identity") {
  } else if (spec.kind == "kernel") {
    const auto& rows = require(j, "rows", "learner");
    if (!rows.is_object()) fail("learner.rows must map training-vector labels to probabilities");
    for (const auto& [key, val] : rows.items()) {
      auto p = as_probs(val, "learner.rows[" + key + "]");
      if (p.size() != hyps.size()) fail("learner.rows[" + key + "]: need one entry per hypothesis");
      spec.rows.emplace(key, std::move(p));
    }
  } else {
    fail("unknown learner kind \"" + spec.kind + "\"");
  }
  return spec;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(what + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Problem problem_from_json(const json& j) {
  if (!j.is_object()) fail("problem must be a JSON object");
  Problem p;
  p.name = j.value("name", std::string("problem"));
  const auto insts = as_labels(require(j, "instances", "problem"), "instances");
  const auto hyps = j.contains("hypotheses") ? as_labels(j.at("hypotheses"), "hypotheses") : insts;
  const auto probs = as_probs(require(require(j, "pz", "problem"), "probs", "pz"), "pz.probs");
  if (probs.size() != insts.size()) fail("pz.probs: need one entry per instance");
  p.pz = FiniteDistribution::from_probs(insts, probs);
  p.n = as_count(require(j, "n", "problem"), "n");
  p.loss = parse_loss(require(j, "loss", "problem"), hyps, insts);
  p.learner = parse_learner(require(j, "learner", "problem"), hyps);
  if (j.contains("setting")) p.setting = parse_setting(j.at("setting"));
  (void)p.build_learner();  // surface learner errors at load time
  return p;
}

std::string number_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_number(v.get<double>());
  fail("sweep.values: expected numbers or strings");
}

}  // namespace

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  if (std::strtod(buf, nullptr) != x) std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Kernel Problem::build_learner(std::optional<std::size_t> n_override) const {
  const std::size_t m = n_override.value_or(n);
  try {
    if (learner.kind == "gibbs") return gibbs_kernel(loss, m, learner.beta);
    if (learner.kind == "erm") return erm_kernel(loss, m, learner.tie);
    if (learner.kind == "constant") {
      return constant_kernel(loss, m, FiniteDistribution::from_probs(loss.hypotheses(), learner.probs));
    }
    if (learner.kind == "identity") {
      if (m != 1) fail("identity learner needs n = 1");
      return identity_kernel(loss);
    }
    const auto inputs = vector_labels(loss.instances(), m);
    if (learner.rows.size() != inputs.size()) {
      fail("learner.rows: need exactly one row per training vector (" + std::to_string(inputs.size()) + ")");
    }
    std::vector<FiniteDistribution> rows;
    for (const auto& in : inputs) {
      const auto it = learner.rows.find(in);
      if (it == learner.rows.end()) fail("learner.rows: missing training vector \"" + in + "\"");
      rows.push_back(FiniteDistribution::from_probs(loss.hypotheses(), it->second));
    }
    return Kernel(inputs, loss.hypotheses(), std::move(rows));
  } catch (const std::invalid_argument& e) {
    fail(std::string("learner: ") + e.what());
  }
}

StandardSystem Problem::standard() const { return assemble_standard(pz, n, build_learner(), loss); }
SubsetSystem Problem::subset() const { return assemble_subset(pz, n, build_learner(), loss); }

Problem parse_problem(const std::string& text) { return problem_from_json(parse_json(text, "problem")); }

Problem load_problem(const std::filesystem::path& path) {
  auto p = parse_problem(read_file(path));
  return p;
}

MomentOrder parse_order(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Infinity") return MomentOrder::infinity();
  const double v = parse_number_text(s, "moment order");
  if (!(v > 0.0) || !std::isfinite(v)) fail("moment order must be positive");
  return MomentOrder::finite(v);
}

std::vector<std::string> report_bound_ids(Setting s) {
  std::vector<std::string> out;
  if (s == Setting::standard) {
    out.push_back("avg_mi");
    for (auto& id : standard_bound_ids()) out.push_back(id);
  } else {
    out.push_back("cmi_avg");
    for (auto& id : subset_bound_ids()) out.push_back(id);
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  const json j = parse_json(text, "config");
  if (!j.is_object()) fail("config must be a JSON object");
  static const std::vector<std::string> known{
      "problem", "setting", "deltas", "t_grid", "alpha_grid", "gamma_grid", "bounds", "seed", "out",
      "format", "sweep", "suites", "inject_fault", "random_instances", "exp_instances"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) fail("unknown config key \"" + key + "\"");
  }

  ExperimentConfig cfg;
  const auto& pj = require(j, "problem", "config");
  if (pj.is_string()) {
    std::filesystem::path path(pj.get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    cfg.problem = load_problem(path);
  } else {
    cfg.problem = problem_from_json(pj);
  }
  cfg.setting = j.contains("setting") ? parse_setting(j.at("setting"))
                                      : cfg.problem.setting.value_or(Setting::standard);

  if (j.contains("deltas")) {
    const auto& d = j.at("deltas");
    if (!d.is_array() || d.empty()) fail("deltas must be a nonempty array");
    cfg.deltas.clear();
    for (const auto& v : d) {
      const double x = as_number(v, "deltas");
      if (!(x > 0.0 && x < 1.0)) fail("deltas must lie in (0, 1)");
      cfg.deltas.push_back(x);
    }
  }
  if (j.contains("t_grid")) {
    const auto& t = j.at("t_grid");
    if (!t.is_array() || t.empty()) fail("t_grid must be a nonempty array");
    cfg.t_grid.clear();
    for (const auto& v : t) cfg.t_grid.push_back(parse_order(number_text(v)));
  }
  if (j.contains("alpha_grid")) {
    const auto& a = j.at("alpha_grid");
    if (!a.is_array() || a.empty()) fail("alpha_grid must be a nonempty array");
    cfg.alpha_grid.clear();
    for (const auto& v : a) {
      const double x = as_number(v, "alpha_grid");
      if (!(x > 1.0) || !std::isfinite(x)) fail("alpha_grid entries must be finite and > 1");
      cfg.alpha_grid.push_back(x);
    }
  }
  if (j.contains("gamma_grid")) {
    const auto& g = j.at("gamma_grid");
    if (!g.is_array()) fail("gamma_grid must be an array");
    for (const auto& v : g) cfg.gamma_grid.push_back(as_number(v, "gamma_grid"));
  }

  const auto catalogue = report_bound_ids(cfg.setting);
  if (!j.contains("bounds") || (j.at("bounds").is_string() && j.at("bounds").get<std::string>() == "all")) {
    cfg.bounds = catalogue;
  } else {
    const auto& b = j.at("bounds");
    if (!b.is_array()) fail("bounds must be \"all\" or an array of bound ids");
    if (b.empty()) fail("bound selection is empty");
    for (const auto& v : b) {
      if (!v.is_string()) fail("bounds entries must be strings");
      const auto id = v.get<std::string>();
      if (std::find(catalogue.begin(), catalogue.end(), id) == catalogue.end()) {
        fail("unknown bound \"" + id + "\" for the " + to_string(cfg.setting) + " setting");
      }
      cfg.bounds.push_back(id);
    }
  }

  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      fail("seed must be a nonnegative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  if (j.contains("out")) {
    std::filesystem::path out(j.at("out").get<std::string>());
    cfg.out = out.is_relative() ? base_dir / out : out;
  }
  if (j.contains("format")) {
    const auto f = j.at("format").get<std::string>();
    if (f == "csv") {
      cfg.format = Format::csv;
    } else if (f == "json") {
      cfg.format = Format::json;
    } else {
      fail("format must be csv or json");
    }
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    SweepSpec spec;
    spec.axis = require(s, "axis", "sweep").get<std::string>();
    static const std::vector<std::string> axes{"delta", "t", "alpha", "beta", "n"};
    if (std::find(axes.begin(), axes.end(), spec.axis) == axes.end()) fail("unknown sweep axis \"" + spec.axis + "\"");
    const auto& vals = require(s, "values", "sweep");
    if (!vals.is_array() || vals.empty()) fail("sweep.values must be a nonempty array");
    for (const auto& v : vals) spec.values.push_back(number_text(v));
    if (spec.axis == "beta" && cfg.problem.learner.kind != "gibbs") fail("beta sweep needs a gibbs learner");
    cfg.sweep = spec;
  }
  if (j.contains("suites")) {
    const auto& s = j.at("suites");
    if (!s.is_array() || s.empty()) fail("suites must be a nonempty array");
    const auto names = suite_names();
    for (const auto& v : s) {
      const auto name = v.get<std::string>();
      if (std::find(names.begin(), names.end(), name) == names.end()) fail("unknown suite \"" + name + "\"");
      cfg.suites.push_back(name);
    }
  } else {
    cfg.suites = suite_names();
  }
  if (j.contains("inject_fault")) {
    const auto& f = j.at("inject_fault");
    if (f.is_boolean()) {
      cfg.inject_fault = f.get<bool>();
    } else if (f.is_string() && f.get<std::string>() == "sigma_quarter") {
      cfg.inject_fault = true;
    } else {
      fail("inject_fault must be a boolean or \"sigma_quarter\"");
    }
  }
  if (j.contains("random_instances")) {
    const auto& r = j.at("random_instances");
    if (!r.is_number_integer() || r.get<long long>() < 0) fail("random_instances must be >= 0");
    cfg.random_instances = r.get<std::size_t>();
  }
  if (j.contains("exp_instances")) {
    const auto& r = j.at("exp_instances");
    if (!r.is_number_integer() || r.get<long long>() < 0) fail("exp_instances must be >= 0");
    cfg.exp_instances = r.get<std::size_t>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

}  // namespace infogen
