#include "infogen/cli_report.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace infogen {

namespace {

std::string fmt(double x) { return format_number(x); }

Cell num(std::optional<double> x) {
  if (!x) return std::monostate{};
  return *x;
}

bool uses_t(const std::string& id) { return id.find("moment") != std::string::npos; }
bool uses_alpha(const std::string& id) {
  return id == "sd_renyi" || id == "cond_sd_renyi_pair" || id == "cond_alpha_mi" || id == "cond_alpha_mi_renyi";
}
bool uses_gamma(const std::string& id) { return id == "sd_tail" || id == "cond_tail"; }

std::vector<BoundRequest> requests_for(const std::string& id, const ExperimentConfig& cfg) {
  std::vector<BoundRequest> out;
  for (double d : cfg.deltas) {
    BoundRequest base{id, d, std::nullopt, std::nullopt, std::nullopt};
    if (uses_t(id)) {
      for (auto t : cfg.t_grid) {
        auto r = base;
        r.t = t;
        out.push_back(r);
      }
    } else if (uses_alpha(id)) {
      for (double a : cfg.alpha_grid) {
        auto r = base;
        r.alpha = a;
        out.push_back(r);
      }
    } else if (uses_gamma(id) && !cfg.gamma_grid.empty()) {
      for (double g : cfg.gamma_grid) {
        auto r = base;
        r.gamma = g;
        out.push_back(r);
      }
    } else {
      out.push_back(base);
    }
  }
  return out;
}

ReportRow evaluated_row(const OutcomeEvaluation& ev, double delta) {
  ReportRow row;
  row.bound = ev.summary;
  row.truth_quantile = ev.truth_quantile(delta);
  row.violation_prob = coverage_of(ev, delta).exact_violation_prob;
  return row;
}

std::vector<ReportRow> standard_rows(const ExperimentConfig& cfg) {
  const auto sys = cfg.problem.standard();
  const double abs_gen = std::abs(expected_gen(sys));
  std::vector<ReportRow> rows;
  for (const auto& id : cfg.bounds) {
    if (id == "avg_mi") {
      ReportRow row;
      row.bound = avg_mi_bound(sys);
      rows.push_back(row);
      continue;
    }
    for (const auto& req : requests_for(id, cfg)) rows.push_back(evaluated_row(evaluate_bound(sys, req), req.delta));
  }
  for (auto& r : rows) r.abs_expected = abs_gen;
  return rows;
}

std::vector<ReportRow> subset_rows(const ExperimentConfig& cfg) {
  const auto sys = cfg.problem.subset();
  const double abs_gen = std::abs(expected_subset_gen(sys));
  const double abs_hat = std::abs(expected_gen_hat(sys));
  const double mi_super = supersample_mutual_information(sys);
  const double cmi = cond_mutual_information(sys);
  std::vector<ReportRow> rows;
  for (const auto& id : cfg.bounds) {
    if (id == "cmi_avg") {
      ReportRow row;
      row.bound = cmi_avg_bound(sys);
      row.target = "gen";
      row.abs_expected = abs_gen;
      rows.push_back(row);
      continue;
    }
    const bool to_gen = id.rfind("gen_from_", 0) == 0;
    for (const auto& req : requests_for(id, cfg)) {
      auto row = evaluated_row(evaluate_bound(sys, req), req.delta);
      row.target = to_gen ? "gen" : "gen_hat";
      row.abs_expected = to_gen ? abs_gen : abs_hat;
      rows.push_back(row);
    }
  }
  for (auto& r : rows) {
    r.mi_w_supersample = mi_super;
    r.cmi = cmi;
  }
  return rows;
}

std::string csv_field(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double x) const { return fmt(x); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
  };
  return std::visit(V{}, c);
}

nlohmann::ordered_json json_field(const Cell& c) {
  struct V {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double x) const {
      if (!std::isfinite(x)) return fmt(x);
      if (x == std::floor(x) && std::abs(x) < 9.0e15) return static_cast<std::int64_t>(x);
      return x;
    }
    nlohmann::ordered_json operator()(bool b) const { return b; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(V{}, c);
}

std::string render_table(const std::vector<std::string>& cols, const std::vector<std::vector<Cell>>& rows,
                         Format format) {
  if (format == Format::csv) {
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(r[i]);
      out += "\n";
    }
    return out;
  }
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["columns"] = cols;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < r.size(); ++i) obj[cols[i]] = json_field(r[i]);
    arr.push_back(std::move(obj));
  }
  doc["rows"] = std::move(arr);
  return doc.dump(2) + "\n";
}

}  // namespace

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{
      "schema_version", "command", "problem", "setting", "axis", "axis_value", "bound_id", "flavor",
      "scope", "delta", "t", "alpha", "gamma", "n", "sigma", "range_constant", "epsilon", "feasible",
      "target", "abs_expected", "truth_quantile", "violation_prob", "mi_w_supersample", "cmi", "reason"};
  return cols;
}

std::vector<Cell> to_cells(const ReportRow& row) {
  const auto& p = row.bound.params;
  Cell t = std::monostate{};
  if (p.t) t = p.t->is_infinite() ? kInf : p.t->value();
  auto text_or_empty = [](const std::string& s) -> Cell {
    if (s.empty()) return std::monostate{};
    return s;
  };
  return {static_cast<double>(kSchemaVersion),
          row.command,
          row.problem,
          to_string(row.setting),
          text_or_empty(row.axis),
          text_or_empty(row.axis_value),
          row.bound.bound_id,
          to_string(row.bound.flavor),
          to_string(row.bound.scope),
          num(p.delta),
          t,
          num(p.alpha),
          num(p.gamma),
          static_cast<double>(p.n),
          num(p.sigma),
          num(p.range_constant),
          row.bound.epsilon,
          row.bound.feasible,
          row.target,
          row.abs_expected,
          num(row.truth_quantile),
          num(row.violation_prob),
          num(row.mi_w_supersample),
          num(row.cmi),
          text_or_empty(row.bound.reason)};
}

std::vector<ReportRow> report_rows(const ExperimentConfig& cfg) {
  auto rows = cfg.setting == Setting::standard ? standard_rows(cfg) : subset_rows(cfg);
  for (auto& r : rows) {
    r.problem = cfg.problem.name;
    r.setting = cfg.setting;
  }
  return rows;
}

std::vector<ReportRow> sweep_rows(const ExperimentConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep needs a \"sweep\" section in the config");
  std::vector<ReportRow> out;
  for (const auto& v : cfg.sweep->values) {
    ExperimentConfig c = cfg;
    const auto& axis = cfg.sweep->axis;
    if (axis == "t") {
      c.t_grid = {parse_order(v)};
    } else {
      double x = 0.0;
      try {
        std::size_t used = 0;
        x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::logic_error&) {
        throw ConfigError("sweep value \"" + v + "\" is not a number");
      }
      if (axis == "delta") {
        if (!(x > 0.0 && x < 1.0)) throw ConfigError("sweep deltas must lie in (0, 1)");
        c.deltas = {x};
      } else if (axis == "alpha") {
        if (!(x > 1.0) || !std::isfinite(x)) throw ConfigError("sweep alphas must be finite and > 1");
        c.alpha_grid = {x};
      } else if (axis == "beta") {
        if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("sweep betas must be finite and >= 0");
        c.problem.learner.beta = x;
      } else {
        if (!(x >= 1.0) || x != std::floor(x)) throw ConfigError("sweep n must be a positive integer");
        c.problem.n = static_cast<std::size_t>(x);
      }
    }
    for (auto& r : report_rows(c)) {
      r.command = "sweep";
      r.axis = axis;
      r.axis_value = v;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::string render_rows(const std::vector<ReportRow>& rows, Format format) {
  std::vector<std::vector<Cell>> cells;
  cells.reserve(rows.size());
  for (const auto& r : rows) cells.push_back(to_cells(r));
  return render_table(report_columns(), cells, format);
}

bool VerifySummary::passed() const {
  for (const auto& s : suites) {
    if (!s.passed()) return false;
  }
  return true;
}

VerifySummary run_verification(const ExperimentConfig& cfg) {
  auto pool = canonical_pool();
  const std::string own = "config:" + cfg.problem.name;
  pool.standard.push_back({own, cfg.problem.standard()});
  pool.subset.push_back({own, cfg.problem.subset()});

  auto extend = [](InstancePool base, const InstancePool& extra) {
    for (const auto& s : extra.standard) base.standard.push_back(s);
    for (const auto& s : extra.subset) base.subset.push_back(s);
    return base;
  };
  const auto shared = extend(pool, random_pool(cfg.seed, cfg.random_instances));

  SuiteOptions opts;
  opts.inject_sigma_fault = cfg.inject_fault;
  VerifySummary summary;
  for (const auto& name : cfg.suites) {
    if (name == "exp") {
      summary.suites.push_back(run_suite(name, extend(pool, random_pool(cfg.seed, cfg.exp_instances)), opts, cfg.seed));
    } else {
      summary.suites.push_back(run_suite(name, shared, opts, cfg.seed));
    }
  }
  return summary;
}

std::string render_verify(const VerifySummary& summary, Format format) {
  const std::vector<std::string> cols{"schema_version", "suite", "checks", "failures", "passed",
                                      "instance", "detail"};
  std::vector<std::vector<Cell>> rows;
  for (const auto& s : summary.suites) {
    rows.push_back({static_cast<double>(kSchemaVersion), s.name, static_cast<double>(s.checks),
                    static_cast<double>(s.failures.size()), s.passed(), std::monostate{}, std::monostate{}});
    for (const auto& f : s.failures) {
      rows.push_back({static_cast<double>(kSchemaVersion), s.name, std::monostate{}, std::monostate{}, false,
                      f.instance, f.detail});
    }
  }
  return render_table(cols, rows, format);
}

int run_command(const std::string& command, const std::filesystem::path& config_path,
                const CliOverrides& overrides, std::ostream& out, std::ostream& err) {
  if (command != "report" && command != "verify" && command != "sweep") {
    err << "unknown command '" << command << "' (expected report, verify or sweep)\n";
    return kExitUsage;
  }
  try {
    auto cfg = load_config(config_path);
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.out) cfg.out = overrides.out;
    if (overrides.format) cfg.format = *overrides.format;

    std::string text;
    int code = kExitOk;
    if (command == "verify") {
      const auto summary = run_verification(cfg);
      text = render_verify(summary, cfg.format);
      for (const auto& s : summary.suites) {
        err << "suite " << s.name << ": " << s.checks << " checks, " << s.failures.size() << " failures\n";
        for (const auto& f : s.failures) err << "  FAIL [" << f.instance << "] " << f.detail << "\n";
      }
      code = summary.passed() ? kExitOk : kExitInvariant;
    } else {
      const auto rows = command == "report" ? report_rows(cfg) : sweep_rows(cfg);
      text = render_rows(rows, cfg.format);
    }

    if (cfg.out) {
      std::ofstream f(*cfg.out, std::ios::binary | std::ios::trunc);
      if (!f) {
        err << "cannot write " << cfg.out->string() << "\n";
        return kExitUsage;
      }
      f << text;
    } else {
      out << text;
    }
    return code;
  } catch (const BudgetExceeded& e) {
    err << "enumeration budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AbsoluteContinuityViolation& e) {
    err << "absolute continuity violated: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace infogen
