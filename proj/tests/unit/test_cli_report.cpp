#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "infogen/cli_report.hpp"

using namespace infogen;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures{INFOGEN_FIXTURE_DIR};

fs::path write_temp(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "infogen_tests";
  fs::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

const ReportRow* find_row(const std::vector<ReportRow>& rows, const std::string& id) {
  for (const auto& r : rows) {
    if (r.bound.bound_id == id) return &r;
  }
  return nullptr;
}

std::string problem_path(const std::string& f) { return (kFixtures / f).string(); }

}  // namespace

TEST_CASE("problem parsing") {
  const auto p = parse_problem(R"({"instances": ["a", "b", "c"], "pz": {"probs": ["1/3", "1/3", "1/3"]},
    "n": 1, "loss": {"matrix": [[0, 1, 0.5]], "range": [0, 1]}, "hypotheses": ["h"],
    "learner": {"kind": "constant", "hypothesis": "h"}})");
  CHECK(p.pz.mass(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p.loss(0, 2) == 0.5);
  CHECK(p.build_learner().prob(0, 0) == 1.0);

  CHECK_THROWS_AS(parse_problem(R"({"instances": ["a"], "pz": {"probs": [0.9]}, "n": 1, "loss": "zero_one",
    "learner": {"kind": "identity"}})"), ConfigError);
  CHECK_THROWS_AS(parse_problem("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_problem(R"({"instances": ["0","1"], "pz": {"probs": [0.5, 0.5]}, "n": 2,
    "loss": "zero_one", "learner": {"kind": "identity"}})"), ConfigError);
  CHECK_THROWS_AS(parse_problem(R"({"instances": ["0","1"], "pz": {"probs": [0.5, 0.5]}, "n": 1,
    "loss": "zero_one", "learner": {"kind": "magic"}})"), ConfigError);
}

TEST_CASE("custom kernel learner") {
  const auto p = parse_problem(R"({"instances": ["0","1"], "pz": {"probs": [0.5, 0.5]}, "n": 1,
    "loss": "zero_one", "learner": {"kind": "kernel", "rows": {"0": [0.9, 0.1], "1": [0.2, 0.8]}}})");
  const auto k = p.build_learner();
  CHECK(k.prob(1, 1) == doctest::Approx(0.8));
  CHECK_THROWS_AS(p.build_learner(2), ConfigError);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"({"problem": "inst_a.json", "t_grid": [1, "inf"], "deltas": [0.2]})", kFixtures);
  CHECK(cfg.setting == Setting::standard);
  CHECK(cfg.t_grid.size() == 2);
  CHECK(cfg.t_grid[1].is_infinite());
  CHECK(cfg.bounds == report_bound_ids(Setting::standard));
  CHECK(cfg.suites == suite_names());
  CHECK_THROWS_AS(parse_config(R"({"problem": "inst_a.json", "bounds": []})", kFixtures), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "inst_a.json", "deltas": [1.5]})", kFixtures), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "inst_a.json", "deltas": []})", kFixtures), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "inst_a.json", "bounds": ["cmi_avg"]})", kFixtures), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "inst_a.json", "suites": ["zzz"]})", kFixtures), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "inst_a.json", "colour": 1})", kFixtures), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "missing.json"})", kFixtures), ConfigError);
  CHECK(parse_order("inf").is_infinite());
  CHECK(parse_order("4").value() == 4.0);
  CHECK_THROWS_AS(parse_order("-1"), ConfigError);
}

TEST_CASE("erm_n2 report rows") {
  auto cfg = load_config(kFixtures / "report_inst_a.json");
  const auto rows = report_rows(cfg);
  const auto* avg = find_row(rows, "avg_mi");
  REQUIRE(avg);
  CHECK(avg->bound.epsilon == doctest::Approx(0.374945).epsilon(1e-6));
  CHECK(avg->abs_expected == doctest::Approx(0.25).epsilon(1e-12));
  for (const auto& r : rows) {
    if (r.bound.flavor == Flavor::average) CHECK(r.bound.epsilon >= r.abs_expected);
    if (r.violation_prob) CHECK(*r.violation_prob <= *r.bound.params.delta + 1e-12);
  }
  const auto csv = render_rows(rows, Format::csv);
  CHECK(csv.rfind("schema_version,", 0) == 0);
  CHECK(csv.find("avg_mi,average") != std::string::npos);
}

TEST_CASE("identity_n1 subset report includes the CMI row") {
  auto cfg = load_config(kFixtures / "report_inst_b.json");
  const auto rows = report_rows(cfg);
  const auto* cmi = find_row(rows, "cmi_avg");
  REQUIRE(cmi);
  CHECK(cmi->bound.epsilon == doctest::Approx(0.832555).epsilon(1e-6));
  CHECK(*cmi->cmi == doctest::Approx(0.5 * std::log(2.0)));
  CHECK(cmi->mi_w_supersample.has_value());
}

TEST_CASE("rendering") {
  ReportRow r;
  r.problem = "p,q";
  r.bound.bound_id = "x";
  r.bound.epsilon = kInf;
  r.bound.reason = "say \"no\"";
  const auto csv = render_rows({r}, Format::csv);
  CHECK(csv.find(",inf,") != std::string::npos);
  CHECK(csv.find("\"p,q\"") != std::string::npos);
  CHECK(csv.find("\"say \"\"no\"\"\"") != std::string::npos);
  const auto json = render_rows({r}, Format::json);
  CHECK(json.find("\"epsilon\": \"inf\"") != std::string::npos);
  CHECK(json.find("\"schema_version\": 1") != std::string::npos);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
  CHECK(to_cells(r).size() == report_columns().size());
}

TEST_CASE("reports are deterministic") {
  auto cfg = load_config(kFixtures / "report_inst_b.json");
  CHECK(render_rows(report_rows(cfg), Format::csv) == render_rows(report_rows(cfg), Format::csv));
  CHECK(render_rows(report_rows(cfg), Format::json) == render_rows(report_rows(cfg), Format::json));
}

TEST_CASE("sweeps") {
  SUBCASE("t sweep yields one sd_moment row per order") {
    const auto rows = sweep_rows(load_config(kFixtures / "sweep_t_inst_a.json"));
    CHECK(rows.size() == 4);
    CHECK(rows[3].axis_value == "inf");
    CHECK(rows[1].bound.epsilon == doctest::Approx(1.1922165247080751429).epsilon(1e-12));
  }
  SUBCASE("delta sweep is monotone for every bound") {
    const auto rows = sweep_rows(load_config(kFixtures / "sweep_delta_gibbs.json"));
    std::map<std::string, double> last;
    for (const auto& r : rows) {
      const auto it = last.find(r.bound.bound_id);
      if (it != last.end()) CHECK(r.bound.epsilon >= it->second - 1e-12);
      last[r.bound.bound_id] = r.bound.epsilon;
    }
  }
  SUBCASE("beta sweep reaches zero at beta = 0") {
    const auto rows = sweep_rows(load_config(kFixtures / "sweep_beta_gibbs.json"));
    CHECK(rows.front().bound.epsilon == doctest::Approx(0.0).epsilon(1e-9));
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].bound.epsilon >= rows[i - 1].bound.epsilon);
  }
  SUBCASE("n sweep on a subset problem carries the comparison columns") {
    const auto rows = sweep_rows(load_config(kFixtures / "sweep_n_subset.json"));
    CHECK(rows.size() == 3 * 2);
    for (const auto& r : rows) {
      CHECK(r.cmi.has_value());
      CHECK(*r.cmi >= 0.0);
      CHECK(*r.mi_w_supersample >= 0.0);
    }
  }
  CHECK_THROWS_AS(sweep_rows(load_config(kFixtures / "report_inst_a.json")), ConfigError);
}

TEST_CASE("exit codes") {
  std::ostringstream out;
  std::ostringstream err;
  CHECK(run_command("report", kFixtures / "report_empty_bounds.json", {}, out, err) == kExitUsage);
  CHECK(run_command("verify", kFixtures / "verify_unknown_suite.json", {}, out, err) == kExitUsage);
  CHECK(run_command("report", kFixtures / "budget.json", {}, out, err) == kExitBudget);
  CHECK(run_command("frobnicate", kFixtures / "report_inst_a.json", {}, out, err) == kExitUsage);
  CHECK(run_command("report", kFixtures / "does_not_exist.json", {}, out, err) == kExitUsage);
  CHECK(run_command("verify", kFixtures / "verify_fault.json", {}, out, err) == kExitInvariant);

  const auto quick = write_temp("quick_verify.json",
                                "{\"problem\": \"" + problem_path("inst_c.json") +
                                    "\", \"random_instances\": 2, \"exp_instances\": 2}");
  std::ostringstream vout;
  CHECK(run_command("verify", quick, {}, vout, err) == kExitOk);
  CHECK(vout.str().find("coverage") != std::string::npos);

  const auto target = fs::temp_directory_path() / "infogen_tests" / "report.json";
  CliOverrides ov;
  ov.out = target;
  ov.format = Format::json;
  CHECK(run_command("report", kFixtures / "report_inst_a.json", ov, out, err) == kExitOk);
  std::ifstream in(target);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("\"bound_id\": \"avg_mi\"") != std::string::npos);
}
