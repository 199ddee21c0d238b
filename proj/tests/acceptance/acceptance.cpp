// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "infogen/cli_report.hpp"

using namespace infogen;

namespace {

constexpr std::uint64_t kSeed = 2024;
const std::filesystem::path kFixtures{INFOGEN_FIXTURE_DIR};

struct Outcome {
  bool pass = false;
  std::string detail;
};

InstancePool merged(std::size_t random_count) {
  auto pool = canonical_pool();
  const auto extra = random_pool(kSeed, random_count);
  pool.standard.insert(pool.standard.end(), extra.standard.begin(), extra.standard.end());
  pool.subset.insert(pool.subset.end(), extra.subset.begin(), extra.subset.end());
  return pool;
}

Outcome from_suite(const SuiteResult& r) {
  std::ostringstream os;
  os << r.checks << " checks, " << r.failures.size() << " failures";
  if (!r.failures.empty()) os << "; first: [" << r.failures.front().instance << "] " << r.failures.front().detail;
  return {r.passed(), os.str()};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_suite("exp", merged(200), {}, kSeed);
  const double secs = seconds_since(t0);
  auto o = from_suite(r);
  o.pass = o.pass && secs < 60.0;
  o.detail += "; " + format_number(std::round(secs * 100) / 100) + " s";
  return o;
}

Outcome criterion2(const InstancePool& pool) {
  auto o = from_suite(run_suite("average", pool, {}, kSeed));
  const auto a = canonical_inst_a();
  const double eps = avg_mi_bound(a).epsilon;
  const double truth = std::abs(expected_gen(a));
  const bool exact = std::abs(eps - 0.3749450441794131616) <= 1e-9 && std::abs(truth - 0.25) <= 1e-9;
  o.pass = o.pass && exact;
  o.detail += "; erm_n2 eps=" + format_number(eps) + " truth=" + format_number(truth);
  return o;
}

Outcome criterion5(const InstancePool& pool) {
  auto o = from_suite(run_suite("chain", pool, {}, kSeed));
  const auto l = leakage_ordering_check(canonical_inst_b());
  const bool eq = std::abs(l.conditional - std::log(2.0)) <= 1e-12 && std::abs(l.standard - std::log(2.0)) <= 1e-12;
  o.pass = o.pass && eq;
  o.detail += "; identity_n1 L(S->W|Zt)=" + format_number(l.conditional) + " L(Z(S)->W)=" + format_number(l.standard);
  return o;
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = gaussian_mi_validation(4, 1.0, 1.0, 100000, kSeed);
  const double secs = seconds_since(t0);
  return {g.within_three_se && secs < 10.0,
          "closed form " + format_number(g.closed_form) + ", estimate " + format_number(g.estimate) + " +- " +
              format_number(g.standard_error) + ", " + format_number(std::round(secs * 100) / 100) + " s"};
}

Outcome criterion8(const InstancePool& pool) {
  auto o = from_suite(run_suite("converse", pool, {}, kSeed));
  const bool exact = hoeffding_tail(0.5, 2, 0.5) == 2.0 * std::exp(-1.0);
  o.pass = o.pass && exact;
  o.detail += exact ? "; hoeffding_tail(1/2,2,1/2) = 2/e" : "; hoeffding_tail mismatch";
  return o;
}

Outcome criterion9() {
  std::ostringstream sink;
  std::ostringstream err;
  const int verify_rc = run_command("verify", kFixtures / "verify_default.json", {}, sink, err);
  std::ostringstream a;
  std::ostringstream b;
  const int r1 = run_command("report", kFixtures / "report_inst_b.json", {}, a, err);
  const int r2 = run_command("report", kFixtures / "report_inst_b.json", {}, b, err);
  const bool same = r1 == 0 && r2 == 0 && a.str() == b.str() && !a.str().empty();
  return {verify_rc == 0 && same, "verify exit " + std::to_string(verify_rc) + ", report " +
                                      (same ? "byte-identical" : "differs") + " across two runs"};
}

}  // namespace

int main() {
  const auto pool = merged(50);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exponential inequalities (canonical + 200 random, < 60 s)", criterion1},
      {"average bounds are sound; erm_n2 0.374945 vs 0.25", [&] { return criterion2(pool); }},
      {"exact coverage of every probabilistic bound", [&] { return from_suite(run_suite("coverage", pool, {}, kSeed)); }},
      {"relaxation gap identities", [&] { return from_suite(run_suite("gaps", pool, {}, kSeed)); }},
      {"inequality chains and leakage ordering", [&] { return criterion5(pool); }},
      {"limits in the order parameter", [&] { return from_suite(run_suite("limits", pool, {}, kSeed)); }},
      {"Gaussian closed-form validation (< 10 s)", criterion7},
      {"strong converse and Hoeffding helpers", [&] { return criterion8(pool); }},
      {"CLI determinism", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
