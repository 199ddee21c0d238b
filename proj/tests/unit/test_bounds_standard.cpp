#include <doctest.h>

#include <cmath>

#include "infogen/bounds_standard.hpp"
#include "infogen/verify.hpp"

using namespace infogen;

namespace {
constexpr double kAvgA = 0.3749450441794131616;
constexpr double kPacb00 = 0.80471534803398440765;
constexpr double kPacbMoment1 = 1.8869575489349354994;
constexpr double kSdDensity11 = 0.96032279131992076017;
constexpr double kSdMoment2 = 1.1922165247080751429;
constexpr double kSdMomentInf = 1.046664539701460605;
constexpr double kSdLeakage = 1.2927308041185457201;
constexpr double kTailLow = 0.99706588630913920541;
constexpr double kTailHigh = 0.90600970552276258726;
const auto kT2 = MomentOrder::finite(2.0);
const auto kTinf = MomentOrder::infinity();
}  // namespace

TEST_CASE("erm_n2 bounds match the oracle") {
  const auto sys = canonical_inst_a();
  CHECK(avg_mi_bound(sys).epsilon == doctest::Approx(kAvgA).epsilon(1e-12));
  CHECK(pacb_bound(sys, 0, 0.1).epsilon == doctest::Approx(kPacb00).epsilon(1e-12));
  CHECK(pacb_moment_bound(sys, 0.1, MomentOrder::finite(1.0)).epsilon ==
        doctest::Approx(kPacbMoment1).epsilon(1e-12));
  CHECK(sd_density_bound(sys, 1, 3, 0.1).epsilon == doctest::Approx(kSdDensity11).epsilon(1e-12));
  CHECK(sd_moment_bound(sys, 0.1, kT2).epsilon == doctest::Approx(kSdMoment2).epsilon(1e-12));
  CHECK(sd_moment_bound(sys, 0.1, kTinf).epsilon == doctest::Approx(kSdMomentInf).epsilon(1e-12));
  CHECK(sd_leakage_bound(sys, 0.1).epsilon == doctest::Approx(kSdLeakage).epsilon(1e-12));
  CHECK(sd_renyi_bound(sys, 0.1, 2.0).epsilon == doctest::Approx(kSdLeakage).epsilon(1e-12));
}

TEST_CASE("result metadata") {
  const auto sys = canonical_inst_a();
  const auto r = sd_moment_bound(sys, 0.05, kT2);
  CHECK(r.bound_id == "sd_moment");
  CHECK(r.flavor == Flavor::single_draw);
  CHECK(r.scope == Scope::data_independent);
  CHECK(r.feasible);
  CHECK(*r.params.delta == 0.05);
  CHECK(*r.params.t == kT2);
  CHECK(r.params.n == 2);
  CHECK(to_string(Flavor::pac_bayes) == "pac-bayes");
  CHECK(pacb_bound(sys, 1, 0.1).scope == Scope::data_dependent);
}

TEST_CASE("tail bound: fixed and automatic gamma") {
  const auto sys = canonical_inst_a();
  const double lo = std::log(4.0 / 3.0);
  const double hi = std::log(4.0);
  CHECK(sd_tail_bound(sys, 0.3, lo + 1e-9).epsilon == doctest::Approx(kTailLow).epsilon(1e-8));
  CHECK(sd_tail_bound(sys, 0.3, hi + 1e-9).epsilon == doctest::Approx(kTailHigh).epsilon(1e-8));
  // Just below the smallest density value the tail mass is 1 > δ.
  const auto at_lo = sd_tail_bound(sys, 0.3, lo - 1e-9);
  CHECK_FALSE(at_lo.feasible);
  CHECK(at_lo.epsilon == kInf);
  CHECK_FALSE(at_lo.reason.empty());
  const auto best = sd_tail_bound(sys, 0.3, std::nullopt);
  CHECK(best.feasible);
  CHECK(best.epsilon == doctest::Approx(kTailHigh).epsilon(1e-8));
  CHECK(best.epsilon <= sd_tail_bound(sys, 0.3, lo + 1e-9).epsilon);
}

TEST_CASE("relaxations add exactly log 2 inside the square") {
  const auto sys = canonical_inst_a();
  const double scale = radicand::standard_scale(0.5, 2);
  for (double d : {0.3, 0.1, 0.05}) {
    for (auto t : {MomentOrder::finite(1.0), kT2, kTinf}) {
      const auto [rm, rl] = tail_relaxations(sys, d, t);
      const double direct = sd_moment_bound(sys, d, t).epsilon;
      CHECK(rm.epsilon * rm.epsilon - direct * direct == doctest::Approx(scale * std::log(2.0)).epsilon(1e-12));
      const double leak = sd_leakage_bound(sys, d).epsilon;
      CHECK(rl.epsilon * rl.epsilon - leak * leak == doctest::Approx(scale * std::log(2.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("parameter validation") {
  const auto sys = canonical_inst_a();
  CHECK_THROWS_AS(pacb_bound(sys, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pacb_bound(sys, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pacb_bound(sys, 9, 0.1), std::out_of_range);
  CHECK_THROWS_AS(sd_renyi_bound(sys, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sd_density_bound(sys, 2, 0, 0.1), std::out_of_range);
}

TEST_CASE("atoms outside the support are infeasible") {
  const auto sys = canonical_inst_a();
  // ERM never outputs 1 on z = (0,0).
  const auto r = sd_density_bound(sys, 1, 0, 0.1);
  CHECK_FALSE(r.feasible);
  CHECK(r.epsilon == kInf);
}

TEST_CASE("finish_bound") {
  const auto ok = finish_bound("x", Flavor::average, Scope::data_independent, 2.0, 2.0, {});
  CHECK(ok.epsilon == 2.0);
  const auto bad = finish_bound("x", Flavor::average, Scope::data_independent, 2.0, -1.0, {});
  CHECK_FALSE(bad.feasible);
  CHECK(bad.epsilon == kInf);
  CHECK(bad.reason == "negative radicand");
}

TEST_CASE("moment radicand with t = infinity has no inflation") {
  CHECK(radicand::moment(1.0, 2.0, kTinf, 0.1, std::log(2.0)) ==
        doctest::Approx(3.0 + std::log(20.0)));
  CHECK(radicand::moment(0.0, 1.0, MomentOrder::finite(1.0), 0.5, 0.0) == doctest::Approx(4.0 + std::log(2.0)));
  CHECK(std::isnan(radicand::tail(0.0, 0.5, 0.5)));
}

TEST_CASE("auxiliary Q_W changes data-dependent bounds") {
  const auto sys = canonical_inst_a();
  StandardOptions opts;
  opts.q_w = FiniteDistribution::uniform({"0", "1"});
  // ι_Q(1, (1,1)) = log(1 / (1/2)) = ln 2.
  const auto r = sd_density_bound(sys, 1, 3, 0.1, opts);
  CHECK(r.epsilon == doctest::Approx(std::sqrt(0.25 * (std::log(2.0) + std::log(10.0)))).epsilon(1e-13));
  StandardOptions bad;
  bad.q_w = FiniteDistribution::point_mass({"0", "1"}, 0);
  CHECK_THROWS_AS(sd_leakage_bound(sys, 0.1, bad), AbsoluteContinuityViolation);
}

TEST_CASE("chain L <= I_max <= I + M_inf") {
  const auto c = chain_report(canonical_inst_a(), 0.1);
  CHECK(c.leakage == doctest::Approx(std::log(2.0)));
  CHECK(c.max_information == doctest::Approx(std::log(4.0)));
  CHECK(c.chain_holds);
  CHECK(c.leakage_tighter);
}

TEST_CASE("independent learner") {
  const auto sys = canonical_inst_c();
  CHECK(avg_mi_bound(sys).epsilon == doctest::Approx(0.0));
  // δ = e^{-1}: radicand log(1/δ) = 1, scale 1/4.
  CHECK(pacb_bound(sys, 0, std::exp(-1.0)).epsilon == doctest::Approx(0.5).epsilon(1e-14));
}
