#include <doctest.h>

#include <cmath>

#include "infogen/bounds_subset.hpp"
#include "infogen/verify.hpp"

using namespace infogen;

namespace {
constexpr double kCmiAvgB = 0.83255461115769775635;
const double kLn2 = std::log(2.0);
}  // namespace

TEST_CASE("identity_n1 average CMI bound") {
  const auto sys = canonical_inst_b();
  const auto r = cmi_avg_bound(sys);
  CHECK(r.epsilon == doctest::Approx(kCmiAvgB).epsilon(1e-12));
  CHECK(r.epsilon >= std::abs(expected_subset_gen(sys)));
  CHECK(*r.params.range_constant == 1.0);
}

TEST_CASE("range constants") {
  const auto loss = LossTable::zero_one({"0", "1"});
  CHECK(range_constant(loss).value == 1.0);
  const auto pz = FiniteDistribution::uniform({"0", "1"});
  const auto c = delta_constant([](std::size_t a, std::size_t b) { return a == b ? 0.0 : 1.0; }, loss, pz);
  CHECK(c.value == doctest::Approx(0.5));
  CHECK(c.mode == RangeMode::delta_expectation);
  CHECK_THROWS_AS(delta_constant([](std::size_t, std::size_t) { return 0.5; }, loss, pz), std::invalid_argument);

  SubsetOptions opts;
  opts.constant = c;
  const auto sys = canonical_inst_b();
  CHECK(cmi_avg_bound(sys, opts).epsilon == doctest::Approx(kCmiAvgB / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(effective_constant(sys, opts) == doctest::Approx(0.5));
}

TEST_CASE("identity_n1 data-dependent bounds") {
  const auto sys = canonical_inst_b();
  const std::size_t zt = sys.supersample_distribution().index_of("0,1");
  // The posterior is a point mass; the reference is uniform on {0, 1}.
  const double expect = std::sqrt(2.0 * (kLn2 + std::log(10.0)));
  CHECK(cond_pacb_bound(sys, zt, 0, 0.1).epsilon == doctest::Approx(expect).epsilon(1e-13));
  CHECK(cond_sd_density_bound(sys, 0, zt, 0, 0.1).epsilon == doctest::Approx(expect).epsilon(1e-13));
  CHECK_FALSE(cond_sd_density_bound(sys, 1, zt, 0, 0.1).feasible);
}

TEST_CASE("identity_n1 alpha-MI bounds") {
  const auto sys = canonical_inst_b();
  const double d = 0.1;
  CHECK(cond_alpha_mi_bound(sys, d, 2.0).epsilon ==
        doctest::Approx(std::sqrt(2.0 * (std::log(1.5) + kLn2 + 2.0 * std::log(1.0 / d)))).epsilon(1e-12));
  const auto lim = cond_alpha_mi_leakage_bound(sys, d);
  CHECK(lim.epsilon == doctest::Approx(std::sqrt(2.0 * (2.0 * kLn2 + std::log(1.0 / d)))).epsilon(1e-12));
  CHECK(std::isinf(*lim.params.alpha));
  CHECK(cond_alpha_mi_renyi_bound(sys, d, 2.0).epsilon == doctest::Approx(cond_alpha_mi_bound(sys, d, 2.0).epsilon));
  CHECK(cond_alpha_mi_renyi_bound(sys, d, 2.0).epsilon <= cond_sd_renyi_pair_bound(sys, d, 2.0).epsilon);
  CHECK_THROWS_AS(cond_alpha_mi_bound(sys, d, 1.0), std::invalid_argument);
}

TEST_CASE("conditional relaxation gaps") {
  for (const auto& sys : {canonical_inst_a_subset(), canonical_inst_b()}) {
    const double scale = radicand::subset_scale(1.0, sys.n());
    for (double d : {0.3, 0.1, 0.05}) {
      const auto [rm, rl] = cond_tail_relaxations(sys, d, MomentOrder::finite(2.0));
      const double m = cond_sd_moment_bound(sys, d, MomentOrder::finite(2.0)).epsilon;
      const double l = cond_sd_leakage_bound(sys, d).epsilon;
      CHECK(rm.epsilon * rm.epsilon - m * m == doctest::Approx(scale * kLn2).epsilon(1e-12));
      CHECK(rl.epsilon * rl.epsilon - l * l == doctest::Approx(scale * kLn2).epsilon(1e-12));
      const double a = cond_alpha_mi_leakage_bound(sys, d).epsilon;
      CHECK(l * l - a * a == doctest::Approx(scale * std::log(2.0 / d)).epsilon(1e-12));
    }
  }
}

TEST_CASE("conditional tail bound picks a feasible gamma") {
  const auto sys = canonical_inst_b();
  const auto r = cond_tail_bound(sys, 0.1, std::nullopt);
  CHECK(r.feasible);
  // ι ∈ {ln 2, 0}; just above ln 2 the tail mass vanishes.
  CHECK(r.epsilon == doctest::Approx(std::sqrt(2.0 * (kLn2 + std::log(20.0)))).epsilon(1e-8));
}

TEST_CASE("Holder event bound dominates the exact probability") {
  const auto sys = canonical_inst_a_subset();
  const std::vector<AtomEvent> events{
      [&](std::size_t w, std::size_t zt, std::size_t s) { return gen_hat(sys, w, zt, s) > 0.2; },
      [&](std::size_t w, std::size_t, std::size_t) { return w == 1; },
      [&](std::size_t, std::size_t zt, std::size_t s) { return (zt + s) % 3 == 0; }};
  for (const auto& e : events) {
    double exact = 0.0;
    for (std::size_t w = 0; w < sys.num_hypotheses(); ++w) {
      for (std::size_t zt = 0; zt < sys.num_supersamples(); ++zt) {
        for (std::size_t s = 0; s < sys.num_selectors(); ++s) {
          if (e(w, zt, s)) exact += sys.joint().mass(sys.atom(w, zt, s));
        }
      }
    }
    for (double a : {1.5, 2.0, 4.0}) CHECK(holder_event_bound(sys, e, a, a, a) + 1e-12 >= exact);
  }
  CHECK(holder_event_bound(sys, [](std::size_t, std::size_t, std::size_t) { return false; }) == 0.0);
  CHECK_THROWS_AS(holder_event_bound(sys, events[0], 1.0), std::invalid_argument);
}

TEST_CASE("gen-hat to gen conversion") {
  const auto loss = LossTable::zero_one({"0", "1"});
  CHECK(genhat_to_gen_penalty(loss, 2, 0.1) == doctest::Approx(std::sqrt(std::log(40.0) / 4.0)));
  const auto r = genhat_to_gen([](double d) { return d; }, loss, 2, 0.1);
  CHECK(r.bound_id == "genhat_to_gen");
  CHECK(r.epsilon == doctest::Approx(0.05 + std::sqrt(std::log(40.0) / 4.0)));
}

TEST_CASE("leakage ordering is tight on identity_n1") {
  const auto o = leakage_ordering_check(canonical_inst_b());
  CHECK(o.conditional == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(o.standard == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(o.holds);
}

TEST_CASE("auxiliary conditional reference") {
  const auto sys = canonical_inst_b();
  std::vector<FiniteDistribution> rows(sys.num_supersamples(), FiniteDistribution::uniform({"0", "1"}));
  SubsetOptions opts;
  opts.q = Kernel(sys.supersample_distribution().labels(), {"0", "1"}, rows);
  // With a uniform reference every in-support atom has ι = ln 2.
  const double expect = std::sqrt(2.0 * (kLn2 + std::log(10.0)));
  CHECK(cond_sd_moment_bound(sys, 0.1, MomentOrder::infinity(), opts).epsilon ==
        doctest::Approx(std::sqrt(2.0 * (kLn2 + std::log(20.0)))).epsilon(1e-12));
  CHECK(cond_pacb_bound(sys, 0, 0, 0.1, opts).epsilon == doctest::Approx(expect).epsilon(1e-12));
}
