#include <doctest.h>

#include <cmath>

#include "infogen/learning_models.hpp"
#include "infogen/verify.hpp"

using namespace infogen;

namespace {
const std::vector<std::string> kBits{"0", "1"};
}

TEST_CASE("LossTable validation") {
  CHECK_THROWS_AS(LossTable({"w"}, {"z"}, {{1.5}}, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LossTable({"w"}, {"z"}, {{0.5}}, 0.0, 1.0, 0.2), std::invalid_argument);
  const LossTable l({"w"}, {"z"}, {{0.5}}, 0.0, 2.0);
  CHECK(l.sigma() == 1.0);
  CHECK(l.range() == 2.0);
  const auto z1 = LossTable::zero_one(kBits);
  CHECK(z1(0, 0) == 0.0);
  CHECK(z1(0, 1) == 1.0);
  CHECK(z1.with_sigma(2.0).sigma() == 2.0);
}

TEST_CASE("IndexCodec round trip") {
  const IndexCodec c(3, 2);
  CHECK(c.count() == 9);
  CHECK(c.decode(5) == std::vector<std::size_t>{1, 2});
  CHECK(c.encode(std::vector<std::size_t>{2, 1}) == 7);
  CHECK(vector_labels({"a", "b"}, 2) == std::vector<std::string>{"a,a", "a,b", "b,a", "b,b"});
}

TEST_CASE("learners") {
  const auto loss = LossTable::zero_one(kBits);
  SUBCASE("gibbs at beta 0 is uniform") {
    const auto k = gibbs_kernel(loss, 2, 0.0);
    for (std::size_t i = 0; i < k.num_inputs(); ++i) CHECK(k.prob(i, 0) == doctest::Approx(0.5));
  }
  SUBCASE("gibbs weights exp(-beta * total loss)") {
    const auto k = gibbs_kernel(loss, 2, 1.0);
    // z = (0,0): losses 0 and 2.
    CHECK(k.prob(0, 0) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-14));
  }
  SUBCASE("erm ties") {
    const auto low = erm_kernel(loss, 2, TieRule::lowest_index);
    const auto uni = erm_kernel(loss, 2, TieRule::uniform_over_argmin);
    CHECK(low.prob(1, 0) == 1.0);  // z = (0,1) is a tie
    CHECK(uni.prob(1, 0) == doctest::Approx(0.5));
    CHECK(low.prob(3, 1) == 1.0);
  }
  SUBCASE("identity needs n = 1 and matching labels") {
    const auto k = identity_kernel(loss);
    CHECK(k.prob(1, 1) == 1.0);
    const LossTable other({"a", "b"}, kBits, {{0, 1}, {1, 0}}, 0.0, 1.0);
    CHECK_THROWS(identity_kernel(other));
  }
}

TEST_CASE("standard system on the ERM instance") {
  const auto sys = canonical_inst_a();
  CHECK(sys.num_datasets() == 4);
  CHECK(sys.pw().mass(0) == doctest::Approx(0.75));
  CHECK(sys.pw().mass(1) == doctest::Approx(0.25));
  CHECK(expected_gen(sys) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(gen(sys, "1", "1,1") == doctest::Approx(0.5));
  CHECK(gen(sys, "0", "0,1") == doctest::Approx(0.0));
  CHECK(posterior_gen(sys, 0) == doctest::Approx(0.5));
  CHECK(sys.atom(1, 3) == 7);
}

TEST_CASE("subset system indexing") {
  const auto sys = canonical_inst_a_subset();
  CHECK(sys.num_supersamples() == 16);
  CHECK(sys.num_selectors() == 4);
  // z̃ = (z̃1, z̃2, z̃3, z̃4) = labels "0,1,1,0" -> index 6; s = (1,0) picks z̃3, z̃2.
  const std::size_t zt = 6;
  const std::size_t s = 2;
  const auto& inputs = sys.learner().inputs();
  CHECK(inputs[sys.selected(zt, s)] == "1,1");
  CHECK(inputs[sys.held_out(zt, s)] == "0,0");
  double total = 0.0;
  for (std::size_t w = 0; w < 2; ++w) total += sys.marginal_cond_prob(w, zt);
  CHECK(total == doctest::Approx(1.0));
  // Held-out and selected halves swap under s -> s̄, so ĝen is antisymmetric.
  for (std::size_t w = 0; w < 2; ++w) CHECK(gen_hat(sys, w, zt, s) == doctest::Approx(-gen_hat(sys, w, zt, 1)));
}

TEST_CASE("identity_n1 expectations") {
  const auto sys = canonical_inst_b();
  // W copies the training sample: train loss 0, population loss 1/2.
  CHECK(expected_subset_gen(sys) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(expected_gen_hat(sys) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gen_hat(sys, "0", "0,1", "0") == doctest::Approx(1.0));
}

TEST_CASE("enumeration budget") {
  const auto loss = LossTable::zero_one({"a", "b", "c", "d"});
  const auto pz = FiniteDistribution::uniform({"a", "b", "c", "d"});
  CHECK_THROWS_AS(assemble_standard(pz, 12, constant_kernel(loss, 12, FiniteDistribution::uniform(loss.hypotheses())), loss),
                  BudgetExceeded);
}

TEST_CASE("learner input labels must match the data space") {
  const auto loss = LossTable::zero_one(kBits);
  const auto pz = FiniteDistribution::uniform(kBits);
  CHECK_THROWS(assemble_standard(pz, 2, erm_kernel(loss, 3), loss));
}
