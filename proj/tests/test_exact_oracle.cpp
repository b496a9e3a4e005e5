#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracle_instances.hpp"
#include "popphase/exact_oracle.hpp"

using namespace popphase;
using popphase::testing::one_pop;

TEST_CASE("sequential urn partition probabilities") {
  // four slots all in one block: 1/2 * 2/3 * 3/4
  CHECK(partition_prior({0, 0, 0, 0}, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
  // singleton partition: tau^3 over the same denominators at tau=1
  CHECK(partition_prior({0, 1, 2, 3}, 1.0) == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
  // exchangeability: label order within the growth string is irrelevant
  CHECK(partition_prior({0, 0, 1, 1}, 2.0) ==
        doctest::Approx(partition_prior({0, 1, 0, 1}, 2.0)).epsilon(1e-12));
}

TEST_CASE("single het individual at one locus is symmetric") {
  OracleInstance inst;
  inst.data = one_pop({{GenotypeSite{0, 1}}});
  inst.pin_xi = true;
  inst.k_max = 2;
  const ExactPosterior post = exact_posterior(inst);
  REQUIRE(post.phase_marginals.size() == 1);
  // one unordered pair {0,1} carries all the mass
  REQUIRE(post.phase_marginals[0].size() == 1);
  CHECK(post.phase_marginals[0].begin()->second == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("marginals normalize and K distribution covers 1..slots") {
  for (const auto& inst : testing::fixed_oracle_instances()) {
    const ExactPosterior post = exact_posterior(inst);
    for (const auto& m : post.phase_marginals) {
      double s = 0;
      for (const auto& [k, v] : m) {
        CHECK(v >= 0);
        s += v;
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
    }
    double ks = 0;
    for (const auto& [k, v] : post.k_distribution) {
      CHECK(k >= 1);
      CHECK(k <= 2 * inst.data.total_individuals());
      ks += v;
    }
    CHECK(ks == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("permuting individuals permutes the marginals exactly") {
  const GenotypeSite het{0, 1}, hom0{0, 0}, hom1{1, 1};
  OracleInstance a;
  a.data = one_pop({{het, hom0}, {hom1, het}, {het, het}});
  a.pin_xi = true;
  a.k_max = 6;
  OracleInstance b = a;
  b.data = one_pop({{het, het}, {het, hom0}, {hom1, het}});

  const ExactPosterior pa = exact_posterior(a);
  const ExactPosterior pb = exact_posterior(b);
  const int map_a_to_b[] = {1, 2, 0};
  for (int i = 0; i < 3; ++i) {
    const auto& ma = pa.phase_marginals[i];
    const auto& mb = pb.phase_marginals[map_a_to_b[i]];
    REQUIRE(ma.size() == mb.size());
    for (const auto& [k, v] : ma) CHECK(mb.at(k) == doctest::Approx(v).epsilon(1e-12));
  }
  for (const auto& [k, v] : pa.k_distribution)
    CHECK(pb.k_distribution.at(k) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("truncation at the slot count is the full support") {
  OracleInstance inst;
  inst.data = one_pop({{GenotypeSite{0, 1}, GenotypeSite{0, 0}},
                       {GenotypeSite{1, 1}, GenotypeSite{0, 1}}});
  inst.pin_xi = true;
  inst.k_max = 4;  // = number of slots
  OracleInstance inflated = inst;
  inflated.k_max = 9;  // anything above the slot count cannot add terms

  const ExactPosterior p1 = exact_posterior(inst);
  const ExactPosterior p2 = exact_posterior(inflated);
  CHECK(p1.log_evidence == doctest::Approx(p2.log_evidence).epsilon(1e-12));
  for (int i = 0; i < 2; ++i)
    for (const auto& [k, v] : p1.phase_marginals[i])
      CHECK(p2.phase_marginals[i].at(k) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("clustering pulls identical het individuals into shared phase") {
  // a hom-0 anchor breaks the 00/11 vs 01/10 symmetry for two het individuals
  const GenotypeSite het{0, 1}, hom0{0, 0};
  OracleInstance inst;
  inst.data = one_pop({{hom0, hom0}, {het, het}, {het, het}});
  inst.pin_xi = true;
  inst.k_max = 6;
  inst.tau = 0.5;
  inst.hp.alpha_h = 1;
  inst.hp.beta_h = 19;

  const ExactPosterior post = exact_posterior(inst);
  const UnorderedPair aligned{{0, 0}, {1, 1}};
  const UnorderedPair crossed{{0, 1}, {1, 0}};
  const double p_aligned = post.phase_marginals[1].at(aligned);
  const double p_crossed = post.phase_marginals[1].at(crossed);
  CHECK(p_aligned > p_crossed);
  // both het individuals see the same marginal
  CHECK(post.phase_marginals[2].at(aligned) == doctest::Approx(p_aligned).epsilon(1e-12));
  // regression pin, frozen from the first computation of this instance
  CHECK(p_aligned == doctest::Approx(0.71650919).epsilon(1e-6));
}

TEST_CASE("enumeration bound is enforced with a size estimate") {
  OracleInstance inst;
  Genotype g(3, GenotypeSite{0, 1});
  inst.data = one_pop({g, g, g, g});
  inst.pin_xi = false;  // 64^4 configs
  inst.k_max = 8;
  inst.max_terms = 1e6;
  CHECK_THROWS_AS(exact_posterior(inst), ResourceError);
  CHECK(enumeration_size(inst) > 1e6);
}
