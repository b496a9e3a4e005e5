#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "popphase/rng.hpp"
#include "popphase/types.hpp"

using namespace popphase;

TEST_CASE("genotype canonicalization") {
  AlleleAlphabet ab{2};
  CHECK(canonicalize_genotype(1, 0, ab) == GenotypeSite{0, 1});
  CHECK(canonicalize_genotype(0, 0, ab) == GenotypeSite{0, 0});
  CHECK(canonicalize_genotype(1, 1, ab) == GenotypeSite{1, 1});
  CHECK_THROWS_AS(canonicalize_genotype(2, 0, ab), InputError);
}

TEST_CASE("canonicalization is idempotent on random pairs") {
  AlleleAlphabet ab{4};
  Rng rng(7);
  for (int it = 0; it < 200; ++it) {
    const Allele a = static_cast<Allele>(rng.uniform_int(4));
    const Allele b = static_cast<Allele>(rng.uniform_int(4));
    const GenotypeSite once = canonicalize_genotype(a, b, ab);
    const GenotypeSite twice = canonicalize_genotype(once.lo, once.hi, ab);
    CHECK(once == twice);
  }
}

TEST_CASE("het site detection") {
  Genotype g = {{0, 0}, {0, 1}, {1, 1}};
  CHECK(het_sites(g) == std::vector<int>{1});

  Genotype hom = {{0, 0}, {1, 1}};
  CHECK(het_sites(hom).empty());

  Genotype all = {{0, 1}, {0, 1}, {0, 1}};
  CHECK(het_sites(all) == std::vector<int>{0, 1, 2});

  Genotype with_missing = {GenotypeSite::missing(), {0, 1}};
  CHECK(het_sites(with_missing) == std::vector<int>{1});
}

TEST_CASE("dataset validation") {
  Dataset d;
  d.populations = {{"p1", {{"a", {{0, 1}, {0, 0}}}, {"b", {{1, 1}, {0, 1}}}}},
                   {"p2", {{"c", {{0, 0}, {0, 0}}}}}};
  CHECK(validate_dataset(d).empty());

  SUBCASE("ragged locus counts name the individual") {
    d.populations[0].individuals[1].genotype.pop_back();
    const auto v = validate_dataset(d);
    REQUIRE(!v.empty());
    CHECK(v[0].individual == "b");
  }

  SUBCASE("empty population names the group") {
    d.populations.push_back({"p3", {}});
    const auto v = validate_dataset(d);
    REQUIRE(!v.empty());
    CHECK(v[0].population == "p3");
  }

  SUBCASE("allele outside alphabet is site-specific") {
    d.populations[1].individuals[0].genotype[1] = GenotypeSite{0, 3};
    const auto v = validate_dataset(d);
    REQUIRE(!v.empty());
    CHECK(v[0].individual == "c");
    CHECK(v[0].locus == 1);
  }
}

TEST_CASE("pooling and slicing populations") {
  Dataset d;
  d.populations = {{"p1", {{"a", {{0, 1}}}}}, {"p2", {{"b", {{1, 1}}}}}};
  const Dataset pooled = pool_populations(d);
  CHECK(pooled.n_populations() == 1);
  CHECK(pooled.total_individuals() == 2);
  const Dataset one = single_population(d, 1);
  CHECK(one.populations[0].id == "p2");
  CHECK_THROWS_AS(single_population(d, 2), InputError);
}
