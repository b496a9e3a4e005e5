#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "doctest.h"
#include "popphase/io.hpp"
#include "popphase/synthgen.hpp"

using namespace popphase;

TEST_CASE("protocol layout: 5 populations, 2 shared, 17 distinct founders") {
  SimSpec spec;  // defaults are the protocol values
  spec.seed = 5;
  auto [data, truth] = generate(spec);

  CHECK(truth.founders.size() == 17);
  std::set<Haplotype> distinct(truth.founders.begin(), truth.founders.end());
  CHECK(distinct.size() == 17);
  CHECK(data.n_populations() == 5);
  CHECK(data.total_individuals() == 100);
  CHECK(data.n_loci() == 10);

  // the two shared founders head every population's list
  for (int j = 0; j < 5; ++j) {
    CHECK(truth.pop_founders[j][0] == 0);
    CHECK(truth.pop_founders[j][1] == 1);
    CHECK(truth.pop_founders[j].size() == 5);
  }
  // each individual's founders belong to its population's set
  for (const auto& ti : truth.individuals)
    for (int e = 0; e < 2; ++e) {
      const auto& pf = truth.pop_founders[ti.pop];
      CHECK(std::count(pf.begin(), pf.end(), ti.founder[e]) == 1);
    }
}

TEST_CASE("zero mutation and zero error reproduce the founders exactly") {
  SimSpec spec;
  spec.theta = 0.0;
  spec.genotype_error = 0.0;
  spec.seed = 9;
  auto [data, truth] = generate(spec);
  size_t idx = 0;
  for (int j = 0; j < data.n_populations(); ++j) {
    for (const auto& ind : data.populations[j].individuals) {
      const auto& ti = truth.individuals[idx++];
      for (int e = 0; e < 2; ++e) CHECK(ti.haplotype[e] == truth.founders[ti.founder[e]]);
      CHECK(pair_consistent(ind.genotype, ti.haplotype[0], ti.haplotype[1]));
      for (const auto& s : ind.genotype) CHECK(!s.is_missing());
    }
  }
}

TEST_CASE("empirical mutation fraction sits inside three sigmas") {
  SimSpec spec;
  spec.theta = 0.05;
  spec.individuals_per_pop = 40;
  spec.seed = 33;
  auto [data, truth] = generate(spec);

  long mutated = 0, sites = 0;
  for (const auto& ti : truth.individuals) {
    for (int e = 0; e < 2; ++e) {
      const Haplotype& f = truth.founders[ti.founder[e]];
      for (size_t t = 0; t < f.size(); ++t) {
        ++sites;
        if (ti.haplotype[e][t] != f[t]) ++mutated;
      }
    }
  }
  const double rate = static_cast<double>(mutated) / sites;
  const double sd = std::sqrt(0.05 * 0.95 / sites);
  CHECK(std::abs(rate - 0.05) < 3 * sd);
}

TEST_CASE("generation is deterministic in the seed") {
  SimSpec spec;
  spec.seed = 123;
  auto [d1, t1] = generate(spec);
  auto [d2, t2] = generate(spec);
  CHECK(dataset_to_string(d1) == dataset_to_string(d2));
  CHECK(truth_to_string(t1, d1) == truth_to_string(t2, d2));
}

TEST_CASE("founder extension preserves prefixes, sharing and distinctness") {
  SimSpec spec;
  spec.seed = 21;
  const auto pool = make_founders(spec);
  const auto longer = extend_founders(pool, 60, spec.alphabet_size, 77);
  REQUIRE(longer.size() == pool.size());
  std::set<Haplotype> distinct(longer.begin(), longer.end());
  CHECK(distinct.size() == longer.size());
  for (size_t f = 0; f < pool.size(); ++f) {
    CHECK(longer[f].size() == 60);
    CHECK(Haplotype(longer[f].begin(), longer[f].begin() + 10) == pool[f]);
  }
  CHECK(extend_founders(pool, 10, spec.alphabet_size, 77) == pool);
  CHECK_THROWS_AS(extend_founders(pool, 5, spec.alphabet_size, 1), InputError);

  // the extended pool drives generation at the longer length
  SimSpec wide = spec;
  wide.n_loci = 60;
  wide.founder_pool = longer;
  auto [data, truth] = generate(wide);
  CHECK(truth.founders == longer);
  CHECK(data.n_loci() == 60);
}

TEST_CASE("noisy genotyping produces inconsistencies at about the set rate") {
  SimSpec spec;
  spec.genotype_error = 0.1;
  spec.individuals_per_pop = 40;
  spec.seed = 19;
  auto [data, truth] = generate(spec);
  long bad = 0, all = 0;
  size_t idx = 0;
  for (int j = 0; j < data.n_populations(); ++j)
    for (const auto& ind : data.populations[j].individuals) {
      const auto& ti = truth.individuals[idx++];
      for (size_t t = 0; t < ind.genotype.size(); ++t) {
        ++all;
        if (!site_consistent(ind.genotype[t], ti.haplotype[0][t], ti.haplotype[1][t])) ++bad;
      }
    }
  const double rate = static_cast<double>(bad) / all;
  const double sd = std::sqrt(0.1 * 0.9 / all);
  CHECK(std::abs(rate - 0.1) < 4 * sd);
}

TEST_CASE("spec validation catches bad field values") {
  SimSpec spec;
  spec.shared_founders = 9;
  CHECK_THROWS_AS(spec.validate(), InputError);
  spec = SimSpec{};
  spec.theta = 1.0;
  CHECK_THROWS_AS(spec.validate(), InputError);
  spec = SimSpec{};
  spec.founder_pool = {Haplotype{0, 1}};
  CHECK_THROWS_AS(spec.validate(), InputError);
}
