#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "popphase/eval.hpp"
#include "popphase/rng.hpp"

using namespace popphase;

TEST_CASE("site error counts under the best orientation") {
  const Haplotype t0{0, 0, 0}, t1{1, 1, 1};
  const Haplotype p0{0, 0, 1}, p1{1, 1, 0};
  const SiteErrorCount c = site_error(t0, t1, p0, p1);
  CHECK(c.mismatches == 1);
  CHECK(c.nontrivial == 3);

  CHECK(site_error(t0, t1, t0, t1).mismatches == 0);
  CHECK(site_error(t0, t1, t1, t0).mismatches == 0);
  CHECK(site_error(t0, t1, t1, t0).nontrivial == 3);

  // single-het individuals are unscoreable
  const Haplotype a0{0, 0}, a1{0, 1};
  CHECK(site_error(a0, a1, a0, a1).nontrivial == 0);

  CHECK_THROWS_AS(site_error(t0, t1, t0, t0), InputError);
}

TEST_CASE("site error is orientation invariant") {
  Rng rng(5);
  for (int it = 0; it < 200; ++it) {
    const int T = 2 + rng.uniform_int(6);
    Haplotype t0(T), t1(T);
    for (int t = 0; t < T; ++t) {
      t0[t] = static_cast<Allele>(rng.uniform_int(2));
      t1[t] = static_cast<Allele>(rng.uniform_int(2));
    }
    Haplotype p0 = t0, p1 = t1;
    for (int t = 0; t < T; ++t)
      if (t0[t] != t1[t] && rng.bernoulli(0.4)) std::swap(p0[t], p1[t]);

    const auto base = site_error(t0, t1, p0, p1);
    CHECK(site_error(t0, t1, p1, p0).mismatches == base.mismatches);
    CHECK(site_error(t1, t0, p0, p1).mismatches == base.mismatches);
  }
}

TEST_CASE("switch distance") {
  const Haplotype t0{0, 0, 0}, t1{1, 1, 1};
  CHECK(switch_distance(t0, t1, {0, 0, 1}, {1, 1, 0}) == 1);
  CHECK(switch_distance(t0, t1, t0, t1) == 0);

  const Haplotype u0{0, 0, 0, 0}, u1{1, 1, 1, 1};
  CHECK(switch_distance(u0, u1, {0, 1, 0, 1}, {1, 0, 1, 0}) == 3);

  // symmetric in (true, pred) and bounded by het count - 1
  Rng rng(6);
  for (int it = 0; it < 200; ++it) {
    const int T = 2 + rng.uniform_int(6);
    Haplotype t0r(T), t1r(T);
    int hets = 0;
    for (int t = 0; t < T; ++t) {
      t0r[t] = static_cast<Allele>(rng.uniform_int(2));
      t1r[t] = static_cast<Allele>(rng.uniform_int(2));
      if (t0r[t] != t1r[t]) ++hets;
    }
    Haplotype p0 = t0r, p1 = t1r;
    for (int t = 0; t < T; ++t)
      if (t0r[t] != t1r[t] && rng.bernoulli(0.5)) std::swap(p0[t], p1[t]);
    const int d = switch_distance(t0r, t1r, p0, p1);
    CHECK(d == switch_distance(p0, p1, t0r, t1r));
    CHECK(d <= std::max(0, hets - 1));
    CHECK(switch_distance(t0r, t1r, t0r, t1r) == 0);
  }
}

TEST_CASE("frequency KL divergence") {
  const Haplotype a{0}, b{1};
  std::map<Haplotype, double> p{{a, 0.5}, {b, 0.5}};
  CHECK(freq_kl(p, p, 0.0) == doctest::Approx(0.0).epsilon(1e-12));

  std::map<Haplotype, double> point{{a, 1.0}};
  std::map<Haplotype, double> half{{a, 0.5}, {b, 0.5}};
  CHECK(freq_kl(point, half, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // the filter drops rare truth entries before renormalizing
  std::map<Haplotype, double> p2{{a, 0.97}, {b, 0.03}};
  CHECK(freq_kl(p2, point, 0.05) == doctest::Approx(0.0).epsilon(1e-9));

  // nonnegative on random distributions
  Rng rng(8);
  for (int it = 0; it < 100; ++it) {
    std::map<Haplotype, double> q;
    double z = 0;
    for (int x = 0; x < 4; ++x) z += (q[{static_cast<Allele>(x)}] = 0.01 + rng.u01());
    for (auto& [k, v] : q) v /= z;
    std::map<Haplotype, double> r;
    z = 0;
    for (int x = 0; x < 4; ++x) z += (r[{static_cast<Allele>(x)}] = 0.01 + rng.u01());
    for (auto& [k, v] : r) v /= z;
    CHECK(freq_kl(q, r, 0.0) >= 0);
  }

  // a truth haplotype the estimate misses entirely stays finite via the floor
  std::map<Haplotype, double> missing_q{{b, 1.0}};
  const double kl = freq_kl(point, missing_q, 0.0);
  CHECK(std::isfinite(kl));
  CHECK(kl > 5);
}

TEST_CASE("micro vs macro aggregation") {
  GroundTruth truth;
  truth.founders = {{0, 0, 0, 0}};
  GroundTruth::TrueIndividual a;
  a.id = "a";
  a.pop = 0;
  a.haplotype = {Haplotype{0, 0, 0, 0}, Haplotype{1, 1, 1, 1}};  // 4 het sites
  GroundTruth::TrueIndividual b;
  b.id = "b";
  b.pop = 0;
  b.haplotype = {Haplotype{0, 0, 1, 1}, Haplotype{1, 1, 1, 1}};  // 2 het sites
  truth.individuals = {a, b};

  PhasingResult pred;
  IndividualPhase pa;
  pa.id = "a";
  pa.population = "p";
  pa.h0 = {0, 0, 0, 1};
  pa.h1 = {1, 1, 1, 0};  // 1 mismatch of 4
  IndividualPhase pb;
  pb.id = "b";
  pb.population = "p";
  pb.h0 = {0, 1, 1, 1};
  pb.h1 = {1, 0, 1, 1};  // 1 mismatch of 2
  pred.individuals = {pa, pb};

  const PhasingScore s = score_phasing(truth, pred);
  CHECK(s.mismatches == 2);
  CHECK(s.nontrivial_sites == 6);
  CHECK(s.err_s == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
  CHECK(s.err_s_macro == doctest::Approx((0.25 + 0.5) / 2).epsilon(1e-12));
  CHECK(s.n_ambiguous == 2);
}

TEST_CASE("missing individuals are an input error") {
  GroundTruth truth;
  GroundTruth::TrueIndividual a;
  a.id = "a";
  a.haplotype = {Haplotype{0}, Haplotype{1}};
  truth.individuals = {a};
  PhasingResult pred;
  CHECK_THROWS_AS(score_phasing(truth, pred), InputError);
}

TEST_CASE("founder matching reports recovery at small Hamming distance") {
  GroundTruth truth;
  truth.founders = {{0, 0, 0, 0}, {1, 1, 1, 1}};
  PhasingResult res;
  FounderReportEntry e1;
  e1.pattern = {0, 0, 0, 1};
  e1.pop_frequency = {0.6};
  FounderReportEntry e2;
  e2.pattern = {1, 1, 1, 1};
  e2.pop_frequency = {0.4};
  res.founders = {e1, e2};
  const KThetaReport r = k_theta_summary(res, truth);
  REQUIRE(r.matches.size() == 2);
  CHECK(r.recovered_within_1 == 2);
  CHECK(r.matches[0].hamming == 1);
  CHECK(r.matches[1].hamming == 0);
}

TEST_CASE("one-sided paired sign test") {
  CHECK(sign_test_p(0, 0) == doctest::Approx(1.0));
  CHECK(sign_test_p(20, 0) == doctest::Approx(std::pow(0.5, 20)).epsilon(1e-9));
  CHECK(sign_test_p(15, 5) == doctest::Approx(21700.0 / 1048576.0).epsilon(1e-9));
  CHECK(sign_test_p(10, 10) > 0.5);
}
