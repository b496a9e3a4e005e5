#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "popphase/likelihood.hpp"
#include "popphase/rng.hpp"

using namespace popphase;

namespace {

// Gauss-Legendre nodes/weights on [0,1]; exact for polynomials up to degree
// 2n-1, which covers every Beta-binomial integrand tested here. This is the
// independent quadrature route against the closed-form marginal.
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p0 = 0, p1 = 0;
      for (int it = 0; it < 100; ++it) {
        p0 = 1;
        p1 = 0;
        for (int k = 0; k < n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2 * k + 1) * t * p1 - k * p2) / (k + 1);
        }
        const double dp = n * (t * p0 - p1) / (t * t - 1);
        const double step = p0 / dp;
        t -= step;
        if (std::abs(step) < 1e-15) break;
      }
      p0 = 1;
      p1 = 0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * k + 1) * t * p1 - k * p2) / (k + 1);
      }
      const double dp = n * (t * p0 - p1) / (t * t - 1);
      x[i] = 0.5 * (1 + t);
      w[i] = 1.0 / ((1 - t * t) * dp * dp);
    }
  }
};

double quadrature_marginal(long l, long lp, double a, double b, int A,
                           const GaussLegendre& gl) {
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  double s = 0;
  for (size_t i = 0; i < gl.x.size(); ++i) {
    const double th = gl.x[i];
    s += gl.w[i] * std::pow(th, a + lp - 1) * std::pow(1 - th, b + l - 1);
  }
  return s / std::exp(log_beta) / std::pow(static_cast<double>(A - 1), lp);
}

}  // namespace

TEST_CASE("single-locus mutation model") {
  CHECK(p_h_site(0, 0, 0.01, 2) == doctest::Approx(0.99).epsilon(1e-14));
  CHECK(p_h_site(1, 0, 0.01, 2) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(p_h_site(2, 0, 0.06, 4) == doctest::Approx(0.02).epsilon(1e-14));
  CHECK_THROWS_AS(p_h_site(0, 0, 1.5, 2), InputError);
}

TEST_CASE("mutation model normalizes over the alphabet") {
  for (int A : {2, 3, 4, 5})
    for (int a = 0; a < A; ++a)
      for (double theta : {0.0, 0.01, 0.3, 0.77, 1.0}) {
        double s = 0;
        for (int h = 0; h < A; ++h)
          s += p_h_site(static_cast<Allele>(h), static_cast<Allele>(a), theta, A);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
      }
}

TEST_CASE("collapsed marginal, pinned values") {
  CHECK(log_collapsed_h_marginal({2, 0}, 1, 1, 2) ==
        doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-12));
  CHECK(log_collapsed_h_marginal({0, 0}, 1, 1, 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(log_collapsed_h_marginal({1, 1}, 1, 1, 2) ==
        doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("collapsed marginal equals Beta quadrature for all l+l' <= 12") {
  const GaussLegendre gl(128);
  const std::pair<double, double> hps[] = {{1, 1}, {1, 19}, {19, 1}, {2, 5}};
  for (const auto& [a, b] : hps) {
    for (int A : {2, 4}) {
      for (long tot = 0; tot <= 12; ++tot) {
        for (long l = 0; l <= tot; ++l) {
          const long lp = tot - l;
          const double exact = std::exp(log_collapsed_h_marginal({l, lp}, a, b, A));
          const double quad = quadrature_marginal(l, lp, a, b, A, gl);
          CHECK(std::abs(exact - quad) / quad < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("collapsed predictive, pinned values") {
  CHECK(collapsed_h_predictive(0, 0, {0, 0}, 1, 1, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(collapsed_h_predictive(0, 0, {8, 0}, 1, 1, 2) ==
        doctest::Approx(9.0 / 10.0).epsilon(1e-12));
  CHECK(collapsed_h_predictive(1, 0, {8, 0}, 1, 1, 2) ==
        doctest::Approx(1.0 / 10.0).epsilon(1e-12));
}

TEST_CASE("predictive is the exact one-observation marginal ratio") {
  Rng rng(11);
  for (int it = 0; it < 400; ++it) {
    const double a = 0.5 + 5 * rng.u01();
    const double b = 0.5 + 5 * rng.u01();
    const int A = 2 + static_cast<int>(rng.uniform_int(3));
    MutationStats s{static_cast<long>(rng.uniform_int(40)),
                    static_cast<long>(rng.uniform_int(40))};
    const bool match = rng.bernoulli(0.5);
    MutationStats with = s;
    if (match)
      ++with.l;
    else
      ++with.l_prime;
    const double lhs =
        std::log(collapsed_h_predictive(match ? 0 : 1, 0, s, a, b, A));
    const double rhs =
        log_collapsed_h_marginal(with, a, b, A) - log_collapsed_h_marginal(s, a, b, A);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("absorption order never matters") {
  // chain products of predictives reach the same block marginal under any
  // permutation of the observations
  Rng rng(13);
  for (int it = 0; it < 100; ++it) {
    const int n = 1 + static_cast<int>(rng.uniform_int(20));
    std::vector<bool> obs(n);
    for (int i = 0; i < n; ++i) obs[i] = rng.bernoulli(0.6);

    auto chain = [&](const std::vector<bool>& seq) {
      MutationStats s{0, 0};
      double acc = 0;
      for (bool m : seq) {
        acc += std::log(collapsed_h_predictive(m ? 0 : 1, 0, s, 1.0, 19.0, 2));
        if (m)
          ++s.l;
        else
          ++s.l_prime;
      }
      return acc;
    };

    const double base = chain(obs);
    for (int shuffle = 0; shuffle < 3; ++shuffle) {
      for (int i = n - 1; i > 0; --i)
        std::swap(obs[i], obs[rng.uniform_int(static_cast<std::uint32_t>(i + 1))]);
      CHECK(chain(obs) == doctest::Approx(base).epsilon(1e-12));
    }
  }
}

TEST_CASE("genotype mismatch classes") {
  CHECK(genotype_mismatch_class({0, 1}, 0, 1) == MismatchClass::Exact);
  CHECK(genotype_mismatch_class({0, 0}, 0, 1) == MismatchClass::Diff1);
  CHECK(genotype_mismatch_class({1, 1}, 0, 0) == MismatchClass::Diff2);
  CHECK(genotype_mismatch_class({0, 1}, 1, 0) == MismatchClass::Exact);
  CHECK_THROWS_AS(genotype_mismatch_class(GenotypeSite::missing(), 0, 0), InputError);
}

TEST_CASE("genotyping channel, pinned values") {
  CHECK(p_g_site({0, 1}, 0, 1, 0.95, 2) == doctest::Approx(0.95).epsilon(1e-12));
  // h=(0,1): S1 = {{0,0},{1,1}}, S2 empty, so mu1 = 1/2
  CHECK(p_g_site({0, 0}, 0, 1, 0.95, 2) == doctest::Approx(0.025).epsilon(1e-12));
  // h=(0,0): S1 = {{0,1}}, S2 = {{1,1}}, both classes carry half the error
  // mass (enumeration-verified; this is what makes the channel normalize)
  CHECK(p_g_site({1, 1}, 0, 0, 0.95, 2) == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(p_g_site({0, 1}, 0, 0, 0.95, 2) == doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("genotyping channel normalizes for every true pair") {
  for (int A : {2, 3, 4}) {
    const auto pairs = all_unordered_pairs(A);
    for (int h0 = 0; h0 < A; ++h0)
      for (int h1 = 0; h1 < A; ++h1)
        for (double xi : {0.0, 0.3, 0.95, 1.0}) {
          double s = 0;
          for (const auto& g : pairs)
            s += p_g_site(g, static_cast<Allele>(h0), static_cast<Allele>(h1), xi, A);
          CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
  }
}

TEST_CASE("collapsed genotype factor weights") {
  CHECK(collapsed_g_factor(MismatchClass::Exact, {0, 0, 0}, 1, 1, 0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // u=99, one mismatch seen, strong prior on fidelity
  CHECK(collapsed_g_factor(MismatchClass::Exact, {99, 1, 0}, 9, 1, 0) ==
        doctest::Approx(108.0).epsilon(1e-12));
  const double mu = 0.4;
  CHECK(collapsed_g_factor(MismatchClass::Diff1, {99, 1, 0}, 9, 1, mu) ==
        doctest::Approx(2.0 * mu).epsilon(1e-12));
  CHECK(collapsed_g_factor(MismatchClass::Diff2, {0, 0, 0}, 1, 1, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
}
