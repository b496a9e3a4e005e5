#include "popphase/likelihood.hpp"

#include <cmath>

namespace popphase {

double p_h_site(Allele h, Allele a, double theta, int alphabet_size) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw InputError("theta outside [0,1]");
  if (alphabet_size < 2) throw InputError("alphabet size must be >= 2");
  return h == a ? 1.0 - theta : theta / (alphabet_size - 1);
}

double log_collapsed_h_marginal(const MutationStats& s, double alpha_h, double beta_h,
                                int alphabet_size) {
  const double log_r =
      std::lgamma(alpha_h + beta_h) - std::lgamma(alpha_h) - std::lgamma(beta_h);
  return log_r + std::lgamma(alpha_h + s.l_prime) + std::lgamma(beta_h + s.l) -
         std::lgamma(alpha_h + beta_h + s.l + s.l_prime) -
         s.l_prime * std::log(static_cast<double>(alphabet_size - 1));
}

double log_collapsed_h_marginal(std::span<const MutationStats> per_founder, double alpha_h,
                                double beta_h, int alphabet_size) {
  double acc = 0;
  for (const auto& s : per_founder)
    acc += log_collapsed_h_marginal(s, alpha_h, beta_h, alphabet_size);
  return acc;
}

double collapsed_h_predictive(Allele h, Allele a, const MutationStats& s, double alpha_h,
                              double beta_h, int alphabet_size) {
  const double denom = alpha_h + beta_h + s.l + s.l_prime;
  if (h == a) return (beta_h + s.l) / denom;
  return (alpha_h + s.l_prime) / (denom * (alphabet_size - 1));
}

MismatchClass genotype_mismatch_class(const GenotypeSite& g, Allele h0, Allele h1) {
  if (g.is_missing()) throw InputError("mismatch class undefined for missing genotype");
  Allele lo = h0 < h1 ? h0 : h1;
  Allele hi = h0 < h1 ? h1 : h0;
  if (lo == g.lo && hi == g.hi) return MismatchClass::Exact;
  // multiset intersection size of {lo,hi} and {g.lo,g.hi}
  int avail[2] = {1, 1};
  int shared = 0;
  for (Allele x : {lo, hi}) {
    if (x == g.lo && avail[0] > 0) {
      --avail[0];
      ++shared;
    } else if (x == g.hi && avail[1] > 0) {
      --avail[1];
      ++shared;
    }
  }
  return shared == 1 ? MismatchClass::Diff1 : MismatchClass::Diff2;
}

MismatchWeights mismatch_weights(Allele h0, Allele h1, int alphabet_size) {
  // |S1|, |S2| by enumeration; alphabets are small
  long s1 = 0, s2 = 0;
  for (int a = 0; a < alphabet_size; ++a) {
    for (int b = a; b < alphabet_size; ++b) {
      GenotypeSite g{static_cast<Allele>(a), static_cast<Allele>(b)};
      switch (genotype_mismatch_class(g, h0, h1)) {
        case MismatchClass::Exact: break;
        case MismatchClass::Diff1: ++s1; break;
        case MismatchClass::Diff2: ++s2; break;
      }
    }
  }
  const int nonempty = (s1 > 0 ? 1 : 0) + (s2 > 0 ? 1 : 0);
  MismatchWeights w;
  if (s1 > 0) w.mu1 = 1.0 / (nonempty * static_cast<double>(s1));
  if (s2 > 0) w.mu2 = 1.0 / (nonempty * static_cast<double>(s2));
  return w;
}

double p_g_site(const GenotypeSite& g, Allele h0, Allele h1, double xi, int alphabet_size) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw InputError("xi outside [0,1]");
  const MismatchClass c = genotype_mismatch_class(g, h0, h1);
  if (c == MismatchClass::Exact) return xi;
  const MismatchWeights w = mismatch_weights(h0, h1, alphabet_size);
  return (c == MismatchClass::Diff1 ? w.mu1 : w.mu2) * (1.0 - xi);
}

double collapsed_g_factor(MismatchClass c, const GenotypeStats& s, double alpha_g, double beta_g,
                          double mu_class) {
  if (c == MismatchClass::Exact) return alpha_g + s.u;
  return (beta_g + s.u1 + s.u2) * mu_class;
}

std::vector<GenotypeSite> all_unordered_pairs(int alphabet_size) {
  std::vector<GenotypeSite> out;
  for (int a = 0; a < alphabet_size; ++a)
    for (int b = a; b < alphabet_size; ++b)
      out.push_back(GenotypeSite{static_cast<Allele>(a), static_cast<Allele>(b)});
  return out;
}

LgammaTable::LgammaTable(double base, long max_count) {
  table_.resize(static_cast<size_t>(max_count) + 1);
  for (long i = 0; i <= max_count; ++i) table_[static_cast<size_t>(i)] = std::lgamma(base + i);
}

}  // namespace popphase
