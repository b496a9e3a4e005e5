#ifndef POPPHASE_LIKELIHOOD_HPP
#define POPPHASE_LIKELIHOOD_HPP

#include <span>
#include <vector>

#include "popphase/types.hpp"

namespace popphase {

// Match / mismatch counts for one founder, pooled over loci and assigned
// haplotype instances.
struct MutationStats {
  long l = 0;        // alleles identical to the founder pattern
  long l_prime = 0;  // mutated alleles

  MutationStats operator+(const MutationStats& o) const { return {l + o.l, l_prime + o.l_prime}; }
};

// Exact / one-allele / two-allele discrepancy counts between observed
// genotypes and the current haplotype pairs, pooled over scored sites.
struct GenotypeStats {
  long u = 0;   // exact
  long u1 = 0;  // differ by one allele
  long u2 = 0;  // differ by both alleles
};

enum class MismatchClass { Exact, Diff1, Diff2 };

// Single-locus mutation model: (1-theta) on a match, theta/(|A|-1) per
// specific other allele.
double p_h_site(Allele h, Allele a, double theta, int alphabet_size);

// log marginal of a haplotype block given its founder, mutation rate
// integrated out against Beta(alpha_h, beta_h) on theta:
//   R(a_h,b_h) * G(a_h + l') * G(b_h + l) / G(a_h + b_h + l + l') * (|A|-1)^{-l'}
// alpha_h pairs with the mismatch count since the prior sits on the mutation
// rate itself.
double log_collapsed_h_marginal(const MutationStats& s, double alpha_h, double beta_h,
                                int alphabet_size);
double log_collapsed_h_marginal(std::span<const MutationStats> per_founder, double alpha_h,
                                double beta_h, int alphabet_size);

// One-site predictive under the collapsed mutation model, with `s` excluding
// the observation being scored:
//   match:    (beta_h + l) / (alpha_h + beta_h + l + l')
//   mismatch: (alpha_h + l') / ((alpha_h + beta_h + l + l') * (|A|-1))
double collapsed_h_predictive(Allele h, Allele a, const MutationStats& s, double alpha_h,
                              double beta_h, int alphabet_size);

// Multiset comparison of g against {h0, h1}.
MismatchClass genotype_mismatch_class(const GenotypeSite& g, Allele h0, Allele h1);

// Normalizing constants of the genotyping channel for a given true pair:
// the error mass (1-xi) splits evenly across the nonempty mismatch classes
// and uniformly within each class, which makes the channel a proper
// distribution for every pair and alphabet size.
struct MismatchWeights {
  double mu1 = 0;
  double mu2 = 0;
};
MismatchWeights mismatch_weights(Allele h0, Allele h1, int alphabet_size);

// Genotyping channel: xi on exact, mu_c * (1-xi) within mismatch class c.
double p_g_site(const GenotypeSite& g, Allele h0, Allele h1, double xi, int alphabet_size);

// Collapsed predictive weight of one genotype observation, with `s` excluding
// the site being scored; relative across candidates only (the shared
// denominator is dropped).
double collapsed_g_factor(MismatchClass c, const GenotypeStats& s, double alpha_g, double beta_g,
                          double mu_class);

// All unordered pairs over 0..n-1 in lexicographic order.
std::vector<GenotypeSite> all_unordered_pairs(int alphabet_size);

// lgamma(base + i) for integer i >= 0, precomputed. The Gibbs inner loops
// evaluate these at count offsets only.
class LgammaTable {
 public:
  LgammaTable() = default;
  LgammaTable(double base, long max_count);
  double operator()(long i) const { return table_[static_cast<size_t>(i)]; }
  long capacity() const { return static_cast<long>(table_.size()) - 1; }

 private:
  std::vector<double> table_;
};

}  // namespace popphase

#endif  // POPPHASE_LIKELIHOOD_HPP
