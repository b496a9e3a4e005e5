#ifndef POPPHASE_EVAL_HPP
#define POPPHASE_EVAL_HPP

#include <map>
#include <string>
#include <vector>

#include "popphase/result.hpp"
#include "popphase/synthgen.hpp"
#include "popphase/types.hpp"

namespace popphase {

struct SiteErrorCount {
  int mismatches = 0;
  int nontrivial = 0;  // zero when the individual has fewer than 2 het sites
};

// Phase mismatches over heterozygous sites under the orientation minimizing
// them. Both pairs must carry the same unordered alleles at every site.
SiteErrorCount site_error(const Haplotype& true0, const Haplotype& true1, const Haplotype& pred0,
                          const Haplotype& pred1);

// Number of adjacent het-site pairs whose relative phase differs.
int switch_distance(const Haplotype& true0, const Haplotype& true1, const Haplotype& pred0,
                    const Haplotype& pred1);

// D_KL(p||q) with p restricted to entries >= min_freq_filter and renormalized;
// q entries on p's support floored at 1e-6, q renormalized over its own
// support plus the floored entries.
double freq_kl(const std::map<Haplotype, double>& p, const std::map<Haplotype, double>& q,
               double min_freq_filter);

struct IndividualScore {
  std::string id;
  std::string population;
  int n_het = 0;
  int nontrivial = 0;
  int mismatches = 0;
  int d_w = 0;
};

struct PhasingScore {
  double err_s = 0;        // micro average: sum mismatches / sum nontrivial
  double err_s_macro = 0;  // mean per-individual rate over ambiguous individuals
  long mismatches = 0;
  long nontrivial_sites = 0;
  long d_w_total = 0;
  int n_ambiguous = 0;  // individuals with >= 2 het sites
  std::vector<IndividualScore> rows;
};

// Scores a result against ground truth; matches individuals by id.
PhasingScore score_phasing(const GroundTruth& truth, const PhasingResult& pred);

struct KThetaReport {
  int k_mode = 0;
  double k_mean = 0;
  std::vector<double> pop_k_mean;
  double theta_hat = 0;
  // greedy minimal-Hamming match of recovered founder patterns to the truth
  struct FounderMatch {
    int true_index = -1;
    int hamming = 0;
    Haplotype recovered;
  };
  std::vector<FounderMatch> matches;
  int recovered_within_1 = 0;  // true founders matched at Hamming <= 1
};

KThetaReport k_theta_summary(const PhasingResult& result, const GroundTruth& truth);

// Per-population empirical frequencies of the true strands.
std::vector<std::map<Haplotype, double>> true_strand_frequencies(const GroundTruth& truth,
                                                                 int n_populations);

// One-sided paired sign test: P(X >= wins) for X ~ Binomial(wins+losses, 1/2).
double sign_test_p(int wins, int losses);

}  // namespace popphase

#endif  // POPPHASE_EVAL_HPP
