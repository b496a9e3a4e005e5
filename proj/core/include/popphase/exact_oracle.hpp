#ifndef POPPHASE_EXACT_ORACLE_HPP
#define POPPHASE_EXACT_ORACLE_HPP

#include <map>
#include <utility>
#include <vector>

#include "popphase/types.hpp"

namespace popphase {

// Brute-force posterior for a tiny single-population instance: sums the
// collapsed joint over all haplotype configurations, all assignment
// partitions with at most k_max blocks (urn product prior), with the founder
// pattern sum per block done analytically.
struct OracleInstance {
  Dataset data;  // one population
  Hyperparams hp;
  double tau = 1.0;
  int k_max = 4;
  bool pin_xi = true;       // hard genotype consistency; soft channel otherwise
  double max_terms = 1e8;   // refuse above this many enumeration terms
};

using UnorderedPair = std::pair<Haplotype, Haplotype>;  // first <= second

struct ExactPosterior {
  // per individual, P({h0,h1} = pair)
  std::vector<std::map<UnorderedPair, double>> phase_marginals;
  std::map<int, double> k_distribution;
  double log_evidence = 0;
};

// Estimated number of enumeration terms (haplotype configurations times
// partitions), before the per-block analytic founder sum.
double enumeration_size(const OracleInstance& inst);

// Probability of a set partition (block label per slot) under the sequential
// urn product; exchangeable in the slot order.
double partition_prior(const std::vector<int>& partition, double tau);

ExactPosterior exact_posterior(const OracleInstance& inst);

// Largest total-variation distance, per individual, between the exact phase
// marginals and an empirical pair distribution.
double phase_tv(const std::map<UnorderedPair, double>& exact,
                const std::map<UnorderedPair, double>& empirical);

}  // namespace popphase

#endif  // POPPHASE_EXACT_ORACLE_HPP
