#ifndef POPPHASE_HDP_SAMPLER_HPP
#define POPPHASE_HDP_SAMPLER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "popphase/result.hpp"
#include "popphase/state.hpp"

namespace popphase {

struct HDPConfig {
  Hyperparams hp;
  int burnin = 1000;
  int samples = 1000;
  std::uint64_t seed = 1;
  double init_gamma = 1.0;
  double init_tau = 1.0;
  // one tau for every population-level urn, resampled from the pooled
  // (non-empty cells, total draws) statistics
  bool shared_tau = true;
  bool resample_concentrations = true;
  bool pin_xi = false;  // disable the genotyping channel (hard consistency)
  bool check_invariants = false;

  void validate() const;
};

// Top-level founder weights (n_1/(n-1+gamma), ..., gamma/(n-1+gamma)),
// renormalized to sum to one. Length K+1.
std::vector<double> top_level_weights(const UrnState& urn);

// Population-j prior over founders plus one new-founder slot:
// entry k proportional to m_{j,k} + tau * n_k/(n-1+gamma), entry K+1
// proportional to tau * gamma/(n-1+gamma); normalized. Length K+1.
std::vector<double> hdp_prior_weights(const UrnState& urn, int j);

// log p(h | founder pattern, pooled stats excluding h) over all loci; the
// stats must already exclude the instance being scored.
double log_instance_predictive(const Founder& f, const Haplotype& h, const Hyperparams& hp,
                               int alphabet_size);

// Posterior assignment distribution of slot (j,i,e) over K existing founders
// plus a new one. The slot must be detached (stats and urn). Normalized.
// `hierarchical` selects the nested-urn prior; the flat variant uses the
// population's own occupancy CRP (single-population sampler).
std::vector<double> assignment_weights(const SamplerState& st, const Dataset& data,
                                       const Hyperparams& hp, bool hierarchical, int j, int i,
                                       int e);

// One Gibbs update of the slot's founder indicator: detach, draw, attach;
// instantiates (pattern sampled from p(a|h)) or removes founders as needed.
void sample_assignment(SamplerState& st, const Dataset& data, const Hyperparams& hp,
                       bool hierarchical, int j, int i, int e, Rng& rng);

// Posterior over the founder-k allele at locus t (normalized, length |A|).
std::vector<double> founder_site_weights(const SamplerState& st, const Hyperparams& hp, int k,
                                         int t);
void sample_founder_site(SamplerState& st, const Hyperparams& hp, int k, int t, Rng& rng);

// One Gibbs update of haplotype slot (j,i,e) at locus t: collapsed genotype
// factor times collapsed inheritance predictive; at missing sites the
// genotype factor is 1 (pure imputation).
void sample_haplotype_site(SamplerState& st, const Dataset& data, const Hyperparams& hp,
                           bool pin_xi, int j, int i, int e, int t, Rng& rng);

// Blocked draw over the two orderings of a heterozygous site's allele pair.
// The genotype factor cancels between the orderings, so this move stays
// available when the channel is pinned; without it the chain cannot flip
// phase at xi -> 1.
void resample_pair_orientation(SamplerState& st, const Dataset& data, const Hyperparams& hp,
                               int j, int i, int t, Rng& rng);

// One full sweep: concentrations, assignments, founder sites, haplotype
// sites (with orientation moves).
void hdp_gibbs_sweep(SamplerState& st, const Dataset& data, const HDPConfig& cfg, Rng& rng);

PhasingResult run_hdp(const Dataset& data, const HDPConfig& cfg);

}  // namespace popphase

#endif  // POPPHASE_HDP_SAMPLER_HPP
