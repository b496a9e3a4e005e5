#ifndef POPPHASE_PARTITION_LIGATION_HPP
#define POPPHASE_PARTITION_LIGATION_HPP

#include <array>
#include <vector>

#include "popphase/hdp_sampler.hpp"
#include "popphase/result.hpp"
#include "popphase/types.hpp"

namespace popphase {

// A phased segment: a pool of distinct fragment haplotypes over [start,end)
// and, for every individual (dataset order), an unordered pair of pool
// indices consistent with its genotype on the range.
struct Block {
  int start = 0;
  int end = 0;
  std::vector<Haplotype> pool;
  std::vector<std::array<int, 2>> pairs;

  int length() const { return end - start; }
};

struct LigationConfig {
  int block_length = 8;
  double entropy_threshold = 1.5;  // nats, over the merged pair distribution
  // symmetric Dirichlet pseudocount for the ligation Gibbs; 0 = 1/|pool|
  double dirichlet_pseudocount = 0.0;
  int gibbs_burnin = 100;
  int gibbs_samples = 200;
  // overlap-disagreement expansions are capped at 2^max_expansion_bits
  // combinations per individual; beyond that the block is re-phased directly
  int max_expansion_bits = 12;

  void validate() const;
};

// Contiguous disjoint sub-datasets of length block_len (last may be shorter).
std::vector<Dataset> partition(const Dataset& data, int block_len);

// Step 1: phase every atomic block independently with the hierarchical
// sampler and collect each block's haplotype pool.
std::vector<Block> phase_atomic(const Dataset& data, const HDPConfig& cfg,
                                const LigationConfig& lig);

// Candidate pool for the merged range of two adjacent blocks. Individuals
// whose block pairs agree on the overlap (or overlap == 0) contribute their
// direct stitches; disagreeing individuals contribute every merged haplotype
// consistent with their genotype (flank variants times allele combinations on
// the disagreeing overlap het loci). `capped`, when non-null, is set per
// individual whose expansion exceeded the cap.
std::vector<Haplotype> stitch_candidates(const Block& left, const Block& right, int overlap,
                                         const Dataset& data, int max_expansion_bits,
                                         std::vector<char>* capped = nullptr);

struct LigateDiag {
  double pair_entropy = 0;  // nats over the final merged pair distribution
  bool any_capped = false;
};

// Steps 2/3 merge: finite-mixture Gibbs over the stitched candidate pool
// under a symmetric Dirichlet prior; overlap-consistent individuals stay on
// their deterministic merge.
Block ligate(const Block& left, const Block& right, int overlap, const Dataset& data,
             const LigationConfig& lig, Rng& rng, LigateDiag* diag = nullptr);

// Full long-sequence pipeline: atomic phasing, pairwise ligation into L-1
// overlapping blocks (entropy-triggered re-phasing), then hierarchical
// ligation of overlapping neighbours until one block covers everything.
PhasingResult phase_long(const Dataset& data, const HDPConfig& cfg, const LigationConfig& lig);

}  // namespace popphase

#endif  // POPPHASE_PARTITION_LIGATION_HPP
