#ifndef POPPHASE_SYNTHGEN_HPP
#define POPPHASE_SYNTHGEN_HPP

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "popphase/types.hpp"

namespace popphase {

// Simulation protocol: J populations, each drawing haplotypes from its own
// set of founders of which the first `shared_founders` are common to all
// populations; mutation channel on haplotypes, noisy genotyping on pairs.
struct SimSpec {
  int populations = 5;
  int individuals_per_pop = 20;
  int founders_per_pop = 5;
  int shared_founders = 2;
  int n_loci = 10;
  double theta = 0.01;
  double genotype_error = 0.0;  // 1 - xi
  int alphabet_size = 2;
  std::uint64_t seed = 1;
  // optional user-supplied global founder pool (shared founders first, then
  // populations-per-pop privates per population); empty = draw at random
  std::vector<Haplotype> founder_pool;

  void validate() const;
  int total_founders() const {
    return shared_founders + populations * (founders_per_pop - shared_founders);
  }
};

struct GroundTruth {
  // global distinct founders: shared first, then per-population privates
  std::vector<Haplotype> founders;
  int shared_count = 0;
  std::vector<std::vector<int>> pop_founders;  // indices into `founders`

  struct TrueIndividual {
    std::string id;
    int pop = 0;
    std::array<int, 2> founder{};  // global founder index per slot
    std::array<Haplotype, 2> haplotype;
  };
  std::vector<TrueIndividual> individuals;  // dataset order
};

// Distinct random founders laid out as GroundTruth expects.
std::vector<Haplotype> make_founders(const SimSpec& spec);

// Appends independent uniform alleles to every founder to reach new_len;
// distinctness is preserved by redrawing colliding extensions.
std::vector<Haplotype> extend_founders(const std::vector<Haplotype>& pool, int new_len,
                                       int alphabet_size, std::uint64_t seed);

std::pair<Dataset, GroundTruth> generate(const SimSpec& spec);

}  // namespace popphase

#endif  // POPPHASE_SYNTHGEN_HPP
