#ifndef POPPHASE_STATE_HPP
#define POPPHASE_STATE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "popphase/likelihood.hpp"
#include "popphase/rng.hpp"
#include "popphase/types.hpp"

namespace popphase {

// One represented ancestral pattern with its sufficient statistics.
struct Founder {
  Haplotype pattern;
  MutationStats stats;  // pooled over assigned instances and loci
  // site_counts[t][a]: assigned haplotype instances carrying allele a at t
  std::vector<std::vector<int>> site_counts;
  int n_assigned = 0;
};

// Nested Polya-urn count tables. n_k is the number of populations currently
// using founder k (one top-level ball per founder per population).
struct UrnState {
  std::vector<std::vector<int>> m;  // [population][founder]
  std::vector<int> n;               // [founder]
  double gamma = 1.0;
  double tau = 1.0;
  // per-population taus; empty under the shared-tau setting
  std::vector<double> pop_tau;

  double tau_for(int j) const { return pop_tau.empty() ? tau : pop_tau[j]; }
  int K() const { return static_cast<int>(n.size()); }
  long total_top() const {
    long s = 0;
    for (int x : n) s += x;
    return s;
  }
  long total_bottom() const {
    long s = 0;
    for (const auto& row : m)
      for (int x : row) s += x;
    return s;
  }
  // represented founders used by population j
  int pop_k(int j) const {
    int c = 0;
    for (int x : m[j])
      if (x > 0) ++c;
    return c;
  }
  // non-empty (population, founder) cells
  int nonempty_cells() const {
    int c = 0;
    for (const auto& row : m)
      for (int x : row)
        if (x > 0) ++c;
    return c;
  }
};

// Full latent configuration of either sampler. Slots are addressed by
// (population j, individual i, parental index e).
struct SamplerState {
  // assignment[j][i][e]: founder index, -1 while detached mid-update
  std::vector<std::vector<std::array<int, 2>>> assignment;
  // haplotype[j][i][e][t]
  std::vector<std::vector<std::array<Haplotype, 2>>> haplotype;
  std::vector<Founder> founders;
  UrnState urn;
  GenotypeStats gstats;
  int alphabet_size = 2;
  std::uint64_t seed = 0;

  int n_loci() const {
    for (const auto& pop : haplotype)
      if (!pop.empty()) return static_cast<int>(pop[0][0].size());
    return 0;
  }

  // --- incremental bookkeeping -------------------------------------------

  // Founder sufficient statistics for one whole haplotype instance.
  void attach_instance_stats(int k, const Haplotype& h);
  void detach_instance_stats(int k, const Haplotype& h);

  // Founder sufficient statistics at a single site.
  void attach_site_stats(int k, int t, Allele h_t);
  void detach_site_stats(int k, int t, Allele h_t);

  // Urn counts for one slot. detach_urn removes the founder entirely when its
  // last bottom-level ball goes away (indices compacted, assignments remapped)
  // and returns true in that case.
  void attach_urn(int j, int k);
  bool detach_urn(int j, int k);

  // Adds a founder with the given pattern and no assigned instances; returns
  // its index.
  int add_founder(Haplotype pattern);

  // Genotype-vs-haplotype discrepancy counts at one site of individual (j,i).
  void attach_genotype_site(const GenotypeSite& g, Allele h0, Allele h1);
  void detach_genotype_site(const GenotypeSite& g, Allele h0, Allele h1);
};

// Random initialization: heterozygous sites phased by fair coin, missing
// sites imputed uniformly, every slot assigned to one founder whose pattern
// is the site-wise majority allele.
SamplerState init_state(const Dataset& data, double tau0, double gamma0, std::uint64_t seed);

struct AuditReport {
  bool ok = true;
  std::string detail;
};

// Recomputes every maintained count from scratch and compares. Integer
// equality; any difference is reported.
AuditReport audit_state(const SamplerState& st, const Dataset& data);

}  // namespace popphase

#endif  // POPPHASE_STATE_HPP
