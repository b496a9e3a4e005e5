#ifndef POPPHASE_TYPES_HPP
#define POPPHASE_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace popphase {

// Malformed user input (files, flags, specs). CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal consistency check (programming error). CLI exit code 3.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured resource bound was exceeded. CLI exit code 4.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Allele = std::uint8_t;

// Allele symbols are the integers 0..size-1. Biallelic (size 2) is the
// default; likelihood code handles the general case.
struct AlleleAlphabet {
  int size = 2;

  bool contains(Allele a) const { return static_cast<int>(a) < size; }
  void validate() const {
    if (size < 2) throw InputError("alphabet size must be >= 2");
    if (size > 200) throw InputError("alphabet size too large");
  }
};

// One chromosome copy over T loci.
using Haplotype = std::vector<Allele>;

// Unordered allele pair at one locus, stored with lo <= hi. A missing
// observation uses the sentinel in both fields.
struct GenotypeSite {
  static constexpr Allele kMissing = 0xff;

  Allele lo = 0;
  Allele hi = 0;

  static GenotypeSite missing() { return GenotypeSite{kMissing, kMissing}; }
  bool is_missing() const { return lo == kMissing; }
  bool is_het() const { return !is_missing() && lo != hi; }
  bool is_hom() const { return !is_missing() && lo == hi; }
  bool operator==(const GenotypeSite&) const = default;
};

using Genotype = std::vector<GenotypeSite>;

GenotypeSite canonicalize_genotype(Allele a, Allele b, const AlleleAlphabet& alphabet);

// 0-based indices of heterozygous non-missing sites.
std::vector<int> het_sites(const Genotype& g);

// True when the unordered pair {h0,h1} equals g (missing sites match anything).
inline bool site_consistent(const GenotypeSite& g, Allele h0, Allele h1) {
  if (g.is_missing()) return true;
  Allele lo = h0 < h1 ? h0 : h1;
  Allele hi = h0 < h1 ? h1 : h0;
  return lo == g.lo && hi == g.hi;
}

bool pair_consistent(const Genotype& g, const Haplotype& h0, const Haplotype& h1);

struct Individual {
  std::string id;
  Genotype genotype;
};

struct Population {
  std::string id;
  std::vector<Individual> individuals;
};

struct Dataset {
  AlleleAlphabet alphabet;
  std::vector<Population> populations;

  int n_loci() const {
    for (const auto& p : populations)
      if (!p.individuals.empty()) return static_cast<int>(p.individuals[0].genotype.size());
    return 0;
  }
  int n_populations() const { return static_cast<int>(populations.size()); }
  int total_individuals() const {
    int n = 0;
    for (const auto& p : populations) n += static_cast<int>(p.individuals.size());
    return n;
  }
};

struct Violation {
  std::string population;
  std::string individual;  // empty when the violation is population-level
  int locus = -1;          // -1 when not site-specific
  std::string what;
};

// Checks the Dataset invariants; all violations are returned, none thrown.
std::vector<Violation> validate_dataset(const Dataset& d);

// Pools all populations into one (mode-I input). Individual ids are kept.
Dataset pool_populations(const Dataset& d, const std::string& merged_id = "pooled");

// Single-population view of population j.
Dataset single_population(const Dataset& d, int j);

// (alpha_h, beta_h): Beta prior on the per-founder mutation rate (alpha_h is
// the mutation pseudo-count, so the prior mean rate is alpha_h/(alpha_h+beta_h)).
// (alpha_g, beta_g): Beta prior on the genotyping fidelity xi (alpha_g is the
// exact-observation pseudo-count).
// (iota, kappa): inverse-gamma shape/scale for the gamma and tau hyperpriors.
struct Hyperparams {
  double alpha_h = 1.0;
  double beta_h = 19.0;
  double alpha_g = 19.0;
  double beta_g = 1.0;
  double iota = 1.0;
  double kappa = 1.0;

  void validate() const;
};

}  // namespace popphase

#endif  // POPPHASE_TYPES_HPP
