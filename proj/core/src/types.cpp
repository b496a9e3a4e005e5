#include "popphase/types.hpp"

namespace popphase {

GenotypeSite canonicalize_genotype(Allele a, Allele b, const AlleleAlphabet& alphabet) {
  if (!alphabet.contains(a) || !alphabet.contains(b))
    throw InputError("allele symbol outside alphabet");
  GenotypeSite s;
  s.lo = a < b ? a : b;
  s.hi = a < b ? b : a;
  return s;
}

std::vector<int> het_sites(const Genotype& g) {
  std::vector<int> out;
  for (int t = 0; t < static_cast<int>(g.size()); ++t)
    if (g[t].is_het()) out.push_back(t);
  return out;
}

bool pair_consistent(const Genotype& g, const Haplotype& h0, const Haplotype& h1) {
  if (h0.size() != g.size() || h1.size() != g.size()) return false;
  for (size_t t = 0; t < g.size(); ++t)
    if (!site_consistent(g[t], h0[t], h1[t])) return false;
  return true;
}

std::vector<Violation> validate_dataset(const Dataset& d) {
  std::vector<Violation> v;
  if (d.alphabet.size < 2) v.push_back({"", "", -1, "alphabet size must be >= 2"});
  if (d.populations.empty()) v.push_back({"", "", -1, "dataset has no populations"});
  const int T = d.n_loci();
  for (const auto& pop : d.populations) {
    if (pop.individuals.empty())
      v.push_back({pop.id, "", -1, "population is empty"});
    for (const auto& ind : pop.individuals) {
      if (static_cast<int>(ind.genotype.size()) != T) {
        v.push_back({pop.id, ind.id, -1,
                     "locus count " + std::to_string(ind.genotype.size()) +
                         " differs from dataset locus count " + std::to_string(T)});
        continue;
      }
      for (int t = 0; t < T; ++t) {
        const auto& s = ind.genotype[t];
        if (s.is_missing()) continue;
        if (!d.alphabet.contains(s.lo) || !d.alphabet.contains(s.hi))
          v.push_back({pop.id, ind.id, t, "allele symbol outside alphabet"});
        else if (s.lo > s.hi)
          v.push_back({pop.id, ind.id, t, "genotype pair not canonically ordered"});
      }
    }
  }
  return v;
}

Dataset pool_populations(const Dataset& d, const std::string& merged_id) {
  Dataset out;
  out.alphabet = d.alphabet;
  Population merged;
  merged.id = merged_id;
  for (const auto& pop : d.populations)
    for (const auto& ind : pop.individuals) merged.individuals.push_back(ind);
  out.populations.push_back(std::move(merged));
  return out;
}

Dataset single_population(const Dataset& d, int j) {
  if (j < 0 || j >= d.n_populations()) throw InputError("population index out of range");
  Dataset out;
  out.alphabet = d.alphabet;
  out.populations.push_back(d.populations[j]);
  return out;
}

void Hyperparams::validate() const {
  if (!(alpha_h > 0 && beta_h > 0 && alpha_g > 0 && beta_g > 0 && iota > 0 && kappa > 0))
    throw InputError("hyperparameters must be strictly positive");
}

}  // namespace popphase
