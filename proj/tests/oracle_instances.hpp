#ifndef TESTS_ORACLE_INSTANCES_HPP
#define TESTS_ORACLE_INSTANCES_HPP

#include <map>
#include <vector>

#include "popphase/dp_sampler.hpp"
#include "popphase/exact_oracle.hpp"

namespace popphase::testing {

inline Dataset one_pop(std::vector<Genotype> gs) {
  Dataset d;
  Population p;
  p.id = "p1";
  for (size_t i = 0; i < gs.size(); ++i)
    p.individuals.push_back({"ind" + std::to_string(i + 1), std::move(gs[i])});
  d.populations.push_back(std::move(p));
  return d;
}

// the five fixed instances the sampler is checked against
inline std::vector<OracleInstance> fixed_oracle_instances() {
  const GenotypeSite het{0, 1}, hom0{0, 0}, hom1{1, 1};
  std::vector<OracleInstance> out;

  {  // two fully het individuals, hard channel
    OracleInstance inst;
    inst.data = one_pop({{het, het}, {het, het}});
    inst.tau = 1.0;
    inst.k_max = 4;
    inst.pin_xi = true;
    out.push_back(inst);
  }
  {  // hom anchor plus two het individuals
    OracleInstance inst;
    inst.data = one_pop({{hom0, hom0, hom0}, {het, het, hom1}, {het, hom0, het}});
    inst.tau = 1.0;
    inst.k_max = 6;
    inst.pin_xi = true;
    out.push_back(inst);
  }
  {  // four individuals, three loci, mixed
    OracleInstance inst;
    inst.data = one_pop({{het, het, hom0}, {het, het, hom0}, {hom1, het, het}, {hom0, hom0, het}});
    inst.tau = 0.5;
    inst.k_max = 8;
    inst.pin_xi = true;
    out.push_back(inst);
  }
  {  // soft genotyping channel, two individuals
    OracleInstance inst;
    inst.data = one_pop({{het, hom0}, {het, het}});
    inst.tau = 1.0;
    inst.k_max = 4;
    inst.pin_xi = false;
    out.push_back(inst);
  }
  {  // missing site imputation, hard channel
    OracleInstance inst;
    inst.data = one_pop({{het, GenotypeSite::missing()}, {het, hom1}, {hom0, het}});
    inst.tau = 2.0;
    inst.k_max = 6;
    inst.pin_xi = true;
    out.push_back(inst);
  }
  return out;
}

// post-burn-in empirical distribution of each individual's unordered pair
inline std::vector<std::map<UnorderedPair, double>> dp_phase_distribution(
    const OracleInstance& inst, int burnin, int sweeps, std::uint64_t seed) {
  DPConfig cfg;
  cfg.hp = inst.hp;
  cfg.init_tau = inst.tau;
  cfg.resample_tau = false;
  cfg.pin_xi = inst.pin_xi;
  cfg.seed = seed;

  SamplerState st = init_state(inst.data, inst.tau, 1.0, seed);
  Rng rng(derive_seed(seed, 1));
  const auto& inds = inst.data.populations[0].individuals;
  std::vector<std::map<UnorderedPair, double>> dist(inds.size());

  for (int s = 0; s < burnin + sweeps; ++s) {
    dp_gibbs_sweep(st, inst.data, cfg, rng);
    if (s < burnin) continue;
    for (size_t i = 0; i < inds.size(); ++i) {
      const Haplotype& a = st.haplotype[0][i][0];
      const Haplotype& b = st.haplotype[0][i][1];
      UnorderedPair key = a <= b ? UnorderedPair{a, b} : UnorderedPair{b, a};
      dist[i][key] += 1.0;
    }
  }
  for (auto& m : dist)
    for (auto& [k, v] : m) v /= sweeps;
  return dist;
}

}  // namespace popphase::testing

#endif  // TESTS_ORACLE_INSTANCES_HPP
