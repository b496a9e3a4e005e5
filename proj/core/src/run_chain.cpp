#include <algorithm>
#include <map>

#include "chain_detail.hpp"
#include "popphase/dp_sampler.hpp"
#include "popphase/hdp_sampler.hpp"

namespace popphase::detail {

namespace {

using PairKey = std::pair<Haplotype, Haplotype>;

PairKey canonical_pair(const Haplotype& a, const Haplotype& b) {
  return a <= b ? PairKey{a, b} : PairKey{b, a};
}

struct FounderAgg {
  std::vector<double> freq_sum;  // per population
  std::vector<long> used;        // per population, sweeps with m > 0
  double theta_sum = 0;
  long present = 0;
};

// decoded pair: most frequent sampled pair; ties resolved by agreement with
// the site-wise majority phase (oriented at the first het site), then by the
// lexicographically smaller key
PairKey decode_pair(const std::map<PairKey, long>& counts, const Genotype& g) {
  long best = 0;
  for (const auto& [key, c] : counts) best = std::max(best, c);
  std::vector<const PairKey*> tied;
  for (const auto& [key, c] : counts)
    if (c == best) tied.push_back(&key);
  if (tied.size() == 1) return *tied[0];

  const std::vector<int> hets = het_sites(g);
  if (!hets.empty()) {
    const int t0 = hets[0];
    const int T = static_cast<int>(g.size());
    // majority vote of strand-0 alleles after orienting strand 0 to carry the
    // smaller allele at the first het site, weighted by sample counts
    std::map<int, std::map<Allele, long>> votes;
    for (const auto& [key, c] : counts) {
      const bool flip = key.first[t0] != g[t0].lo;
      const Haplotype& s0 = flip ? key.second : key.first;
      for (int t = 0; t < T; ++t) votes[t][s0[t]] += c;
    }
    Haplotype consensus(T, 0);
    for (int t = 0; t < T; ++t) {
      long mx = -1;
      for (const auto& [a, v] : votes[t])
        if (v > mx) {
          mx = v;
          consensus[t] = a;
        }
    }
    int best_score = -1;
    const PairKey* pick = nullptr;
    for (const PairKey* key : tied) {
      const bool flip = key->first[t0] != g[t0].lo;
      const Haplotype& s0 = flip ? key->second : key->first;
      int score = 0;
      for (int t = 0; t < T; ++t)
        if (s0[t] == consensus[t]) ++score;
      if (score > best_score || (score == best_score && *key < *pick)) {
        best_score = score;
        pick = key;
      }
    }
    return *pick;
  }

  const PairKey* pick = tied[0];
  for (const PairKey* key : tied)
    if (*key < *pick) pick = key;
  return *pick;
}

}  // namespace

PhasingResult run_chain(const Dataset& data, const ChainOptions& opt, const char* model_name) {
  if (data.total_individuals() == 0) throw InputError("empty dataset");
  {
    const auto v = validate_dataset(data);
    if (!v.empty()) throw InputError("invalid dataset: " + v.front().what);
  }
  opt.hp.validate();
  if (opt.samples < 1) throw InputError("need at least one retained sweep");

  const int J = data.n_populations();
  const int T = data.n_loci();

  SamplerState st = init_state(data, opt.init_tau, opt.init_gamma, opt.seed);
  Rng rng(derive_seed(opt.seed, 1));

  std::vector<std::vector<std::map<PairKey, long>>> pair_counts(J);
  for (int j = 0; j < J; ++j) pair_counts[j].resize(data.populations[j].individuals.size());

  std::map<Haplotype, FounderAgg> founder_agg;

  PhasingResult res;
  res.model = model_name;
  res.alphabet = data.alphabet;
  res.seed = opt.seed;
  res.pop_k_trace.resize(J);

  double theta_sweep_sum = 0;

  const int total = opt.burnin + opt.samples;
  for (int sweep = 0; sweep < total; ++sweep) {
    gibbs_sweep(st, data, opt, rng);
    if (opt.check_invariants) {
      const AuditReport a = audit_state(st, data);
      if (!a.ok) throw InvariantError("state audit failed after sweep: " + a.detail);
    }
    if (sweep < opt.burnin) continue;

    res.k_trace.push_back(st.urn.K());
    for (int j = 0; j < J; ++j) res.pop_k_trace[j].push_back(st.urn.pop_k(j));
    res.tau_trace.push_back(st.urn.tau_for(0));
    if (opt.hierarchical) res.gamma_trace.push_back(st.urn.gamma);

    for (int j = 0; j < J; ++j)
      for (size_t i = 0; i < st.haplotype[j].size(); ++i)
        ++pair_counts[j][i][canonical_pair(st.haplotype[j][i][0], st.haplotype[j][i][1])];

    std::vector<long> pop_tot(J, 0);
    for (int j = 0; j < J; ++j)
      for (int c : st.urn.m[j]) pop_tot[j] += c;

    double th_num = 0, th_den = 0;
    for (int k = 0; k < st.urn.K(); ++k) {
      const Founder& f = st.founders[k];
      FounderAgg& agg = founder_agg[f.pattern];
      if (agg.freq_sum.empty()) {
        agg.freq_sum.assign(J, 0.0);
        agg.used.assign(J, 0);
      }
      const double theta_k = (opt.hp.alpha_h + f.stats.l_prime) /
                             (opt.hp.alpha_h + opt.hp.beta_h + f.stats.l + f.stats.l_prime);
      agg.theta_sum += theta_k;
      ++agg.present;
      for (int j = 0; j < J; ++j) {
        if (pop_tot[j] > 0) agg.freq_sum[j] += static_cast<double>(st.urn.m[j][k]) / pop_tot[j];
        if (st.urn.m[j][k] > 0) ++agg.used[j];
      }
      th_num += theta_k * f.n_assigned;
      th_den += f.n_assigned;
    }
    theta_sweep_sum += th_den > 0 ? th_num / th_den : 0.0;
  }

  res.theta_hat = theta_sweep_sum / opt.samples;

  // decode individuals
  for (int j = 0; j < J; ++j) {
    const auto& inds = data.populations[j].individuals;
    for (size_t i = 0; i < inds.size(); ++i) {
      PairKey key = decode_pair(pair_counts[j][i], inds[i].genotype);
      IndividualPhase p;
      p.id = inds[i].id;
      p.population = data.populations[j].id;
      p.mode_frequency =
          static_cast<double>(pair_counts[j][i][key]) / static_cast<double>(opt.samples);
      p.h0 = std::move(key.first);
      p.h1 = std::move(key.second);
      for (int t = 0; t < T; ++t) {
        const GenotypeSite& g = inds[i].genotype[t];
        if (g.is_missing() || site_consistent(g, p.h0[t], p.h1[t])) continue;
        // force the decoded pair back onto the observed genotype
        if (p.h0[t] == g.lo)
          p.h1[t] = g.hi;
        else if (p.h0[t] == g.hi)
          p.h1[t] = g.lo;
        else if (p.h1[t] == g.lo)
          p.h0[t] = g.hi;
        else if (p.h1[t] == g.hi)
          p.h0[t] = g.lo;
        else {
          p.h0[t] = g.lo;
          p.h1[t] = g.hi;
        }
        ++p.repaired_sites;
      }
      res.individuals.push_back(std::move(p));
    }
  }

  // founder report, pattern-keyed across sweeps
  for (const auto& [pattern, agg] : founder_agg) {
    FounderReportEntry e;
    e.pattern = pattern;
    e.pop_frequency.resize(J);
    for (int j = 0; j < J; ++j) {
      e.pop_frequency[j] = agg.freq_sum[j] / opt.samples;
      if (agg.used[j] > 0) e.populations.push_back(j);
    }
    e.theta_hat = agg.present > 0 ? agg.theta_sum / agg.present : 0.0;
    e.support = static_cast<double>(agg.present) / opt.samples;
    res.founders.push_back(std::move(e));
  }
  std::sort(res.founders.begin(), res.founders.end(),
            [](const FounderReportEntry& a, const FounderReportEntry& b) {
              double ta = 0, tb = 0;
              for (double f : a.pop_frequency) ta += f;
              for (double f : b.pop_frequency) tb += f;
              if (ta != tb) return ta > tb;
              return a.pattern < b.pattern;
            });

  // per-population haplotype frequencies from the decoded strands
  res.hap_frequencies.resize(J);
  {
    size_t pos = 0;
    for (int j = 0; j < J; ++j) {
      std::vector<IndividualPhase> pop(res.individuals.begin() + pos,
                                       res.individuals.begin() + pos +
                                           data.populations[j].individuals.size());
      res.hap_frequencies[j] = strand_frequencies(pop);
      pos += pop.size();
    }
  }

  summarize_traces(res);
  return res;
}

}  // namespace popphase::detail

namespace popphase {

PhasingResult run_dp(const Dataset& data, const DPConfig& cfg) {
  cfg.validate();
  if (data.n_populations() != 1)
    throw InputError("flat sampler requires a single population (pool first)");
  detail::ChainOptions opt;
  opt.hp = cfg.hp;
  opt.burnin = cfg.burnin;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.init_tau = cfg.init_tau;
  opt.hierarchical = false;
  opt.resample_concentrations = cfg.resample_tau;
  opt.pin_xi = cfg.pin_xi;
  opt.check_invariants = cfg.check_invariants;
  return detail::run_chain(data, opt, "dp");
}

PhasingResult run_hdp(const Dataset& data, const HDPConfig& cfg) {
  cfg.validate();
  detail::ChainOptions opt;
  opt.hp = cfg.hp;
  opt.burnin = cfg.burnin;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.init_tau = cfg.init_tau;
  opt.init_gamma = cfg.init_gamma;
  opt.hierarchical = true;
  opt.shared_tau = cfg.shared_tau;
  opt.resample_concentrations = cfg.resample_concentrations;
  opt.pin_xi = cfg.pin_xi;
  opt.check_invariants = cfg.check_invariants;
  return detail::run_chain(data, opt, "hdp");
}

}  // namespace popphase
