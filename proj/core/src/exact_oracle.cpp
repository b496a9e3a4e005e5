#include "popphase/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "popphase/likelihood.hpp"

namespace popphase {

namespace {

// restricted growth strings = set partitions; block count capped
void enumerate_partitions(int n_slots, int k_max, std::vector<std::vector<int>>& out) {
  std::vector<int> a(n_slots, 0);
  auto rec = [&](auto&& self, int s, int blocks) -> void {
    if (s == n_slots) {
      out.push_back(a);
      return;
    }
    for (int b = 0; b <= blocks && b < k_max; ++b) {
      a[s] = b;
      self(self, s + 1, std::max(blocks, b + 1));
    }
  };
  rec(rec, 0, 0);
}

}  // namespace

// sequential urn product over slots in order; exchangeable, so the order is
// irrelevant
double partition_prior(const std::vector<int>& part, double tau) {
  std::vector<int> count;
  double p = 1.0;
  for (size_t s = 0; s < part.size(); ++s) {
    const double denom = static_cast<double>(s) + tau;
    const int b = part[s];
    if (b == static_cast<int>(count.size())) {
      p *= tau / denom;
      count.push_back(1);
    } else {
      p *= count[b] / denom;
      ++count[b];
    }
  }
  return p;
}

namespace {

// ordered pairs an individual may hold; the hard-consistency domain forces
// the observed genotype at non-missing sites
void pair_domain(const Genotype& g, int A, bool pin_xi, std::vector<UnorderedPair>& out_ordered) {
  const int T = static_cast<int>(g.size());
  std::vector<std::pair<Haplotype, Haplotype>> acc{{Haplotype{}, Haplotype{}}};
  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<Allele, Allele>> opts;
    if (!pin_xi) {
      for (int x = 0; x < A; ++x)
        for (int y = 0; y < A; ++y)
          opts.push_back({static_cast<Allele>(x), static_cast<Allele>(y)});
    } else if (g[t].is_missing()) {
      for (int x = 0; x < A; ++x)
        for (int y = 0; y < A; ++y)
          opts.push_back({static_cast<Allele>(x), static_cast<Allele>(y)});
    } else if (g[t].is_het()) {
      opts.push_back({g[t].lo, g[t].hi});
      opts.push_back({g[t].hi, g[t].lo});
    } else {
      opts.push_back({g[t].lo, g[t].lo});
    }
    std::vector<std::pair<Haplotype, Haplotype>> next;
    next.reserve(acc.size() * opts.size());
    for (const auto& [h0, h1] : acc) {
      for (const auto& [x, y] : opts) {
        auto n0 = h0;
        auto n1 = h1;
        n0.push_back(x);
        n1.push_back(y);
        next.push_back({std::move(n0), std::move(n1)});
      }
    }
    acc = std::move(next);
  }
  out_ordered = std::move(acc);
}

}  // namespace

double enumeration_size(const OracleInstance& inst) {
  const auto& inds = inst.data.populations.at(0).individuals;
  const int A = inst.data.alphabet.size;
  double configs = 1;
  for (const auto& ind : inds) {
    double d = 1;
    for (const auto& s : ind.genotype) {
      if (!inst.pin_xi || s.is_missing())
        d *= static_cast<double>(A) * A;
      else if (s.is_het())
        d *= 2;
    }
    configs *= d;
  }
  const int S = 2 * static_cast<int>(inds.size());
  const int kmax = std::min(inst.k_max, S);
  // partition count with at most kmax blocks (Stirling sum)
  std::vector<std::vector<double>> st(S + 1, std::vector<double>(kmax + 1, 0.0));
  st[0][0] = 1;
  for (int n = 1; n <= S; ++n)
    for (int k = 1; k <= kmax; ++k) st[n][k] = st[n - 1][k - 1] + k * st[n - 1][k];
  double parts = 0;
  for (int k = 1; k <= kmax; ++k) parts += st[S][k];
  return configs * parts;
}

double phase_tv(const std::map<UnorderedPair, double>& exact,
                const std::map<UnorderedPair, double>& empirical) {
  double tv = 0;
  for (const auto& [k, v] : exact) {
    auto it = empirical.find(k);
    tv += std::abs(v - (it == empirical.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : empirical)
    if (!exact.count(k)) tv += v;
  return tv / 2.0;
}

ExactPosterior exact_posterior(const OracleInstance& inst) {
  if (inst.data.n_populations() != 1) throw InputError("oracle instance must be one population");
  inst.hp.validate();
  const auto& inds = inst.data.populations[0].individuals;
  const int I = static_cast<int>(inds.size());
  const int T = inst.data.n_loci();
  const int A = inst.data.alphabet.size;
  const int S = 2 * I;

  const double size = enumeration_size(inst);
  if (size > inst.max_terms)
    throw ResourceError("oracle enumeration would need about " + std::to_string(size) +
                        " terms, over the bound of " + std::to_string(inst.max_terms));

  std::vector<std::vector<UnorderedPair>> domains(I);
  for (int i = 0; i < I; ++i) pair_domain(inds[i].genotype, A, inst.pin_xi, domains[i]);

  std::vector<std::vector<int>> partitions;
  enumerate_partitions(S, std::min(inst.k_max, S), partitions);
  std::vector<double> part_prior(partitions.size());
  std::vector<int> part_blocks(partitions.size());
  for (size_t p = 0; p < partitions.size(); ++p) {
    part_prior[p] = partition_prior(partitions[p], inst.tau);
    int b = 0;
    for (int x : partitions[p]) b = std::max(b, x + 1);
    part_blocks[p] = b;
  }

  // collapsed block marginal exp table over (l, l')
  const int max_lt = S * T;
  std::vector<std::vector<double>> marg(max_lt + 1);
  for (int l = 0; l <= max_lt; ++l) {
    marg[l].resize(max_lt - l + 1);
    for (int lp = 0; lp + l <= max_lt; ++lp)
      marg[l][lp] = std::exp(
          log_collapsed_h_marginal(MutationStats{l, lp}, inst.hp.alpha_h, inst.hp.beta_h, A));
  }
  const double pattern_prior_log = -std::log(static_cast<double>(A));

  // founder-pattern sum for one block, by convolving per-locus match-count
  // polynomials; memoized on the count table
  std::map<std::string, double> block_cache;
  std::vector<std::vector<int>> cnt(T, std::vector<int>(A, 0));
  auto block_marginal = [&](const std::vector<const Haplotype*>& members) -> double {
    const int N = static_cast<int>(members.size());
    std::string key;
    key.reserve(static_cast<size_t>(T) * A + 1);
    for (int t = 0; t < T; ++t) {
      for (int a = 0; a < A; ++a) cnt[t][a] = 0;
      for (const Haplotype* h : members) ++cnt[t][(*h)[t]];
      for (int a = 0; a < A; ++a) key.push_back(static_cast<char>(cnt[t][a]));
    }
    auto it = block_cache.find(key);
    if (it != block_cache.end()) return it->second;

    std::vector<double> poly{1.0};
    for (int t = 0; t < T; ++t) {
      std::vector<double> next(poly.size() + N, 0.0);
      for (size_t L = 0; L < poly.size(); ++L) {
        if (poly[L] == 0) continue;
        for (int a = 0; a < A; ++a) next[L + cnt[t][a]] += poly[L];
      }
      poly = std::move(next);
    }
    const long NT = static_cast<long>(N) * T;
    double sum = 0;
    for (size_t L = 0; L < poly.size(); ++L)
      if (poly[L] > 0) sum += poly[L] * marg[L][NT - L];
    const double v = sum * std::exp(T * pattern_prior_log);
    block_cache.emplace(std::move(key), v);
    return v;
  };

  const double log_beta_g =
      std::lgamma(inst.hp.alpha_g) + std::lgamma(inst.hp.beta_g) -
      std::lgamma(inst.hp.alpha_g + inst.hp.beta_g);

  ExactPosterior post;
  post.phase_marginals.resize(I);
  double Z = 0;

  std::vector<size_t> choice(I, 0);
  std::vector<const Haplotype*> slot_h(S);
  std::vector<const Haplotype*> members;
  members.reserve(S);

  while (true) {
    for (int i = 0; i < I; ++i) {
      slot_h[2 * i] = &domains[i][choice[i]].first;
      slot_h[2 * i + 1] = &domains[i][choice[i]].second;
    }

    // genotyping channel, collapsed over xi; constant 1 when pinned
    double chan = 1.0;
    if (!inst.pin_xi) {
      GenotypeStats gs;
      double mu_prod = 1.0;
      for (int i = 0; i < I; ++i) {
        for (int t = 0; t < T; ++t) {
          const GenotypeSite& g = inds[i].genotype[t];
          if (g.is_missing()) continue;
          const Allele x = (*slot_h[2 * i])[t];
          const Allele y = (*slot_h[2 * i + 1])[t];
          switch (genotype_mismatch_class(g, x, y)) {
            case MismatchClass::Exact: ++gs.u; break;
            case MismatchClass::Diff1: {
              ++gs.u1;
              mu_prod *= mismatch_weights(x, y, A).mu1;
              break;
            }
            case MismatchClass::Diff2: {
              ++gs.u2;
              mu_prod *= mismatch_weights(x, y, A).mu2;
              break;
            }
          }
        }
      }
      chan = mu_prod * std::exp(std::lgamma(inst.hp.alpha_g + gs.u) +
                                std::lgamma(inst.hp.beta_g + gs.u1 + gs.u2) -
                                std::lgamma(inst.hp.alpha_g + inst.hp.beta_g + gs.u + gs.u1 +
                                            gs.u2) -
                                log_beta_g);
    }

    if (chan > 0) {
      double config_mass = 0;
      std::vector<double> config_k;  // mass per block count, 1-based
      for (size_t p = 0; p < partitions.size(); ++p) {
        const auto& part = partitions[p];
        double w = part_prior[p];
        for (int b = 0; b < part_blocks[p] && w > 0; ++b) {
          members.clear();
          for (int s = 0; s < S; ++s)
            if (part[s] == b) members.push_back(slot_h[s]);
          w *= block_marginal(members);
        }
        if (w <= 0) continue;
        config_mass += w;
        if (static_cast<int>(config_k.size()) < part_blocks[p])
          config_k.resize(part_blocks[p], 0.0);
        config_k[part_blocks[p] - 1] += w;
      }
      const double term = chan * config_mass;
      if (term > 0) {
        Z += term;
        for (int i = 0; i < I; ++i) {
          const auto& pr = domains[i][choice[i]];
          UnorderedPair key = pr.first <= pr.second ? pr : UnorderedPair{pr.second, pr.first};
          post.phase_marginals[i][key] += term;
        }
        for (size_t k = 0; k < config_k.size(); ++k)
          post.k_distribution[static_cast<int>(k) + 1] += chan * config_k[k];
      }
    }

    // odometer
    int i = 0;
    while (i < I) {
      if (++choice[i] < domains[i].size()) break;
      choice[i] = 0;
      ++i;
    }
    if (i == I) break;
  }

  if (!(Z > 0)) throw InvariantError("oracle evidence is zero");
  post.log_evidence = std::log(Z);
  for (auto& m : post.phase_marginals)
    for (auto& [k, v] : m) v /= Z;
  for (auto& [k, v] : post.k_distribution) v /= Z;
  return post;
}

}  // namespace popphase
