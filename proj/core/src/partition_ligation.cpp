#include "popphase/partition_ligation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace popphase {

void LigationConfig::validate() const {
  if (block_length < 2) throw InputError("block length must be >= 2");
  if (entropy_threshold < 0) throw InputError("entropy threshold must be >= 0");
  if (dirichlet_pseudocount < 0) throw InputError("pseudocount must be >= 0");
  if (gibbs_samples < 1) throw InputError("ligation needs at least one retained sweep");
  if (max_expansion_bits < 1 || max_expansion_bits > 24)
    throw InputError("max_expansion_bits out of range");
}

namespace {

struct FlatIndex {
  std::vector<std::pair<int, int>> slots;  // (population, individual)
  explicit FlatIndex(const Dataset& d) {
    for (int j = 0; j < d.n_populations(); ++j)
      for (size_t i = 0; i < d.populations[j].individuals.size(); ++i)
        slots.push_back({j, static_cast<int>(i)});
  }
  const Genotype& genotype(const Dataset& d, int f) const {
    return d.populations[slots[f].first].individuals[slots[f].second].genotype;
  }
};

Haplotype slice(const Haplotype& h, int a, int b) {
  return Haplotype(h.begin() + a, h.begin() + b);
}

Haplotype concat(const Haplotype& a, const Haplotype& b) {
  Haplotype out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// deduplicating pool builder with deterministic insertion order
struct PoolBuilder {
  std::vector<Haplotype> pool;
  std::map<Haplotype, int> index;
  int add(const Haplotype& h) {
    auto [it, fresh] = index.emplace(h, static_cast<int>(pool.size()));
    if (fresh) pool.push_back(h);
    return it->second;
  }
};

Block block_from_result(const PhasingResult& res, int start, int end) {
  Block b;
  b.start = start;
  b.end = end;
  PoolBuilder pb;
  for (const auto& ind : res.individuals) {
    const int p = pb.add(ind.h0);
    const int q = pb.add(ind.h1);
    b.pairs.push_back({p, q});
  }
  b.pool = std::move(pb.pool);
  return b;
}

// consistent merge orientations of an individual's two block pairs; orientation
// o pairs left strand x with right strand (x ^ o)
std::vector<int> consistent_orientations(const Block& left, const Block& right, int overlap,
                                         const std::array<int, 2>& lp,
                                         const std::array<int, 2>& rp) {
  std::vector<int> out;
  const int lo = left.length() - overlap;
  for (int o = 0; o < 2; ++o) {
    bool ok = true;
    for (int e = 0; e < 2 && ok; ++e) {
      const Haplotype& L = left.pool[lp[e]];
      const Haplotype& R = right.pool[rp[e ^ o]];
      for (int t = 0; t < overlap; ++t)
        if (L[lo + t] != R[t]) {
          ok = false;
          break;
        }
    }
    if (ok) out.push_back(o);
  }
  return out;
}

Haplotype merge_strands(const Block& left, const Block& right, int overlap, const Haplotype& L,
                        const Haplotype& R) {
  (void)right;
  (void)overlap;
  Haplotype out = L;
  out.insert(out.end(), R.begin() + (left.end - right.start), R.end());
  return out;
}

double pair_entropy(const std::vector<std::array<int, 2>>& pairs) {
  std::map<std::pair<int, int>, int> counts;
  for (const auto& p : pairs) ++counts[{std::min(p[0], p[1]), std::max(p[0], p[1])}];
  const double n = static_cast<double>(pairs.size());
  double h = 0;
  for (const auto& [k, c] : counts) {
    const double f = c / n;
    h -= f * std::log(f);
  }
  return h;
}

}  // namespace

std::vector<Dataset> partition(const Dataset& data, int block_len) {
  if (block_len < 2) throw InputError("block length must be >= 2");
  const int T = data.n_loci();
  std::vector<Dataset> out;
  for (int start = 0; start < T; start += block_len) {
    const int end = std::min(T, start + block_len);
    Dataset d;
    d.alphabet = data.alphabet;
    d.populations.resize(data.populations.size());
    for (size_t j = 0; j < data.populations.size(); ++j) {
      d.populations[j].id = data.populations[j].id;
      for (const auto& ind : data.populations[j].individuals)
        d.populations[j].individuals.push_back(
            {ind.id, Genotype(ind.genotype.begin() + start, ind.genotype.begin() + end)});
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Block> phase_atomic(const Dataset& data, const HDPConfig& cfg,
                                const LigationConfig& lig) {
  const std::vector<Dataset> parts = partition(data, lig.block_length);
  std::vector<Block> blocks;
  int start = 0;
  for (size_t b = 0; b < parts.size(); ++b) {
    HDPConfig c = cfg;
    c.seed = derive_seed(cfg.seed, 0x0A00 + b);
    const PhasingResult res = run_hdp(parts[b], c);
    const int end = start + parts[b].n_loci();
    blocks.push_back(block_from_result(res, start, end));
    start = end;
  }
  return blocks;
}

std::vector<Haplotype> stitch_candidates(const Block& left, const Block& right, int overlap,
                                         const Dataset& data, int max_expansion_bits,
                                         std::vector<char>* capped) {
  if (left.end - overlap != right.start)
    throw InvariantError("blocks are not adjacent with the stated overlap");
  const FlatIndex flat(data);
  if (left.pairs.size() != flat.slots.size() || right.pairs.size() != flat.slots.size())
    throw InvariantError("block pair tables do not cover the dataset");

  PoolBuilder pb;
  if (capped) capped->assign(flat.slots.size(), 0);

  const int lo = left.length() - overlap;  // overlap offset inside left range

  for (size_t f = 0; f < flat.slots.size(); ++f) {
    const auto& lp = left.pairs[f];
    const auto& rp = right.pairs[f];

    if (overlap == 0) {
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          pb.add(concat(left.pool[lp[a]], right.pool[rp[b]]));
      continue;
    }

    const std::vector<int> oks = consistent_orientations(left, right, overlap, lp, rp);
    if (!oks.empty()) {
      for (int o : oks) {
        for (int e = 0; e < 2; ++e)
          pb.add(merge_strands(left, right, overlap, left.pool[lp[e]],
                               right.pool[rp[e ^ o]]));
      }
      continue;
    }

    // inconsistent overlap: flank variants times allele combinations on the
    // ambiguous overlap loci
    const Genotype& g = flat.genotype(data, static_cast<int>(f));
    std::vector<Haplotype> lflank = {slice(left.pool[lp[0]], 0, lo),
                                     slice(left.pool[lp[1]], 0, lo)};
    if (lflank[0] == lflank[1]) lflank.pop_back();
    std::vector<Haplotype> rflank = {slice(right.pool[rp[0]], overlap, right.length()),
                                     slice(right.pool[rp[1]], overlap, right.length())};
    if (rflank[0] == rflank[1]) rflank.pop_back();

    std::vector<std::vector<Allele>> site_options(overlap);
    double combos = 1;
    for (int t = 0; t < overlap; ++t) {
      const GenotypeSite& s = g[right.start + t];
      std::set<Allele> opts;
      if (s.is_missing()) {
        opts.insert(left.pool[lp[0]][lo + t]);
        opts.insert(left.pool[lp[1]][lo + t]);
        opts.insert(right.pool[rp[0]][t]);
        opts.insert(right.pool[rp[1]][t]);
      } else if (s.is_het()) {
        opts.insert(s.lo);
        opts.insert(s.hi);
      } else {
        opts.insert(s.lo);
      }
      site_options[t].assign(opts.begin(), opts.end());
      combos *= static_cast<double>(site_options[t].size());
    }

    if (combos * lflank.size() * rflank.size() > std::ldexp(1.0, max_expansion_bits)) {
      // over the cap: contribute only the direct (unexpanded) stitches and
      // leave the block for whole-range re-phasing
      if (capped) (*capped)[f] = 1;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          pb.add(concat(slice(left.pool[lp[a]], 0, left.length()),
                        slice(right.pool[rp[b]], overlap, right.length())));
      continue;
    }

    std::vector<int> pickidx(overlap, 0);
    for (const auto& lf : lflank) {
      for (const auto& rf : rflank) {
        std::fill(pickidx.begin(), pickidx.end(), 0);
        while (true) {
          Haplotype h = lf;
          for (int t = 0; t < overlap; ++t) h.push_back(site_options[t][pickidx[t]]);
          h.insert(h.end(), rf.begin(), rf.end());
          pb.add(h);
          int t = 0;
          while (t < overlap) {
            if (++pickidx[t] < static_cast<int>(site_options[t].size())) break;
            pickidx[t] = 0;
            ++t;
          }
          if (t == overlap) break;
        }
      }
    }
  }

  return pb.pool;
}

Block ligate(const Block& left, const Block& right, int overlap, const Dataset& data,
             const LigationConfig& lig, Rng& rng, LigateDiag* diag) {
  const FlatIndex flat(data);
  std::vector<char> capped;
  const std::vector<Haplotype> pool =
      stitch_candidates(left, right, overlap, data, lig.max_expansion_bits, &capped);
  const int S = static_cast<int>(pool.size());
  const int n_ind = static_cast<int>(flat.slots.size());
  const int start = left.start;
  const int end = right.end;
  const int lo = left.length() - overlap;

  // deterministic merges for overlap-consistent individuals
  std::map<Haplotype, int> index;
  for (int p = 0; p < S; ++p) index.emplace(pool[p], p);

  std::vector<std::array<int, 2>> pairs(n_ind, {-1, -1});
  std::vector<char> fixed(n_ind, 0);
  (void)lo;

  for (int f = 0; f < n_ind; ++f) {
    if (overlap == 0) continue;
    const std::vector<int> oks =
        consistent_orientations(left, right, overlap, left.pairs[f], right.pairs[f]);
    if (oks.size() == 1) {
      const int o = oks[0];
      const Haplotype m0 = merge_strands(left, right, overlap, left.pool[left.pairs[f][0]],
                                         right.pool[right.pairs[f][0 ^ o]]);
      const Haplotype m1 = merge_strands(left, right, overlap, left.pool[left.pairs[f][1]],
                                         right.pool[right.pairs[f][1 ^ o]]);
      pairs[f] = {index.at(m0), index.at(m1)};
      fixed[f] = 1;
    }
  }

  // candidate pairs for the rest
  std::vector<std::vector<std::pair<int, int>>> cands(n_ind);
  for (int f = 0; f < n_ind; ++f) {
    if (fixed[f]) continue;
    const Genotype& g = flat.genotype(data, f);
    for (int p = 0; p < S; ++p) {
      for (int q = p; q < S; ++q) {
        bool ok = true;
        for (int t = start; t < end && ok; ++t)
          ok = site_consistent(g[t], pool[p][t - start], pool[q][t - start]);
        if (ok) cands[f].push_back({p, q});
      }
    }
    if (cands[f].empty())
      throw InvariantError(
          "no genotype-consistent candidate pair for individual " +
          data.populations[flat.slots[f].first].individuals[flat.slots[f].second].id);
    pairs[f] = {cands[f][0].first, cands[f][0].second};
  }

  // finite-mixture Gibbs under a symmetric Dirichlet over the pool
  const double delta = lig.dirichlet_pseudocount > 0 ? lig.dirichlet_pseudocount : 1.0 / S;
  std::vector<long> nu(S, 0);
  for (int f = 0; f < n_ind; ++f) {
    ++nu[pairs[f][0]];
    ++nu[pairs[f][1]];
  }

  std::vector<std::map<std::pair<int, int>, long>> tallies(n_ind);
  std::vector<double> w;
  const int total = lig.gibbs_burnin + lig.gibbs_samples;
  for (int sweep = 0; sweep < total; ++sweep) {
    for (int f = 0; f < n_ind; ++f) {
      if (fixed[f]) continue;
      --nu[pairs[f][0]];
      --nu[pairs[f][1]];
      w.resize(cands[f].size());
      for (size_t c = 0; c < cands[f].size(); ++c) {
        const auto [p, q] = cands[f][c];
        w[c] = p == q ? (nu[p] + delta) * (nu[p] + delta + 1)
                      : 2.0 * (nu[p] + delta) * (nu[q] + delta);
      }
      const auto [p, q] = cands[f][static_cast<size_t>(rng.pick(w))];
      pairs[f] = {p, q};
      ++nu[p];
      ++nu[q];
    }
    if (sweep >= lig.gibbs_burnin)
      for (int f = 0; f < n_ind; ++f)
        if (!fixed[f]) ++tallies[f][{pairs[f][0], pairs[f][1]}];
  }

  for (int f = 0; f < n_ind; ++f) {
    if (fixed[f]) continue;
    long best = -1;
    std::pair<int, int> pick{-1, -1};
    for (const auto& [key, c] : tallies[f])
      if (c > best || (c == best && key < pick)) {
        best = c;
        pick = key;
      }
    pairs[f] = {pick.first, pick.second};
  }

  // prune the pool to entries the final pairs use
  Block out;
  out.start = start;
  out.end = end;
  PoolBuilder pb;
  for (int f = 0; f < n_ind; ++f) {
    const int p = pb.add(pool[pairs[f][0]]);
    const int q = pb.add(pool[pairs[f][1]]);
    out.pairs.push_back({p, q});
  }
  out.pool = std::move(pb.pool);

  if (diag) {
    diag->pair_entropy = pair_entropy(out.pairs);
    diag->any_capped = std::any_of(capped.begin(), capped.end(), [](char c) { return c != 0; });
  }
  return out;
}

namespace {

Dataset slice_dataset(const Dataset& data, int start, int end) {
  Dataset d;
  d.alphabet = data.alphabet;
  d.populations.resize(data.populations.size());
  for (size_t j = 0; j < data.populations.size(); ++j) {
    d.populations[j].id = data.populations[j].id;
    for (const auto& ind : data.populations[j].individuals)
      d.populations[j].individuals.push_back(
          {ind.id, Genotype(ind.genotype.begin() + start, ind.genotype.begin() + end)});
  }
  return d;
}

Block rephase_block(const Dataset& data, int start, int end, const HDPConfig& cfg,
                    std::uint64_t stream) {
  HDPConfig c = cfg;
  c.seed = derive_seed(cfg.seed, stream);
  const PhasingResult res = run_hdp(slice_dataset(data, start, end), c);
  return block_from_result(res, start, end);
}

}  // namespace

PhasingResult phase_long(const Dataset& data, const HDPConfig& cfg, const LigationConfig& lig) {
  cfg.validate();
  lig.validate();
  const int T = data.n_loci();
  if (T <= lig.block_length) return run_hdp(data, cfg);

  std::vector<Block> atoms = phase_atomic(data, cfg, lig);
  const int L = static_cast<int>(atoms.size());

  // step 2: pairwise ligation of every neighbouring pair, overlap 0, giving
  // L-1 blocks of ~2T loci that overlap on T; high-entropy or capped merges
  // are re-phased directly
  std::vector<Block> level;
  for (int i = 0; i + 1 < L; ++i) {
    Rng rng(derive_seed(cfg.seed, 0x0B00 + i));
    LigateDiag diag;
    Block b = ligate(atoms[i], atoms[i + 1], 0, data, lig, rng, &diag);
    if (diag.any_capped || diag.pair_entropy > lig.entropy_threshold)
      b = rephase_block(data, b.start, b.end, cfg, 0x0C00 + i);
    level.push_back(std::move(b));
  }
  if (level.empty()) level.push_back(std::move(atoms[0]));

  // step 3: hierarchical ligation of overlapping neighbours, pairing (1,2),
  // (3,4), ... each round and carrying any odd block up
  std::uint64_t stream = 0x0D00;
  while (level.size() > 1) {
    std::vector<Block> next;
    for (size_t i = 0; i + 1 < level.size(); i += 2) {
      const int overlap = level[i].end - level[i + 1].start;
      if (overlap <= 0) throw InvariantError("adjacent blocks lost their overlap");
      Rng rng(derive_seed(cfg.seed, stream));
      LigateDiag diag;
      Block b = ligate(level[i], level[i + 1], overlap, data, lig, rng, &diag);
      if (diag.any_capped) b = rephase_block(data, b.start, b.end, cfg, stream + 0x100);
      ++stream;
      next.push_back(std::move(b));
    }
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level = std::move(next);
  }

  const Block& full = level[0];
  if (full.start != 0 || full.end != T) throw InvariantError("final block does not cover all loci");

  PhasingResult res;
  res.model = "hdp+pl";
  res.alphabet = data.alphabet;
  res.seed = cfg.seed;
  const FlatIndex flat(data);
  for (size_t f = 0; f < flat.slots.size(); ++f) {
    const auto [j, i] = flat.slots[f];
    IndividualPhase p;
    p.id = data.populations[j].individuals[i].id;
    p.population = data.populations[j].id;
    const Haplotype& a = full.pool[full.pairs[f][0]];
    const Haplotype& b = full.pool[full.pairs[f][1]];
    if (a <= b) {
      p.h0 = a;
      p.h1 = b;
    } else {
      p.h0 = b;
      p.h1 = a;
    }
    p.mode_frequency = 1.0;
    res.individuals.push_back(std::move(p));
  }

  res.k_trace.push_back(static_cast<int>(full.pool.size()));
  res.pop_k_trace.resize(data.n_populations());
  {
    size_t pos = 0;
    for (int j = 0; j < data.n_populations(); ++j) {
      std::set<int> used;
      const size_t nj = data.populations[j].individuals.size();
      for (size_t i = 0; i < nj; ++i) {
        used.insert(full.pairs[pos + i][0]);
        used.insert(full.pairs[pos + i][1]);
      }
      res.pop_k_trace[j].push_back(static_cast<int>(used.size()));
      pos += nj;
    }
  }
  res.hap_frequencies.resize(data.n_populations());
  {
    size_t pos = 0;
    for (int j = 0; j < data.n_populations(); ++j) {
      const size_t nj = data.populations[j].individuals.size();
      std::vector<IndividualPhase> sub(res.individuals.begin() + pos,
                                       res.individuals.begin() + pos + nj);
      res.hap_frequencies[j] = strand_frequencies(sub);
      pos += nj;
    }
  }
  summarize_traces(res);
  return res;
}

}  // namespace popphase
