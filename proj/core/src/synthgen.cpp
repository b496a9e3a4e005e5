#include "popphase/synthgen.hpp"

#include <set>

#include "popphase/likelihood.hpp"
#include "popphase/rng.hpp"

namespace popphase {

void SimSpec::validate() const {
  if (populations < 1 || individuals_per_pop < 1 || founders_per_pop < 1 || n_loci < 1)
    throw InputError("simulation counts must be positive");
  if (shared_founders < 0 || shared_founders > founders_per_pop)
    throw InputError("shared founder count must be within founders-per-population");
  if (!(theta >= 0 && theta < 1) || !(genotype_error >= 0 && genotype_error < 1))
    throw InputError("theta and genotype_error must be in [0,1)");
  if (alphabet_size < 2) throw InputError("alphabet size must be >= 2");
  if (!founder_pool.empty()) {
    if (static_cast<int>(founder_pool.size()) != total_founders())
      throw InputError("supplied founder pool has wrong size, expected " +
                       std::to_string(total_founders()));
    for (const auto& f : founder_pool)
      if (static_cast<int>(f.size()) != n_loci)
        throw InputError("supplied founder length differs from n_loci");
  }
}

namespace {

Haplotype random_haplotype(int len, int alphabet, Rng& rng) {
  Haplotype h(len);
  for (int t = 0; t < len; ++t)
    h[t] = static_cast<Allele>(rng.uniform_int(static_cast<std::uint32_t>(alphabet)));
  return h;
}

Haplotype draw_distinct(int len, int alphabet, const std::set<Haplotype>& taken, Rng& rng) {
  for (int tries = 0; tries < 1000; ++tries) {
    Haplotype h = random_haplotype(len, alphabet, rng);
    if (!taken.count(h)) return h;
  }
  throw ResourceError("could not draw a distinct founder after 1000 tries");
}

Allele mutate(Allele a, double theta, int alphabet, Rng& rng) {
  if (!rng.bernoulli(theta)) return a;
  int off = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(alphabet - 1)));
  return static_cast<Allele>(off >= a ? off + 1 : off);
}

// exact draw from the genotyping channel given the true pair
GenotypeSite corrupt(const GenotypeSite& truth, Allele h0, Allele h1, double xi, int alphabet,
                     Rng& rng) {
  if (rng.bernoulli(xi)) return truth;
  const auto pairs = all_unordered_pairs(alphabet);
  std::vector<double> w(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    w[i] = genotype_mismatch_class(pairs[i], h0, h1) == MismatchClass::Exact
               ? 0.0
               : p_g_site(pairs[i], h0, h1, xi, alphabet);
  }
  return pairs[static_cast<size_t>(rng.pick(w))];
}

}  // namespace

std::vector<Haplotype> make_founders(const SimSpec& spec) {
  Rng rng(derive_seed(spec.seed, 0xF0ull));
  std::set<Haplotype> taken;
  std::vector<Haplotype> pool;
  pool.reserve(spec.total_founders());
  for (int f = 0; f < spec.total_founders(); ++f) {
    Haplotype h = draw_distinct(spec.n_loci, spec.alphabet_size, taken, rng);
    taken.insert(h);
    pool.push_back(std::move(h));
  }
  return pool;
}

std::vector<Haplotype> extend_founders(const std::vector<Haplotype>& pool, int new_len,
                                       int alphabet_size, std::uint64_t seed) {
  if (pool.empty()) return pool;
  const int old_len = static_cast<int>(pool[0].size());
  if (new_len < old_len) throw InputError("new length must be >= current length");
  if (new_len == old_len) return pool;

  Rng rng(derive_seed(seed, 0xE1ull));
  std::vector<Haplotype> out = pool;
  std::set<Haplotype> taken;
  for (auto& h : out) {
    for (int tries = 0;; ++tries) {
      Haplotype ext = h;
      ext.resize(new_len);
      for (int t = old_len; t < new_len; ++t)
        ext[t] = static_cast<Allele>(rng.uniform_int(static_cast<std::uint32_t>(alphabet_size)));
      if (!taken.count(ext)) {
        taken.insert(ext);
        h = std::move(ext);
        break;
      }
      if (tries >= 1000) throw ResourceError("founder extension kept colliding");
    }
  }
  return out;
}

std::pair<Dataset, GroundTruth> generate(const SimSpec& spec) {
  spec.validate();

  GroundTruth truth;
  truth.founders = spec.founder_pool.empty() ? make_founders(spec) : spec.founder_pool;
  truth.shared_count = spec.shared_founders;
  {
    std::set<Haplotype> seen(truth.founders.begin(), truth.founders.end());
    if (static_cast<int>(seen.size()) != spec.total_founders())
      throw InputError("founder pool contains duplicates");
  }

  const int priv = spec.founders_per_pop - spec.shared_founders;
  truth.pop_founders.resize(spec.populations);
  for (int j = 0; j < spec.populations; ++j) {
    for (int s = 0; s < spec.shared_founders; ++s) truth.pop_founders[j].push_back(s);
    for (int p = 0; p < priv; ++p)
      truth.pop_founders[j].push_back(spec.shared_founders + j * priv + p);
  }

  Dataset data;
  data.alphabet.size = spec.alphabet_size;
  data.populations.resize(spec.populations);

  Rng rng(derive_seed(spec.seed, 0xD2ull));
  const double xi = 1.0 - spec.genotype_error;

  for (int j = 0; j < spec.populations; ++j) {
    Population& pop = data.populations[j];
    pop.id = "pop" + std::to_string(j + 1);
    for (int i = 0; i < spec.individuals_per_pop; ++i) {
      GroundTruth::TrueIndividual ti;
      ti.id = pop.id + "_ind" + std::to_string(i + 1);
      ti.pop = j;
      Genotype g(spec.n_loci);
      for (int e = 0; e < 2; ++e) {
        const int local = static_cast<int>(
            rng.uniform_int(static_cast<std::uint32_t>(spec.founders_per_pop)));
        ti.founder[e] = truth.pop_founders[j][local];
        const Haplotype& a = truth.founders[ti.founder[e]];
        Haplotype h(spec.n_loci);
        for (int t = 0; t < spec.n_loci; ++t)
          h[t] = mutate(a[t], spec.theta, spec.alphabet_size, rng);
        ti.haplotype[e] = std::move(h);
      }
      for (int t = 0; t < spec.n_loci; ++t) {
        GenotypeSite s =
            canonicalize_genotype(ti.haplotype[0][t], ti.haplotype[1][t], data.alphabet);
        if (spec.genotype_error > 0)
          s = corrupt(s, ti.haplotype[0][t], ti.haplotype[1][t], xi, spec.alphabet_size, rng);
        g[t] = s;
      }
      pop.individuals.push_back({ti.id, std::move(g)});
      truth.individuals.push_back(std::move(ti));
    }
  }
  return {std::move(data), std::move(truth)};
}

}  // namespace popphase
