#include "popphase/state.hpp"

#include <sstream>

namespace popphase {

void SamplerState::attach_instance_stats(int k, const Haplotype& h) {
  Founder& f = founders[static_cast<size_t>(k)];
  for (size_t t = 0; t < h.size(); ++t) {
    ++f.site_counts[t][h[t]];
    if (h[t] == f.pattern[t])
      ++f.stats.l;
    else
      ++f.stats.l_prime;
  }
  ++f.n_assigned;
}

void SamplerState::detach_instance_stats(int k, const Haplotype& h) {
  Founder& f = founders[static_cast<size_t>(k)];
  for (size_t t = 0; t < h.size(); ++t) {
    --f.site_counts[t][h[t]];
    if (h[t] == f.pattern[t])
      --f.stats.l;
    else
      --f.stats.l_prime;
  }
  --f.n_assigned;
}

void SamplerState::attach_site_stats(int k, int t, Allele h_t) {
  Founder& f = founders[static_cast<size_t>(k)];
  ++f.site_counts[t][h_t];
  if (h_t == f.pattern[t])
    ++f.stats.l;
  else
    ++f.stats.l_prime;
}

void SamplerState::detach_site_stats(int k, int t, Allele h_t) {
  Founder& f = founders[static_cast<size_t>(k)];
  --f.site_counts[t][h_t];
  if (h_t == f.pattern[t])
    --f.stats.l;
  else
    --f.stats.l_prime;
}

void SamplerState::attach_urn(int j, int k) {
  if (urn.m[j][k] == 0) ++urn.n[k];
  ++urn.m[j][k];
}

bool SamplerState::detach_urn(int j, int k) {
  --urn.m[j][k];
  if (urn.m[j][k] > 0) return false;
  --urn.n[k];
  if (urn.n[k] > 0) return false;

  // last ball anywhere: remove founder k and compact indices
  founders.erase(founders.begin() + k);
  urn.n.erase(urn.n.begin() + k);
  for (auto& row : urn.m) row.erase(row.begin() + k);
  for (auto& pop : assignment)
    for (auto& ind : pop)
      for (int e = 0; e < 2; ++e)
        if (ind[e] > k) --ind[e];
  return true;
}

int SamplerState::add_founder(Haplotype pattern) {
  Founder f;
  f.site_counts.assign(pattern.size(), std::vector<int>(alphabet_size, 0));
  f.pattern = std::move(pattern);
  founders.push_back(std::move(f));
  urn.n.push_back(0);
  for (auto& row : urn.m) row.push_back(0);
  return static_cast<int>(founders.size()) - 1;
}

void SamplerState::attach_genotype_site(const GenotypeSite& g, Allele h0, Allele h1) {
  if (g.is_missing()) return;
  switch (genotype_mismatch_class(g, h0, h1)) {
    case MismatchClass::Exact: ++gstats.u; break;
    case MismatchClass::Diff1: ++gstats.u1; break;
    case MismatchClass::Diff2: ++gstats.u2; break;
  }
}

void SamplerState::detach_genotype_site(const GenotypeSite& g, Allele h0, Allele h1) {
  if (g.is_missing()) return;
  switch (genotype_mismatch_class(g, h0, h1)) {
    case MismatchClass::Exact: --gstats.u; break;
    case MismatchClass::Diff1: --gstats.u1; break;
    case MismatchClass::Diff2: --gstats.u2; break;
  }
}

SamplerState init_state(const Dataset& data, double tau0, double gamma0, std::uint64_t seed) {
  const int J = data.n_populations();
  const int T = data.n_loci();
  const int A = data.alphabet.size;

  SamplerState st;
  st.alphabet_size = A;
  st.seed = seed;
  st.urn.gamma = gamma0;
  st.urn.tau = tau0;
  st.urn.m.assign(J, {});
  st.assignment.resize(J);
  st.haplotype.resize(J);

  Rng rng(derive_seed(seed, 0xC0FFEEull));

  for (int j = 0; j < J; ++j) {
    const auto& inds = data.populations[j].individuals;
    st.assignment[j].assign(inds.size(), {-1, -1});
    st.haplotype[j].resize(inds.size());
    for (size_t i = 0; i < inds.size(); ++i) {
      const Genotype& g = inds[i].genotype;
      Haplotype h0(T), h1(T);
      for (int t = 0; t < T; ++t) {
        if (g[t].is_missing()) {
          h0[t] = static_cast<Allele>(rng.uniform_int(A));
          h1[t] = static_cast<Allele>(rng.uniform_int(A));
        } else if (g[t].is_het()) {
          const bool flip = rng.bernoulli(0.5);
          h0[t] = flip ? g[t].hi : g[t].lo;
          h1[t] = flip ? g[t].lo : g[t].hi;
        } else {
          h0[t] = h1[t] = g[t].lo;
        }
      }
      st.haplotype[j][i] = {std::move(h0), std::move(h1)};
    }
  }

  // single seed founder: site-wise majority allele over all slots
  Haplotype majority(T, 0);
  for (int t = 0; t < T; ++t) {
    std::vector<long> votes(A, 0);
    for (int j = 0; j < J; ++j)
      for (const auto& pair : st.haplotype[j])
        for (int e = 0; e < 2; ++e) ++votes[pair[e][t]];
    int best = 0;
    for (int a = 1; a < A; ++a)
      if (votes[a] > votes[best]) best = a;
    majority[t] = static_cast<Allele>(best);
  }
  const int k0 = st.add_founder(std::move(majority));

  for (int j = 0; j < J; ++j) {
    for (size_t i = 0; i < st.haplotype[j].size(); ++i) {
      for (int e = 0; e < 2; ++e) {
        st.assignment[j][i][e] = k0;
        st.attach_urn(j, k0);
        st.attach_instance_stats(k0, st.haplotype[j][i][e]);
      }
    }
  }

  for (int j = 0; j < J; ++j) {
    const auto& inds = data.populations[j].individuals;
    for (size_t i = 0; i < inds.size(); ++i)
      for (int t = 0; t < T; ++t)
        st.attach_genotype_site(inds[i].genotype[t], st.haplotype[j][i][0][t],
                                st.haplotype[j][i][1][t]);
  }

  return st;
}

namespace {

template <typename T>
void mismatch(std::ostringstream& os, const char* what, T expected, T got) {
  os << what << ": recomputed " << expected << " != maintained " << got << "; ";
}

}  // namespace

AuditReport audit_state(const SamplerState& st, const Dataset& data) {
  std::ostringstream os;
  const int J = data.n_populations();
  const int T = data.n_loci();
  const int A = st.alphabet_size;
  const int K = st.urn.K();

  if (static_cast<int>(st.founders.size()) != K) mismatch(os, "K", K, (int)st.founders.size());

  std::vector<std::vector<int>> m(J, std::vector<int>(K, 0));
  std::vector<Founder> fresh(st.founders.size());
  for (int k = 0; k < K; ++k) {
    fresh[k].pattern = st.founders[k].pattern;
    fresh[k].site_counts.assign(T, std::vector<int>(A, 0));
  }
  GenotypeStats g{};

  for (int j = 0; j < J; ++j) {
    const auto& inds = data.populations[j].individuals;
    for (size_t i = 0; i < inds.size(); ++i) {
      for (int e = 0; e < 2; ++e) {
        const int k = st.assignment[j][i][e];
        if (k < 0 || k >= K) {
          os << "slot (" << j << "," << i << "," << e << ") assignment " << k
             << " out of range; ";
          continue;
        }
        ++m[j][k];
        const Haplotype& h = st.haplotype[j][i][e];
        for (int t = 0; t < T; ++t) {
          ++fresh[k].site_counts[t][h[t]];
          if (h[t] == fresh[k].pattern[t])
            ++fresh[k].stats.l;
          else
            ++fresh[k].stats.l_prime;
        }
        ++fresh[k].n_assigned;
      }
      for (int t = 0; t < T; ++t) {
        const GenotypeSite& s = inds[i].genotype[t];
        if (s.is_missing()) continue;
        switch (genotype_mismatch_class(s, st.haplotype[j][i][0][t], st.haplotype[j][i][1][t])) {
          case MismatchClass::Exact: ++g.u; break;
          case MismatchClass::Diff1: ++g.u1; break;
          case MismatchClass::Diff2: ++g.u2; break;
        }
      }
    }
  }

  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k)
      if (m[j][k] != st.urn.m[j][k]) mismatch(os, "m[j][k]", m[j][k], st.urn.m[j][k]);
  for (int k = 0; k < K; ++k) {
    int users = 0;
    for (int j = 0; j < J; ++j)
      if (m[j][k] > 0) ++users;
    if (users != st.urn.n[k]) mismatch(os, "n[k]", users, st.urn.n[k]);
    if (users == 0) os << "founder " << k << " represented but unused; ";
    if (fresh[k].stats.l != st.founders[k].stats.l)
      mismatch(os, "l[k]", fresh[k].stats.l, st.founders[k].stats.l);
    if (fresh[k].stats.l_prime != st.founders[k].stats.l_prime)
      mismatch(os, "l'[k]", fresh[k].stats.l_prime, st.founders[k].stats.l_prime);
    if (fresh[k].n_assigned != st.founders[k].n_assigned)
      mismatch(os, "n_assigned[k]", fresh[k].n_assigned, st.founders[k].n_assigned);
    for (int t = 0; t < T; ++t)
      for (int a = 0; a < A; ++a)
        if (fresh[k].site_counts[t][a] != st.founders[k].site_counts[t][a])
          mismatch(os, "site_counts", fresh[k].site_counts[t][a],
                   st.founders[k].site_counts[t][a]);
  }
  if (g.u != st.gstats.u) mismatch(os, "u", g.u, st.gstats.u);
  if (g.u1 != st.gstats.u1) mismatch(os, "u'", g.u1, st.gstats.u1);
  if (g.u2 != st.gstats.u2) mismatch(os, "u''", g.u2, st.gstats.u2);

  AuditReport r;
  r.detail = os.str();
  r.ok = r.detail.empty();
  return r;
}

}  // namespace popphase
