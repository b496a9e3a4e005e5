#include <cmath>

#include "chain_detail.hpp"
#include "popphase/concentration.hpp"
#include "popphase/dp_sampler.hpp"
#include "popphase/hdp_sampler.hpp"

namespace popphase {

void HDPConfig::validate() const {
  hp.validate();
  if (burnin < 0 || samples < 1) throw InputError("iterations must be >= 1");
  if (!(init_gamma > 0 && init_tau > 0)) throw InputError("gamma, tau must be positive");
}

void DPConfig::validate() const {
  hp.validate();
  if (burnin < 0 || samples < 1) throw InputError("iterations must be >= 1");
  if (!(init_tau > 0)) throw InputError("tau must be positive");
}

std::vector<double> crp_weights(std::span<const int> occupancy, double tau) {
  if (!(tau > 0)) throw InputError("tau must be positive");
  if (occupancy.empty()) return {1.0};
  double n = 0;
  for (int c : occupancy) n += c;
  std::vector<double> w(occupancy.size() + 1);
  for (size_t k = 0; k < occupancy.size(); ++k) w[k] = occupancy[k] / (n + tau);
  w.back() = tau / (n + tau);
  return w;
}

std::vector<double> top_level_weights(const UrnState& urn) {
  const int K = urn.K();
  if (K == 0) return {1.0};
  const double denom = static_cast<double>(urn.total_top()) - 1.0 + urn.gamma;
  std::vector<double> b(K + 1);
  double s = 0;
  for (int k = 0; k < K; ++k) s += (b[k] = urn.n[k] / denom);
  s += (b[K] = urn.gamma / denom);
  for (double& x : b) x /= s;
  return b;
}

std::vector<double> hdp_prior_weights(const UrnState& urn, int j) {
  const int K = urn.K();
  if (K == 0) return {1.0};
  const double denom = static_cast<double>(urn.total_top()) - 1.0 + urn.gamma;
  const double tau = urn.tau_for(j);
  std::vector<double> w(K + 1);
  double s = 0;
  for (int k = 0; k < K; ++k) s += (w[k] = urn.m[j][k] + tau * urn.n[k] / denom);
  s += (w[K] = tau * urn.gamma / denom);
  for (double& x : w) x /= s;
  return w;
}

double log_instance_predictive(const Founder& f, const Haplotype& h, const Hyperparams& hp,
                               int alphabet_size) {
  long dl = 0;
  for (size_t t = 0; t < h.size(); ++t)
    if (h[t] == f.pattern[t]) ++dl;
  const long dlp = static_cast<long>(h.size()) - dl;
  const MutationStats& s = f.stats;
  const double ab = hp.alpha_h + hp.beta_h;
  return std::lgamma(hp.alpha_h + s.l_prime + dlp) - std::lgamma(hp.alpha_h + s.l_prime) +
         std::lgamma(hp.beta_h + s.l + dl) - std::lgamma(hp.beta_h + s.l) -
         std::lgamma(ab + s.l + s.l_prime + static_cast<long>(h.size())) +
         std::lgamma(ab + s.l + s.l_prime) -
         dlp * std::log(static_cast<double>(alphabet_size - 1));
}

std::vector<double> assignment_weights(const SamplerState& st, const Dataset& data,
                                       const Hyperparams& hp, bool hierarchical, int j, int i,
                                       int e) {
  (void)data;
  const int K = st.urn.K();
  const Haplotype& h = st.haplotype[j][i][e];
  const int A = st.alphabet_size;

  std::vector<double> prior =
      hierarchical ? hdp_prior_weights(st.urn, j)
                   : crp_weights(std::span<const int>(st.urn.m[j]), st.urn.tau);

  std::vector<double> logw(K + 1);
  for (int k = 0; k < K; ++k)
    logw[k] = std::log(prior[k]) + log_instance_predictive(st.founders[k], h, hp, A);
  logw[K] = std::log(prior[K]) - static_cast<double>(h.size()) * std::log(static_cast<double>(A));

  double mx = logw[0];
  for (double v : logw) mx = std::max(mx, v);
  double s = 0;
  std::vector<double> w(K + 1);
  for (int k = 0; k <= K; ++k) s += (w[k] = std::exp(logw[k] - mx));
  for (double& x : w) x /= s;
  return w;
}

namespace {

// new-founder pattern from p(a | h): matching allele with mass
// beta_h/(alpha_h+beta_h), the rest split evenly
Haplotype sample_pattern_given_h(const Haplotype& h, const Hyperparams& hp, int A, Rng& rng) {
  Haplotype a(h.size());
  const double p_match = hp.beta_h / (hp.alpha_h + hp.beta_h);
  for (size_t t = 0; t < h.size(); ++t) {
    if (rng.bernoulli(p_match)) {
      a[t] = h[t];
    } else {
      int off = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(A - 1)));
      a[t] = static_cast<Allele>(off >= h[t] ? off + 1 : off);
    }
  }
  return a;
}

}  // namespace

void sample_assignment(SamplerState& st, const Dataset& data, const Hyperparams& hp,
                       bool hierarchical, int j, int i, int e, Rng& rng) {
  int old = st.assignment[j][i][e];
  const Haplotype& h = st.haplotype[j][i][e];
  st.detach_instance_stats(old, h);
  st.detach_urn(j, old);
  st.assignment[j][i][e] = -1;

  const std::vector<double> w = assignment_weights(st, data, hp, hierarchical, j, i, e);
  int k = rng.pick(w);
  if (k == st.urn.K()) k = st.add_founder(sample_pattern_given_h(h, hp, st.alphabet_size, rng));

  st.assignment[j][i][e] = k;
  st.attach_urn(j, k);
  st.attach_instance_stats(k, h);
}

std::vector<double> founder_site_weights(const SamplerState& st, const Hyperparams& hp, int k,
                                         int t) {
  const int A = st.alphabet_size;
  const Founder& f = st.founders[k];
  const int N = f.n_assigned;
  if (N == 0) return std::vector<double>(A, 1.0 / A);

  const auto& cnt = f.site_counts[t];
  const Allele cur = f.pattern[t];
  const long l_minus = f.stats.l - cnt[cur];
  const long lp_minus = f.stats.l_prime - (N - cnt[cur]);

  std::vector<double> logw(A);
  const double logA1 = std::log(static_cast<double>(A - 1));
  for (int a = 0; a < A; ++a) {
    const long match = cnt[a];
    logw[a] = std::lgamma(hp.alpha_h + lp_minus + (N - match)) +
              std::lgamma(hp.beta_h + l_minus + match) - (lp_minus + N - match) * logA1;
  }
  double mx = logw[0];
  for (double v : logw) mx = std::max(mx, v);
  double s = 0;
  std::vector<double> w(A);
  for (int a = 0; a < A; ++a) s += (w[a] = std::exp(logw[a] - mx));
  for (double& x : w) x /= s;
  return w;
}

void sample_founder_site(SamplerState& st, const Hyperparams& hp, int k, int t, Rng& rng) {
  const std::vector<double> w = founder_site_weights(st, hp, k, t);
  const Allele a_new = static_cast<Allele>(rng.pick(w));
  Founder& f = st.founders[k];
  if (a_new == f.pattern[t]) return;
  const int N = f.n_assigned;
  const auto& cnt = f.site_counts[t];
  const Allele cur = f.pattern[t];
  f.stats.l += cnt[a_new] - cnt[cur];
  f.stats.l_prime += cnt[cur] - cnt[a_new];
  (void)N;
  f.pattern[t] = a_new;
}

void sample_haplotype_site(SamplerState& st, const Dataset& data, const Hyperparams& hp,
                           bool pin_xi, int j, int i, int e, int t, Rng& rng) {
  const GenotypeSite& g = data.populations[j].individuals[i].genotype[t];
  const Allele partner = st.haplotype[j][i][1 - e][t];
  const int k = st.assignment[j][i][e];
  const Allele cur = st.haplotype[j][i][e][t];
  const int A = st.alphabet_size;

  st.detach_site_stats(k, t, cur);
  if (!g.is_missing()) st.detach_genotype_site(g, cur, partner);

  const Founder& f = st.founders[k];
  std::vector<double> w(A);
  for (int a = 0; a < A; ++a) {
    const Allele cand = static_cast<Allele>(a);
    double v = collapsed_h_predictive(cand, f.pattern[t], f.stats, hp.alpha_h, hp.beta_h, A);
    if (!g.is_missing()) {
      const MismatchClass c = genotype_mismatch_class(g, cand, partner);
      if (pin_xi) {
        if (c != MismatchClass::Exact) v = 0;
      } else {
        const MismatchWeights mw = mismatch_weights(cand, partner, A);
        const double mu = c == MismatchClass::Diff1 ? mw.mu1 : mw.mu2;
        v *= collapsed_g_factor(c, st.gstats, hp.alpha_g, hp.beta_g, mu);
      }
    }
    w[a] = v;
  }

  const Allele a_new = static_cast<Allele>(rng.pick(w));
  st.haplotype[j][i][e][t] = a_new;
  st.attach_site_stats(k, t, a_new);
  if (!g.is_missing()) st.attach_genotype_site(g, a_new, partner);
}

void resample_pair_orientation(SamplerState& st, const Dataset& data, const Hyperparams& hp,
                               int j, int i, int t, Rng& rng) {
  (void)data;
  const Allele h0 = st.haplotype[j][i][0][t];
  const Allele h1 = st.haplotype[j][i][1][t];
  if (h0 == h1) return;
  const int k0 = st.assignment[j][i][0];
  const int k1 = st.assignment[j][i][1];
  const int A = st.alphabet_size;

  st.detach_site_stats(k0, t, h0);
  st.detach_site_stats(k1, t, h1);

  // the genotype factor is identical for both orderings and cancels
  double logw[2];
  for (int o = 0; o < 2; ++o) {
    const Allele x = o ? h1 : h0;
    const Allele y = o ? h0 : h1;
    double v = std::log(
        collapsed_h_predictive(x, st.founders[k0].pattern[t], st.founders[k0].stats, hp.alpha_h,
                               hp.beta_h, A));
    MutationStats s1 = st.founders[k1].stats;
    if (k1 == k0) {
      if (x == st.founders[k0].pattern[t])
        ++s1.l;
      else
        ++s1.l_prime;
    }
    v += std::log(
        collapsed_h_predictive(y, st.founders[k1].pattern[t], s1, hp.alpha_h, hp.beta_h, A));
    logw[o] = v;
  }

  const int o = rng.pick_log(std::span<const double>(logw, 2));
  if (o == 1) {
    st.haplotype[j][i][0][t] = h1;
    st.haplotype[j][i][1][t] = h0;
  }
  st.attach_site_stats(k0, t, st.haplotype[j][i][0][t]);
  st.attach_site_stats(k1, t, st.haplotype[j][i][1][t]);
}

namespace detail {

void gibbs_sweep(SamplerState& st, const Dataset& data, const ChainOptions& opt, Rng& rng) {
  const int J = data.n_populations();
  const int T = data.n_loci();

  // stage 1: concentration parameters
  if (opt.resample_concentrations) {
    if (opt.hierarchical) {
      st.urn.gamma = sample_concentration(st.urn.K(), st.urn.total_top(), opt.hp.iota,
                                          opt.hp.kappa, st.urn.gamma, rng);
      if (opt.shared_tau) {
        st.urn.pop_tau.clear();
        st.urn.tau = sample_concentration(st.urn.nonempty_cells(), st.urn.total_bottom(),
                                          opt.hp.iota, opt.hp.kappa, st.urn.tau, rng);
      } else {
        if (st.urn.pop_tau.empty()) st.urn.pop_tau.assign(J, st.urn.tau);
        for (int j = 0; j < J; ++j) {
          long mj = 0;
          for (int c : st.urn.m[j]) mj += c;
          st.urn.pop_tau[j] = sample_concentration(st.urn.pop_k(j), mj, opt.hp.iota, opt.hp.kappa,
                                                   st.urn.pop_tau[j], rng);
        }
      }
    } else {
      st.urn.tau = sample_concentration(st.urn.K(), st.urn.total_bottom(), opt.hp.iota,
                                        opt.hp.kappa, st.urn.tau, rng);
    }
  }

  // stage 2: founder indicators, then founder patterns
  for (int j = 0; j < J; ++j)
    for (size_t i = 0; i < st.haplotype[j].size(); ++i)
      for (int e = 0; e < 2; ++e)
        sample_assignment(st, data, opt.hp, opt.hierarchical, j, static_cast<int>(i), e, rng);

  for (int k = 0; k < st.urn.K(); ++k)
    for (int t = 0; t < T; ++t) sample_founder_site(st, opt.hp, k, t, rng);

  // stage 3: haplotype sites; orientation moves keep phase flips available
  for (int j = 0; j < J; ++j) {
    const auto& inds = data.populations[j].individuals;
    for (size_t i = 0; i < inds.size(); ++i) {
      for (int t = 0; t < T; ++t) {
        const GenotypeSite& g = inds[i].genotype[t];
        if (g.is_missing() || !opt.pin_xi) {
          sample_haplotype_site(st, data, opt.hp, opt.pin_xi, j, static_cast<int>(i), 0, t, rng);
          sample_haplotype_site(st, data, opt.hp, opt.pin_xi, j, static_cast<int>(i), 1, t, rng);
        }
        if (g.is_het())
          resample_pair_orientation(st, data, opt.hp, j, static_cast<int>(i), t, rng);
      }
    }
  }
}

}  // namespace detail

void hdp_gibbs_sweep(SamplerState& st, const Dataset& data, const HDPConfig& cfg, Rng& rng) {
  detail::ChainOptions opt;
  opt.hp = cfg.hp;
  opt.hierarchical = true;
  opt.shared_tau = cfg.shared_tau;
  opt.resample_concentrations = cfg.resample_concentrations;
  opt.pin_xi = cfg.pin_xi;
  detail::gibbs_sweep(st, data, opt, rng);
}

void dp_gibbs_sweep(SamplerState& st, const Dataset& data, const DPConfig& cfg, Rng& rng) {
  if (data.n_populations() != 1)
    throw InputError("flat sampler requires a single population (pool first)");
  detail::ChainOptions opt;
  opt.hp = cfg.hp;
  opt.hierarchical = false;
  opt.resample_concentrations = cfg.resample_tau;
  opt.pin_xi = cfg.pin_xi;
  detail::gibbs_sweep(st, data, opt, rng);
}

}  // namespace popphase
