#include "popphase/eval.hpp"

#include <algorithm>
#include <cmath>

namespace popphase {

namespace {

std::vector<int> common_het_sites(const Haplotype& a0, const Haplotype& a1) {
  std::vector<int> out;
  for (size_t t = 0; t < a0.size(); ++t)
    if (a0[t] != a1[t]) out.push_back(static_cast<int>(t));
  return out;
}

void require_same_genotype(const Haplotype& t0, const Haplotype& t1, const Haplotype& p0,
                           const Haplotype& p1) {
  if (t0.size() != t1.size() || t0.size() != p0.size() || p0.size() != p1.size())
    throw InputError("haplotype lengths differ");
  for (size_t t = 0; t < t0.size(); ++t) {
    const Allele tlo = std::min(t0[t], t1[t]), thi = std::max(t0[t], t1[t]);
    const Allele plo = std::min(p0[t], p1[t]), phi = std::max(p0[t], p1[t]);
    if (tlo != plo || thi != phi)
      throw InputError("pairs are genotype-inconsistent at locus " + std::to_string(t));
  }
}

}  // namespace

SiteErrorCount site_error(const Haplotype& true0, const Haplotype& true1, const Haplotype& pred0,
                          const Haplotype& pred1) {
  require_same_genotype(true0, true1, pred0, pred1);
  const std::vector<int> hets = common_het_sites(true0, true1);
  if (hets.size() < 2) return {0, 0};
  int direct = 0, swapped = 0;
  for (int t : hets) {
    if (pred0[t] != true0[t]) ++direct;
    if (pred0[t] != true1[t]) ++swapped;
  }
  return {std::min(direct, swapped), static_cast<int>(hets.size())};
}

int switch_distance(const Haplotype& true0, const Haplotype& true1, const Haplotype& pred0,
                    const Haplotype& pred1) {
  (void)pred1;
  require_same_genotype(true0, true1, pred0, pred1);
  const std::vector<int> hets = common_het_sites(true0, true1);
  if (hets.size() < 2) return 0;
  int d = 0;
  bool prev = pred0[hets[0]] == true0[hets[0]];
  for (size_t idx = 1; idx < hets.size(); ++idx) {
    const bool cur = pred0[hets[idx]] == true0[hets[idx]];
    if (cur != prev) ++d;
    prev = cur;
  }
  return d;
}

double freq_kl(const std::map<Haplotype, double>& p, const std::map<Haplotype, double>& q,
               double min_freq_filter) {
  if (!(min_freq_filter >= 0 && min_freq_filter < 1)) throw InputError("filter must be in [0,1)");

  std::map<Haplotype, double> ps;
  double pz = 0;
  for (const auto& [x, v] : p)
    if (v >= min_freq_filter && v > 0) {
      ps[x] = v;
      pz += v;
    }
  if (ps.empty() || pz <= 0) return 0.0;

  constexpr double kFloor = 1e-6;
  std::map<Haplotype, double> qs = q;
  for (const auto& [x, v] : ps) {
    auto it = qs.find(x);
    if (it == qs.end() || it->second < kFloor) qs[x] = kFloor;
  }
  double qz = 0;
  for (const auto& [x, v] : qs) qz += v;

  double kl = 0;
  for (const auto& [x, v] : ps) {
    const double pp = v / pz;
    const double qq = qs.at(x) / qz;
    kl += pp * std::log(pp / qq);
  }
  return std::max(kl, 0.0);
}

PhasingScore score_phasing(const GroundTruth& truth, const PhasingResult& pred) {
  std::map<std::string, const IndividualPhase*> by_id;
  for (const auto& p : pred.individuals) by_id[p.id] = &p;

  PhasingScore s;
  double macro_sum = 0;
  for (const auto& ti : truth.individuals) {
    auto it = by_id.find(ti.id);
    if (it == by_id.end()) throw InputError("result is missing individual " + ti.id);
    const IndividualPhase& p = *it->second;

    IndividualScore row;
    row.id = ti.id;
    row.population = p.population;
    const SiteErrorCount se = site_error(ti.haplotype[0], ti.haplotype[1], p.h0, p.h1);
    row.nontrivial = se.nontrivial;
    row.mismatches = se.mismatches;
    row.d_w = switch_distance(ti.haplotype[0], ti.haplotype[1], p.h0, p.h1);
    row.n_het = static_cast<int>(common_het_sites(ti.haplotype[0], ti.haplotype[1]).size());
    s.rows.push_back(row);

    if (se.nontrivial > 0) {
      ++s.n_ambiguous;
      s.mismatches += se.mismatches;
      s.nontrivial_sites += se.nontrivial;
      s.d_w_total += row.d_w;
      macro_sum += static_cast<double>(se.mismatches) / se.nontrivial;
    }
  }
  s.err_s = s.nontrivial_sites > 0
                ? static_cast<double>(s.mismatches) / static_cast<double>(s.nontrivial_sites)
                : 0.0;
  s.err_s_macro = s.n_ambiguous > 0 ? macro_sum / s.n_ambiguous : 0.0;
  return s;
}

KThetaReport k_theta_summary(const PhasingResult& result, const GroundTruth& truth) {
  KThetaReport r;
  r.k_mode = result.k_mode;
  r.k_mean = result.k_mean;
  r.pop_k_mean = result.pop_k_mean;
  r.theta_hat = result.theta_hat;
  if (result.founders.empty() || truth.founders.empty()) return r;

  // greedy minimal-Hamming assignment, most-used recovered founders first
  std::vector<bool> taken(truth.founders.size(), false);
  for (const auto& f : result.founders) {
    int best = -1, best_d = 1 << 30;
    for (size_t k = 0; k < truth.founders.size(); ++k) {
      if (taken[k]) continue;
      int d = 0;
      for (size_t t = 0; t < truth.founders[k].size() && t < f.pattern.size(); ++t)
        if (truth.founders[k][t] != f.pattern[t]) ++d;
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(k);
      }
    }
    if (best < 0) break;
    taken[best] = true;
    KThetaReport::FounderMatch m;
    m.true_index = best;
    m.hamming = best_d;
    m.recovered = f.pattern;
    if (best_d <= 1) ++r.recovered_within_1;
    r.matches.push_back(std::move(m));
  }
  return r;
}

std::vector<std::map<Haplotype, double>> true_strand_frequencies(const GroundTruth& truth,
                                                                 int n_populations) {
  std::vector<std::map<Haplotype, double>> out(n_populations);
  std::vector<long> counts(n_populations, 0);
  for (const auto& ti : truth.individuals) counts[ti.pop] += 2;
  for (const auto& ti : truth.individuals) {
    const double w = 1.0 / static_cast<double>(counts[ti.pop]);
    out[ti.pop][ti.haplotype[0]] += w;
    out[ti.pop][ti.haplotype[1]] += w;
  }
  return out;
}

double sign_test_p(int wins, int losses) {
  const int n = wins + losses;
  if (n == 0) return 1.0;
  // P(X >= wins), X ~ Binomial(n, 1/2), computed in logs
  double p = 0;
  for (int x = wins; x <= n; ++x) {
    const double logc = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0);
    p += std::exp(logc - n * std::log(2.0));
  }
  return std::min(p, 1.0);
}

}  // namespace popphase
