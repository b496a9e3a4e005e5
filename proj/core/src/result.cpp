#include "popphase/result.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace popphase {

void summarize_traces(PhasingResult& r) {
  if (r.k_trace.empty()) return;
  std::map<int, int> hist;
  double sum = 0;
  for (int k : r.k_trace) {
    ++hist[k];
    sum += k;
  }
  int mode = r.k_trace[0], best = 0;
  for (const auto& [k, c] : hist)
    if (c > best) {
      best = c;
      mode = k;
    }
  r.k_mode = mode;
  r.k_mean = sum / static_cast<double>(r.k_trace.size());
  r.pop_k_mean.assign(r.pop_k_trace.size(), 0.0);
  for (size_t j = 0; j < r.pop_k_trace.size(); ++j) {
    double s = 0;
    for (int k : r.pop_k_trace[j]) s += k;
    r.pop_k_mean[j] = r.pop_k_trace[j].empty() ? 0.0 : s / r.pop_k_trace[j].size();
  }
}

std::map<Haplotype, double> strand_frequencies(const std::vector<IndividualPhase>& inds) {
  std::map<Haplotype, double> f;
  if (inds.empty()) return f;
  const double w = 1.0 / (2.0 * static_cast<double>(inds.size()));
  for (const auto& p : inds) {
    f[p.h0] += w;
    f[p.h1] += w;
  }
  return f;
}

namespace {

std::string hap_str(const Haplotype& h) {
  std::string s;
  bool wide = false;
  for (Allele a : h)
    if (a > 9) wide = true;
  for (size_t t = 0; t < h.size(); ++t) {
    if (wide) {
      if (t) s += ',';
      s += std::to_string(static_cast<int>(h[t]));
    } else {
      s += static_cast<char>('0' + h[t]);
    }
  }
  return s;
}

}  // namespace

std::string serialize_result(const PhasingResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "model " << r.model << "\nseed " << r.seed << "\nalphabet " << r.alphabet.size << "\n";
  os << "k_mode " << r.k_mode << "\nk_mean " << r.k_mean << "\ntheta_hat " << r.theta_hat << "\n";
  for (const auto& p : r.individuals) {
    os << p.id << " " << p.population << " 0 " << hap_str(p.h0) << "\n";
    os << p.id << " " << p.population << " 1 " << hap_str(p.h1) << "\n";
  }
  for (const auto& f : r.founders) {
    os << "founder " << hap_str(f.pattern) << " theta " << f.theta_hat << " support " << f.support
       << " freq";
    for (double x : f.pop_frequency) os << " " << x;
    os << "\n";
  }
  os << "k_trace";
  for (int k : r.k_trace) os << " " << k;
  os << "\n";
  return os.str();
}

}  // namespace popphase
