#ifndef POPPHASE_RESULT_HPP
#define POPPHASE_RESULT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "popphase/types.hpp"

namespace popphase {

struct FounderReportEntry {
  Haplotype pattern;
  std::vector<double> pop_frequency;  // mean m_{j,k}/sum_k m_{j,k} over samples
  double theta_hat = 0;               // collapsed posterior mean mutation rate
  double support = 0;                 // fraction of retained sweeps with this pattern
  std::vector<int> populations;       // populations that ever used it
};

struct IndividualPhase {
  std::string id;
  std::string population;
  Haplotype h0, h1;
  double mode_frequency = 0;  // fraction of samples matching the decoded pair
  int repaired_sites = 0;     // non-missing sites forced back to the genotype
};

struct PhasingResult {
  std::string model;  // "dp", "hdp", "hdp+pl"
  AlleleAlphabet alphabet;
  std::uint64_t seed = 0;

  std::vector<IndividualPhase> individuals;  // dataset order
  std::vector<FounderReportEntry> founders;  // sorted by total usage

  std::vector<int> k_trace;                   // total K per retained sweep
  std::vector<std::vector<int>> pop_k_trace;  // [population][sweep]
  std::vector<double> tau_trace;
  std::vector<double> gamma_trace;  // empty for the flat sampler

  int k_mode = 0;
  double k_mean = 0;
  std::vector<double> pop_k_mean;
  double theta_hat = 0;  // usage-weighted over founders and sweeps

  // per population: haplotype pattern -> frequency among decoded strands
  std::vector<std::map<Haplotype, double>> hap_frequencies;
};

// Fills k_mode/k_mean/pop_k_mean from the traces.
void summarize_traces(PhasingResult& r);

// Empirical distribution of the 2n decoded strands of the given individuals.
std::map<Haplotype, double> strand_frequencies(const std::vector<IndividualPhase>& inds);

// Canonical text form; identical states serialize byte-identically.
std::string serialize_result(const PhasingResult& r);

}  // namespace popphase

#endif  // POPPHASE_RESULT_HPP
