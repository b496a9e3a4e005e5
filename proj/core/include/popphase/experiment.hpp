#ifndef POPPHASE_EXPERIMENT_HPP
#define POPPHASE_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "popphase/dp_sampler.hpp"
#include "popphase/eval.hpp"
#include "popphase/hdp_sampler.hpp"
#include "popphase/synthgen.hpp"

namespace popphase {

// Paired multi-seed comparison of the hierarchical sampler against the flat
// sampler run pooled (mode-I) and per population (mode-II) on freshly
// simulated data.
struct ExperimentConfig {
  SimSpec base;  // per-seed specs derive their seed from base.seed
  int n_seeds = 20;
  HDPConfig hdp;
  DPConfig dp;
  int threads = 1;
  bool run_dp_modes = true;
};

struct ComparisonRow {
  std::uint64_t seed = 0;
  double err_hdp = 0, err_dp1 = 0, err_dp2 = 0;
  long dw_hdp = 0, dw_dp1 = 0, dw_dp2 = 0;
  int k_hdp = 0, k_dp1 = 0;
  double pop_k_mean_hdp = 0;
  double kl_hdp = 0, kl_dp1 = 0, kl_dp2 = 0;
  double theta_hdp = 0;
};

struct ExperimentSummary {
  double mean_err_hdp = 0, mean_err_dp1 = 0, mean_err_dp2 = 0;
  double mean_k_hdp = 0, mean_k_dp1 = 0;
  double mean_pop_k_hdp = 0;
  double mean_theta_hdp = 0;
  double mean_kl_hdp = 0, mean_kl_dp1 = 0, mean_kl_dp2 = 0;
  // one-sided paired sign tests, hdp better than each flat mode
  double p_err_vs_dp1 = 1, p_err_vs_dp2 = 1;
  double p_kl_vs_dp1 = 1, p_kl_vs_dp2 = 1;
};

std::vector<ComparisonRow> run_comparison(const ExperimentConfig& cfg);
ExperimentSummary summarize(const std::vector<ComparisonRow>& rows);

std::string rows_to_csv(const std::vector<ComparisonRow>& rows);
std::string summary_to_string(const ExperimentSummary& s);

// Mean over populations of D_KL(true strand frequencies || decoded strand
// frequencies), with individuals regrouped by id.
double kl_vs_truth(const GroundTruth& truth, const PhasingResult& pred, int n_populations,
                   double min_freq_filter);

// Runs fn(i) for i in [0,n) over `threads` workers; results must be written
// to pre-sized slots so the fan-out never changes outputs.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace popphase

#endif  // POPPHASE_EXPERIMENT_HPP
