#ifndef POPPHASE_DP_SAMPLER_HPP
#define POPPHASE_DP_SAMPLER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "popphase/result.hpp"
#include "popphase/state.hpp"

namespace popphase {

// Single-population flat-urn sampler (the baseline for mode-I / mode-II runs
// and the exactness target of the enumeration oracle).
struct DPConfig {
  Hyperparams hp;
  int burnin = 1000;
  int samples = 1000;
  std::uint64_t seed = 1;
  double init_tau = 1.0;
  bool resample_tau = true;  // fixed tau when false (oracle comparisons)
  bool pin_xi = false;
  bool check_invariants = false;

  void validate() const;
};

// Polya-urn weights (n_1/(n+tau), ..., n_K/(n+tau), tau/(n+tau)).
// Empty occupancy yields {1.0}: the first draw is always new.
std::vector<double> crp_weights(std::span<const int> occupancy, double tau);

// One full sweep of the flat sampler; `data` must have one population.
void dp_gibbs_sweep(SamplerState& st, const Dataset& data, const DPConfig& cfg, Rng& rng);

PhasingResult run_dp(const Dataset& data, const DPConfig& cfg);

}  // namespace popphase

#endif  // POPPHASE_DP_SAMPLER_HPP
