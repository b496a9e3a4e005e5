#ifndef POPPHASE_CHAIN_DETAIL_HPP
#define POPPHASE_CHAIN_DETAIL_HPP

#include "popphase/result.hpp"
#include "popphase/state.hpp"

namespace popphase::detail {

struct ChainOptions {
  Hyperparams hp;
  int burnin = 1000;
  int samples = 1000;
  std::uint64_t seed = 1;
  double init_tau = 1.0;
  double init_gamma = 1.0;
  bool hierarchical = true;
  bool shared_tau = true;
  bool resample_concentrations = true;
  bool pin_xi = false;
  bool check_invariants = false;
};

void gibbs_sweep(SamplerState& st, const Dataset& data, const ChainOptions& opt, Rng& rng);

PhasingResult run_chain(const Dataset& data, const ChainOptions& opt, const char* model_name);

}  // namespace popphase::detail

#endif  // POPPHASE_CHAIN_DETAIL_HPP
