#include "popphase/rng.hpp"

#include <algorithm>
#include <vector>

namespace popphase {

int Rng::pick_log(std::span<const double> logw) {
  double mx = -HUGE_VAL;
  for (double w : logw) mx = std::max(mx, w);
  if (!(mx > -HUGE_VAL)) throw InvariantError("pick_log: all weights are -inf");
  std::vector<double> w(logw.size());
  for (size_t i = 0; i < logw.size(); ++i) w[i] = std::exp(logw[i] - mx);
  return pick(w);
}

}  // namespace popphase
