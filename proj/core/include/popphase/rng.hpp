#ifndef POPPHASE_RNG_HPP
#define POPPHASE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "popphase/types.hpp"

namespace popphase {

// All sampling goes through this wrapper rather than <random> distributions,
// so a given seed replays bit-identically on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1)
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return u01() < p; }

  // uniform integer in [0, n)
  std::uint32_t uniform_int(std::uint32_t n) {
    if (n == 0) throw InvariantError("uniform_int(0)");
    return static_cast<std::uint32_t>(u01() * n) % n;
  }

  // index drawn proportional to nonnegative weights
  int pick(std::span<const double> weights) {
    double total = 0;
    for (double w : weights) total += w;
    if (!(total > 0)) throw InvariantError("pick: weights sum to zero");
    double u = u01() * total;
    double acc = 0;
    for (size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  // index drawn proportional to exp(logw), stabilized by the max
  int pick_log(std::span<const double> logw);

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// splitmix64 finalizer; derives independent per-task sub-seeds so thread
// fan-out never changes results.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace popphase

#endif  // POPPHASE_RNG_HPP
