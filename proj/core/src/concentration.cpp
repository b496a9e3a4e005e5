#include "popphase/concentration.hpp"

#include <cmath>

namespace popphase {

double log_concentration_density(double gamma, int k, long n, double iota, double kappa) {
  if (!(gamma > 0)) return -HUGE_VAL;
  return k * std::log(gamma) - kappa / gamma - (iota + 1.0) * std::log(gamma) +
         std::lgamma(gamma) - std::lgamma(static_cast<double>(n) + gamma);
}

namespace {

// density of x = log(gamma); the Jacobian contributes one power of gamma
double log_density_x(double x, int k, long n, double iota, double kappa) {
  const double gamma = std::exp(x);
  if (!std::isfinite(gamma) || gamma <= 0) return -HUGE_VAL;
  const double v = log_concentration_density(gamma, k, n, iota, kappa) + x;
  return std::isfinite(v) ? v : -HUGE_VAL;
}

}  // namespace

double sample_concentration(int k, long n, double iota, double kappa, double current, Rng& rng) {
  if (k < 1 || n < 1 || k > n) throw InvariantError("sample_concentration: need 1 <= k <= n");
  if (!(current > 0)) current = 1.0;

  double x = std::log(current);
  const double w = 1.0;  // slice step-out width on the log scale

  // a few independent slice updates per call; the target is log-concave so
  // this mixes essentially immediately
  for (int rep = 0; rep < 3; ++rep) {
    const double fx = log_density_x(x, k, n, iota, kappa);
    if (!std::isfinite(fx)) throw InvariantError("sample_concentration: bad current point");
    const double y = fx + std::log(rng.u01());

    double lo = x - w * rng.u01();
    double hi = lo + w;
    for (int s = 0; s < 64 && log_density_x(lo, k, n, iota, kappa) > y; ++s) lo -= w;
    for (int s = 0; s < 64 && log_density_x(hi, k, n, iota, kappa) > y; ++s) hi += w;

    int shrinks = 0;
    while (true) {
      const double cand = lo + rng.u01() * (hi - lo);
      const double fc = log_density_x(cand, k, n, iota, kappa);
      if (std::isfinite(fc) && fc > y) {
        x = cand;
        break;
      }
      // shrink toward the current point and retry
      if (cand < x)
        lo = cand;
      else
        hi = cand;
      if (++shrinks > 100)
        throw InvariantError("sample_concentration: slice failed after 100 shrinks");
    }
  }
  return std::exp(x);
}

}  // namespace popphase
