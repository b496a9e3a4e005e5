#ifndef POPPHASE_CONCENTRATION_HPP
#define POPPHASE_CONCENTRATION_HPP

#include "popphase/rng.hpp"

namespace popphase {

// log p(gamma | k, n) up to a constant, under an inverse-gamma(iota, kappa)
// prior: gamma^k * exp(-kappa/gamma) * gamma^(-iota-1) * G(gamma)/G(n+gamma).
double log_concentration_density(double gamma, int k, long n, double iota, double kappa);

// One draw from the concentration posterior via slice sampling on log(gamma),
// starting from `current`. k <= n, both >= 1.
double sample_concentration(int k, long n, double iota, double kappa, double current, Rng& rng);

}  // namespace popphase

#endif  // POPPHASE_CONCENTRATION_HPP
