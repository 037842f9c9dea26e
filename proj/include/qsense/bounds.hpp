#pragma once

#include "qsense/estimation.hpp"

namespace qsense {

// Bayesian Cramer-Rao bound 1 / (I(prior) + t^2 F). Throws Unsupported for
// priors without a differentiable density.
double bcrb(const Prior& prior, const ProbeState& state, const Spectrum& spectrum, double t);

// Holevo-type bound exp(2 H(prior)) / (2 pi e d^2); (sigma / d)^2 for a Gaussian.
double entropic_bound(const Prior& prior, int dim);

// Least-squares coefficient a in V0 - mse(t) = a t^2 + b t^3 over
// t in {1e-3, 2e-3, 4e-3}, scaled by the prior width. Should match V0^2 F.
struct ShortTimeFit {
  double coefficient = 0.0;
  double expected = 0.0;  // V0^2 * qfi
};
ShortTimeFit short_time_check(const Prior& prior, const ProbeState& state, const Spectrum& spectrum);

}  // namespace qsense
