#include "qsense/bounds.hpp"

#include "qsense/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace qsense {

double bcrb(const Prior& prior, const ProbeState& state, const Spectrum& spectrum, double t) {
  const double info = fisher_information(prior);
  return 1.0 / (info + t * t * qfi(state, spectrum));
}

double entropic_bound(const Prior& prior, int dim) {
  if (dim < 1) throw InvalidArgument("entropic bound needs dimension >= 1");
  const double h = entropy(prior);
  return std::exp(2.0 * h) / (2.0 * std::numbers::pi * std::numbers::e * dim * dim);
}

ShortTimeFit short_time_check(const Prior& prior, const ProbeState& state, const Spectrum& spectrum) {
  const double v0 = variance(prior);
  const double scale = 1.0 / std::sqrt(v0);
  const std::array<double, 3> ts{1e-3 * scale, 2e-3 * scale, 4e-3 * scale};
  // Normal equations for delta(t) = a t^2 + b t^3.
  double s44 = 0.0;
  double s45 = 0.0;
  double s55 = 0.0;
  double y2 = 0.0;
  double y3 = 0.0;
  for (double t : ts) {
    const double delta = optimal_gain(averaged_pair(prior, state, spectrum, t));
    const double t2 = t * t;
    const double t3 = t2 * t;
    s44 += t2 * t2;
    s45 += t2 * t3;
    s55 += t3 * t3;
    y2 += t2 * delta;
    y3 += t3 * delta;
  }
  const double det = s44 * s55 - s45 * s45;
  ShortTimeFit fit;
  fit.coefficient = (y2 * s55 - y3 * s45) / det;
  fit.expected = v0 * v0 * qfi(state, spectrum);
  return fit;
}

}  // namespace qsense
