#include "qsense/protocols.hpp"

#include "qsense/errors.hpp"
#include "qsense/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsense {

std::vector<double> reshuffle_reachable(std::span<const double> amplitudes,
                                        std::span<const AdjacentRotation> rotations) {
  std::vector<double> amp(amplitudes.begin(), amplitudes.end());
  for (const auto& r : rotations) {
    if (r.first < 0 || static_cast<std::size_t>(r.first) + 1 >= amp.size())
      throw InvalidArgument("reshuffle rotation outside the level range");
    const auto p = static_cast<std::size_t>(r.first);
    const double a = amp[p];
    const double b = amp[p + 1];
    const double s = std::sin(r.angle);
    amp[p] = std::abs(a * std::cos(r.angle));
    amp[p + 1] = std::sqrt(b * b + a * a * s * s);
  }
  return amp;
}

std::vector<double> TraceStep::weights() const {
  std::vector<double> w(amplitudes.size());
  std::transform(amplitudes.begin(), amplitudes.end(), w.begin(), [](double a) { return a * a; });
  return w;
}

namespace {

std::vector<double> grow(const std::vector<double>& prev, std::span<const double> angles,
                         std::vector<double>* split) {
  std::vector<double> amp(prev);
  amp.push_back(0.0);
  std::vector<AdjacentRotation> rot;
  for (int p = static_cast<int>(angles.size()) - 1; p >= 0; --p)
    rot.push_back({p, angles[static_cast<std::size_t>(p)]});
  if (split) {
    split->clear();
    for (std::size_t p = 0; p < angles.size(); ++p) {
      const double w = prev[p] * prev[p];
      split->push_back(w * std::cos(angles[p]) * std::cos(angles[p]));
      split->push_back(w * std::sin(angles[p]) * std::sin(angles[p]));
    }
  }
  return reshuffle_reachable(amp, rot);
}

TraceStep make_step(const Prior& prior, int s, double tau, std::vector<double> amps) {
  TraceStep st;
  st.step = s;
  st.time = (s + 1) * tau;
  st.spectrum = Spectrum::equally_gapped(s + 2);
  st.phase_coefficients = phase_coefficients(st.spectrum, st.time);
  const PhaseKernel k = make_kernel(prior, st.phase_coefficients);
  st.mse = variance(prior) - optimal_gain(k, amps);
  st.amplitudes = std::move(amps);
  return st;
}

}  // namespace

ProtocolTrace onthefly_run(const Prior& prior, const OnTheFlyOptions& options) {
  if (!prior.symmetric()) throw InvalidArgument("on-the-fly protocol needs a symmetric prior");
  if (options.steps < 0 || options.steps > 9) throw InvalidArgument("on-the-fly steps must lie in [0, 9]");
  if (options.restarts < 1) throw InvalidArgument("on-the-fly needs at least one restart");
  ProtocolTrace trace;
  trace.tau = options.tau > 0.0 ? options.tau : 0.775 / std_dev(prior);
  const double v0 = variance(prior);

  trace.steps.push_back(make_step(prior, 0, trace.tau, {std::sqrt(0.5), std::sqrt(0.5)}));
  for (int s = 1; s <= options.steps; ++s) {
    const TraceStep& prev = trace.steps.back();
    const double t = (s + 1) * trace.tau;
    const auto phases = phase_coefficients(Spectrum::equally_gapped(s + 2), t);
    const PhaseKernel kernel = make_kernel(prior, phases);
    const Objective f = [&](std::span<const double> x) {
      return v0 - optimal_gain(kernel, grow(prev.amplitudes, x, nullptr));
    };
    const int dim = s + 1;
    NelderMeadResult best;
    bool have = false;
    for (int r = 0; r < options.restarts; ++r) {
      std::vector<double> x0(static_cast<std::size_t>(dim), std::numbers::pi / 4);
      if (r > 0) {
        x0 = halton_point(options.seed + static_cast<unsigned long>(r), dim);
        for (double& v : x0) v *= std::numbers::pi / 2;
      }
      NelderMeadOptions nm;
      nm.initial_step = 0.2;
      nm.x_tol = 1e-9;
      nm.f_tol = 1e-13;
      auto res = nelder_mead(f, x0, nm);
      if (!have || res.value < best.value) {
        best = std::move(res);
        have = true;
      }
    }
    if (!std::isfinite(best.value) || best.value > prev.mse + 1e-9) {
      trace.truncated = true;
      trace.note = "no reachable improvement at step " + std::to_string(s);
      break;
    }
    // Fold angles into [0, pi/2]: only sin^2 and |cos| enter.
    for (double& a : best.x) {
      a = std::fmod(std::abs(a), std::numbers::pi);
      if (a > std::numbers::pi / 2) a = std::numbers::pi - a;
    }
    std::vector<double> split;
    auto amps = grow(prev.amplitudes, best.x, &split);
    TraceStep st = make_step(prior, s, trace.tau, std::move(amps));
    st.angles = best.x;
    st.split_weights = std::move(split);
    trace.steps.push_back(std::move(st));
  }
  return trace;
}

// ---------------------------------------------------------------- sequential --

namespace {

double reduction(double a) { return 1.0 - a * std::exp(-a); }

}  // namespace

SequentialPlan sequential_plan(double v0, double a, int steps) {
  if (!(v0 > 0.0) || !(a > 0.0) || steps < 0) throw InvalidArgument("sequential plan needs V0 > 0, A > 0, steps >= 0");
  const double r = reduction(a);
  if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("sequential plan: reduction factor outside (0, 1)");
  SequentialPlan p;
  p.A = a;
  p.R = r;
  const double t0 = std::sqrt(a / v0);
  const double q = 1.0 / std::sqrt(r);
  for (int k = 0; k <= steps; ++k) {
    p.variances.push_back(std::pow(r, k) * v0);
    p.cumulative.push_back(t0 * (std::pow(q, k) - 1.0) / (q - 1.0));
    if (k < steps) p.times.push_back(std::sqrt(a / p.variances.back()));
  }
  return p;
}

double sequential_coefficient(double a) {
  if (!(a > 0.0)) throw InvalidArgument("sequential coefficient needs A > 0");
  const double d = 1.0 / std::sqrt(reduction(a)) - 1.0;
  return d * d / a;
}

SequentialOptimum sequential_optimize_A() {
  const auto neg = [](double a) { return -sequential_coefficient(a); };
  const ScalarMin m = scan_then_golden(neg, 1e-3, 10.0, 1000, 1e-10);
  return {m.x, -m.value};
}

namespace {

double sequential_node(const Prior& prior, std::span<const double> times, std::size_t depth) {
  if (depth == times.size()) return variance(prior);
  const ProbeState plus = ProbeState::flat(2);
  const auto phases = phase_coefficients(Spectrum::qubit(), times[depth]);
  const auto pair = averaged_pair_phases(prior, plus, phases, times[depth]);
  const auto sol = personick_solve(pair);
  const auto likelihood = outcome_likelihoods(prior, plus, phases, sol);
  const auto w = prior.weights();
  double total = 0.0;
  for (const auto& lik : likelihood) {
    double evidence = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) evidence += w[j] * lik[j];
    if (!(evidence > 1e-300)) continue;
    const auto update = posterior_update(prior, lik);
    total += update.evidence * sequential_node(update.posterior, times, depth + 1);
  }
  return total;
}

}  // namespace

double sequential_simulate(const Prior& grid_prior, std::span<const double> times) {
  if (grid_prior.family() != Prior::Family::kGrid) throw InvalidArgument("sequential_simulate needs a grid prior");
  if (times.size() > 12) throw InvalidArgument("sequential_simulate supports at most 12 steps");
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("sequential times must be finite and >= 0");
  return sequential_node(grid_prior, times, 0);
}

}  // namespace qsense
