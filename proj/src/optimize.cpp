#include "qsense/optimize.hpp"

#include "qsense/bounds.hpp"
#include "qsense/engineering.hpp"
#include "qsense/errors.hpp"
#include "qsense/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

namespace qsense {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> amplitudes_from_angles(std::span<const double> theta) {
  std::vector<double> c(theta.size() + 1);
  double tail = 1.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    c[i] = std::abs(tail * std::cos(theta[i]));
    tail *= std::sin(theta[i]);
  }
  c.back() = std::abs(tail);
  return c;
}

std::vector<double> angles_from_amplitudes(std::span<const double> amps) {
  std::vector<double> c(amps.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    c[i] = std::abs(amps[i]);
    norm += c[i] * c[i];
  }
  if (!(norm > 0.0)) throw InvalidArgument("warm start must be a nonzero vector");
  std::vector<double> theta(amps.size() - 1);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    double tail = 0.0;
    for (std::size_t j = i + 1; j < c.size(); ++j) tail += c[j] * c[j];
    theta[i] = std::atan2(std::sqrt(tail), c[i]);
  }
  return theta;
}

CVector complex_state(std::span<const double> x, std::size_t n) {
  const auto amps = amplitudes_from_angles(x.subspan(0, n - 1));
  CVector c(static_cast<Eigen::Index>(n));
  c(0) = amps[0];
  for (std::size_t l = 1; l < n; ++l) c(static_cast<Eigen::Index>(l)) = std::polar(amps[l], x[n - 2 + l]);
  return c;
}

std::vector<double> abs_amplitudes(const ProbeState& s) {
  std::vector<double> a(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) a[i] = std::abs(s.coeffs()(static_cast<Eigen::Index>(i)));
  return a;
}

// Scan t on [lo, hi] re-optimizing the state at every sample (warm started),
// then golden-section refinement with the full restart schedule.
TmaxResult best_over_t(const Prior& prior, const Spectrum& spectrum, double lo, double hi, int samples,
                       const OptOptions& options, int scan_restarts) {
  if (samples < 3) throw InvalidArgument("t scan needs at least 3 samples");
  OptOptions scan = options;
  scan.restarts = std::max(1, std::min(scan_restarts, options.restarts));
  const double h = (hi - lo) / (samples - 1);
  std::optional<std::vector<double>> warm = options.warm_start;
  int best = 0;
  double best_mse = std::numeric_limits<double>::infinity();
  std::vector<double> best_amps;
  for (int i = 0; i < samples; ++i) {
    scan.warm_start = warm;
    const OptResult r = optimize_state(prior, spectrum, lo + h * i, scan);
    warm = abs_amplitudes(r.state);
    if (r.mse < best_mse) {
      best_mse = r.mse;
      best = i;
      best_amps = *warm;
    }
  }
  OptOptions refine = options;
  refine.warm_start = best_amps;
  const auto f = [&](double t) { return optimize_state(prior, spectrum, t, refine).mse; };
  const double a = lo + h * std::max(0, best - 1);
  const double b = lo + h * std::min(samples - 1, best + 1);
  const ScalarMin m = golden_section(f, a, b, 1e-8);
  const double t_best = (m.value <= best_mse) ? m.x : lo + h * best;
  TmaxResult out;
  out.optimum = optimize_state(prior, spectrum, t_best, refine);
  out.t_max = t_best;
  out.mse_min = out.optimum->mse;
  return out;
}

}  // namespace

OptResult optimize_state(const Prior& prior, const Spectrum& spectrum, double t, const OptOptions& options) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("optimize_state needs a finite t >= 0");
  if (options.restarts < 1) throw InvalidArgument("optimize_state needs at least one restart");
  const std::size_t n = spectrum.size();
  const auto phases = phase_coefficients(spectrum, t);
  const PhaseKernel kernel = make_kernel(prior, phases);
  const double v0 = variance(prior);
  const bool cx = !prior.symmetric();

  OptResult out;
  out.spectrum = spectrum;
  out.t = t;
  out.complex_fallback = cx;

  std::vector<double> best_x;
  if (n > 1) {
    const std::size_t dim = (n - 1) * (cx ? 2 : 1);
    const Objective f = [&](std::span<const double> x) {
      if (!cx) return v0 - optimal_gain(kernel, amplitudes_from_angles(x));
      const CVector c = complex_state(x, n);
      AveragedPair pair;
      pair.gamma = (c * c.adjoint()).cwiseProduct(kernel.cf);
      pair.eta = (c * c.adjoint()).cwiseProduct(kernel.dcf);
      return v0 - optimal_gain(pair);
    };
    std::vector<std::vector<double>> starts;
    auto extend = [&](std::vector<double> theta) {
      theta.resize(dim, 0.0);
      return theta;
    };
    if (options.warm_start) {
      if (options.warm_start->size() != n) throw InvalidArgument("warm start dimension differs from spectrum");
      starts.push_back(extend(angles_from_amplitudes(*options.warm_start)));
    }
    starts.push_back(extend(angles_from_amplitudes(std::vector<double>(n, 1.0))));
    for (int r = 1; r < options.restarts; ++r) {
      auto u = halton_point(options.seed + static_cast<unsigned long>(r), static_cast<int>(dim));
      for (std::size_t i = 0; i < dim; ++i) u[i] *= (i < n - 1) ? std::numbers::pi / 2 : 2 * std::numbers::pi;
      starts.push_back(std::move(u));
    }
    NelderMeadOptions nm;
    nm.x_tol = options.x_tol;
    nm.max_evaluations = options.max_evaluations;
    nm.initial_step = 0.2;
    double best_val = std::numeric_limits<double>::infinity();
    for (const auto& x0 : starts) {
      const NelderMeadResult r = nelder_mead(f, x0, nm);
      out.evaluations += r.evaluations;
      ++out.restarts;
      if (r.value < best_val) {
        best_val = r.value;
        best_x = r.x;
        out.converged = r.converged;
      }
    }
  } else {
    out.converged = true;
  }

  CVector c;
  if (n == 1) {
    c = CVector::Ones(1);
  } else if (cx) {
    c = complex_state(best_x, n);
  } else {
    const auto a = amplitudes_from_angles(best_x);
    c = Eigen::Map<const RVector>(a.data(), static_cast<Eigen::Index>(n)).cast<cplx>();
  }
  out.state = ProbeState::normalized(c);
  const AveragedPair pair = averaged_pair(kernel, out.state, t);
  out.solution = personick_solve(pair);
  out.mse = mse(prior, pair, out.solution);
  return out;
}

TmaxResult find_tmax(const Prior& prior, const Spectrum& spectrum, const std::optional<ProbeState>& fixed_state,
                     const OptOptions& options, int scan_samples) {
  const double gap = spectrum.min_gap();
  if (!(gap > 0.0)) throw NumericalFailure("flat objective: spectrum has no gap");
  const double sigma_gap = std_dev(prior) * gap / 2.0;
  const double hi = 20.0 / sigma_gap;
  if (fixed_state) {
    if (qfi(*fixed_state, spectrum) <= 1e-14) throw NumericalFailure("flat objective: state has zero QFI");
    const auto f = [&](double t) { return optimal_mse(prior, *fixed_state, spectrum, t); };
    const ScalarMin m = scan_then_golden(f, 0.0, hi, scan_samples, 1e-9);
    return {m.x, m.value, std::nullopt};
  }
  return best_over_t(prior, spectrum, 0.0, hi, scan_samples, options, 2);
}

// ------------------------------------------------------------------ sweeps --

std::vector<double> default_t_grid(const Prior& prior, int points) {
  if (points < 2) throw InvalidArgument("t grid needs at least two points");
  const double hi = 6.0 / std_dev(prior);
  std::vector<double> t(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) t[static_cast<std::size_t>(i)] = hi * i / (points - 1);
  return t;
}

SweepTable nlevel_sweep(const Prior& prior, const SweepOptions& options) {
  if (options.n_min < 2 || options.n_max < options.n_min) throw InvalidArgument("sweep needs 2 <= n_min <= n_max");
  const std::vector<double> grid = options.t_grid.empty() ? default_t_grid(prior) : options.t_grid;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("sweep t grid must be strictly increasing");
  if (grid.empty() || grid.front() < 0.0) throw InvalidArgument("sweep t grid must be nonempty and >= 0");

  double fisher = kNaN;
  try {
    fisher = fisher_information(prior);
  } catch (const Unsupported&) {
  }

  const int count = options.n_max - options.n_min + 1;
  std::vector<std::vector<SweepRow>> rows(static_cast<std::size_t>(count));
  std::vector<CurveMinimum> minima(static_cast<std::size_t>(count));

  auto work = [&](int idx) {
    const int n = options.n_min + idx;
    const Spectrum spec = Spectrum::equally_gapped(n);
    const double bound_e = entropic_bound(prior, n);
    OptOptions opt = options.opt;
    auto& out = rows[static_cast<std::size_t>(idx)];
    std::size_t best = 0;
    std::vector<std::vector<double>> amps;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const OptResult r = optimize_state(prior, spec, grid[i], opt);
      opt.warm_start = abs_amplitudes(r.state);
      amps.push_back(*opt.warm_start);
      SweepRow row;
      row.n = n;
      row.t = grid[i];
      row.mse = r.mse;
      row.bound_entropic = bound_e;
      row.bound_bcrb = std::isnan(fisher) ? kNaN : 1.0 / (fisher + grid[i] * grid[i] * qfi(r.state, spec));
      row.converged = r.converged;
      if (out.empty() || row.mse < out[best].mse) best = i;
      out.push_back(row);
    }
    OptOptions refine = options.opt;
    refine.warm_start = amps[best];
    const auto f = [&](double t) { return optimize_state(prior, spec, t, refine).mse; };
    const double a = grid[best > 0 ? best - 1 : 0];
    const double b = grid[std::min(best + 1, grid.size() - 1)];
    const ScalarMin m = golden_section(f, a, b, 1e-8);
    CurveMinimum cm{n, grid[best], out[best].mse};
    if (m.value < cm.mse) {
      cm.t = m.x;
      cm.mse = m.value;
    }
    minima[static_cast<std::size_t>(idx)] = cm;
  };

  int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, count);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int idx = next++; idx < count; idx = next++) {
        try {
          work(idx);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  SweepTable table;
  for (auto& r : rows) table.rows.insert(table.rows.end(), r.begin(), r.end());
  table.minima = std::move(minima);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EnvelopePoint e{grid[i], std::numeric_limits<double>::infinity(), 0};
    for (const auto& r : rows) e.mse = std::min(e.mse, r[i].mse);
    for (const auto& r : rows) {
      if (r[i].mse <= e.mse + 1e-9) {
        e.best_n = r[i].n;
        break;
      }
    }
    table.envelope.push_back(e);
  }
  for (int idx = 0; idx + 1 < count; ++idx) {
    const auto& lo = rows[static_cast<std::size_t>(idx)];
    const auto& up = rows[static_cast<std::size_t>(idx + 1)];
    double cross = kNaN;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] < table.minima[static_cast<std::size_t>(idx)].t) continue;
      if (up[i].mse < lo[i].mse - 1e-9) {
        cross = grid[i];
        break;
      }
    }
    table.crossovers.push_back(cross);
  }
  return table;
}

// -------------------------------------------------------------- two qubits --

TwoQubitReport two_qubit_study(const Prior& prior, const OptOptions& options) {
  const double sigma = std_dev(prior);
  TwoQubitReport rep;

  const TmaxResult free = best_over_t(prior, two_spin_base(), 0.0, 8.0 / sigma, 81, options, 2);
  rep.free_t = free.t_max;
  rep.free_mse = free.mse_min;

  const TmaxResult eq4 = best_over_t(prior, Spectrum::equally_gapped(4), 0.0, 8.0 / sigma, 81, options, 2);
  rep.equally_gapped_t = eq4.t_max;

  const auto lifted = [&](double x) { return swap_effective_spectrum(two_spin_base(), two_spin_pi_swap(x)); };
  const auto best_for_x = [&](double x) { return best_over_t(prior, lifted(x), 0.0, 12.0 / sigma, 61, options, 2); };
  const ScalarMin mx = golden_section([&](double x) { return best_for_x(x).mse_min; }, 0.5, 1.0, 1e-5);
  rep.x = mx.x;
  const TmaxResult best = best_for_x(rep.x);
  const OptResult& opt = *best.optimum;
  rep.lifted_t = best.t_max;
  rep.lifted_mse = best.mse_min;
  rep.ratio = rep.free_mse / rep.lifted_mse;
  rep.amplitudes = abs_amplitudes(opt.state);
  rep.phase_coefficients = phase_coefficients(opt.spectrum, opt.t);

  const auto spec = hermitian_spectral(opt.solution.S);
  rep.estimators.assign(spec.values.rbegin(), spec.values.rend());
  const Eigen::Index top = spec.eigenvectors.cols() - 1;
  CVector v = spec.eigenvectors.col(top);
  const Eigen::Index last = v.size() - 1;
  v *= std::polar(1.0, -0.5 * (std::arg(v(0)) + std::arg(v(last))));
  if (std::abs(std::arg(v(0))) > std::numbers::pi / 2) v = -v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    rep.projector_amplitudes.push_back(std::abs(v(i)));
    rep.projector_phases.push_back(std::arg(v(i)));
  }

  const std::vector<double> factors{1.0, 1.25, 1.5, 2.0, 3.0};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double f : factors) {
    const double t = f * rep.lifted_t;
    const auto frozen = freeze_phases(opt.spectrum, rep.lifted_t, t);
    const auto pair = averaged_pair_phases(prior, opt.state, frozen, t);
    const double m = variance(prior) - optimal_gain(pair);
    rep.frozen_times.push_back(t);
    rep.frozen_mse.push_back(m);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  rep.frozen_spread = hi - lo;
  return rep;
}

}  // namespace qsense
