#pragma once

#include "qsense/estimation.hpp"

#include <optional>
#include <vector>

namespace qsense {

struct OptOptions {
  int restarts = 8;
  unsigned seed = 0;
  double x_tol = 1e-10;
  int max_evaluations = 20000;
  // Extra start (amplitudes, normalized on use), tried before the restarts.
  std::optional<std::vector<double>> warm_start;
};

struct OptResult {
  ProbeState state;
  Spectrum spectrum;
  double t = 0.0;
  double mse = 0.0;
  MeasurementSolution solution;
  int evaluations = 0;
  int restarts = 0;
  bool converged = false;
  bool complex_fallback = false;  // prior not symmetric: phases optimized too
};

// Best probe state for a fixed spectrum and time. Symmetric priors use
// nonnegative real amplitudes in hyperspherical coordinates; other priors
// also optimize relative phases.
OptResult optimize_state(const Prior& prior, const Spectrum& spectrum, double t,
                         const OptOptions& options = {});

struct TmaxResult {
  double t_max = 0.0;
  double mse_min = 0.0;
  std::optional<OptResult> optimum;  // set when the state was optimized
};

// Scan on [0, 20 / sigma_gap], sigma_gap = sigma * min_gap / 2, then
// golden-section refinement. With a fixed state only t varies.
TmaxResult find_tmax(const Prior& prior, const Spectrum& spectrum,
                     const std::optional<ProbeState>& fixed_state = std::nullopt,
                     const OptOptions& options = {}, int scan_samples = 200);

// ------------------------------------------------------------------ sweeps --

struct SweepOptions {
  int n_min = 2;
  int n_max = 9;
  std::vector<double> t_grid;  // empty: default_t_grid(prior)
  int threads = 0;             // 0: hardware concurrency
  OptOptions opt;
};

struct SweepRow {
  int n = 0;
  double t = 0.0;
  double mse = 0.0;
  double bound_entropic = 0.0;
  double bound_bcrb = 0.0;  // NaN when the prior has no Fisher information
  bool converged = false;
};

struct EnvelopePoint {
  double t = 0.0;
  double mse = 0.0;
  int best_n = 0;  // smallest n attaining the minimum within 1e-9
};

struct CurveMinimum {
  int n = 0;
  double t = 0.0;
  double mse = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // ordered by (n, t)
  std::vector<EnvelopePoint> envelope;
  std::vector<CurveMinimum> minima;  // per n, grid minimum refined by golden section
  // crossovers[i]: first grid time past the minimum of curve n_min + i at
  // which curve n_min + i + 1 is lower (NaN if never).
  std::vector<double> crossovers;
};

std::vector<double> default_t_grid(const Prior& prior, int points = 200);

SweepTable nlevel_sweep(const Prior& prior, const SweepOptions& options = {});

// -------------------------------------------------------------- two qubits --

struct TwoQubitReport {
  // Free evolution, spectrum (1, 0, 0, -1).
  double free_t = 0.0;
  double free_mse = 0.0;
  // Swap-lifted spectrum (x, 1 - x, -(1 - x), -x).
  double x = 0.0;
  double lifted_t = 0.0;
  double lifted_mse = 0.0;
  double ratio = 0.0;  // free_mse / lifted_mse
  std::vector<double> amplitudes;
  std::vector<double> phase_coefficients;
  std::vector<double> estimators;  // descending
  // Eigenvector of the largest estimator, global phase chosen so that the
  // first and last phases are opposite with |first| <= pi/2.
  std::vector<double> projector_amplitudes;
  std::vector<double> projector_phases;
  // Frozen-phase continuation past lifted_t.
  std::vector<double> frozen_times;
  std::vector<double> frozen_mse;
  double frozen_spread = 0.0;
  // Best time of the equally gapped four-level spectrum, for comparison.
  double equally_gapped_t = 0.0;
};

TwoQubitReport two_qubit_study(const Prior& prior, const OptOptions& options = {});

}  // namespace qsense
