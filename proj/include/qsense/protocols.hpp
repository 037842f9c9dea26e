#pragma once

#include "qsense/estimation.hpp"

#include <span>
#include <string>
#include <vector>

namespace qsense {

// Transfer from entry `first` to entry `first + 1`: the source keeps
// a cos(angle), the destination gains weight a^2 sin^2(angle). Degenerate
// destinations merge, so weights add.
struct AdjacentRotation {
  int first = 0;
  double angle = 0.0;
};

std::vector<double> reshuffle_reachable(std::span<const double> amplitudes,
                                        std::span<const AdjacentRotation> rotations);

// ---------------------------------------------------------------- on-the-fly --

struct TraceStep {
  int step = 0;
  double time = 0.0;
  Spectrum spectrum;
  std::vector<double> amplitudes;          // nonnegative, unit sum of squares
  std::vector<double> phase_coefficients;  // lambda_l * time / 2
  double mse = 0.0;                        // if measured now
  std::vector<double> angles;              // transfer angles applied at the previous step time
  std::vector<double> split_weights;       // branch weights right after those transfers
  std::vector<double> weights() const;
};

struct ProtocolTrace {
  double tau = 0.0;
  std::vector<TraceStep> steps;
  bool truncated = false;
  std::string note;
};

struct OnTheFlyOptions {
  int steps = 6;      // levels added after the initial pair, at most 9
  double tau = 0.0;   // 0 selects 0.775 / sigma
  int restarts = 8;
  unsigned seed = 0;
};

// Stroboscopic protocol: step s measures at (s + 1) tau with s + 2 equally
// gapped levels; the amplitudes of step s + 1 are the best reachable from
// step s by adjacent transfers.
ProtocolTrace onthefly_run(const Prior& prior, const OnTheFlyOptions& options = {});

// ---------------------------------------------------------------- sequential --

struct SequentialPlan {
  double A = 0.0;
  double R = 0.0;
  std::vector<double> variances;   // V_0 .. V_steps
  std::vector<double> times;       // t_0 .. t_{steps-1}
  std::vector<double> cumulative;  // T_0 .. T_steps
};

SequentialPlan sequential_plan(double v0, double a, int steps);

// (R^{-1/2} - 1)^2 / A.
double sequential_coefficient(double a);

// Asymptotically 1 / V_k ~ coefficient * T_k^2; A* maximizes the coefficient.
struct SequentialOptimum {
  double a_star = 0.0;
  double coefficient = 0.0;
};
SequentialOptimum sequential_optimize_A();

// Exact recursion over the full outcome tree: at every node the qubit probe
// |+> evolves for times[k] and is read out with the Personick measurement of
// the current posterior. Returns the evidence-weighted final variance.
double sequential_simulate(const Prior& grid_prior, std::span<const double> times);

}  // namespace qsense
