#pragma once

#include "qsense/estimation.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace qsense {

// ----------------------------------------------------------------------------
// Degeneracy lifting on qubit (x) ancilla.
//
// Basis |j, k>, j in {0, 1} (sensing qubit, branch sign s_j = 1 - 2j),
// k = 1..n (ancilla). The probe starts in cos(a)|0,1> + sin(a)|1,1>. Event
// (j, k) at time t_jk rotates the source |j^1, 1> into the empty level |j, k>
// by angle theta_jk:
//   [ cos  -sin ]   on {|j^1, 1>, |j, k>}.
//   [ sin   cos ]
// Level |j, k> then carries exp(-i (w / 2) s_j lambda_jk t), with
// lambda_jk = 1 - 2 t_jk / t.
// ----------------------------------------------------------------------------

struct LiftEvent {
  int branch = 0;      // destination branch j
  int k = 2;           // destination ancilla level, >= 2
  double time = 0.0;   // t_jk in [0, total_time]
  double angle = 0.0;  // theta_jk in [0, pi/2]
  int target = -1;     // index into the target spectrum this level realizes
};

struct LiftSchedule {
  double total_time = 0.0;
  double initial_angle = 0.7853981633974483;  // c0 = cos, s0 = sin
  std::vector<LiftEvent> events;

  int ancilla_levels() const;
  int dimension() const { return 2 * ancilla_levels(); }
  static int slot(int branch, int k, int ancilla_levels) { return branch * ancilla_levels + (k - 1); }
};

void validate(const LiftSchedule& schedule);

enum class BranchPolicy {
  kSignSplit,     // mu > 0 -> branch 1, mu <= 0 -> branch 0
  kSingleBranch,  // everything on branch 0 (lambda_jk = mu)
};

// Times only: each target eigenvalue mu becomes a destination level on the
// branch chosen by the policy, with t_jk = t (1 - s_j mu) / 2. Within a branch
// levels are numbered k = 2, 3, ... in order of increasing time.
LiftSchedule lift_times_from_spectrum(const Spectrum& targets, double t,
                                      BranchPolicy policy = BranchPolicy::kSignSplit);

// Coefficients c_{j,k} indexed coeffs[j][k - 1], k = 1..n.
struct LiftCoefficients {
  std::array<std::vector<double>, 2> coeffs;
};

// Angles only: stick-breaking inversion of the product chain
//   c_{j,k} = a_{j^1} sin(theta_jk) prod_{k'<k} cos(theta_jk'),
//   c_{j^1,1} = a_{j^1} prod_k cos(theta_jk),   a_1 = c0, a_0 = s0.
LiftSchedule angles_from_coefficients(const LiftCoefficients& target, double c0, double s0);

// Forward map of the product chain.
LiftCoefficients lift_coefficients(const LiftSchedule& schedule);

// Times and angles realizing Sum_l c_l exp(-i w mu_l t / 2)|l> from
// nonnegative amplitudes c_l and target eigenvalues mu_l. The two base
// levels |0,1>, |1,1> end up empty.
LiftSchedule plan_lift(const Spectrum& targets, std::span<const double> amplitudes, double t,
                       BranchPolicy policy = BranchPolicy::kSignSplit);

// Piecewise simulation: free evolution exp(-i w sigma_z t / 2) (x) 1 between
// instantaneous rotations. Returns amplitudes over the 2n slots.
CVector simulate_lift(const LiftSchedule& schedule, double omega);

// Closed form sum_{j,k} c_{j,k} exp(-i (w/2) mu_jk t) |j,k>.
CVector lift_closed_form(const LiftSchedule& schedule, double omega);

// mu_jk per slot (s_j for slots without an event).
std::vector<double> lift_effective_spectrum(const LiftSchedule& schedule);

// ----------------------------------------------------------------------------
// Multi-qubit variants.
// ----------------------------------------------------------------------------

struct SwapPair {
  int a = 0;
  int b = 0;
  double x = 0.0;  // swap at fraction x of the total time
};

struct SwapSchedule {
  int dimension = 0;
  std::vector<SwapPair> pairs;
};

// Level a (starting in eigenvalue lambda_a) ends with x lambda_a + (1-x) lambda_b,
// level b with (1-x) lambda_a + x lambda_b. Untouched levels keep theirs.
Spectrum swap_effective_spectrum(const Spectrum& base, const SwapSchedule& schedule);

// Two spins, levels (uu, du, ud, dd) with lambda = (1, 0, 0, -1).
Spectrum two_spin_base();
// pi pulse on the first spin at fraction x: swaps (uu, du) and (dd, ud).
SwapSchedule two_spin_pi_swap(double x);

// Phase coefficients lambda_l t_star / 2, held constant for t >= t_star by
// repeated flips between partner levels.
std::vector<double> freeze_phases(const Spectrum& spectrum, double t_star, double t);

struct BandCapacity {
  int k_min = 0;
  int k_max = 0;
  double levels = 0.0;      // min_k binom(N, k) over the band
  double log_levels = 0.0;  // ln(levels)
  double radius_factor = 0.5;
};
// Dicke sectors with N/4 <= k <= 3N/4.
BandCapacity band_capacity(int n_qubits);

}  // namespace qsense
