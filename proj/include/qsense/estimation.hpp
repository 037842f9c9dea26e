#pragma once

#include "qsense/linalg.hpp"
#include "qsense/priors.hpp"

#include <span>
#include <vector>

namespace qsense {

// Effective eigenvalues of the engineered Hamiltonian H = (w/2) sum_l lambda_l |l><l|.
// Values are kept in level order: level identity matters when a spectrum is
// paired with a probe state or produced by a swap schedule.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<double> lambdas);

  // lambda_l = 1 - 2 l / (n - 1), l = 0..n-1 (non-increasing).
  static Spectrum equally_gapped(int n);
  static Spectrum qubit() { return Spectrum({1.0, -1.0}); }

  std::size_t size() const { return lambdas_.size(); }
  double operator[](std::size_t l) const { return lambdas_[l]; }
  const std::vector<double>& values() const { return lambdas_; }

  double radius() const;
  // Smallest nonzero distance between distinct eigenvalues (0 if all equal).
  double min_gap() const;
  bool non_increasing() const;

 private:
  std::vector<double> lambdas_;
};

// Pure probe state in the effective eigenbasis.
class ProbeState {
 public:
  ProbeState() = default;
  // Requires unit norm within 1e-12.
  explicit ProbeState(CVector coeffs);

  static ProbeState normalized(CVector coeffs);
  static ProbeState from_amplitudes(std::span<const double> amplitudes);
  static ProbeState flat(int n);
  static ProbeState basis(int n, int index);
  // c_l proportional to sin(pi l / (n + 1)), l = 1..n.
  static ProbeState sine(int n);

  std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }
  const CVector& coeffs() const { return coeffs_; }
  CMatrix density() const { return coeffs_ * coeffs_.adjoint(); }
  std::vector<double> weights() const;

 private:
  CVector coeffs_;
};

// Phase coefficients phi_l = lambda_l t / 2: level l carries exp(-i w phi_l).
std::vector<double> phase_coefficients(const Spectrum& spectrum, double t);

// Prior-averaged phase factors for a fixed set of phase coefficients:
//   cf(l, m)  = p(phi_m - phi_l)
//   dcf(l, m) = -i p'(phi_m - phi_l)
// Gamma = (c c^dag) o cf and eta = (c c^dag) o dcf for any state c.
struct PhaseKernel {
  CMatrix cf;
  CMatrix dcf;
  double mean_offset = 0.0;
};
PhaseKernel make_kernel(const Prior& prior, std::span<const double> phases);

struct AveragedPair {
  CMatrix gamma;
  CMatrix eta;
  double t = 0.0;
  double mean_offset = 0.0;
};

AveragedPair averaged_pair(const PhaseKernel& kernel, const ProbeState& state, double t);
AveragedPair averaged_pair(const Prior& prior, const ProbeState& state, const Spectrum& spectrum,
                           double t);
AveragedPair averaged_pair_phases(const Prior& prior, const ProbeState& state,
                                  std::span<const double> phases, double t);

// Optimal von Neumann measurement S = sum_m w_m E_m. Estimators are relative
// to the prior mean; absolute_estimators() adds the offset back.
struct MeasurementSolution {
  CMatrix S;
  std::vector<double> estimators;
  std::vector<CMatrix> projectors;
  double offset = 0.0;

  std::vector<double> absolute_estimators() const;
};

// Solves Gamma S + S Gamma = 2 eta on the support of Gamma.
MeasurementSolution personick_solve(const AveragedPair& pair);
double personick_residual(const AveragedPair& pair, const MeasurementSolution& sol);

// tr(eta S) for a given solution, and the optimal value computed without
// forming S (sum_ij 2 |eta_ij|^2 / (g_i + g_j) in Gamma's eigenbasis).
double gain(const AveragedPair& pair, const MeasurementSolution& sol);
double optimal_gain(const AveragedPair& pair);

// optimal_gain for the state sum_l a_l |l> with a_l real, straight from a
// kernel. Uses real arithmetic when the kernel is real (symmetric prior).
double optimal_gain(const PhaseKernel& kernel, std::span<const double> amplitudes);

// V0 - tr(eta S).
double mse(const Prior& prior, const AveragedPair& pair, const MeasurementSolution& sol);
double optimal_mse(const Prior& prior, const ProbeState& state, const Spectrum& spectrum, double t);

// Brute-force Bayesian evaluation of a measurement on a grid prior: outcome
// likelihoods on every grid point, exact posteriors, mean posterior variance.
// Evolution is taken relative to the prior mean. Zero-probability outcomes
// are skipped (their posterior mean is reported as NaN).
// likelihood[m][j] = <E_m> in the state evolved at the centered grid point j.
std::vector<std::vector<double>> outcome_likelihoods(const Prior& grid_prior, const ProbeState& state,
                                                     std::span<const double> phases,
                                                     const MeasurementSolution& sol);

struct BayesOracleResult {
  double mse = 0.0;
  std::vector<double> outcome_probabilities;
  std::vector<double> posterior_means;
};
BayesOracleResult simulate_bayes(const Prior& grid_prior, const ProbeState& state,
                                 const Spectrum& spectrum, double t, const MeasurementSolution& sol);

// Quantum Fisher information 4 Var(h) of a pure state, h = diag(lambda) / 2.
double qfi(const ProbeState& state, const Spectrum& spectrum);

// Symmetric logarithmic derivative: rho L + L rho = -2i [h, rho] on supp(rho).
CMatrix sld(const ProbeState& state, const Spectrum& spectrum);

// Closed-form single-qubit solution (|+>, lambda = (1, -1)) for a general
// prior, built from r = Re p(t), i = Im p(t) and their time derivatives.
// Throws NumericalFailure when |p(t)| = 1.
struct QubitSolution {
  CMatrix S;
  double gain = 0.0;
};
QubitSolution qubit_general_solution(const Prior& prior, double t);

// Symmetric-prior qubit gain (p'(t))^2.
double qubit_symmetric_gain(const Prior& prior, double t);

}  // namespace qsense
