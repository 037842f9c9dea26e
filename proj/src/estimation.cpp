#include "qsense/estimation.hpp"

#include "qsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qsense {

namespace {

constexpr double kSupportTol = 1e-12;
constexpr double kMergeGap = 1e-9;

void check_dims(const ProbeState& state, const Spectrum& spectrum) {
  if (state.size() != spectrum.size() || state.size() == 0)
    throw InvalidArgument("probe state and spectrum dimensions differ");
}

}  // namespace

// ---------------------------------------------------------------- Spectrum --

Spectrum::Spectrum(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) throw InvalidArgument("spectrum must have at least one level");
  for (double l : lambdas_) {
    if (!std::isfinite(l) || std::abs(l) > 1.0 + 1e-12)
      throw InvalidArgument("effective eigenvalues must satisfy |lambda| <= 1");
  }
}

Spectrum Spectrum::equally_gapped(int n) {
  if (n < 1) throw InvalidArgument("equally gapped spectrum needs n >= 1");
  if (n == 1) return Spectrum({0.0});
  std::vector<double> l(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) l[k] = 1.0 - 2.0 * k / (n - 1);
  return Spectrum(std::move(l));
}

double Spectrum::radius() const {
  double r = 0.0;
  for (double l : lambdas_) r = std::max(r, std::abs(l));
  return r;
}

double Spectrum::min_gap() const {
  std::vector<double> s(lambdas_);
  std::sort(s.begin(), s.end());
  double gap = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double d = s[k] - s[k - 1];
    if (d > 1e-12 && (gap == 0.0 || d < gap)) gap = d;
  }
  return gap;
}

bool Spectrum::non_increasing() const {
  return std::is_sorted(lambdas_.rbegin(), lambdas_.rend());
}

// -------------------------------------------------------------- ProbeState --

ProbeState::ProbeState(CVector coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) throw InvalidArgument("probe state must be non-empty");
  if (!coeffs_.allFinite()) throw InvalidArgument("probe state must be finite");
  if (std::abs(coeffs_.norm() - 1.0) > 1e-12) throw InvalidArgument("probe state must have unit norm");
}

ProbeState ProbeState::normalized(CVector coeffs) {
  const double n = coeffs.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize a zero state");
  return ProbeState(coeffs / n);
}

ProbeState ProbeState::from_amplitudes(std::span<const double> amplitudes) {
  CVector c(static_cast<Eigen::Index>(amplitudes.size()));
  for (std::size_t k = 0; k < amplitudes.size(); ++k) c(static_cast<Eigen::Index>(k)) = amplitudes[k];
  return normalized(std::move(c));
}

ProbeState ProbeState::flat(int n) {
  if (n < 1) throw InvalidArgument("flat state needs n >= 1");
  return ProbeState(CVector::Constant(n, cplx(1.0 / std::sqrt(static_cast<double>(n)), 0.0)));
}

ProbeState ProbeState::basis(int n, int index) {
  if (index < 0 || index >= n) throw InvalidArgument("basis index out of range");
  CVector c = CVector::Zero(n);
  c(index) = 1.0;
  return ProbeState(std::move(c));
}

ProbeState ProbeState::sine(int n) {
  if (n < 1) throw InvalidArgument("sine state needs n >= 1");
  CVector c(n);
  for (int l = 1; l <= n; ++l) c(l - 1) = std::sin(std::numbers::pi * l / (n + 1));
  return normalized(std::move(c));
}

std::vector<double> ProbeState::weights() const {
  std::vector<double> w(size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::norm(coeffs_(static_cast<Eigen::Index>(k)));
  return w;
}

// ----------------------------------------------------------------- kernels --

std::vector<double> phase_coefficients(const Spectrum& spectrum, double t) {
  std::vector<double> phi(spectrum.size());
  for (std::size_t l = 0; l < phi.size(); ++l) phi[l] = 0.5 * spectrum[l] * t;
  return phi;
}

PhaseKernel make_kernel(const Prior& prior, std::span<const double> phases) {
  const auto n = static_cast<Eigen::Index>(phases.size());
  PhaseKernel k;
  k.cf.resize(n, n);
  k.dcf.resize(n, n);
  k.mean_offset = prior.mean();
  for (Eigen::Index l = 0; l < n; ++l) {
    k.cf(l, l) = 1.0;
    k.dcf(l, l) = -kI * characteristic_derivative(prior, 0.0);
    for (Eigen::Index m = l + 1; m < n; ++m) {
      const double s = phases[m] - phases[l];
      const cplx p = characteristic_function(prior, s);
      const cplx dp = characteristic_derivative(prior, s);
      k.cf(l, m) = p;
      k.cf(m, l) = std::conj(p);
      k.dcf(l, m) = -kI * dp;
      k.dcf(m, l) = std::conj(-kI * dp);
    }
  }
  return k;
}

AveragedPair averaged_pair(const PhaseKernel& kernel, const ProbeState& state, double t) {
  if (static_cast<Eigen::Index>(state.size()) != kernel.cf.rows())
    throw InvalidArgument("probe state and kernel dimensions differ");
  const CMatrix rho = state.density();
  return {rho.cwiseProduct(kernel.cf), rho.cwiseProduct(kernel.dcf), t, kernel.mean_offset};
}

AveragedPair averaged_pair(const Prior& prior, const ProbeState& state, const Spectrum& spectrum,
                           double t) {
  check_dims(state, spectrum);
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("averaged_pair needs finite t >= 0");
  const auto phi = phase_coefficients(spectrum, t);
  return averaged_pair(make_kernel(prior, phi), state, t);
}

AveragedPair averaged_pair_phases(const Prior& prior, const ProbeState& state,
                                  std::span<const double> phases, double t) {
  if (phases.size() != state.size()) throw InvalidArgument("probe state and phase vector dimensions differ");
  return averaged_pair(make_kernel(prior, phases), state, t);
}

// ---------------------------------------------------------------- Personick --

std::vector<double> MeasurementSolution::absolute_estimators() const {
  std::vector<double> out(estimators);
  for (double& w : out) w += offset;
  return out;
}

MeasurementSolution personick_solve(const AveragedPair& pair) {
  const CMatrix rhs = 2.0 * pair.eta;
  auto lyap = solve_symmetric_sylvester(pair.gamma, rhs, kSupportTol);
  const double scale = std::max(pair.eta.norm(), 1e-300);
  if (lyap.outside_support_norm > 1e-8 * scale + 1e-14)
    throw NumericalFailure("infeasible pair: eta has weight outside the support of Gamma");
  MeasurementSolution sol;
  sol.S = std::move(lyap.solution);
  sol.offset = pair.mean_offset;
  auto spec = hermitian_spectral(sol.S, kMergeGap);
  sol.estimators = std::move(spec.values);
  sol.projectors = std::move(spec.projectors);
  return sol;
}

double personick_residual(const AveragedPair& pair, const MeasurementSolution& sol) {
  return (pair.gamma * sol.S + sol.S * pair.gamma - 2.0 * pair.eta).norm();
}

double gain(const AveragedPair& pair, const MeasurementSolution& sol) {
  return (pair.eta * sol.S).trace().real();
}

double optimal_gain(const AveragedPair& pair) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(pair.gamma);
  const RVector& g = eig.eigenvalues();
  const CMatrix et = eig.eigenvectors().adjoint() * pair.eta * eig.eigenvectors();
  const double gmax = g.cwiseAbs().maxCoeff();
  double total = 0.0;
  const Eigen::Index n = g.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = g(i) + g(j);
      if (d > kSupportTol * gmax && d > 0.0) total += 2.0 * std::norm(et(i, j)) / d;
    }
  }
  return total;
}

double optimal_gain(const PhaseKernel& kernel, std::span<const double> amplitudes) {
  const auto n = static_cast<Eigen::Index>(amplitudes.size());
  if (kernel.cf.rows() != n) throw InvalidArgument("kernel and amplitude dimensions differ");
  const bool real_kernel = kernel.cf.imag().cwiseAbs().maxCoeff() <= 1e-15 &&
                           kernel.dcf.real().cwiseAbs().maxCoeff() <= 1e-15;
  const Eigen::Map<const RVector> a(amplitudes.data(), n);
  if (!real_kernel) {
    AveragedPair pair;
    const CVector c = a.cast<cplx>();
    pair.gamma = (c * c.adjoint()).cwiseProduct(kernel.cf);
    pair.eta = (c * c.adjoint()).cwiseProduct(kernel.dcf);
    return optimal_gain(pair);
  }
  // Gamma real symmetric and eta = i (a a^T o Im dcf), purely imaginary.
  const Eigen::MatrixXd outer = a * a.transpose();
  const Eigen::MatrixXd gamma = outer.cwiseProduct(kernel.cf.real());
  const Eigen::MatrixXd eta_im = outer.cwiseProduct(kernel.dcf.imag());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma);
  const RVector& g = eig.eigenvalues();
  const Eigen::MatrixXd et = eig.eigenvectors().transpose() * eta_im * eig.eigenvectors();
  const double gmax = g.cwiseAbs().maxCoeff();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = g(i) + g(j);
      if (d > kSupportTol * gmax && d > 0.0) total += 2.0 * et(i, j) * et(i, j) / d;
    }
  }
  return total;
}

double mse(const Prior& prior, const AveragedPair& pair, const MeasurementSolution& sol) {
  if (pair.gamma.rows() != sol.S.rows()) throw InvalidArgument("pair and solution dimensions differ");
  return variance(prior) - gain(pair, sol);
}

double optimal_mse(const Prior& prior, const ProbeState& state, const Spectrum& spectrum, double t) {
  return variance(prior) - optimal_gain(averaged_pair(prior, state, spectrum, t));
}

std::vector<std::vector<double>> outcome_likelihoods(const Prior& grid_prior, const ProbeState& state,
                                                     std::span<const double> phases,
                                                     const MeasurementSolution& sol) {
  if (grid_prior.family() != Prior::Family::kGrid) throw InvalidArgument("likelihoods need a grid prior");
  if (phases.size() != state.size()) throw InvalidArgument("probe state and phase vector dimensions differ");
  const auto pts = grid_prior.points();
  const auto n = static_cast<Eigen::Index>(state.size());
  const std::size_t outcomes = sol.projectors.size();
  std::vector<std::vector<double>> likelihood(outcomes, std::vector<double>(pts.size()));
  CVector psi(n);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    for (Eigen::Index l = 0; l < n; ++l)
      psi(l) = state.coeffs()(l) * std::polar(1.0, -pts[j] * phases[static_cast<std::size_t>(l)]);
    for (std::size_t m = 0; m < outcomes; ++m) {
      const double p = psi.dot(sol.projectors[m] * psi).real();
      likelihood[m][j] = std::clamp(p, 0.0, 1.0);
    }
  }
  return likelihood;
}

BayesOracleResult simulate_bayes(const Prior& grid_prior, const ProbeState& state,
                                 const Spectrum& spectrum, double t, const MeasurementSolution& sol) {
  if (grid_prior.family() != Prior::Family::kGrid) throw InvalidArgument("simulate_bayes needs a grid prior");
  check_dims(state, spectrum);
  const auto pts = grid_prior.points();
  const auto phi = phase_coefficients(spectrum, t);
  const std::size_t outcomes = sol.projectors.size();
  const auto likelihood = outcome_likelihoods(grid_prior, state, phi, sol);
  BayesOracleResult out;
  out.outcome_probabilities.resize(outcomes, 0.0);
  out.posterior_means.resize(outcomes, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t m = 0; m < outcomes; ++m) {
    double evidence = 0.0;
    const auto w = grid_prior.weights();
    for (std::size_t j = 0; j < pts.size(); ++j) evidence += w[j] * likelihood[m][j];
    if (!(evidence > 1e-300)) continue;
    const auto update = posterior_update(grid_prior, likelihood[m]);
    out.outcome_probabilities[m] = update.evidence;
    out.posterior_means[m] = update.posterior.mean();
    out.mse += update.evidence * variance(update.posterior);
  }
  return out;
}

// ---------------------------------------------------------------- QFI / SLD --

double qfi(const ProbeState& state, const Spectrum& spectrum) {
  check_dims(state, spectrum);
  double m1 = 0.0;
  double m2 = 0.0;
  const auto w = state.weights();
  for (std::size_t l = 0; l < w.size(); ++l) {
    const double h = 0.5 * spectrum[l];
    m1 += w[l] * h;
    m2 += w[l] * h * h;
  }
  return std::max(0.0, 4.0 * (m2 - m1 * m1));
}

CMatrix sld(const ProbeState& state, const Spectrum& spectrum) {
  check_dims(state, spectrum);
  const auto n = static_cast<Eigen::Index>(state.size());
  CMatrix h = CMatrix::Zero(n, n);
  for (Eigen::Index l = 0; l < n; ++l) h(l, l) = 0.5 * spectrum[static_cast<std::size_t>(l)];
  const CMatrix rho = state.density();
  const CMatrix rhs = -2.0 * kI * (h * rho - rho * h);
  return solve_symmetric_sylvester(rho, rhs, kSupportTol).solution;
}

// ------------------------------------------------------------ qubit closed form --

QubitSolution qubit_general_solution(const Prior& prior, double t) {
  const cplx p = characteristic_function(prior, t);
  const cplx dp = characteristic_derivative(prior, t);
  const double r = p.real();
  const double i = p.imag();
  const double rd = dp.real();
  const double id = dp.imag();
  const double den = i * i + r * r - 1.0;
  if (std::abs(den) < 1e-12)
    throw NumericalFailure("qubit closed form is singular: |p(t)| = 1");
  // Level l carries exp(-i w lambda_l t / 2) with lambda = (1, -1), so
  // Gamma_01 = conj(p(t)) / 2 and eta_01 = i conj(p'(t)) / 2.
  const double diag = -(i * rd - id * r) / den;
  const double bx = -(i * i * id + i * r * rd - id) / den;
  const double by = (i * id * r + r * r * rd - rd) / den;
  QubitSolution out;
  out.S.resize(2, 2);
  out.S(0, 0) = diag;
  out.S(1, 1) = diag;
  out.S(0, 1) = cplx(-bx, by);
  out.S(1, 0) = cplx(-bx, -by);
  out.gain = (2.0 * i * id * r * rd + (i * i - 1.0) * id * id + (r * r - 1.0) * rd * rd) / den;
  return out;
}

double qubit_symmetric_gain(const Prior& prior, double t) {
  return std::norm(characteristic_derivative(prior, t));
}

}  // namespace qsense
