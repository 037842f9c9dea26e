#include "helpers.hpp"

#include "qsense/errors.hpp"
#include "qsense/estimation.hpp"

#include <doctest.h>

#include <cmath>

using namespace qsense;
using doctest::Approx;

namespace {

// Gamma and eta by direct quadrature over a Gaussian prior, from the evolved
// state |psi_w> = sum_l c_l exp(-i w phi_l) |l>.
std::pair<CMatrix, CMatrix> quadrature_pair(double sigma, const ProbeState& s, const Spectrum& sp, double t) {
  const auto phi = phase_coefficients(sp, t);
  const int n = static_cast<int>(s.size());
  CMatrix g = CMatrix::Zero(n, n), e = CMatrix::Zero(n, n);
  const int panels = 4000;
  const double lo = -12 * sigma, hi = 12 * sigma, h = (hi - lo) / panels;
  for (int i = 0; i <= panels; ++i) {
    const double w = lo + i * h;
    const double wt = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double p = std::exp(-w * w / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * M_PI)) * wt * h / 3.0;
    CVector psi(n);
    for (int l = 0; l < n; ++l) psi(l) = s.coeffs()(l) * std::polar(1.0, -w * phi[static_cast<std::size_t>(l)]);
    const CMatrix rho = psi * psi.adjoint();
    g += p * rho;
    e += p * w * rho;
  }
  return {g, e};
}

}  // namespace

TEST_CASE("averaged pair matches quadrature") {
  for (int n : {2, 3, 5}) {
    const ProbeState s = test::random_state(n);
    const Spectrum sp = test::random_spectrum(n);
    const double t = test::uniform(0.2, 3.0);
    const auto pair = averaged_pair(Prior::gaussian(0.0, 1.1), s, sp, t);
    const auto [g, e] = quadrature_pair(1.1, s, sp, t);
    CHECK((pair.gamma - g).norm() < 1e-10);
    CHECK((pair.eta - e).norm() < 1e-10);
  }
}

TEST_CASE("qubit gain is (p'(t))^2 for the Gaussian") {
  const Prior p = Prior::gaussian(0.0, 1.0);
  for (double t : {0.3, 1.0, 2.2}) {
    const double expected = t * t * std::exp(-t * t);
    CHECK(qubit_symmetric_gain(p, t) == Approx(expected));
    CHECK(optimal_mse(p, ProbeState::flat(2), Spectrum::qubit(), t) == Approx(1.0 - expected));
    CHECK(qubit_general_solution(p, t).gain == Approx(expected));
  }
}

TEST_CASE("qubit closed form matches the solver for asymmetric priors") {
  const Prior p = Prior::grid({-1.0, 0.3, 0.8, 2.0}, {0.1, 0.4, 0.3, 0.2});
  for (double t : {0.4, 1.3}) {
    const auto pair = averaged_pair(p, ProbeState::flat(2), Spectrum::qubit(), t);
    const auto sol = personick_solve(pair);
    CHECK(qubit_general_solution(p, t).gain == Approx(gain(pair, sol)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(qubit_general_solution(p, 0.0), NumericalFailure);
}

TEST_CASE("personick solution satisfies its defining equation") {
  for (int trial = 0; trial < 10; ++trial) {
    const int n = test::uniform_int(2, 6);
    const ProbeState s = test::random_state(n);
    const Spectrum sp = test::random_spectrum(n);
    const double t = test::uniform(0.1, 4.0);
    const Prior prior = trial % 2 ? Prior::gaussian(0.3, 0.7) : Prior::uniform(-1.0, 1.5);
    const auto pair = averaged_pair(prior, s, sp, t);
    const auto sol = personick_solve(pair);
    CHECK(personick_residual(pair, sol) < 1e-10);
    CHECK(gain(pair, sol) == Approx(optimal_gain(pair)).epsilon(1e-10));
    // Projectors resolve the identity on the support.
    CMatrix sum = CMatrix::Zero(n, n);
    for (const auto& e : sol.projectors) sum += e;
    CHECK((sum * s.coeffs() - s.coeffs()).norm() < 1e-10);
  }
}

TEST_CASE("brute-force Bayes oracle reproduces the operator mse") {
  const Prior prior = Prior::gaussian(0.4, 1.0);
  const Prior grid = discretize(prior);
  for (int n : {2, 3, 4}) {
    const ProbeState s = test::random_state(n);
    const Spectrum sp = test::random_spectrum(n);
    const double t = test::uniform(0.5, 3.0);
    const auto sol = personick_solve(averaged_pair(grid, s, sp, t));
    const auto oracle = simulate_bayes(grid, s, sp, t, sol);
    CHECK(oracle.mse == Approx(optimal_mse(prior, s, sp, t)).epsilon(1e-7));
    double total = 0.0;
    for (double p : oracle.outcome_probabilities) total += p;
    CHECK(total == Approx(1.0));
  }
}

TEST_CASE("real fast path equals the complex path") {
  const Prior prior = Prior::gaussian(0.0, 1.0);
  const Spectrum sp = Spectrum::equally_gapped(5);
  const auto phi = phase_coefficients(sp, 2.3);
  const auto kernel = make_kernel(prior, phi);
  std::vector<double> a{0.2, 0.5, 0.6, 0.4, 0.3};
  double norm = 0;
  for (double x : a) norm += x * x;
  for (double& x : a) x /= std::sqrt(norm);
  const auto pair = averaged_pair(prior, ProbeState::from_amplitudes(a), sp, 2.3);
  CHECK(optimal_gain(kernel, a) == Approx(optimal_gain(pair)).epsilon(1e-12));
}

TEST_CASE("mse properties") {
  const Prior prior = Prior::gaussian(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = test::uniform_int(2, 5);
    const ProbeState s = test::random_state(n);
    std::vector<double> lam(static_cast<std::size_t>(n));
    for (double& x : lam) x = test::uniform(-0.6, 0.6);
    const Spectrum sp(lam);
    const double t = test::uniform(0.0, 5.0);
    const double m = optimal_mse(prior, s, sp, t);
    CHECK(m <= 1.0 + 1e-12);
    CHECK(m >= -1e-12);
    // A common shift of the spectrum is a global phase.
    std::vector<double> shifted = sp.values();
    for (double& x : shifted) x += 0.37;
    CHECK(optimal_mse(prior, s, Spectrum(shifted), t) == Approx(m).epsilon(1e-9));
  }
  CHECK(optimal_mse(prior, test::random_state(3), Spectrum::equally_gapped(3), 0.0) == Approx(1.0));
}

TEST_CASE("qfi and sld") {
  for (int n : {2, 3, 6}) {
    const ProbeState s = test::random_state(n);
    const Spectrum sp = test::random_spectrum(n);
    double m1 = 0, m2 = 0;
    for (int l = 0; l < n; ++l) {
      const double w = std::norm(s.coeffs()(l));
      m1 += w * sp[static_cast<std::size_t>(l)] / 2;
      m2 += w * sp[static_cast<std::size_t>(l)] * sp[static_cast<std::size_t>(l)] / 4;
    }
    CHECK(qfi(s, sp) == Approx(4 * (m2 - m1 * m1)));
    const CMatrix rho = s.density();
    CMatrix h = CMatrix::Zero(n, n);
    for (int l = 0; l < n; ++l) h(l, l) = sp[static_cast<std::size_t>(l)] / 2;
    const CMatrix l = sld(s, sp);
    const CMatrix rhs = -2.0 * kI * (h * rho - rho * h);
    CHECK((rho * l + l * rho - rhs).norm() < 1e-10);
    CHECK((rho * l * l).trace().real() == Approx(qfi(s, sp)));
  }
}

TEST_CASE("equally gapped spectrum and probe constructors") {
  const Spectrum sp = Spectrum::equally_gapped(4);
  CHECK(sp[0] == Approx(1.0));
  CHECK(sp[3] == Approx(-1.0));
  CHECK(sp.min_gap() == Approx(2.0 / 3.0));
  CHECK(sp.non_increasing());
  CHECK(sp.radius() == Approx(1.0));
  const ProbeState sine = ProbeState::sine(3);
  CHECK(sine.weights()[0] == Approx(0.25));
  CHECK(sine.weights()[1] == Approx(0.5));
  CHECK_THROWS_AS(ProbeState(CVector::Ones(2)), InvalidArgument);
  CHECK(Spectrum::equally_gapped(1)[0] == 0.0);
  CHECK_THROWS_AS(Spectrum::equally_gapped(0), InvalidArgument);
  CHECK_THROWS_AS(Spectrum({1.5, 0.0}), InvalidArgument);
}
