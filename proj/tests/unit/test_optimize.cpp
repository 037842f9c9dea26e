#include "helpers.hpp"

#include "qsense/errors.hpp"
#include "qsense/optimize.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qsense;
using doctest::Approx;

TEST_CASE("qubit optimum is the equatorial state") {
  const Prior p = Prior::gaussian(0.0, 1.0);
  const auto r = optimize_state(p, Spectrum::qubit(), 1.0);
  CHECK(r.mse == Approx(1.0 - std::exp(-1.0)).epsilon(1e-10));
  CHECK(r.state.weights()[0] == Approx(0.5).epsilon(1e-5));
  CHECK_FALSE(r.complex_fallback);
}

TEST_CASE("optimized three-level state beats a brute-force grid") {
  const Prior p = Prior::gaussian(0.0, 1.0);
  const Spectrum sp = Spectrum::equally_gapped(3);
  const double t = 1.8;
  const auto r = optimize_state(p, sp, t);
  double brute = 1e9;
  const int m = 60;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) {
      const double th = std::numbers::pi / 2 * i / m, ph = std::numbers::pi / 2 * j / m;
      const std::vector<double> a{std::cos(th), std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph)};
      brute = std::min(brute, optimal_mse(p, ProbeState::from_amplitudes(a), sp, t));
    }
  CHECK(r.mse <= brute + 1e-12);
  CHECK(r.mse == Approx(optimal_mse(p, r.state, sp, t)));
}

TEST_CASE("asymmetric priors use the complex chart") {
  const Prior p = Prior::grid({-1.0, 0.0, 2.0}, {0.3, 0.5, 0.2});
  OptOptions o;
  o.restarts = 2;
  const auto r = optimize_state(p, Spectrum::equally_gapped(3), 1.0, o);
  CHECK(r.complex_fallback);
  CHECK(r.mse <= optimal_mse(p, ProbeState::flat(3), Spectrum::equally_gapped(3), 1.0) + 1e-12);
}

TEST_CASE("find_tmax for the qubit") {
  const auto r = find_tmax(Prior::gaussian(0.0, 1.0), Spectrum::qubit(), ProbeState::flat(2));
  CHECK(r.t_max == Approx(1.0).epsilon(1e-6));
  CHECK(r.mse_min == Approx(1.0 - std::exp(-1.0)));
  const auto s = find_tmax(Prior::gaussian(0.0, 2.0), Spectrum::qubit(), ProbeState::flat(2));
  CHECK(s.t_max == Approx(0.5).epsilon(1e-6));
}

TEST_CASE("small sweep") {
  SweepOptions o;
  o.n_min = 2;
  o.n_max = 4;
  for (int i = 0; i <= 20; ++i) o.t_grid.push_back(0.2 * i);
  o.opt.restarts = 2;
  o.threads = 2;
  const SweepTable s = nlevel_sweep(Prior::gaussian(0.0, 1.0), o);
  REQUIRE(s.rows.size() == 3 * 21);
  REQUIRE(s.envelope.size() == 21);
  REQUIRE(s.minima.size() == 3);
  for (const auto& r : s.rows) {
    if (r.n == 2) CHECK(r.mse == Approx(1 - r.t * r.t * std::exp(-r.t * r.t)));
    CHECK(r.mse >= r.bound_entropic - 1e-9);
    CHECK(r.mse >= r.bound_bcrb - 1e-9);
  }
  for (std::size_t i = 0; i < s.envelope.size(); ++i) {
    double best = 1e9;
    for (const auto& r : s.rows)
      if (r.t == s.envelope[i].t) best = std::min(best, r.mse);
    CHECK(s.envelope[i].mse == Approx(best));
    // Past the n = 4 minimum the envelope of n <= 4 rises again.
    if (i && s.envelope[i].t < 2.8) CHECK(s.envelope[i].mse <= s.envelope[i - 1].mse + 1e-12);
  }
  CHECK(s.minima[0].t == Approx(1.0).epsilon(1e-5));
}
