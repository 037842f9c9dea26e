#include "helpers.hpp"

#include "qsense/bounds.hpp"
#include "qsense/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace qsense;
using doctest::Approx;

TEST_CASE("bcrb of the qubit under a Gaussian prior") {
  const Prior p = Prior::gaussian(0.0, 1.0);
  for (double t : {0.0, 0.5, 2.0}) CHECK(bcrb(p, ProbeState::flat(2), Spectrum::qubit(), t) == Approx(1.0 / (1.0 + t * t)));
  CHECK_THROWS_AS(bcrb(Prior::uniform(-1, 1), ProbeState::flat(2), Spectrum::qubit(), 1.0), Unsupported);
}

TEST_CASE("entropic bound") {
  CHECK(entropic_bound(Prior::gaussian(0.0, 2.0), 1) == Approx(4.0));
  CHECK(entropic_bound(Prior::gaussian(0.0, 2.0), 4) == Approx(0.25));
  const double u = entropic_bound(Prior::uniform(-1.0, 1.0), 2);
  CHECK(u == Approx(4.0 / (2 * M_PI * M_E * 4.0)));
  CHECK_THROWS_AS(entropic_bound(Prior::gaussian(0, 1), 0), InvalidArgument);
}

TEST_CASE("optimal mse respects both bounds") {
  const Prior g = Prior::gaussian(0.0, 1.0);
  const Prior u = discretize(Prior::uniform(-1.5, 1.5), 2001);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = test::uniform_int(2, 6);
    const ProbeState s = test::random_state(n);
    const Spectrum sp = test::random_spectrum(n);
    const double t = test::uniform(0.0, 6.0);
    const double mg = optimal_mse(g, s, sp, t);
    CHECK(mg >= bcrb(g, s, sp, t) - 1e-9);
    CHECK(mg >= entropic_bound(g, n) - 1e-9);
    CHECK(optimal_mse(u, s, sp, t) >= entropic_bound(u, n) - 1e-9);
  }
}

TEST_CASE("short-time slope recovers the quantum Fisher information") {
  for (int n : {2, 3, 5}) {
    const auto fit = short_time_check(Prior::gaussian(0.0, 1.0), test::random_state(n), test::random_spectrum(n));
    CHECK(fit.coefficient == Approx(fit.expected).epsilon(1e-2));
  }
}
