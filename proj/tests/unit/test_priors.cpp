#include "helpers.hpp"

#include "qsense/errors.hpp"
#include "qsense/priors.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace qsense;
using doctest::Approx;

TEST_CASE("gaussian characteristic function matches quadrature") {
  const Prior p = Prior::gaussian(0.7, 1.3);
  CHECK(p.mean() == doctest::Approx(0.7));
  for (double s : {0.0, 0.4, 1.1, 2.5}) {
    const double sig = 1.3;
    auto dens = [&](double w) { return std::exp(-w * w / (2 * sig * sig)) / (sig * std::sqrt(2 * std::numbers::pi)); };
    const double re = test::simpson([&](double w) { return dens(w) * std::cos(s * w); }, -12 * sig, 12 * sig);
    const double im = test::simpson([&](double w) { return dens(w) * std::sin(s * w); }, -12 * sig, 12 * sig);
    const cplx cf = characteristic_function(p, s);
    CHECK(cf.real() == Approx(re).epsilon(1e-10));
    CHECK(std::abs(cf.imag() - im) < 1e-12);
  }
}

TEST_CASE("characteristic derivative agrees with finite differences") {
  const Prior grid = Prior::grid({-1.0, 0.2, 1.5}, {0.2, 0.5, 0.3});
  for (const Prior& p : {Prior::gaussian(0, 0.8), Prior::uniform(-1, 2), grid}) {
    for (double s : {0.3, 1.7}) {
      const double h = 1e-5;
      const cplx fd = (characteristic_function(p, s + h) - characteristic_function(p, s - h)) / (2 * h);
      CHECK(std::abs(characteristic_derivative(p, s) - fd) < 1e-8);
    }
  }
}

TEST_CASE("uniform prior") {
  const Prior p = Prior::uniform(-1.0, 3.0);
  CHECK(p.mean() == Approx(1.0));
  CHECK(p.half_width() == Approx(2.0));
  CHECK(variance(p) == Approx(4.0 / 3.0));
  CHECK(entropy(p) == Approx(std::log(4.0)));
  CHECK(characteristic_function(p, 0.5).real() == Approx(std::sin(1.0) / 1.0));
  CHECK_THROWS_AS(fisher_information(p), Unsupported);
}

TEST_CASE("gaussian moments") {
  const Prior p = Prior::gaussian(0.0, 2.0);
  CHECK(variance(p) == Approx(4.0));
  CHECK(std_dev(p) == Approx(2.0));
  CHECK(entropy(p) == Approx(0.5 * std::log(2 * std::numbers::pi * std::numbers::e * 4.0)));
  CHECK(fisher_information(p) == Approx(0.25));
  CHECK(p.symmetric());
}

TEST_CASE("grid prior is centered and validated") {
  const Prior p = Prior::grid({0.0, 1.0, 2.0}, {0.25, 0.25, 0.5});
  CHECK(p.mean() == Approx(1.25));
  double m = 0, v = 0;
  for (std::size_t i = 0; i < p.points().size(); ++i) m += p.points()[i] * p.weights()[i];
  for (std::size_t i = 0; i < p.points().size(); ++i) v += p.points()[i] * p.points()[i] * p.weights()[i];
  CHECK(std::abs(m) < 1e-15);
  CHECK(variance(p) == Approx(v));
  CHECK_FALSE(p.symmetric());
  CHECK_THROWS_AS(Prior::grid({0.0, 1.0}, {0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(Prior::gaussian(0.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(Prior::uniform(1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(entropy(p), Unsupported);
}

TEST_CASE("discretized priors reproduce moments") {
  const Prior g = discretize(Prior::gaussian(0.5, 1.0));
  CHECK(variance(g) == Approx(1.0).epsilon(1e-9));
  CHECK(g.mean() == Approx(0.5));
  CHECK(g.symmetric());
  CHECK(entropy(g) == Approx(entropy(Prior::gaussian(0, 1))).epsilon(1e-6));
  const Prior u = discretize(Prior::uniform(-1, 1));
  CHECK(variance(u) == Approx(1.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("posterior update is Bayes rule") {
  const Prior p = Prior::grid({-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25});
  const std::vector<double> like{0.9, 0.5, 0.1};
  const auto up = posterior_update(p, like);
  const double ev = 0.25 * 0.9 + 0.5 * 0.5 + 0.25 * 0.1;
  CHECK(up.evidence == Approx(ev));
  const double mean = (-1 * 0.25 * 0.9 + 0.25 * 0.1) / ev;
  CHECK(up.posterior.mean() == Approx(mean));
  const double second = (0.25 * 0.9 + 0.25 * 0.1) / ev;
  CHECK(variance(up.posterior) == Approx(second - mean * mean));
  const std::vector<double> zero{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(posterior_update(p, zero), NumericalFailure);
}

TEST_CASE("grid csv round trip") {
  const auto path = std::filesystem::temp_directory_path() / "qsense_grid_roundtrip.csv";
  const Prior p = Prior::grid({-0.5, 0.0, 0.5, 1.0}, {0.1, 0.4, 0.3, 0.2}, 0.5);
  save_grid_csv(p, path);
  const Prior q = load_grid_csv(path);
  CHECK(q.mean() == Approx(p.mean()));
  CHECK(variance(q) == Approx(variance(p)));
  REQUIRE(q.bin_width());
  CHECK(*q.bin_width() == Approx(0.5));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_grid_csv(path), InvalidArgument);
}

TEST_CASE("scaling a prior scales the moments") {
  const Prior p = Prior::gaussian(1.0, 1.0).scaled(3.0);
  CHECK(std_dev(p) == Approx(3.0));
  CHECK(p.mean() == Approx(3.0));
}
