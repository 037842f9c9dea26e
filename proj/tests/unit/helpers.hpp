#pragma once

#include "qsense/estimation.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace qsense::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline CVector random_vector(int n) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng()), g(rng()));
  return v.normalized();
}

inline ProbeState random_state(int n) { return ProbeState(random_vector(n)); }

inline Spectrum random_spectrum(int n) {
  std::vector<double> l(static_cast<std::size_t>(n));
  for (auto& x : l) x = uniform(-1.0, 1.0);
  return Spectrum(l);
}

inline CMatrix random_unitary(int n) {
  CMatrix a(n, n);
  for (int j = 0; j < n; ++j) a.col(j) = random_vector(n);
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ();
}

// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n = 4000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace qsense::test
