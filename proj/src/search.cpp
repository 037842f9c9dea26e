#include "qsense/search.hpp"

#include "qsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qsense {

namespace {

NelderMeadResult nelder_mead_once(const Objective& f, const std::vector<double>& x0,
                                  const NelderMeadOptions& opt, int budget) {
  const std::size_t n = x0.size();
  NelderMeadResult res;
  if (n == 0) {
    res.x = x0;
    res.value = f(x0);
    res.evaluations = 1;
    res.converged = true;
    return res;
  }
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double step = (x0[i] != 0.0) ? opt.initial_step * std::max(1.0, std::abs(x0[i])) : opt.initial_step;
    pts[i + 1][i] += step;
  }
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      double d = 0.0;
      for (std::size_t k = 0; k < n; ++k) d = std::max(d, std::abs(pts[i][k] - pts[best][k]));
      diameter = std::max(diameter, d);
    }
    if (diameter <= opt.x_tol || std::abs(vals[worst] - vals[best]) <= opt.f_tol) {
      res.converged = true;
      break;
    }
    if (evals >= budget) break;
    ++res.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);

    for (std::size_t k = 0; k < n; ++k) xr[k] = centroid[k] + (centroid[k] - pts[worst][k]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      for (std::size_t k = 0; k < n; ++k) xe[k] = centroid[k] + 2.0 * (centroid[k] - pts[worst][k]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    for (std::size_t k = 0; k < n; ++k)
      xc[k] = outside ? centroid[k] + 0.5 * (xr[k] - centroid[k]) : centroid[k] + 0.5 * (pts[worst][k] - centroid[k]);
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  res.x = pts[static_cast<std::size_t>(it - vals.begin())];
  res.value = *it;
  res.evaluations = evals;
  return res;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& options) {
  NelderMeadResult first = nelder_mead_once(f, x0, options, options.max_evaluations);
  if (first.evaluations >= options.max_evaluations) return first;
  NelderMeadOptions again = options;
  again.initial_step = std::max(options.initial_step * 0.1, 10.0 * options.x_tol);
  NelderMeadResult second = nelder_mead_once(f, first.x, again, options.max_evaluations - first.evaluations);
  second.evaluations += first.evaluations;
  second.iterations += first.iterations;
  if (first.value < second.value) {
    first.evaluations = second.evaluations;
    first.iterations = second.iterations;
    first.converged = second.converged;
    return first;
  }
  return second;
}

ScalarMin golden_section(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
  if (!(hi >= lo)) throw InvalidArgument("golden_section: empty bracket");
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  while (b - a > rel_tol * std::max(1.0, std::abs(0.5 * (a + b)))) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  ScalarMin out;
  out.x = (fc <= fd) ? c : d;
  out.value = std::min(fc, fd);
  out.evaluations = evals;
  return out;
}

ScalarMin scan_then_golden(const std::function<double(double)>& f, double lo, double hi, int samples,
                           double rel_tol) {
  if (samples < 3) throw InvalidArgument("scan_then_golden needs at least 3 samples");
  const double h = (hi - lo) / (samples - 1);
  int best = 0;
  double best_val = f(lo);
  for (int i = 1; i < samples; ++i) {
    const double v = f(lo + h * i);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = lo + h * std::max(0, best - 1);
  const double b = lo + h * std::min(samples - 1, best + 1);
  ScalarMin refined = golden_section(f, a, b, rel_tol);
  refined.evaluations += samples;
  if (best_val < refined.value) {
    refined.x = lo + h * best;
    refined.value = best_val;
  }
  return refined;
}

std::vector<double> halton_point(unsigned long index, int dim) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  constexpr int kMax = static_cast<int>(sizeof(kPrimes) / sizeof(kPrimes[0]));
  if (dim < 0 || dim > kMax) throw InvalidArgument("halton_point: dimension out of range");
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    const int base = kPrimes[d];
    double f = 1.0, r = 0.0;
    for (unsigned long i = index + 1; i > 0; i /= static_cast<unsigned long>(base)) {
      f /= base;
      r += f * static_cast<double>(i % static_cast<unsigned long>(base));
    }
    x[static_cast<std::size_t>(d)] = r;
  }
  return x;
}

}  // namespace qsense
