#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qsense {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  double initial_step = 0.25;
  double x_tol = 1e-10;  // simplex diameter
  double f_tol = 1e-14;  // spread of vertex values
  int max_evaluations = 20000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

// Minimizes f from x0 with the standard reflection/expansion/contraction/shrink
// coefficients (1, 2, 1/2, 1/2). Restarts once from the best vertex after the
// first convergence to guard against a collapsed simplex.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

struct ScalarMin {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

// Golden-section minimization on [lo, hi] until the bracket is below
// rel_tol * max(1, |x|).
ScalarMin golden_section(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol = 1e-8);

// Dense scan on [lo, hi] followed by golden-section refinement around the best
// sample.
ScalarMin scan_then_golden(const std::function<double(double)>& f, double lo, double hi,
                           int samples, double rel_tol = 1e-8);

// Point `index` of the Halton sequence in `dim` dimensions, in (0, 1)^dim.
// Index 0 is the first nonzero point (1/2, 1/3, 1/5, ...).
std::vector<double> halton_point(unsigned long index, int dim);

}  // namespace qsense
