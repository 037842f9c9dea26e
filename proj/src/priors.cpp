#include "qsense/priors.hpp"

#include "qsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace qsense {

namespace {

constexpr double kSymmetryTol = 1e-9;

void require_finite(double s, const char* what) {
  if (!std::isfinite(s)) throw InvalidArgument(std::string(what) + ": argument must be finite");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Prior::Prior(std::variant<Gaussian, Uniform, Grid> kind, double offset)
    : kind_(std::move(kind)), offset_(offset) {
  detect_symmetry();
}

Prior Prior::gaussian(double mean, double sigma) {
  if (!std::isfinite(mean) || !std::isfinite(sigma) || sigma <= 0.0)
    throw InvalidArgument("gaussian prior needs finite mean and sigma > 0");
  return Prior(Gaussian{sigma}, mean);
}

Prior Prior::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
    throw InvalidArgument("uniform prior needs finite bounds with hi > lo");
  return Prior(Uniform{0.5 * (hi - lo)}, 0.5 * (hi + lo));
}

Prior Prior::grid(std::vector<double> points, std::vector<double> weights,
                  std::optional<double> bin_width) {
  if (points.empty() || points.size() != weights.size())
    throw InvalidArgument("grid prior needs matching, non-empty points and weights");
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (!std::isfinite(points[j]) || !std::isfinite(weights[j]) || weights[j] < 0.0)
      throw InvalidArgument("grid prior needs finite points and nonnegative weights");
  }
  if (bin_width && !(*bin_width > 0.0)) throw InvalidArgument("grid bin width must be positive");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidArgument("grid weights must sum to 1 (got " + std::to_string(total) + ")");

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  Grid g;
  g.points.reserve(points.size());
  g.weights.reserve(points.size());
  double mean = 0.0;
  for (std::size_t j : order) mean += weights[j] * points[j];
  for (std::size_t j : order) {
    g.points.push_back(points[j] - mean);
    g.weights.push_back(weights[j]);
  }
  g.bin_width = bin_width;
  return Prior(std::move(g), mean);
}

Prior Prior::grid_normalized(std::vector<double> points, std::vector<double> weights,
                             std::optional<double> bin_width) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total))
    throw InvalidArgument("grid weights must have a positive finite sum");
  for (double& w : weights) w /= total;
  // Absorb the last rounding error so the sum check in grid() holds exactly.
  const double residual = 1.0 - std::accumulate(weights.begin(), weights.end(), 0.0);
  auto largest = std::max_element(weights.begin(), weights.end());
  *largest += residual;
  return grid(std::move(points), std::move(weights), bin_width);
}

void Prior::detect_symmetry() {
  symmetric_ = std::visit(
      Overloaded{
          [](const Gaussian&) { return true; },
          [](const Uniform&) { return true; },
          [](const Grid& g) {
            const std::size_t n = g.points.size();
            double scale = 0.0;
            for (double x : g.points) scale = std::max(scale, std::abs(x));
            scale = std::max(scale, 1.0);
            for (std::size_t j = 0; j < n / 2 + 1 && j < n; ++j) {
              const std::size_t m = n - 1 - j;
              if (std::abs(g.points[j] + g.points[m]) > kSymmetryTol * scale) return false;
              if (std::abs(g.weights[j] - g.weights[m]) > kSymmetryTol) return false;
            }
            return true;
          },
      },
      kind_);
}

Prior::Family Prior::family() const {
  switch (kind_.index()) {
    case 0:
      return Family::kGaussian;
    case 1:
      return Family::kUniform;
    default:
      return Family::kGrid;
  }
}

std::string Prior::family_name() const {
  switch (family()) {
    case Family::kGaussian:
      return "gaussian";
    case Family::kUniform:
      return "uniform";
    case Family::kGrid:
      return "grid";
  }
  return "unknown";
}

double Prior::sigma() const {
  if (const auto* g = std::get_if<Gaussian>(&kind_)) return g->sigma;
  throw InvalidArgument("sigma() is only defined for gaussian priors");
}

double Prior::half_width() const {
  if (const auto* u = std::get_if<Uniform>(&kind_)) return u->half_width;
  throw InvalidArgument("half_width() is only defined for uniform priors");
}

std::span<const double> Prior::points() const {
  if (const auto* g = std::get_if<Grid>(&kind_)) return g->points;
  return {};
}

std::span<const double> Prior::weights() const {
  if (const auto* g = std::get_if<Grid>(&kind_)) return g->weights;
  return {};
}

std::optional<double> Prior::bin_width() const {
  if (const auto* g = std::get_if<Grid>(&kind_)) return g->bin_width;
  return std::nullopt;
}

Prior Prior::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidArgument("scale factor must be positive");
  return std::visit(
      Overloaded{
          [&](const Gaussian& g) { return Prior::gaussian(offset_ * factor, g.sigma * factor); },
          [&](const Uniform& u) {
            return Prior::uniform((offset_ - u.half_width) * factor, (offset_ + u.half_width) * factor);
          },
          [&](const Grid& g) {
            std::vector<double> pts(g.points);
            for (double& x : pts) x = (x + offset_) * factor;
            std::optional<double> bw;
            if (g.bin_width) bw = *g.bin_width * factor;
            return Prior::grid_normalized(std::move(pts), g.weights, bw);
          },
      },
      kind_);
}

cplx characteristic_function(const Prior& prior, double s) {
  require_finite(s, "characteristic_function");
  return std::visit(
      Overloaded{
          [&](const Prior::Gaussian& g) { return cplx(std::exp(-0.5 * g.sigma * g.sigma * s * s), 0.0); },
          [&](const Prior::Uniform& u) {
            const double x = u.half_width * s;
            if (std::abs(x) < 1e-4) return cplx(1.0 - x * x / 6.0 + x * x * x * x / 120.0, 0.0);
            return cplx(std::sin(x) / x, 0.0);
          },
          [&](const Prior::Grid& g) {
            double re = 0.0;
            double im = 0.0;
            for (std::size_t j = 0; j < g.points.size(); ++j) {
              const double phase = s * g.points[j];
              re += g.weights[j] * std::cos(phase);
              im += g.weights[j] * std::sin(phase);
            }
            return cplx(re, im);
          },
      },
      prior.kind_);
}

cplx characteristic_derivative(const Prior& prior, double s) {
  require_finite(s, "characteristic_derivative");
  return std::visit(
      Overloaded{
          [&](const Prior::Gaussian& g) {
            const double v = g.sigma * g.sigma;
            return cplx(-v * s * std::exp(-0.5 * v * s * s), 0.0);
          },
          [&](const Prior::Uniform& u) {
            const double h = u.half_width;
            const double x = h * s;
            if (std::abs(x) < 1e-4) return cplx(h * (-x / 3.0 + x * x * x / 30.0), 0.0);
            return cplx((x * std::cos(x) - std::sin(x)) / (h * s * s), 0.0);
          },
          [&](const Prior::Grid& g) {
            // i * sum w x e^{i s x}
            double re = 0.0;
            double im = 0.0;
            for (std::size_t j = 0; j < g.points.size(); ++j) {
              const double x = g.points[j];
              const double phase = s * x;
              re -= g.weights[j] * x * std::sin(phase);
              im += g.weights[j] * x * std::cos(phase);
            }
            return cplx(re, im);
          },
      },
      prior.kind_);
}

double variance(const Prior& prior) {
  return std::visit(Overloaded{
                        [](const Prior::Gaussian& g) { return g.sigma * g.sigma; },
                        [](const Prior::Uniform& u) { return u.half_width * u.half_width / 3.0; },
                        [](const Prior::Grid& g) {
                          double v = 0.0;
                          for (std::size_t j = 0; j < g.points.size(); ++j)
                            v += g.weights[j] * g.points[j] * g.points[j];
                          return v;
                        },
                    },
                    prior.kind_);
}

double std_dev(const Prior& prior) { return std::sqrt(variance(prior)); }

double entropy(const Prior& prior) {
  return std::visit(
      Overloaded{
          [](const Prior::Gaussian& g) {
            return std::log(std::sqrt(2.0 * std::numbers::pi * std::numbers::e) * g.sigma);
          },
          [](const Prior::Uniform& u) { return std::log(2.0 * u.half_width); },
          [](const Prior::Grid& g) {
            if (!g.bin_width)
              throw Unsupported("entropy of a grid prior needs a bin width (differential entropy undefined)");
            double h = 0.0;
            for (double w : g.weights)
              if (w > 0.0) h -= w * std::log(w / *g.bin_width);
            return h;
          },
      },
      prior.kind_);
}

double fisher_information(const Prior& prior) {
  return std::visit(
      Overloaded{
          [](const Prior::Gaussian& g) { return 1.0 / (g.sigma * g.sigma); },
          [](const Prior::Uniform&) -> double {
            throw Unsupported("uniform prior is not differentiable at its edges; Fisher information undefined");
          },
          [](const Prior::Grid&) -> double {
            throw Unsupported("grid prior carries no density derivative; Fisher information undefined");
          },
      },
      prior.kind_);
}

PosteriorUpdate posterior_update(const Prior& prior, std::span<const double> likelihood) {
  if (prior.family() != Prior::Family::kGrid) throw InvalidArgument("posterior_update needs a grid prior");
  const auto pts = prior.points();
  const auto w = prior.weights();
  if (likelihood.size() != pts.size()) throw InvalidArgument("likelihood length differs from grid size");
  std::vector<double> post(w.size());
  double evidence = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double l = likelihood[j];
    if (!(l >= -1e-12 && l <= 1.0 + 1e-12)) throw InvalidArgument("likelihood entries must lie in [0, 1]");
    post[j] = w[j] * std::clamp(l, 0.0, 1.0);
    evidence += post[j];
  }
  if (!(evidence > 0.0)) throw NumericalFailure("degenerate outcome: zero evidence");
  std::vector<double> abs_points(pts.begin(), pts.end());
  for (double& x : abs_points) x += prior.mean();
  return {Prior::grid_normalized(std::move(abs_points), std::move(post), prior.bin_width()), evidence};
}

Prior discretize(const Prior& prior, int n_points, double half_width_sigmas) {
  if (prior.family() == Prior::Family::kGrid) return prior;
  if (n_points < 3) throw InvalidArgument("discretize needs at least 3 points");
  std::vector<double> pts(static_cast<std::size_t>(n_points));
  std::vector<double> w(pts.size());
  double lo = 0.0;
  double hi = 0.0;
  if (prior.family() == Prior::Family::kGaussian) {
    lo = -half_width_sigmas * prior.sigma();
    hi = -lo;
  } else {
    lo = -prior.half_width();
    hi = prior.half_width();
  }
  const double step = (hi - lo) / (n_points - 1);
  for (int j = 0; j < n_points; ++j) {
    const double x = lo + step * j;
    pts[j] = x + prior.mean();
    double density = 1.0;
    if (prior.family() == Prior::Family::kGaussian) {
      const double z = x / prior.sigma();
      density = std::exp(-0.5 * z * z);
    }
    const double trapezoid = (j == 0 || j == n_points - 1) ? 0.5 : 1.0;
    w[j] = density * trapezoid;
  }
  // Exact mirror symmetry of the grid before centering.
  for (int j = 0; j < n_points / 2; ++j) {
    const double avg = 0.5 * (w[j] + w[n_points - 1 - j]);
    w[j] = avg;
    w[n_points - 1 - j] = avg;
  }
  return Prior::grid_normalized(std::move(pts), std::move(w), step);
}

Prior load_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open prior CSV: " + path.string());
  std::string line;
  bool header_seen = false;
  std::vector<double> pts;
  std::vector<double> w;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.find(',') == std::string::npos) throw InvalidArgument("prior CSV header must have two columns");
      continue;
    }
    std::istringstream ss(line);
    std::string a;
    std::string b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
      throw InvalidArgument("malformed prior CSV row: " + line);
    try {
      pts.push_back(std::stod(a));
      w.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw InvalidArgument("non-numeric prior CSV row: " + line);
    }
  }
  if (!header_seen || pts.empty()) throw InvalidArgument("prior CSV has no data rows");
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-6) throw InvalidArgument("prior CSV weights must sum to 1");
  std::optional<double> bin;
  if (pts.size() > 2) {
    std::vector<double> sorted(pts);
    std::sort(sorted.begin(), sorted.end());
    const double step = (sorted.back() - sorted.front()) / static_cast<double>(sorted.size() - 1);
    bool uniform = step > 0.0;
    for (std::size_t j = 1; j < sorted.size() && uniform; ++j)
      uniform = std::abs(sorted[j] - sorted[j - 1] - step) <= 1e-9 * std::max(1.0, std::abs(step) * 1e3);
    if (uniform) bin = step;
  }
  return Prior::grid_normalized(std::move(pts), std::move(w), bin);
}

void save_grid_csv(const Prior& prior, const std::filesystem::path& path) {
  if (prior.family() != Prior::Family::kGrid) throw InvalidArgument("save_grid_csv needs a grid prior");
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write prior CSV: " + path.string());
  out.precision(17);
  out << "omega,weight\n";
  const auto pts = prior.points();
  const auto w = prior.weights();
  for (std::size_t j = 0; j < pts.size(); ++j) out << pts[j] + prior.mean() << ',' << w[j] << '\n';
}

}  // namespace qsense
