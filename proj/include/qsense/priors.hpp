#pragma once

#include "qsense/linalg.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qsense {

// Prior density over the frequency. Every prior is shifted to zero mean when
// it is built; mean() returns the removed offset, and all transforms below
// refer to the centered density.
class Prior {
 public:
  enum class Family { kGaussian, kUniform, kGrid };

  static Prior gaussian(double mean, double sigma);
  static Prior uniform(double lo, double hi);
  // Weights must sum to one within 1e-12. bin_width, when given, turns the
  // point masses into a histogram density (needed for entropy).
  static Prior grid(std::vector<double> points, std::vector<double> weights,
                    std::optional<double> bin_width = std::nullopt);
  // Same as grid() but rescales the weights to unit sum first.
  static Prior grid_normalized(std::vector<double> points, std::vector<double> weights,
                               std::optional<double> bin_width = std::nullopt);

  Family family() const;
  std::string family_name() const;
  double mean() const { return offset_; }
  bool symmetric() const { return symmetric_; }

  // Gaussian width / uniform half width of the centered density.
  double sigma() const;
  double half_width() const;

  // Centered grid data; empty for analytic families.
  std::span<const double> points() const;
  std::span<const double> weights() const;
  std::optional<double> bin_width() const;

  // Frequency-unit rescaling omega -> factor * omega.
  Prior scaled(double factor) const;

 private:
  struct Gaussian {
    double sigma;
  };
  struct Uniform {
    double half_width;
  };
  struct Grid {
    std::vector<double> points;
    std::vector<double> weights;
    std::optional<double> bin_width;
  };

  Prior(std::variant<Gaussian, Uniform, Grid> kind, double offset);
  void detect_symmetry();

  std::variant<Gaussian, Uniform, Grid> kind_;
  double offset_ = 0.0;
  bool symmetric_ = false;

  friend cplx characteristic_function(const Prior&, double);
  friend cplx characteristic_derivative(const Prior&, double);
  friend double variance(const Prior&);
  friend double entropy(const Prior&);
  friend double fisher_information(const Prior&);
};

// p(s) = E[exp(i s w)] of the centered density.
cplx characteristic_function(const Prior& prior, double s);
// dp/ds = i E[w exp(i s w)].
cplx characteristic_derivative(const Prior& prior, double s);

double variance(const Prior& prior);
double std_dev(const Prior& prior);

// Differential entropy in nats. Grid priors need a bin width.
double entropy(const Prior& prior);

// Integral of (p')^2 / p. Only the Gaussian family has a differentiable
// density with finite Fisher information; the others throw Unsupported.
double fisher_information(const Prior& prior);

struct PosteriorUpdate {
  Prior posterior;
  double evidence;
};

// Bayes rule on a grid prior. likelihood[j] = p(outcome | points()[j]).
// The posterior is expressed in absolute frequency (its mean() carries the
// prior offset plus the posterior shift).
PosteriorUpdate posterior_update(const Prior& prior, std::span<const double> likelihood);

// Trapezoidal grid version of an analytic prior: Gaussian on
// mean +- half_width_sigmas * sigma, Uniform on [lo, hi].
Prior discretize(const Prior& prior, int n_points = 4001, double half_width_sigmas = 8.0);

// Two-column CSV (omega, weight) with a header row. Weights are renormalized
// when they sum to one within 1e-6; uniformly spaced points get a bin width.
Prior load_grid_csv(const std::filesystem::path& path);
void save_grid_csv(const Prior& prior, const std::filesystem::path& path);

}  // namespace qsense
