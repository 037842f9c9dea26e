#include "qsense/engineering.hpp"

#include "qsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace qsense {

namespace {

constexpr double kAngleSlack = 1e-12;

double branch_sign(int j) { return j == 0 ? 1.0 : -1.0; }

std::vector<const LiftEvent*> time_ordered(const LiftSchedule& s) {
  std::vector<const LiftEvent*> ev;
  ev.reserve(s.events.size());
  for (const auto& e : s.events) ev.push_back(&e);
  std::stable_sort(ev.begin(), ev.end(), [](const LiftEvent* a, const LiftEvent* b) {
    if (a->time != b->time) return a->time < b->time;
    if (a->branch != b->branch) return a->branch < b->branch;
    return a->k < b->k;
  });
  return ev;
}

double sum_sq(const std::vector<double>& v, std::size_t from) {
  double s = 0.0;
  for (std::size_t i = from; i < v.size(); ++i) s += v[i] * v[i];
  return s;
}

}  // namespace

int LiftSchedule::ancilla_levels() const {
  int n = 1;
  for (const auto& e : events) n = std::max(n, e.k);
  return n;
}

void validate(const LiftSchedule& s) {
  if (!(s.total_time >= 0.0) || !std::isfinite(s.total_time))
    throw InvalidArgument("lift schedule needs a finite total time >= 0");
  if (!std::isfinite(s.initial_angle)) throw InvalidArgument("lift schedule initial angle must be finite");
  const int n = s.ancilla_levels();
  std::vector<char> used(static_cast<std::size_t>(2 * n), 0);
  for (const auto& e : s.events) {
    if (e.branch != 0 && e.branch != 1) throw InvalidArgument("lift event branch must be 0 or 1");
    if (e.k < 2) throw InvalidArgument("lift event ancilla index must be >= 2");
    if (e.time < -1e-12 || e.time > s.total_time + 1e-12 || !std::isfinite(e.time))
      throw InvalidArgument("lift event time outside [0, t]");
    if (e.angle < -kAngleSlack || e.angle > std::numbers::pi / 2 + kAngleSlack)
      throw InvalidArgument("lift event angle outside [0, pi/2]");
    auto& flag = used[static_cast<std::size_t>(LiftSchedule::slot(e.branch, e.k, n))];
    if (flag) throw InvalidArgument("lift schedule uses a destination level twice");
    flag = 1;
  }
  for (int j = 0; j < 2; ++j) {
    std::vector<const LiftEvent*> br;
    for (const auto& e : s.events)
      if (e.branch == j) br.push_back(&e);
    std::sort(br.begin(), br.end(), [](auto* a, auto* b) { return a->k < b->k; });
    for (std::size_t i = 1; i < br.size(); ++i)
      if (br[i]->time < br[i - 1]->time)
        throw InvalidArgument("lift event times must be non-decreasing in k within a branch");
  }
}

LiftSchedule lift_times_from_spectrum(const Spectrum& targets, double t, BranchPolicy policy) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("lift needs t > 0");
  struct Item {
    int target;
    int branch;
    double time;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double mu = targets[i];
    if (std::abs(mu) > 1.0 + 1e-12) throw InvalidArgument("target eigenvalue |mu| > 1 needs negative time");
    const int j = (policy == BranchPolicy::kSignSplit && mu > 0.0) ? 1 : 0;
    const double lambda = std::clamp(mu * branch_sign(j), -1.0, 1.0);
    items.push_back({static_cast<int>(i), j, 0.5 * t * (1.0 - lambda)});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.branch != b.branch) return a.branch < b.branch;
    return a.time < b.time;
  });
  LiftSchedule s;
  s.total_time = t;
  std::array<int, 2> next_k{2, 2};
  for (const auto& it : items) {
    LiftEvent e;
    e.branch = it.branch;
    e.k = next_k[static_cast<std::size_t>(it.branch)]++;
    e.time = it.time;
    e.target = it.target;
    s.events.push_back(e);
  }
  return s;
}

LiftSchedule angles_from_coefficients(const LiftCoefficients& target, double c0, double s0) {
  for (const auto& br : target.coeffs)
    for (double c : br)
      if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("lift coefficients must be nonnegative");
  if (c0 < 0.0 || s0 < 0.0) throw InvalidArgument("initial split must be nonnegative");
  const auto& b0 = target.coeffs[0];
  const auto& b1 = target.coeffs[1];
  const double base0 = b0.empty() ? 0.0 : b0[0];  // c_{0,1}
  const double base1 = b1.empty() ? 0.0 : b1[0];  // c_{1,1}
  const double total = sum_sq(b0, 0) + sum_sq(b1, 0);
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("lift coefficients must be normalized");
  if (std::abs(c0 * c0 + s0 * s0 - 1.0) > 1e-12) throw InvalidArgument("initial split must be normalized");
  // Branch-1 destinations and |0,1> draw from c0; branch-0 destinations and |1,1> from s0.
  const double from_c0 = base0 * base0 + sum_sq(b1, 1);
  const double from_s0 = base1 * base1 + sum_sq(b0, 1);
  if (std::abs(from_c0 - c0 * c0) > 1e-12 || std::abs(from_s0 - s0 * s0) > 1e-12)
    throw InvalidArgument("lift coefficients are inconsistent with the initial split");

  LiftSchedule s;
  s.initial_angle = std::atan2(s0, c0);
  for (int j = 0; j < 2; ++j) {
    const auto& br = target.coeffs[static_cast<std::size_t>(j)];
    const double remnant = (j == 0) ? base1 : base0;  // what stays in the source
    for (std::size_t k = 1; k < br.size(); ++k) {
      const double tail = std::sqrt(remnant * remnant + sum_sq(br, k + 1));
      LiftEvent e;
      e.branch = j;
      e.k = static_cast<int>(k) + 1;
      e.angle = std::atan2(br[k], tail);
      s.events.push_back(e);
    }
  }
  return s;
}

LiftCoefficients lift_coefficients(const LiftSchedule& s) {
  const int n = s.ancilla_levels();
  LiftCoefficients out;
  out.coeffs[0].assign(static_cast<std::size_t>(n), 0.0);
  out.coeffs[1].assign(static_cast<std::size_t>(n), 0.0);
  const std::array<double, 2> source{std::sin(s.initial_angle), std::cos(s.initial_angle)};
  for (int j = 0; j < 2; ++j) {
    std::vector<const LiftEvent*> br;
    for (const auto& e : s.events)
      if (e.branch == j) br.push_back(&e);
    std::sort(br.begin(), br.end(), [](auto* a, auto* b) { return a->k < b->k; });
    double amp = source[static_cast<std::size_t>(j)];
    for (const auto* e : br) {
      out.coeffs[static_cast<std::size_t>(j)][static_cast<std::size_t>(e->k - 1)] = amp * std::sin(e->angle);
      amp *= std::cos(e->angle);
    }
    out.coeffs[static_cast<std::size_t>(1 - j)][0] = amp;
  }
  return out;
}

LiftSchedule plan_lift(const Spectrum& targets, std::span<const double> amplitudes, double t,
                       BranchPolicy policy) {
  if (amplitudes.size() != targets.size()) throw InvalidArgument("plan_lift: amplitude count differs from spectrum");
  LiftSchedule s = lift_times_from_spectrum(targets, t, policy);
  const int n = s.ancilla_levels();
  LiftCoefficients c;
  c.coeffs[0].assign(static_cast<std::size_t>(n), 0.0);
  c.coeffs[1].assign(static_cast<std::size_t>(n), 0.0);
  double norm = 0.0;
  for (double a : amplitudes) {
    if (!(a >= 0.0)) throw InvalidArgument("plan_lift needs nonnegative amplitudes");
    norm += a * a;
  }
  if (!(norm > 0.0)) throw InvalidArgument("plan_lift needs a nonzero state");
  norm = std::sqrt(norm);
  for (const auto& e : s.events)
    c.coeffs[static_cast<std::size_t>(e.branch)][static_cast<std::size_t>(e.k - 1)] =
        amplitudes[static_cast<std::size_t>(e.target)] / norm;
  const double c0 = std::sqrt(sum_sq(c.coeffs[1], 1));
  const double s0 = std::sqrt(sum_sq(c.coeffs[0], 1));
  const double split = std::hypot(c0, s0);
  LiftSchedule angles = angles_from_coefficients(c, c0 / split, s0 / split);
  s.initial_angle = angles.initial_angle;
  for (auto& e : s.events) {
    for (const auto& a : angles.events)
      if (a.branch == e.branch && a.k == e.k) e.angle = a.angle;
  }
  return s;
}

CVector simulate_lift(const LiftSchedule& s, double omega) {
  validate(s);
  const int n = s.ancilla_levels();
  CVector psi = CVector::Zero(2 * n);
  psi(LiftSchedule::slot(0, 1, n)) = std::cos(s.initial_angle);
  psi(LiftSchedule::slot(1, 1, n)) = std::sin(s.initial_angle);
  auto evolve = [&](double dt) {
    if (dt <= 0.0) return;
    const cplx up = std::polar(1.0, -0.5 * omega * dt);
    const cplx down = std::conj(up);
    for (int k = 0; k < n; ++k) {
      psi(k) *= up;
      psi(n + k) *= down;
    }
  };
  double now = 0.0;
  for (const LiftEvent* e : time_ordered(s)) {
    evolve(e->time - now);
    now = std::max(now, e->time);
    const Eigen::Index src = LiftSchedule::slot(1 - e->branch, 1, n);
    const Eigen::Index dst = LiftSchedule::slot(e->branch, e->k, n);
    const double c = std::cos(e->angle);
    const double sn = std::sin(e->angle);
    const cplx a = psi(src);
    const cplx b = psi(dst);
    psi(src) = c * a - sn * b;
    psi(dst) = sn * a + c * b;
  }
  evolve(s.total_time - now);
  return psi;
}

std::vector<double> lift_effective_spectrum(const LiftSchedule& s) {
  const int n = s.ancilla_levels();
  std::vector<double> mu(static_cast<std::size_t>(2 * n));
  for (int k = 0; k < n; ++k) {
    mu[static_cast<std::size_t>(k)] = 1.0;
    mu[static_cast<std::size_t>(n + k)] = -1.0;
  }
  for (const auto& e : s.events) {
    const double lambda = s.total_time > 0.0 ? 1.0 - 2.0 * e.time / s.total_time : 1.0;
    mu[static_cast<std::size_t>(LiftSchedule::slot(e.branch, e.k, n))] = branch_sign(e.branch) * lambda;
  }
  return mu;
}

CVector lift_closed_form(const LiftSchedule& s, double omega) {
  const int n = s.ancilla_levels();
  const auto c = lift_coefficients(s);
  const auto mu = lift_effective_spectrum(s);
  CVector psi(2 * n);
  for (int j = 0; j < 2; ++j) {
    for (int k = 1; k <= n; ++k) {
      const auto idx = static_cast<std::size_t>(LiftSchedule::slot(j, k, n));
      psi(static_cast<Eigen::Index>(idx)) =
          c.coeffs[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)] *
          std::polar(1.0, -0.5 * omega * mu[idx] * s.total_time);
    }
  }
  return psi;
}

// ------------------------------------------------------------------ swaps --

Spectrum swap_effective_spectrum(const Spectrum& base, const SwapSchedule& schedule) {
  const int dim = static_cast<int>(base.size());
  if (schedule.dimension != 0 && schedule.dimension != dim)
    throw InvalidArgument("swap schedule dimension differs from base spectrum");
  std::vector<char> touched(static_cast<std::size_t>(dim), 0);
  std::vector<double> out(base.values());
  for (const auto& p : schedule.pairs) {
    if (p.a < 0 || p.b < 0 || p.a >= dim || p.b >= dim || p.a == p.b)
      throw InvalidArgument("swap pair indices must be distinct and within the dimension");
    if (!(p.x >= 0.0 && p.x <= 1.0)) throw InvalidArgument("swap fraction must lie in [0, 1]");
    if (touched[static_cast<std::size_t>(p.a)] || touched[static_cast<std::size_t>(p.b)])
      throw InvalidArgument("overlapping swap pairs; chain calls for sequential swaps");
    touched[static_cast<std::size_t>(p.a)] = touched[static_cast<std::size_t>(p.b)] = 1;
    const double la = base[static_cast<std::size_t>(p.a)];
    const double lb = base[static_cast<std::size_t>(p.b)];
    out[static_cast<std::size_t>(p.a)] = p.x * la + (1.0 - p.x) * lb;
    out[static_cast<std::size_t>(p.b)] = (1.0 - p.x) * la + p.x * lb;
  }
  return Spectrum(std::move(out));
}

Spectrum two_spin_base() { return Spectrum({1.0, 0.0, 0.0, -1.0}); }

SwapSchedule two_spin_pi_swap(double x) { return SwapSchedule{4, {{0, 1, x}, {3, 2, x}}}; }

std::vector<double> freeze_phases(const Spectrum& spectrum, double t_star, double t) {
  if (!(t_star >= 0.0) || !(t >= t_star)) throw InvalidArgument("freeze_phases needs t >= t_star >= 0");
  return phase_coefficients(spectrum, t_star);
}

BandCapacity band_capacity(int n_qubits) {
  if (n_qubits < 2) throw InvalidArgument("band capacity needs N >= 2");
  BandCapacity b;
  b.k_min = (n_qubits + 3) / 4;        // ceil(N/4)
  b.k_max = (3 * n_qubits) / 4;        // floor(3N/4)
  auto log_binom = [&](int k) {
    return std::lgamma(n_qubits + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n_qubits - k + 1.0);
  };
  int k_star = b.k_min;
  for (int k = b.k_min; k <= b.k_max; ++k)
    if (log_binom(k) < log_binom(k_star)) k_star = k;
  // Exact product where it fits in a double mantissa.
  long double value = 1.0L;
  for (int i = 1; i <= k_star; ++i) value = value * (n_qubits - k_star + i) / i;
  b.levels = static_cast<double>(std::round(value));
  b.log_levels = log_binom(k_star);
  b.radius_factor = 0.5;
  return b;
}

}  // namespace qsense
