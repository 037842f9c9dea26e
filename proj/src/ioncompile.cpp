#include "qsense/ioncompile.hpp"

#include "qsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsense {

namespace {

constexpr double kTruncationTol = 1e-14;

IonPulse primitive(PulseKind kind, int l, const std::string& group) {
  IonPulse p;
  p.kind = kind;
  p.l = l;
  p.group = group;
  return p;
}

void append(std::vector<IonPulse>& dst, const std::vector<IonPulse>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

// F_l = G_l E_l X' G_l E_l, or sigma_x for l = 0 with the shortcut.
void append_f(std::vector<IonPulse>& out, int l, const FlipOptions& opt, const std::string& group) {
  if (l == 0 && opt.sigma_x_shortcut) {
    out.push_back(primitive(PulseKind::kSigmaX, 0, group));
    return;
  }
  out.push_back(primitive(PulseKind::kG, l, group));
  out.push_back(primitive(PulseKind::kE, l, group));
  out.push_back(primitive(PulseKind::kXprime, 0, group));
  out.push_back(primitive(PulseKind::kG, l, group));
  out.push_back(primitive(PulseKind::kE, l, group));
}

void shift_swap(IonState& s, IonLevel primed, IonLevel plain, int l) {
  const int n = s.cutoff();
  if (l < 0 || l >= n) throw InvalidArgument("hiding pulse shift must lie in [0, n)");
  for (int j = 1; j <= n; ++j) {
    if (j + l <= n) {
      std::swap(s.at(primed, j), s.at(plain, j + l));
    } else if (std::abs(s.at(primed, j)) > kTruncationTol) {
      throw TruncationError("hiding pulse moves population past the motional cutoff");
    }
  }
}

}  // namespace

// ------------------------------------------------------------- names --

std::string to_string(PulseKind kind) {
  switch (kind) {
    case PulseKind::kG: return "G";
    case PulseKind::kE: return "E";
    case PulseKind::kXprime: return "Xprime";
    case PulseKind::kSigmaX: return "SigmaX";
    case PulseKind::kSideband: return "Sideband";
    case PulseKind::kAuxUnitary: return "AuxUnitary";
    case PulseKind::kDetect: return "Detect";
  }
  return "?";
}

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::kPreparation: return "preparation";
    case Stage::kEvolution: return "evolution";
    case Stage::kReadout: return "readout";
  }
  return "?";
}

std::string to_string(IonLevel level) {
  switch (level) {
    case IonLevel::kG: return "g";
    case IonLevel::kE: return "e";
    case IonLevel::kGp: return "g'";
    case IonLevel::kEp: return "e'";
  }
  return "?";
}

PulseKind pulse_kind_from_string(const std::string& s) {
  for (auto k : {PulseKind::kG, PulseKind::kE, PulseKind::kXprime, PulseKind::kSigmaX, PulseKind::kSideband,
                 PulseKind::kAuxUnitary, PulseKind::kDetect})
    if (to_string(k) == s) return k;
  throw InvalidArgument("unknown pulse kind '" + s + "'");
}

Stage stage_from_string(const std::string& s) {
  for (auto k : {Stage::kPreparation, Stage::kEvolution, Stage::kReadout})
    if (to_string(k) == s) return k;
  throw InvalidArgument("unknown pulse stage '" + s + "'");
}

IonLevel ion_level_from_string(const std::string& s) {
  for (auto k : {IonLevel::kG, IonLevel::kE, IonLevel::kGp, IonLevel::kEp})
    if (to_string(k) == s) return k;
  throw InvalidArgument("unknown electronic level '" + s + "'");
}

// ------------------------------------------------------------- state --

IonState::IonState(int cutoff, CVector amplitudes) : cutoff_(cutoff), amp_(std::move(amplitudes)) {
  if (cutoff_ < 1) throw InvalidArgument("motional cutoff must be >= 1");
  if (amp_.size() != 4 * cutoff_) throw InvalidArgument("ion state needs 4 n amplitudes");
}

IonState IonState::basis(int cutoff, IonLevel level, int j) {
  IonState s(cutoff, CVector::Zero(4 * cutoff));
  s.at(level, j) = 1.0;
  return s;
}

IonState IonState::product(int cutoff, IonLevel level, const CVector& motional) {
  if (motional.size() > cutoff) throw InvalidArgument("motional state exceeds the cutoff");
  IonState s(cutoff, CVector::Zero(4 * cutoff));
  for (Eigen::Index k = 0; k < motional.size(); ++k) s.at(level, static_cast<int>(k) + 1) = motional(k);
  return s;
}

Eigen::Index IonState::index(IonLevel level, int j) const {
  if (j < 1 || j > cutoff_) throw InvalidArgument("motional index outside [1, n]");
  return static_cast<Eigen::Index>(static_cast<int>(level) * cutoff_ + (j - 1));
}

CVector IonState::sector(IonLevel level) const {
  return amp_.segment(static_cast<Eigen::Index>(static_cast<int>(level) * cutoff_), cutoff_);
}

// ------------------------------------------------------------- pulses --

void apply_pulse(IonState& s, const IonPulse& p) {
  const int n = s.cutoff();
  switch (p.kind) {
    case PulseKind::kG:
      shift_swap(s, IonLevel::kGp, IonLevel::kG, p.l);
      return;
    case PulseKind::kE:
      shift_swap(s, IonLevel::kEp, IonLevel::kE, p.l);
      return;
    case PulseKind::kXprime:
      for (int j = 1; j <= n; ++j) std::swap(s.at(IonLevel::kGp, j), s.at(IonLevel::kEp, j));
      return;
    case PulseKind::kSigmaX:
      for (int j = 1; j <= n; ++j) std::swap(s.at(IonLevel::kG, j), s.at(IonLevel::kE, j));
      return;
    case PulseKind::kSideband:
      if (p.j_a < 1 || p.j_b < 1 || p.j_a > n || p.j_b > n)
        throw TruncationError("sideband pulse addresses a motional level past the cutoff");
      std::swap(s.at(p.level_a, p.j_a), s.at(p.level_b, p.j_b));
      return;
    case PulseKind::kAuxUnitary:
      for (int j = 1; j <= n; ++j) {
        const cplx a = s.at(IonLevel::kGp, j);
        const cplx b = s.at(IonLevel::kEp, j);
        s.at(IonLevel::kGp, j) = p.u[0] * a + p.u[1] * b;
        s.at(IonLevel::kEp, j) = p.u[2] * a + p.u[3] * b;
      }
      return;
    case PulseKind::kDetect:
      throw InvalidArgument("detection is not a unitary pulse");
  }
}

std::vector<IonPulse> compile_flip(int k, int n, const FlipOptions& options) {
  if (n < 1 || k < 1 || k > n) throw InvalidArgument("flip level must satisfy 1 <= k <= n");
  const std::string group = "U" + std::to_string(k);
  std::vector<IonPulse> out;
  if (k < n) {
    append_f(out, k - 1, options, group);
    append_f(out, k, options, group);
  } else {
    append_f(out, n - 1, options, group);
  }
  return out;
}

std::vector<IonPulse> compile_two_level(int k1, int k2, const std::array<cplx, 4>& v, int n,
                                        const FlipOptions& options) {
  if (k1 == k2 || k1 < 1 || k2 < 1 || k1 > n || k2 > n)
    throw InvalidArgument("two-level operation needs distinct levels within [1, n]");
  const std::string group = "V(" + std::to_string(k1) + "," + std::to_string(k2) + ")";
  auto relabel = [&](std::vector<IonPulse> seq) {
    for (auto& p : seq) p.group = group;
    return seq;
  };
  std::vector<IonPulse> m;
  append(m, relabel(compile_flip(k1, n, options)));
  m.push_back(primitive(PulseKind::kE, k1 - 1, group));
  m.push_back(primitive(PulseKind::kXprime, 0, group));
  append(m, relabel(compile_flip(k2, n, options)));
  m.push_back(primitive(PulseKind::kE, k2 - 1, group));

  std::vector<IonPulse> out = m;
  IonPulse aux = primitive(PulseKind::kAuxUnitary, 0, group);
  aux.u = v;
  out.push_back(aux);
  // Every factor of M is an involution, so M^-1 is M reversed.
  out.insert(out.end(), m.rbegin(), m.rend());
  return out;
}

std::vector<IonPulse> compile_unitary(const CMatrix& q, int n, const FlipOptions& options) {
  const Eigen::Index dim = q.rows();
  if (q.cols() != dim || dim > n || dim < 1) throw InvalidArgument("unitary must be square and fit the cutoff");
  if ((q.adjoint() * q - CMatrix::Identity(dim, dim)).norm() > 1e-9)
    throw InvalidArgument("basis change is not unitary");
  struct Rot {
    Eigen::Index first, second;
    std::array<cplx, 4> u;
  };
  std::vector<Rot> rots;
  CMatrix m = q;
  for (Eigen::Index j = 0; j + 1 < dim; ++j) {
    for (Eigen::Index i = j + 1; i < dim; ++i) {
      const cplx a = m(j, j);
      const cplx b = m(i, j);
      if (std::abs(b) < 1e-15) continue;
      const double r = std::hypot(std::abs(a), std::abs(b));
      const std::array<cplx, 4> t{std::conj(a) / r, std::conj(b) / r, -b / r, a / r};
      const CVector rj = m.row(j), ri = m.row(i);
      m.row(j) = t[0] * rj + t[1] * ri;
      m.row(i) = t[2] * rj + t[3] * ri;
      rots.push_back({j, i, t});
    }
  }
  // q = T_1^dag ... T_m^dag D: apply D, then T_m^dag, ..., T_1^dag.
  std::vector<IonPulse> out;
  auto level = [](Eigen::Index i) { return static_cast<int>(i) + 1; };
  if (dim >= 2) {
    for (Eigen::Index j = 0; j + 1 < dim; ++j)
      append(out, compile_two_level(level(j), level(j + 1), {m(j, j), 0.0, 0.0, 1.0}, n, options));
    append(out, compile_two_level(level(dim - 2), level(dim - 1), {1.0, 0.0, 0.0, m(dim - 1, dim - 1)}, n, options));
  }
  for (auto it = rots.rbegin(); it != rots.rend(); ++it) {
    const auto& t = it->u;
    const std::array<cplx, 4> dag{std::conj(t[0]), std::conj(t[2]), std::conj(t[1]), std::conj(t[3])};
    append(out, compile_two_level(level(it->first), level(it->second), dag, n, options));
  }
  return out;
}

// ------------------------------------------------------------- protocol --

IonSchedule compile_protocol(const Spectrum& spectrum, const ProbeState& state, double t, int n,
                             const CompileOptions& options) {
  const auto levels = static_cast<int>(state.size());
  if (static_cast<int>(spectrum.size()) != levels) throw InvalidArgument("spectrum and state dimensions differ");
  if (levels > n) throw InvalidArgument("protocol needs more levels than the motional cutoff");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("protocol time must be finite and >= 0");
  IonSchedule sched;
  sched.cutoff = n;
  sched.t = t;
  auto stamp = [](std::vector<IonPulse> seq, Stage stage, double time) {
    for (auto& p : seq) {
      p.stage = stage;
      p.time = time;
    }
    return seq;
  };

  // Preparation: Givens chain between level 1 and level k.
  const CVector& c = state.coeffs();
  cplx a = 1.0;
  for (int k = 2; k <= levels; ++k) {
    const cplx ck = c(k - 1);
    const cplx next = (k == levels) ? c(0) : cplx(std::sqrt(std::max(0.0, std::norm(a) - std::norm(ck))), 0.0);
    if (std::abs(a) < 1e-15) break;
    const cplx x = next / a, y = ck / a;
    const std::array<cplx, 4> v{x, -std::conj(y), y, std::conj(x)};
    append(sched.pulses, stamp(compile_two_level(1, k, v, n, options.flip), Stage::kPreparation, 0.0));
    a = next;
  }

  // Evolution: flips at t_k, ties broken by k.
  std::vector<int> order(static_cast<std::size_t>(levels));
  std::iota(order.begin(), order.end(), 0);
  auto flip_time = [&](int l) { return 0.5 * t * (spectrum[static_cast<std::size_t>(l)] + 1.0); };
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return flip_time(x) < flip_time(y); });
  for (int l : order)
    append(sched.pulses, stamp(compile_flip(l + 1, n, options.flip), Stage::kEvolution, flip_time(l)));

  // Readout.
  std::vector<IonPulse> ro;
  ro.push_back(primitive(PulseKind::kSigmaX, 0, "unflip"));
  if (options.readout_basis) {
    const CMatrix& w = *options.readout_basis;
    if (w.rows() != levels || w.cols() != levels) throw InvalidArgument("readout basis dimension differs");
    append(ro, compile_unitary(w.adjoint(), n, options.flip));
  }
  for (int k = 1; k <= levels; ++k) {
    const auto flip = compile_flip(k, n, options.flip);
    append(ro, flip);
    IonPulse d = primitive(PulseKind::kDetect, k, "P" + std::to_string(k));
    ro.push_back(d);
    append(ro, flip);
  }
  append(sched.pulses, stamp(std::move(ro), Stage::kReadout, t));
  return sched;
}

IonState simulate_ion(const std::vector<IonPulse>& pulses, double b, double t, const IonState& initial,
                      bool include_readout) {
  std::vector<std::size_t> order(pulses.size());
  std::iota(order.begin(), order.end(), 0);
  for (const auto& p : pulses)
    if (p.time < -1e-12 || p.time > t + 1e-12) throw InvalidArgument("pulse time outside [0, t]");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (pulses[x].time != pulses[y].time) return pulses[x].time < pulses[y].time;
    return static_cast<int>(pulses[x].stage) < static_cast<int>(pulses[y].stage);
  });
  IonState s = initial;
  const int n = s.cutoff();
  double now = 0.0;
  auto evolve = [&](double dt) {
    if (dt <= 0.0) return;
    const cplx pg = std::polar(1.0, -b * dt);
    const cplx pe = std::conj(pg);
    for (int j = 1; j <= n; ++j) {
      s.at(IonLevel::kG, j) *= pg;
      s.at(IonLevel::kE, j) *= pe;
    }
  };
  for (std::size_t idx : order) {
    const IonPulse& p = pulses[idx];
    if (p.kind == PulseKind::kDetect) continue;
    if (p.stage == Stage::kReadout && !include_readout) continue;
    const double when = std::clamp(p.time, 0.0, t);
    evolve(when - now);
    now = std::max(now, when);
    apply_pulse(s, p);
  }
  evolve(t - now);
  return s;
}

std::vector<double> readout_distribution(const std::vector<IonPulse>& pulses, const IonState& state) {
  IonState s = state;
  std::vector<double> probs;
  const int n = s.cutoff();
  for (const auto& p : pulses) {
    if (p.stage != Stage::kReadout) continue;
    if (p.kind != PulseKind::kDetect) {
      apply_pulse(s, p);
      continue;
    }
    double pe = 0.0;
    for (int j = 1; j <= n; ++j) {
      pe += std::norm(s.at(IonLevel::kE, j));
      s.at(IonLevel::kE, j) = 0.0;
    }
    probs.push_back(pe);
  }
  return probs;
}

IonState effective_ion_state(const Spectrum& spectrum, const ProbeState& state, double b, double t, int n) {
  if (spectrum.size() != state.size()) throw InvalidArgument("spectrum and state dimensions differ");
  CVector m(static_cast<Eigen::Index>(state.size()));
  for (std::size_t k = 0; k < state.size(); ++k)
    m(static_cast<Eigen::Index>(k)) =
        state.coeffs()(static_cast<Eigen::Index>(k)) * std::polar(1.0, -b * spectrum[k] * t);
  return IonState::product(n, IonLevel::kE, m);
}

std::vector<IonPulse> small_scheme_pulses(double x, double t) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("swap fraction must lie in [0, 1]");
  const double when = x * t;
  std::vector<IonPulse> out;
  IonPulse hide = primitive(PulseKind::kE, 1, "small");
  hide.time = when;
  IonPulse sb = primitive(PulseKind::kSideband, 0, "small");
  sb.time = when;
  sb.level_a = IonLevel::kE;
  sb.j_a = 1;
  sb.level_b = IonLevel::kG;
  sb.j_b = 2;
  out = {hide, sb, hide};
  return out;
}

std::vector<double> small_scheme_spectrum(double x) {
  const double l1 = 1.0 - 2.0 * x;
  return {1.0, l1, -l1, -1.0};
}

}  // namespace qsense
