#pragma once

#include "qsense/estimation.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qsense {

// Electronic levels of the ion. Basis |level, j>, j = 1..n (motional).
enum class IonLevel { kG = 0, kE = 1, kGp = 2, kEp = 3 };

enum class PulseKind {
  kG,           // |g', j> <-> |g, j + l>
  kE,           // |e', j> <-> |e, j + l>
  kXprime,      // |g'> <-> |e'>
  kSigmaX,      // |g> <-> |e>
  kSideband,    // |level_a, j_a> <-> |level_b, j_b>
  kAuxUnitary,  // 2x2 unitary on {g', e'}
  kDetect,      // two-outcome readout of the |e> population
};

enum class Stage { kPreparation = 0, kEvolution = 1, kReadout = 2 };

struct IonPulse {
  PulseKind kind = PulseKind::kSigmaX;
  double time = 0.0;
  Stage stage = Stage::kEvolution;
  int l = 0;  // G/E shift; Detect: motional level being tested
  IonLevel level_a = IonLevel::kE;
  int j_a = 1;
  IonLevel level_b = IonLevel::kG;
  int j_b = 2;
  std::array<cplx, 4> u{1.0, 0.0, 0.0, 1.0};  // row-major in (g', e')
  std::string group;                           // macro label, e.g. "U3", "V(1,2)"
};

std::string to_string(PulseKind kind);
std::string to_string(Stage stage);
std::string to_string(IonLevel level);
PulseKind pulse_kind_from_string(const std::string& s);
Stage stage_from_string(const std::string& s);
IonLevel ion_level_from_string(const std::string& s);

class IonState {
 public:
  IonState() = default;
  IonState(int cutoff, CVector amplitudes);

  static IonState basis(int cutoff, IonLevel level, int j);
  // |level> (x) sum_k motional(k - 1) |k>, motional padded with zeros to n.
  static IonState product(int cutoff, IonLevel level, const CVector& motional);

  int cutoff() const { return cutoff_; }
  const CVector& amplitudes() const { return amp_; }
  CVector& amplitudes() { return amp_; }
  cplx& at(IonLevel level, int j) { return amp_(index(level, j)); }
  cplx at(IonLevel level, int j) const { return amp_(index(level, j)); }
  Eigen::Index index(IonLevel level, int j) const;
  // Motional amplitudes of one electronic level.
  CVector sector(IonLevel level) const;

 private:
  int cutoff_ = 0;
  CVector amp_;
};

// Exact action of one pulse. Throws TruncationError when population would
// have to move past the motional cutoff. Detect pulses are not unitary and
// are rejected here.
void apply_pulse(IonState& state, const IonPulse& pulse);

struct FlipOptions {
  bool sigma_x_shortcut = false;  // replace G_0 E_0 X' G_0 E_0 by sigma_x
};

// U_k = sigma_x (x) |k><k| + 1 (x) (1 - |k><k|) as F_k F_{k-1} (k < n) or
// F_{n-1} (k = n), with F_l = G_l E_l X' G_l E_l.
std::vector<IonPulse> compile_flip(int k, int n, const FlipOptions& options = {});

// Arbitrary 2x2 unitary between motional levels k1 != k2 of |g> (x) motion:
// M, V' on {g', e'}, M reversed, with M = E_{k2-1} U_{k2} X' E_{k1-1} U_{k1}.
std::vector<IonPulse> compile_two_level(int k1, int k2, const std::array<cplx, 4>& v, int n,
                                        const FlipOptions& options = {});

// Two-level decomposition of an L x L unitary acting on |g> (x) levels 1..L.
std::vector<IonPulse> compile_unitary(const CMatrix& q, int n, const FlipOptions& options = {});

struct IonSchedule {
  int cutoff = 0;
  double t = 0.0;
  std::vector<IonPulse> pulses;
};

struct CompileOptions {
  FlipOptions flip;
  // Measurement vectors as columns; identity when empty.
  std::optional<CMatrix> readout_basis;
};

// Preparation of |g> (x) sum c_k |k> from |g, 1>, flips U_k at
// t_k = t (lambda_k + 1) / 2 (ties ordered by k), then readout: sigma_x,
// the basis change, and a U_k / Detect / U_k triple per level.
IonSchedule compile_protocol(const Spectrum& spectrum, const ProbeState& state, double t, int n,
                             const CompileOptions& options = {});

// Free evolution exp(-i B sigma_z dt) on {g, e} between pulses (primed levels
// frozen). Pulses are applied in (time, stage) order. Readout pulses are
// skipped unless include_readout; Detect pulses are always skipped.
IonState simulate_ion(const std::vector<IonPulse>& pulses, double b, double t, const IonState& initial,
                      bool include_readout = false);

// Outcome probabilities of the Detect pulses of the readout stage, applied
// to a post-evolution state.
std::vector<double> readout_distribution(const std::vector<IonPulse>& pulses, const IonState& state);

// |e> (x) sum_k c_k exp(-i B lambda_k t) |k>.
IonState effective_ion_state(const Spectrum& spectrum, const ProbeState& state, double b, double t, int n);

// Small-n scheme on |g/e> (x) |1/2>: at time x t, E_1, the sideband
// |e,1> <-> |g,2>, E_1.
std::vector<IonPulse> small_scheme_pulses(double x, double t);
// Effective eigenvalues of the small scheme, labelled by the initial state
// in the order |g,1>, |e,1>, |g,2>, |e,2>.
std::vector<double> small_scheme_spectrum(double x);

}  // namespace qsense
