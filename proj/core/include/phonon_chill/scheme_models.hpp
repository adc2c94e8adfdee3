#pragma once

// Rotating-frame models of the four-level cooling schemes.
//
// Internal levels are always ordered (|A2>, |+1>, |0>, |-1>). Every frequency
// is measured in units of the vibrational frequency omega_k, which is kept as
// an explicit field (normally 1) so that the conversion from SI is visible.
//
// Bare Hamiltonians (the ones the master equation integrates):
//
//   Asymmetric   w a^+a - D- |A2><A2| - (D- - D+)(|+1><+1| + |0><0|)
//                + W/2 (|A2><+1| + |A2><-1| + h.c.) + Wg/2 (|+1><0| + h.c.)
//                + lambda (a + a^+) sz'
//   Symmetric    w a^+a - D |A2><A2| + Dg |0><0|
//                + W/2 (|A2><+1| + |A2><-1| + h.c.)
//                + Wg/2 (|+1><0| + |-1><0| + h.c.) + lambda (a + a^+) sz'
//
// with sz' = |+1><+1| - |-1><-1|. On the dark-state line D- = D+ + Wg/2 the
// ground-manifold shift of the asymmetric model is -Wg/2 (|+1><+1| + |0><0|),
// which in the dressed basis {d, b, Y} equals -Wg |Y><Y| and leaves |d>, |b>
// at zero energy. Off that line the extra piece is an offset
// delta (|+1><+1| + |0><0|) with delta = Wg/2 - (D- - D+).

#include "phonon_chill/operator_core.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phonon_chill {

enum Level : std::size_t { kA2 = 0, kPlusOne = 1, kZero = 2, kMinusOne = 3 };

enum class SchemeKind { Asymmetric, Symmetric, EitBaseline, StarkBaseline };

std::string_view to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(std::string_view name);

struct SchemeConfig {
  SchemeKind kind = SchemeKind::Asymmetric;

  double omega_k = 1.0;          // reference vibrational frequency
  double lambda = 0.0;           // spin-phonon coupling
  double laser_rabi = 0.0;       // Omega, both optical beams

  std::optional<double> microwave_rabi;       // Omega_g
  std::optional<double> laser_detuning_plus;  // Delta_+ (asymmetric)
  std::optional<double> laser_detuning_minus; // Delta_- (asymmetric)
  std::optional<double> laser_detuning;       // Delta (symmetric, baselines)
  std::optional<double> microwave_detuning;   // Delta_g (symmetric, Stark baseline)

  double decay_rate = 1.0;                             // Gamma of |A2>
  std::array<double, 3> branching{1.0 / 3, 1.0 / 3, 1.0 / 3};  // into +1, 0, -1
  double phonon_damping = 0.0;                         // gamma_k = omega_k / Q
  double bath_occupation = 0.0;                        // N(omega_k)
  std::size_t fock_dim = 15;

  // Asymmetric only: accept D- != D+ + Wg/2 (robustness scans).
  bool allow_dark_offset = false;

  double eta() const { return lambda / omega_k; }

  // Throws ConfigError describing the first violated constraint.
  void validate() const;

  friend bool operator==(const SchemeConfig&, const SchemeConfig&) = default;
};

// Gate-point operating configurations used throughout the tests, CLI presets
// and comparisons. The asymmetric laser detuning defaults to the cooling peak
// D- = 3 W^2 / (7 w) - w.
SchemeConfig asymmetric_gate_point(double lambda, double laser_rabi, double decay_rate,
                                   std::optional<double> detuning_minus = std::nullopt);
SchemeConfig symmetric_gate_point(double lambda, double laser_rabi, double decay_rate,
                                  double laser_detuning = 0.0,
                                  double microwave_rabi = 2.0);

// Three-level reductions used as comparison baselines. Neither is a faithful
// reproduction of the published proposals; both reuse the four-level builder
// with one ground level disconnected.
//
// EIT: Lambda system on (|+1>, |-1>, |A2>), both beams at D = W^2/(2w) - w so
// the bright-state light shift is resonant with the red sideband; |0> is idle.
SchemeConfig eit_baseline(double lambda, double laser_rabi, double decay_rate);
// Stark: (|+1>, |0>, |A2>) with a weak microwave (Wg = w/4) dressing the
// ground pair, a red-detuned laser D = -2W, and Dg = -w + W^2/(4D) which puts
// the light-shifted ground splitting on the red sideband; |-1> is idle.
SchemeConfig stark_baseline(double lambda, double laser_rabi, double decay_rate);

// Levels the scheme actually drives; the rest are decoupled and excluded from
// steady-state kernels.
std::vector<std::size_t> active_levels(SchemeKind kind);

// D-, with D+ = D- - Wg/2 implied. Only meaningful for Asymmetric.
double dark_condition_offset(const SchemeConfig& cfg);

ComplexMatrix sigma_z_prime();  // |+1><+1| - |-1><-1| on the 4 levels

// Phonon-free internal Hamiltonian (4x4), lambda and w a^+a dropped.
ComplexMatrix internal_hamiltonian(const SchemeConfig& cfg);

ComplexMatrix bare_hamiltonian(const SchemeConfig& cfg, const HilbertSpace& space);

// Dressed-basis Hamiltonians written term by term and rotated back to the bare
// basis. Symmetric: identical to bare_hamiltonian. Asymmetric: differs from the
// bare one by exactly asymmetric_residual_coupling.
ComplexMatrix effective_hamiltonian(const SchemeConfig& cfg, const HilbertSpace& space);

// (lambda/2)(a+a^+)(|Y><Y| - |b><b|) + (lambda/sqrt 12)(a+a^+)(|b><Y| + |Y><b|)
ComplexMatrix asymmetric_residual_coupling(const SchemeConfig& cfg,
                                           const HilbertSpace& space);

struct DressedBasis {
  std::array<std::string, 4> labels;
  // Row k holds the bare-basis components of dressed state k, so that
  // h_dressed = u h_bare u^dagger.
  ComplexMatrix u;

  ComplexVector state(std::size_t k) const { return u.row(k).adjoint(); }
};

// Asymmetric: (A2, d, b, Y). Symmetric: (A2, D, B, 0).
DressedBasis dressed_basis(SchemeKind kind);

struct Jump {
  double rate = 0.0;
  ComplexMatrix op;
  std::string label;
};

// |i><A2| at rate branching_i * Gamma (baselines renormalise over their two
// active ground levels), then b at (N+1) gamma_k and b^+ at N gamma_k. Zero
// rates are omitted.
std::vector<Jump> dissipators(const SchemeConfig& cfg, const HilbertSpace& space);
// The optical decay channels alone, as 4x4 operators.
std::vector<Jump> internal_dissipators(const SchemeConfig& cfg);

// (0, 1, 1, -1)/sqrt 3 for the asymmetric scheme, (0, 1, 0, -1)/sqrt 2 for
// the symmetric one (and the EIT baseline, which shares its dark state).
ComplexVector dark_state(const SchemeConfig& cfg);

// First-order steady states, normalised:
//   asymmetric  |d>|0> - (eta/sqrt 2)(|b> - sqrt 3 |Y>)|1>
//   symmetric   |D>|0> - (sqrt 2 eta w / Wg)|0>|1>
ComplexVector ansatz_steady_state(const SchemeConfig& cfg, const HilbertSpace& space);
// Same without normalisation; the leakage coefficient refers to this vector.
ComplexVector ansatz_steady_state_unnormalized(const SchemeConfig& cfg,
                                               const HilbertSpace& space);

// |Y>|1> (asymmetric) or |0>|1> (symmetric).
ComplexVector leakage_state(const SchemeConfig& cfg, const HilbertSpace& space);

// Coefficient r in H_eff |ansatz> = r |leak>, computed from the matrix-vector
// product with the unnormalised ansatz. Analytically
//   asymmetric  sqrt(3/2) eta (4w/3 - Wg)
//   symmetric  -(sqrt 2 eta w / Wg)(w + Dg)
double gate_point_residual(const SchemeConfig& cfg);
double analytic_gate_point_residual(const SchemeConfig& cfg);

}  // namespace phonon_chill
