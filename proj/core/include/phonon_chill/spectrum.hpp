#pragma once

// Force fluctuation spectrum of the phonon-free four-level system,
//
//   S(w) = int_0^inf dt e^{iwt} <df(t) df(0)>_ss = Tr[ df (-iw - L)^{-1} (df rho_ss) ],
//
// with f = lambda sz' and df = f - <f>_ss. The heating and cooling
// coefficients are A+ = 2 Re S(-w_k) and A- = 2 Re S(w_k).

#include "phonon_chill/operator_core.hpp"
#include "phonon_chill/scheme_models.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace phonon_chill {

// Overall scale applied to S. Fixed once for every configuration.
inline constexpr double kSpectrumNormalization = 1.0;

struct SpectrumComponents {
  std::vector<Complex> eit;
  std::vector<Complex> stark;
  std::vector<Complex> interference;
};

struct SpectrumResult {
  std::vector<double> omega_grid;
  std::vector<Complex> s_values;
  // Nonzero where the resolvent was singular; s_values holds NaN there.
  std::vector<unsigned char> singular;
  double a_plus = 0.0;
  double a_minus = 0.0;
  std::optional<SpectrumComponents> components;
};

struct Coefficients {
  double a_plus = 0.0;
  double a_minus = 0.0;
  double cooling_rate() const { return a_minus - a_plus; }
};

// lambda sz' on the internal levels.
ComplexMatrix force_operator(const SchemeConfig& cfg);

// Stationary state of the driven four-level system without phonons. Levels a
// baseline leaves idle carry no population.
ComplexMatrix internal_steady_state(const SchemeConfig& cfg);

// 16 x 16 generator of the phonon-free problem (row-major vectorisation).
ComplexMatrix internal_superoperator(const SchemeConfig& cfg);

// `threads` > 1 splits the grid across worker threads; the result is
// independent of the thread count.
SpectrumResult spectrum(const SchemeConfig& cfg, const std::vector<double>& grid,
                        unsigned threads = 1);

// Correlation spectrum of two arbitrary internal operators,
// Tr[ dx (-iw - L)^{-1} (dy rho_ss) ].
std::vector<Complex> cross_spectrum(const SchemeConfig& cfg, const ComplexMatrix& x,
                                    const ComplexMatrix& y, const std::vector<double>& grid);

Coefficients coefficients(const SchemeConfig& cfg);

// Asymmetric closed form
//   A+ = Gamma eta^2 w^2 W^2 (3 Wg - 4w)^2 / (12 |M(-w)|^2),
//   M(x) = (-3W^2/4 + 2 D x + 2x^2)(Wg + x) - x W^2/4 + i Gamma x (x + Wg),
// with D the laser detuning D-. Throws NumericalError when |M(-w)| < 1e-12.
double analytic_heating(const SchemeConfig& cfg);
Complex analytic_heating_denominator(const SchemeConfig& cfg, double omega);

struct CoolingPeak {
  double a_minus = 0.0;
  // Asymmetric: laser detuning D-. Symmetric: unset.
  std::optional<double> laser_detuning;
  // Symmetric: Wg = 2w, Dg = -w.
  std::optional<double> microwave_rabi;
  std::optional<double> microwave_detuning;
};

// Asymmetric  48 lambda^2 W^2 / (49 Gamma w^2)  at D = 3W^2/(7w) - w
// Symmetric   2 Gamma lambda^2 / W^2            at Wg = 2w, Dg = -w
CoolingPeak analytic_cooling_peak(const SchemeConfig& cfg);

// Bare-basis images of lambda/sqrt2 (|d><b| + h.c.) and lambda/sqrt6 (|d><Y| + h.c.).
ComplexMatrix eit_force(const SchemeConfig& cfg);
ComplexMatrix stark_force(const SchemeConfig& cfg);

// Asymmetric only. `interference` collects every term beyond the two
// auto-correlations, so the three parts add up to spectrum() exactly; on the
// dark line it reduces to the EIT-Stark cross-correlation.
SpectrumComponents spectrum_components(const SchemeConfig& cfg, const std::vector<double>& grid);

// Uniform grid lo + (hi - lo) k / (n - 1), with -w, 0 and w inserted when
// they fall inside and are missing.
std::vector<double> default_grid(double lo = -2.0, double hi = 3.0, std::size_t n = 1001,
                                 double omega_k = 1.0);

}  // namespace phonon_chill
