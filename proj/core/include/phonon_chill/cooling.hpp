#pragma once

// Cooling predictions built on the engine and the spectrum: thermal
// occupations, the rate-equation floor, full-dynamics trajectories with a
// fitted rate, robustness scans and scheme comparisons.

#include "phonon_chill/lindblad.hpp"
#include "phonon_chill/scheme_models.hpp"
#include "phonon_chill/spectrum.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phonon_chill {

// 1 / (exp(hbar w / kB T) - 1); zero at T = 0.
double thermal_occupation(double omega_si, double temperature);

// (A+ + N gamma) / (W + gamma) with W = A- - A+. HeatingDominatedError when
// W + gamma <= 0.
double rate_equation_nss(double a_plus, double a_minus, double n_bath, double gamma_k);

enum class InitialPhonons { Thermal, Fock };

struct CoolingOptions {
  double n0 = 1.0;
  InitialPhonons initial = InitialPhonons::Thermal;
  double t_final = 1e4;
  std::size_t samples = 401;
  double tol = 1e-10;
  bool check_positivity = true;
  // Throw when the top two Fock levels hold more than this at the end.
  std::optional<double> max_final_fock_tail;
};

struct CoolingResult {
  SchemeConfig scheme;
  Trajectory trajectory;
  Coefficients coefficients;
  double fitted_w = 0.0;
  double n_final = 0.0;
  double n_ss_dynamic = 0.0;               // tail average
  std::optional<double> n_ss_rate_eq;      // unset when heating dominates
  double fit_residual = 0.0;               // rms of (model - data) over the window / (n(0) - tail)
  bool non_exponential = false;
  std::size_t fit_begin = 0, fit_end = 0;  // sample indices, half-open
  double final_fock_tail = 0.0;
};

// Internal steady state (x) thermal or Fock phonons.
DensityMatrix initial_state(const SchemeConfig& cfg, double n0,
                            InitialPhonons kind = InitialPhonons::Thermal);

CoolingResult cooling_trajectory(const SchemeConfig& cfg, const CoolingOptions& options = {});

struct ExponentialFit {
  double rate = 0.0;
  double residual = 0.0;
  bool non_exponential = false;
  std::size_t begin = 0, end = 0;
};

// Fit n(t) - tail ~ A exp(-W t) on a log scale, from the first sample below
// 90% of n(0) to the first sample within twice the tail value.
ExponentialFit fit_decay(const std::vector<double>& times, const std::vector<double>& n,
                         double tail);

enum class RobustParameter { MicrowaveRabi, MicrowaveDetuning, LaserRabi };

std::string_view to_string(RobustParameter p);
RobustParameter robust_parameter_from_string(std::string_view name);

// Relative deviation applied to one parameter. For the asymmetric scheme a
// change of Wg keeps the dark-state condition by moving D+.
SchemeConfig perturb(const SchemeConfig& cfg, RobustParameter p, double relative);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};
LogLogFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y);

struct RobustnessReport {
  RobustParameter parameter = RobustParameter::MicrowaveRabi;
  std::vector<double> deviations;
  std::vector<double> n_ss;
  std::vector<double> delta_n;  // |n(dev) - n(0)|
  double n_ss_baseline = 0.0;
  LogLogFit fit;                // log delta_n vs log |dev|, both signs pooled
  LogLogFit fit_negative, fit_positive;
};

// Rate-equation floor with numerical A+- for each deviation (|dev| <= 10%).
double rate_equation_floor(const SchemeConfig& cfg);
RobustnessReport robustness_scan(const SchemeConfig& cfg, RobustParameter parameter,
                                 const std::vector<double>& deviations, unsigned threads = 1);

// Symmetric deviations +-[lo, hi], `per_sign` points each, log spaced.
std::vector<double> symmetric_deviations(double lo, double hi, std::size_t per_sign);

struct JointScanReport {
  std::vector<double> laser_deviations;
  std::vector<double> microwave_deviations;
  // Row-major [i_laser * n_microwave + j_microwave].
  std::vector<double> n_ss;
  // n(a, b) - n(a, 0) - n(0, b) + n(0, 0): the part that needs both errors.
  std::vector<double> mixed;
  double laser_exponent = 0.0;
  double microwave_exponent = 0.0;
  double log_prefactor = 0.0;
};

// Joint (dW, dWg) grid for the asymmetric scheme; fits
// log|mixed| = c + p log|dW| + q log|dWg|.
JointScanReport joint_scan(const SchemeConfig& cfg, const std::vector<double>& laser_deviations,
                           const std::vector<double>& microwave_deviations);

// The four schemes at one (lambda, Omega, Gamma).
std::vector<SchemeConfig> comparison_set(double lambda, double laser_rabi, double decay_rate,
                                         std::size_t fock_dim);

struct ComparisonRow {
  SchemeConfig scheme;
  std::optional<CoolingResult> result;
  std::string error;
  std::size_t rank = 0;  // 1 = lowest final <n>; 0 when the row failed
};

// One trajectory per configuration. Rows are independent; a failing row keeps
// its error message and does not stop the others. Output order matches input.
std::vector<ComparisonRow> compare_schemes(const std::vector<SchemeConfig>& cfgs,
                                           const CoolingOptions& options, unsigned threads = 1);

struct FockConvergence {
  std::size_t fock_dim = 0;
  double n_ss = 0.0;
  double n_ss_doubled = 0.0;
  double relative_change = 0.0;
};

// Full-space steady <n> at fock_dim and 2 fock_dim.
FockConvergence fock_convergence(const SchemeConfig& cfg, const SteadyStateOptions& options = {});

// Full-space steady state restricted to the scheme's active levels.
DensityMatrix scheme_steady_state(const SchemeConfig& cfg, const SteadyStateOptions& options = {});

}  // namespace phonon_chill
