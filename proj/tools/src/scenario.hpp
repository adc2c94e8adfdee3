#pragma once

// Scenario files: one JSON document with exactly one of an "si" or a
// "dimensionless" parameter block, plus a "run" block.
//
// SI frequencies are ordinary frequencies (omega / 2 pi, in Hz), so
// "omega_k_hz": 5e5 means omega_k = 2 pi x 500 kHz. Internally every rate is
// divided by omega_k.

#include "phonon_chill/scheme_models.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace phonon_chill::cli {

struct SiParameters {
  double omega_k_hz = 0.0;
  // Either the coupling directly or the gradient plus a mass (or a diamond
  // sphere diameter).
  std::optional<double> lambda_hz;
  std::optional<double> gradient_t_per_m;
  std::optional<double> mass_kg;
  std::optional<double> diameter_m;

  double laser_rabi_hz = 0.0;
  std::optional<double> microwave_rabi_hz;
  std::optional<double> laser_detuning_hz;
  std::optional<double> laser_detuning_plus_hz;
  std::optional<double> laser_detuning_minus_hz;
  std::optional<double> microwave_detuning_hz;
  double decay_rate_hz = 0.0;
  std::array<double, 3> branching{1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::optional<double> quality_factor;  // absent: no mechanical damping
  double temperature_k = 0.0;

  friend bool operator==(const SiParameters&, const SiParameters&) = default;
};

struct RunPlan {
  std::optional<double> t_final;          // units of 1/omega_k
  std::optional<double> t_final_seconds;  // SI scenarios
  std::size_t samples = 401;
  double n0 = 1.0;
  double omega_min = -2.0;
  double omega_max = 3.0;
  std::size_t omega_steps = 1001;
  std::string robust_parameter = "Omega_g";
  double robust_min = 0.005;
  double robust_max = 0.05;
  std::size_t robust_points = 6;  // per sign
  std::vector<std::string> compare;  // scheme names; empty: all four
  unsigned threads = 1;

  friend bool operator==(const RunPlan&, const RunPlan&) = default;
};

struct Scenario {
  std::string name;
  SchemeKind kind = SchemeKind::Asymmetric;
  std::optional<SiParameters> si;
  std::optional<SchemeConfig> dimensionless;
  std::size_t fock_dim = 15;
  double tol = 1e-10;
  RunPlan run;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Throws ConfigError with a path-qualified message on malformed input.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

// SI -> internal units. z0 = sqrt(hbar / 2 M omega_k),
// lambda = g_e mu_B B' z0 / hbar, gamma_k = omega_k / Q, N = N(omega_k, T).
SchemeConfig si_to_internal(const SiParameters& si, SchemeKind kind, std::size_t fock_dim);
SchemeConfig to_scheme_config(const Scenario& s);

double zero_point_amplitude(double mass_kg, double omega_k_rad_s);
double diamond_sphere_mass(double diameter_m);

// Internal -> SI for the frequency fields (lambda given directly).
SiParameters internal_to_si(const SchemeConfig& cfg, double omega_k_hz, double temperature_k);

// Final time in units of 1/omega_k, from either t_final or t_final_seconds.
double final_time(const Scenario& s);

std::vector<std::string> preset_names();
// ConfigError listing the available names for an unknown preset.
Scenario preset(const std::string& name);

nlohmann::json constants_json();

}  // namespace phonon_chill::cli
