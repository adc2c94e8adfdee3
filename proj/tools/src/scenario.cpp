#include "scenario.hpp"

#include "phonon_chill/constants.hpp"
#include "phonon_chill/cooling.hpp"
#include "phonon_chill/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace phonon_chill::cli {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * si::kPi;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& known) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + ": not finite");
  return x;
}

template <typename T>
void read_optional(const json& obj, const std::string& where, const std::string& key,
                   std::optional<T>& out) {
  if (obj.contains(key)) out = static_cast<T>(get_number(obj, where, key));
}

template <typename T>
void read_default(const json& obj, const std::string& where, const std::string& key, T& out) {
  if (obj.contains(key)) out = static_cast<T>(get_number(obj, where, key));
}

std::size_t get_count(const json& obj, const std::string& where, const std::string& key,
                      std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + "." + key + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::array<double, 3> get_branching(const json& obj, const std::string& where) {
  std::array<double, 3> b{1.0 / 3, 1.0 / 3, 1.0 / 3};
  if (!obj.contains("branching")) return b;
  const auto& v = obj.at("branching");
  if (!v.is_array() || v.size() != 3) {
    throw ConfigError(where + ".branching: expected three numbers (+1, 0, -1)");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ConfigError(where + ".branching: expected numbers");
    b[i] = v[i].get<double>();
  }
  return b;
}

template <typename T>
void put_optional(json& j, const std::string& key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

SiParameters parse_si(const json& j) {
  const std::string where = "si";
  reject_unknown(j, where,
                 {"omega_k_hz", "lambda_hz", "gradient_t_per_m", "mass_kg", "diameter_m",
                  "laser_rabi_hz", "microwave_rabi_hz", "laser_detuning_hz",
                  "laser_detuning_plus_hz", "laser_detuning_minus_hz", "microwave_detuning_hz",
                  "decay_rate_hz", "branching", "quality_factor", "temperature_k"});
  SiParameters si;
  si.omega_k_hz = get_number(j, where, "omega_k_hz");
  read_optional(j, where, "lambda_hz", si.lambda_hz);
  read_optional(j, where, "gradient_t_per_m", si.gradient_t_per_m);
  read_optional(j, where, "mass_kg", si.mass_kg);
  read_optional(j, where, "diameter_m", si.diameter_m);
  si.laser_rabi_hz = get_number(j, where, "laser_rabi_hz");
  read_optional(j, where, "microwave_rabi_hz", si.microwave_rabi_hz);
  read_optional(j, where, "laser_detuning_hz", si.laser_detuning_hz);
  read_optional(j, where, "laser_detuning_plus_hz", si.laser_detuning_plus_hz);
  read_optional(j, where, "laser_detuning_minus_hz", si.laser_detuning_minus_hz);
  read_optional(j, where, "microwave_detuning_hz", si.microwave_detuning_hz);
  si.decay_rate_hz = get_number(j, where, "decay_rate_hz");
  si.branching = get_branching(j, where);
  read_optional(j, where, "quality_factor", si.quality_factor);
  read_default(j, where, "temperature_k", si.temperature_k);
  return si;
}

json si_json(const SiParameters& si) {
  json j;
  j["omega_k_hz"] = si.omega_k_hz;
  put_optional(j, "lambda_hz", si.lambda_hz);
  put_optional(j, "gradient_t_per_m", si.gradient_t_per_m);
  put_optional(j, "mass_kg", si.mass_kg);
  put_optional(j, "diameter_m", si.diameter_m);
  j["laser_rabi_hz"] = si.laser_rabi_hz;
  put_optional(j, "microwave_rabi_hz", si.microwave_rabi_hz);
  put_optional(j, "laser_detuning_hz", si.laser_detuning_hz);
  put_optional(j, "laser_detuning_plus_hz", si.laser_detuning_plus_hz);
  put_optional(j, "laser_detuning_minus_hz", si.laser_detuning_minus_hz);
  put_optional(j, "microwave_detuning_hz", si.microwave_detuning_hz);
  j["decay_rate_hz"] = si.decay_rate_hz;
  j["branching"] = si.branching;
  put_optional(j, "quality_factor", si.quality_factor);
  j["temperature_k"] = si.temperature_k;
  return j;
}

SchemeConfig parse_dimensionless(const json& j, SchemeKind kind, std::size_t fock_dim) {
  const std::string where = "dimensionless";
  reject_unknown(j, where,
                 {"omega_k", "lambda", "laser_rabi", "microwave_rabi", "laser_detuning",
                  "laser_detuning_plus", "laser_detuning_minus", "microwave_detuning",
                  "decay_rate", "branching", "phonon_damping", "bath_occupation",
                  "allow_dark_offset"});
  SchemeConfig c;
  c.kind = kind;
  c.fock_dim = fock_dim;
  read_default(j, where, "omega_k", c.omega_k);
  c.lambda = get_number(j, where, "lambda");
  c.laser_rabi = get_number(j, where, "laser_rabi");
  read_optional(j, where, "microwave_rabi", c.microwave_rabi);
  read_optional(j, where, "laser_detuning", c.laser_detuning);
  read_optional(j, where, "laser_detuning_plus", c.laser_detuning_plus);
  read_optional(j, where, "laser_detuning_minus", c.laser_detuning_minus);
  read_optional(j, where, "microwave_detuning", c.microwave_detuning);
  c.decay_rate = get_number(j, where, "decay_rate");
  c.branching = get_branching(j, where);
  read_default(j, where, "phonon_damping", c.phonon_damping);
  read_default(j, where, "bath_occupation", c.bath_occupation);
  if (j.contains("allow_dark_offset")) {
    if (!j.at("allow_dark_offset").is_boolean()) {
      throw ConfigError(where + ".allow_dark_offset: expected a boolean");
    }
    c.allow_dark_offset = j.at("allow_dark_offset").get<bool>();
  }
  return c;
}

json dimensionless_json(const SchemeConfig& c) {
  json j;
  j["omega_k"] = c.omega_k;
  j["lambda"] = c.lambda;
  j["laser_rabi"] = c.laser_rabi;
  put_optional(j, "microwave_rabi", c.microwave_rabi);
  put_optional(j, "laser_detuning", c.laser_detuning);
  put_optional(j, "laser_detuning_plus", c.laser_detuning_plus);
  put_optional(j, "laser_detuning_minus", c.laser_detuning_minus);
  put_optional(j, "microwave_detuning", c.microwave_detuning);
  j["decay_rate"] = c.decay_rate;
  j["branching"] = c.branching;
  j["phonon_damping"] = c.phonon_damping;
  j["bath_occupation"] = c.bath_occupation;
  if (c.allow_dark_offset) j["allow_dark_offset"] = true;
  return j;
}

RunPlan parse_run(const json& j) {
  const std::string where = "run";
  reject_unknown(j, where,
                 {"t_final", "t_final_seconds", "samples", "n0", "omega_min", "omega_max",
                  "omega_steps", "robust_parameter", "robust_min", "robust_max",
                  "robust_points", "compare", "threads"});
  RunPlan r;
  read_optional(j, where, "t_final", r.t_final);
  read_optional(j, where, "t_final_seconds", r.t_final_seconds);
  r.samples = get_count(j, where, "samples", r.samples);
  read_default(j, where, "n0", r.n0);
  read_default(j, where, "omega_min", r.omega_min);
  read_default(j, where, "omega_max", r.omega_max);
  r.omega_steps = get_count(j, where, "omega_steps", r.omega_steps);
  if (j.contains("robust_parameter")) {
    if (!j.at("robust_parameter").is_string()) {
      throw ConfigError("run.robust_parameter: expected a string");
    }
    r.robust_parameter = j.at("robust_parameter").get<std::string>();
    robust_parameter_from_string(r.robust_parameter);
  }
  read_default(j, where, "robust_min", r.robust_min);
  read_default(j, where, "robust_max", r.robust_max);
  r.robust_points = get_count(j, where, "robust_points", r.robust_points);
  if (j.contains("compare")) {
    const auto& v = j.at("compare");
    if (!v.is_array()) throw ConfigError("run.compare: expected an array of scheme names");
    for (const auto& name : v) {
      if (!name.is_string()) throw ConfigError("run.compare: expected scheme names");
      scheme_kind_from_string(name.get<std::string>());
      r.compare.push_back(name.get<std::string>());
    }
  }
  r.threads = static_cast<unsigned>(get_count(j, where, "threads", r.threads));
  if (r.t_final && r.t_final_seconds) {
    throw ConfigError("run: give either t_final or t_final_seconds, not both");
  }
  return r;
}

json run_json(const RunPlan& r) {
  json j;
  put_optional(j, "t_final", r.t_final);
  put_optional(j, "t_final_seconds", r.t_final_seconds);
  j["samples"] = r.samples;
  j["n0"] = r.n0;
  j["omega_min"] = r.omega_min;
  j["omega_max"] = r.omega_max;
  j["omega_steps"] = r.omega_steps;
  j["robust_parameter"] = r.robust_parameter;
  j["robust_min"] = r.robust_min;
  j["robust_max"] = r.robust_max;
  j["robust_points"] = r.robust_points;
  if (!r.compare.empty()) j["compare"] = r.compare;
  j["threads"] = r.threads;
  return j;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  reject_unknown(j, "scenario", {"name", "scheme", "si", "dimensionless", "fock_dim", "tol", "run"});
  Scenario s;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ConfigError("scenario.name: expected a string");
    s.name = j.at("name").get<std::string>();
  }
  if (!j.contains("scheme") || !j.at("scheme").is_string()) {
    throw ConfigError("scenario: missing string field 'scheme'");
  }
  s.kind = scheme_kind_from_string(j.at("scheme").get<std::string>());
  s.fock_dim = get_count(j, "scenario", "fock_dim", s.fock_dim);
  read_default(j, "scenario", "tol", s.tol);
  const bool has_si = j.contains("si");
  const bool has_dimless = j.contains("dimensionless");
  if (has_si == has_dimless) {
    throw ConfigError("scenario: exactly one of 'si' and 'dimensionless' must be present");
  }
  if (has_si) {
    s.si = parse_si(j.at("si"));
  } else {
    s.dimensionless = parse_dimensionless(j.at("dimensionless"), s.kind, s.fock_dim);
  }
  if (j.contains("run")) s.run = parse_run(j.at("run"));
  to_scheme_config(s).validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  if (!s.name.empty()) j["name"] = s.name;
  j["scheme"] = std::string(to_string(s.kind));
  j["fock_dim"] = s.fock_dim;
  j["tol"] = s.tol;
  if (s.si) j["si"] = si_json(*s.si);
  if (s.dimensionless) j["dimensionless"] = dimensionless_json(*s.dimensionless);
  j["run"] = run_json(s.run);
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario file '" + path + "' is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

double zero_point_amplitude(double mass_kg, double omega_k_rad_s) {
  if (!(mass_kg > 0.0)) throw ConfigError("mass must be > 0");
  if (!(omega_k_rad_s > 0.0)) throw ConfigError("omega_k must be > 0");
  return std::sqrt(si::kHbar / (2.0 * mass_kg * omega_k_rad_s));
}

double diamond_sphere_mass(double diameter_m) {
  if (!(diameter_m > 0.0)) throw ConfigError("diameter must be > 0");
  return si::kDiamondDensity * si::kPi * diameter_m * diameter_m * diameter_m / 6.0;
}

SchemeConfig si_to_internal(const SiParameters& p, SchemeKind kind, std::size_t fock_dim) {
  if (!(p.omega_k_hz > 0.0)) throw ConfigError("si.omega_k_hz must be > 0");
  const double wk = kTwoPi * p.omega_k_hz;
  SchemeConfig c;
  c.kind = kind;
  c.fock_dim = fock_dim;
  c.omega_k = 1.0;

  if (p.lambda_hz) {
    if (p.gradient_t_per_m) {
      throw ConfigError("si: give either lambda_hz or gradient_t_per_m, not both");
    }
    c.lambda = *p.lambda_hz / p.omega_k_hz;
  } else {
    if (!p.gradient_t_per_m) throw ConfigError("si: missing lambda_hz or gradient_t_per_m");
    double mass = 0.0;
    if (p.mass_kg && p.diameter_m) throw ConfigError("si: give either mass_kg or diameter_m");
    if (p.mass_kg) {
      mass = *p.mass_kg;
    } else if (p.diameter_m) {
      mass = diamond_sphere_mass(*p.diameter_m);
    } else {
      throw ConfigError("si: gradient coupling needs mass_kg or diameter_m");
    }
    const double z0 = zero_point_amplitude(mass, wk);
    const double lambda = si::kElectronG * si::kBohrMagneton * *p.gradient_t_per_m * z0 / si::kHbar;
    c.lambda = lambda / wk;
  }

  auto scale = [&](const std::optional<double>& f) -> std::optional<double> {
    if (!f) return std::nullopt;
    return *f / p.omega_k_hz;
  };
  c.laser_rabi = p.laser_rabi_hz / p.omega_k_hz;
  c.microwave_rabi = scale(p.microwave_rabi_hz);
  c.laser_detuning = scale(p.laser_detuning_hz);
  c.laser_detuning_plus = scale(p.laser_detuning_plus_hz);
  c.laser_detuning_minus = scale(p.laser_detuning_minus_hz);
  c.microwave_detuning = scale(p.microwave_detuning_hz);
  c.decay_rate = p.decay_rate_hz / p.omega_k_hz;
  c.branching = p.branching;
  if (p.quality_factor) {
    if (!(*p.quality_factor > 0.0)) throw ConfigError("si.quality_factor must be > 0");
    c.phonon_damping = 1.0 / *p.quality_factor;
  }
  c.bath_occupation = thermal_occupation(wk, p.temperature_k);
  c.validate();
  return c;
}

SchemeConfig to_scheme_config(const Scenario& s) {
  if (s.si) return si_to_internal(*s.si, s.kind, s.fock_dim);
  if (!s.dimensionless) throw ConfigError("scenario has no parameter block");
  SchemeConfig c = *s.dimensionless;
  c.kind = s.kind;
  c.fock_dim = s.fock_dim;
  c.validate();
  return c;
}

SiParameters internal_to_si(const SchemeConfig& c, double omega_k_hz, double temperature_k) {
  auto scale = [&](const std::optional<double>& x) -> std::optional<double> {
    if (!x) return std::nullopt;
    return *x * omega_k_hz;
  };
  SiParameters p;
  p.omega_k_hz = omega_k_hz * c.omega_k;
  p.lambda_hz = c.lambda * omega_k_hz;
  p.laser_rabi_hz = c.laser_rabi * omega_k_hz;
  p.microwave_rabi_hz = scale(c.microwave_rabi);
  p.laser_detuning_hz = scale(c.laser_detuning);
  p.laser_detuning_plus_hz = scale(c.laser_detuning_plus);
  p.laser_detuning_minus_hz = scale(c.laser_detuning_minus);
  p.microwave_detuning_hz = scale(c.microwave_detuning);
  p.decay_rate_hz = c.decay_rate * omega_k_hz;
  p.branching = c.branching;
  if (c.phonon_damping > 0.0) p.quality_factor = c.omega_k / c.phonon_damping;
  p.temperature_k = temperature_k;
  return p;
}

double final_time(const Scenario& s) {
  if (s.run.t_final) return *s.run.t_final;
  if (s.run.t_final_seconds) {
    if (!s.si) throw ConfigError("run.t_final_seconds needs an 'si' block");
    return kTwoPi * s.si->omega_k_hz * *s.run.t_final_seconds;
  }
  throw ConfigError("run: missing t_final (or t_final_seconds)");
}

std::vector<std::string> preset_names() { return {"cantilever", "levitated"}; }

Scenario preset(const std::string& name) {
  Scenario s;
  s.name = name;
  s.fock_dim = 10;
  s.run.samples = 201;
  if (name == "levitated") {
    // Levitated nanodiamond, symmetric scheme at its gate point.
    SiParameters p;
    p.omega_k_hz = 500e3;
    p.lambda_hz = 50e3;
    p.laser_rabi_hz = 1.5e6;
    p.decay_rate_hz = 15e6;
    p.microwave_rabi_hz = 2.0 * p.omega_k_hz;
    p.microwave_detuning_hz = -p.omega_k_hz;
    p.laser_detuning_hz = 0.0;
    p.quality_factor = 1e10;
    p.temperature_k = 300.0;
    s.kind = SchemeKind::Symmetric;
    s.si = p;
    s.run.t_final_seconds = 100e-6;
    return s;
  }
  if (name == "cantilever") {
    // Cantilever at 20 mK, asymmetric scheme at the gate point with the laser
    // detuning on the cooling peak.
    SiParameters p;
    p.omega_k_hz = 8e6;
    p.lambda_hz = 500e3;
    p.laser_rabi_hz = 40e6;
    p.decay_rate_hz = 15e6;
    const double w = p.laser_rabi_hz / p.omega_k_hz;
    p.microwave_rabi_hz = 4.0 * p.omega_k_hz / 3.0;
    p.laser_detuning_minus_hz = (3.0 * w * w / 7.0 - 1.0) * p.omega_k_hz;
    p.laser_detuning_plus_hz = *p.laser_detuning_minus_hz - *p.microwave_rabi_hz / 2.0;
    p.quality_factor = 1e6;
    p.temperature_k = 20e-3;
    s.kind = SchemeKind::Asymmetric;
    s.si = p;
    s.run.t_final_seconds = 90e-6;
    return s;
  }
  std::ostringstream msg;
  msg << "unknown preset '" << name << "'; available:";
  for (const auto& n : preset_names()) msg << " " << n;
  throw ConfigError(msg.str());
}

json constants_json() {
  return {{"hbar_J_s", si::kHbar},
          {"k_B_J_per_K", si::kBoltzmann},
          {"mu_B_J_per_T", si::kBohrMagneton},
          {"g_e", si::kElectronG},
          {"diamond_density_kg_per_m3", si::kDiamondDensity}};
}

}  // namespace phonon_chill::cli
