#include "commands.hpp"

#include "phonon_chill/cooling.hpp"
#include "phonon_chill/errors.hpp"
#include "phonon_chill/spectrum.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace phonon_chill::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : columns_(header.size()) { row(header); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw NumericalError("csv: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::size_t columns_;
  std::ostringstream out_;
};

std::string num(double x) {
  if (!std::isfinite(x)) throw NumericalError("csv: refusing to write a non-finite value");
  return csv_number(x);
}

json config_json(const SchemeConfig& c) {
  json j;
  j["scheme"] = std::string(to_string(c.kind));
  j["omega_k"] = c.omega_k;
  j["lambda"] = c.lambda;
  j["eta"] = c.eta();
  j["laser_rabi"] = c.laser_rabi;
  auto opt = [&](const char* key, const std::optional<double>& v) {
    j[key] = v ? json(*v) : json(nullptr);
  };
  opt("microwave_rabi", c.microwave_rabi);
  opt("laser_detuning", c.laser_detuning);
  opt("laser_detuning_plus", c.laser_detuning_plus);
  opt("laser_detuning_minus", c.laser_detuning_minus);
  opt("microwave_detuning", c.microwave_detuning);
  j["decay_rate"] = c.decay_rate;
  j["branching"] = c.branching;
  j["phonon_damping"] = c.phonon_damping;
  j["bath_occupation"] = c.bath_occupation;
  j["fock_dim"] = c.fock_dim;
  return j;
}

json summary_base(const Scenario& s, const SchemeConfig& c) {
  json j;
  j["scenario"] = s.name;
  j["config"] = config_json(c);
  j["constants"] = constants_json();
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& contents) {
  const fs::path p = dir / name;
  write_atomic(p, contents);
  return p;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

CoolingOptions cooling_options(const Scenario& s) {
  CoolingOptions o;
  o.n0 = s.run.n0;
  o.t_final = final_time(s);
  o.samples = s.run.samples;
  o.tol = s.tol;
  return o;
}

std::vector<double> grid_of(const Scenario& s, double omega_k) {
  if (s.run.omega_steps < 2) throw ConfigError("omega-steps must be >= 2");
  return default_grid(s.run.omega_min, s.run.omega_max, s.run.omega_steps, omega_k);
}

}  // namespace

void apply_overrides(Scenario& s, const Overrides& o) {
  if (o.fock) {
    if (*o.fock < 2) throw ConfigError("--fock must be >= 2");
    s.fock_dim = *o.fock;
    if (s.dimensionless) s.dimensionless->fock_dim = *o.fock;
  }
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw ConfigError("--tol must be > 0");
    s.tol = *o.tol;
  }
  if (o.omega_min) s.run.omega_min = *o.omega_min;
  if (o.omega_max) s.run.omega_max = *o.omega_max;
  if (o.omega_steps) s.run.omega_steps = *o.omega_steps;
  if (o.t_final) {
    if (!(*o.t_final > 0.0)) throw ConfigError("--t-final must be > 0");
    s.run.t_final = *o.t_final;
    s.run.t_final_seconds.reset();
  }
  if (o.threads) s.run.threads = std::max(1u, *o.threads);
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", x);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + tmp.string() + "'");
    f << contents;
    f.flush();
    if (!f) throw ConfigError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::vector<fs::path> run_spectrum(const Scenario& s, const fs::path& out) {
  const SchemeConfig c = to_scheme_config(s);
  const auto grid = grid_of(s, c.omega_k);
  const SpectrumResult r = spectrum(c, grid, s.run.threads);
  std::optional<SpectrumComponents> parts;
  if (c.kind == SchemeKind::Asymmetric) parts = spectrum_components(c, grid);

  std::vector<std::string> header{"omega", "re_s", "im_s", "abs_s"};
  if (parts) {
    for (const char* p : {"eit", "stark", "int"}) {
      header.push_back(std::string("re_s_") + p);
      header.push_back(std::string("im_s_") + p);
    }
  }
  Csv csv(header);
  json singular = json::array();
  double max_abs = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (r.singular[k]) {
      singular.push_back(grid[k]);
      continue;
    }
    const Complex v = r.s_values[k];
    max_abs = std::max(max_abs, std::abs(v));
    std::vector<std::string> row{num(grid[k]), num(v.real()), num(v.imag()), num(std::abs(v))};
    if (parts) {
      for (const auto* series : {&parts->eit, &parts->stark, &parts->interference}) {
        row.push_back(num((*series)[k].real()));
        row.push_back(num((*series)[k].imag()));
      }
    }
    csv.row(row);
  }
  json summary = summary_base(s, c);
  summary["a_plus"] = r.a_plus;
  summary["a_minus"] = r.a_minus;
  summary["max_abs_s"] = max_abs;
  summary["points"] = grid.size();
  summary["singular_omegas"] = singular;
  summary["normalization"] = kSpectrumNormalization;
  return {write_file(out, "spectrum.csv", csv.str()),
          write_file(out, "spectrum.json", dump(summary))};
}

std::vector<fs::path> run_coefficients(const Scenario& s, const fs::path& out) {
  const SchemeConfig c = to_scheme_config(s);
  const Coefficients co = coefficients(c);
  json j = summary_base(s, c);
  j["a_plus"] = co.a_plus;
  j["a_minus"] = co.a_minus;
  j["cooling_rate"] = co.cooling_rate();
  j["normalization"] = kSpectrumNormalization;
  j["analytic_heating"] = nullptr;
  if (c.kind == SchemeKind::Asymmetric) {
    try {
      j["analytic_heating"] = analytic_heating(c);
    } catch (const NumericalError& e) {
      j["analytic_heating_error"] = e.what();
    }
  }
  j["analytic_peak"] = nullptr;
  if (c.kind == SchemeKind::Asymmetric || c.kind == SchemeKind::Symmetric) {
    const CoolingPeak peak = analytic_cooling_peak(c);
    j["analytic_peak"] = {{"a_minus", peak.a_minus},
                          {"laser_detuning", optional_number(peak.laser_detuning)},
                          {"microwave_rabi", optional_number(peak.microwave_rabi)},
                          {"microwave_detuning", optional_number(peak.microwave_detuning)}};
  }
  try {
    j["n_ss_rate_eq"] =
        rate_equation_nss(co.a_plus, co.a_minus, c.bath_occupation, c.phonon_damping);
  } catch (const HeatingDominatedError& e) {
    j["n_ss_rate_eq"] = nullptr;
    j["rate_equation_error"] = e.what();
  }
  return {write_file(out, "coefficients.json", dump(j))};
}

std::vector<fs::path> run_evolve(const Scenario& s, const fs::path& out) {
  const SchemeConfig c = to_scheme_config(s);
  const CoolingResult r = cooling_trajectory(c, cooling_options(s));
  const Trajectory& t = r.trajectory;
  Csv csv({"t", "n", "p_A2", "p_plus1", "p_0", "p_minus1", "trace_error", "hermiticity_error",
           "min_eigenvalue", "fock_tail"});
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    csv.row({num(t.times[k]), num(t.phonon_number[k]), num(t.populations[k][0]),
             num(t.populations[k][1]), num(t.populations[k][2]), num(t.populations[k][3]),
             num(t.trace_error[k]), num(t.hermiticity_error[k]), num(t.min_eigenvalue[k]),
             num(t.fock_tail[k])});
  }
  json j = summary_base(s, c);
  j["t_final"] = t.times.back();
  j["n_initial"] = t.phonon_number.front();
  j["n_final"] = r.n_final;
  j["n_ss_dynamic"] = r.n_ss_dynamic;
  j["n_ss_rate_eq"] = optional_number(r.n_ss_rate_eq);
  j["fitted_w"] = r.fitted_w;
  j["fit_residual"] = r.fit_residual;
  j["non_exponential"] = r.non_exponential;
  j["a_plus"] = r.coefficients.a_plus;
  j["a_minus"] = r.coefficients.a_minus;
  j["steps"] = t.steps;
  j["rejected_steps"] = t.rejected_steps;
  j["max_trace_error"] = *std::max_element(t.trace_error.begin(), t.trace_error.end());
  j["max_hermiticity_error"] =
      *std::max_element(t.hermiticity_error.begin(), t.hermiticity_error.end());
  j["min_eigenvalue"] = *std::min_element(t.min_eigenvalue.begin(), t.min_eigenvalue.end());
  j["final_fock_tail"] = r.final_fock_tail;
  return {write_file(out, "evolve.csv", csv.str()), write_file(out, "evolve.json", dump(j))};
}

std::vector<fs::path> run_steadystate(const Scenario& s, const fs::path& out) {
  const SchemeConfig c = to_scheme_config(s);
  SteadyStateOptions opts;
  opts.tol = std::min(s.tol, 1e-10);
  const DensityMatrix rho = scheme_steady_state(c, opts);
  const HilbertSpace& space = rho.space();
  json j = summary_base(s, c);
  j["n_ss"] = expectation(space.number_operator(), rho).real();
  const ComplexMatrix internal = rho.reduced_internal();
  j["populations"] = {{"A2", internal(0, 0).real()},
                      {"plus1", internal(1, 1).real()},
                      {"zero", internal(2, 2).real()},
                      {"minus1", internal(3, 3).real()}};
  j["trace_error"] = rho.trace_error();
  j["hermiticity_error"] = rho.hermiticity_error();
  j["min_eigenvalue"] = rho.min_eigenvalue();
  const ComplexMatrix ph = rho.reduced_phonon();
  const auto nf = ph.rows();
  j["fock_tail"] = ph(nf - 1, nf - 1).real() + ph(nf - 2, nf - 2).real();
  j["method"] = space.total_dim() <= SteadyStateOptions{}.dense_limit ? "kernel" : "evolution";
  j["ansatz_fidelity"] = nullptr;
  if (c.kind == SchemeKind::Asymmetric || c.kind == SchemeKind::Symmetric) {
    const ComplexVector psi = ansatz_steady_state(c, space);
    j["ansatz_fidelity"] = (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
  }
  try {
    j["n_ss_rate_eq"] = rate_equation_floor(c);
  } catch (const HeatingDominatedError&) {
    j["n_ss_rate_eq"] = nullptr;
  }
  return {write_file(out, "steadystate.json", dump(j))};
}

std::vector<fs::path> run_robust(const Scenario& s, const fs::path& out) {
  const SchemeConfig c = to_scheme_config(s);
  const RobustParameter p = robust_parameter_from_string(s.run.robust_parameter);
  const auto devs = symmetric_deviations(s.run.robust_min, s.run.robust_max, s.run.robust_points);
  const RobustnessReport rep = robustness_scan(c, p, devs, s.run.threads);
  Csv csv({"deviation", "n_ss", "delta_n"});
  for (std::size_t k = 0; k < devs.size(); ++k) {
    csv.row({num(devs[k]), num(rep.n_ss[k]), num(rep.delta_n[k])});
  }
  json j = summary_base(s, c);
  j["parameter"] = std::string(to_string(p));
  j["n_ss_baseline"] = rep.n_ss_baseline;
  auto fit = [](const LogLogFit& f) {
    return json{{"slope", f.slope}, {"intercept", f.intercept}, {"points", f.points}};
  };
  j["fit"] = fit(rep.fit);
  j["fit_negative"] = fit(rep.fit_negative);
  j["fit_positive"] = fit(rep.fit_positive);
  return {write_file(out, "robust.csv", csv.str()), write_file(out, "robust.json", dump(j))};
}

std::vector<fs::path> run_compare(const Scenario& s, const fs::path& out) {
  const SchemeConfig base = to_scheme_config(s);
  std::vector<SchemeConfig> cfgs;
  for (auto c : comparison_set(base.lambda, base.laser_rabi, base.decay_rate, base.fock_dim)) {
    const std::string name(to_string(c.kind));
    if (!s.run.compare.empty() &&
        std::find(s.run.compare.begin(), s.run.compare.end(), name) == s.run.compare.end()) {
      continue;
    }
    c.omega_k = base.omega_k;
    c.branching = base.branching;
    c.phonon_damping = base.phonon_damping;
    c.bath_occupation = base.bath_occupation;
    cfgs.push_back(c);
  }
  if (cfgs.empty()) throw ConfigError("compare: no schemes selected");
  const auto rows = compare_schemes(cfgs, cooling_options(s), s.run.threads);

  Csv csv({"scheme", "rank", "n_final", "n_ss_dynamic", "fitted_w", "a_plus", "a_minus",
           "n_ss_rate_eq", "error"});
  json j = summary_base(s, base);
  json table = json::array();
  std::vector<std::pair<std::size_t, std::string>> ranked;
  for (const auto& row : rows) {
    const std::string name(to_string(row.scheme.kind));
    json e{{"scheme", name}, {"rank", row.rank}, {"config", config_json(row.scheme)}};
    if (row.result) {
      const auto& r = *row.result;
      std::string rate_eq = r.n_ss_rate_eq ? num(*r.n_ss_rate_eq) : "";
      csv.row({name, std::to_string(row.rank), num(r.n_final), num(r.n_ss_dynamic),
               num(r.fitted_w), num(r.coefficients.a_plus), num(r.coefficients.a_minus), rate_eq,
               ""});
      e["n_final"] = r.n_final;
      e["n_ss_dynamic"] = r.n_ss_dynamic;
      e["fitted_w"] = r.fitted_w;
      e["n_ss_rate_eq"] = optional_number(r.n_ss_rate_eq);
      e["final_fock_tail"] = r.final_fock_tail;
      ranked.emplace_back(row.rank, name);
    } else {
      std::string msg = row.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      csv.row({name, "0", "", "", "", "", "", "", msg});
      e["error"] = row.error;
    }
    table.push_back(e);
  }
  std::sort(ranked.begin(), ranked.end());
  json ranking = json::array();
  for (const auto& [rank, name] : ranked) ranking.push_back(name);
  j["t_final"] = final_time(s);
  j["rows"] = table;
  j["ranking"] = ranking;
  return {write_file(out, "compare.csv", csv.str()), write_file(out, "compare.json", dump(j))};
}

namespace {

int report_error(const std::string& kind, const std::string& type, const std::string& message,
                 int code, const std::optional<fs::path>& out) {
  const json err{{"error", {{"kind", kind}, {"type", type}, {"message", message}, {"exit_code", code}}}};
  std::cerr << err.dump() << "\n";
  if (out) {
    try {
      write_atomic(*out / "error.json", dump(err));
    } catch (...) {
    }
  }
  return code;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Ground-state cooling simulator for four-level spin-phonon schemes",
               "phonon-chill"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir;
  Overrides ov;
  std::size_t fock = 0, omega_steps = 0;
  double tol = 0, omega_min = 0, omega_max = 0, t_final = 0;
  unsigned threads = 0;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"spectrum", "Fluctuation spectrum S(w) on a grid -> spectrum.csv"},
      {"coefficients", "Heating/cooling coefficients and closed forms -> coefficients.json"},
      {"evolve", "Full master-equation cooling trajectory -> evolve.csv"},
      {"steadystate", "Full-space steady state summary -> steadystate.json"},
      {"robust", "Rate-equation robustness scan -> robust.csv, robust.json"},
      {"compare", "Compare the four schemes -> compare.csv, compare.json"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* cfg = sub->add_option("--config", config_path, "Scenario JSON file");
    auto* pre = sub->add_option("--preset", preset_name, "Use a built-in scenario instead");
    cfg->excludes(pre);
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--fock", fock, "Fock-space truncation");
    sub->add_option("--tol", tol, "Integrator tolerance");
    sub->add_option("--omega-min", omega_min, "Spectrum grid start (units of omega_k)");
    sub->add_option("--omega-max", omega_max, "Spectrum grid end (units of omega_k)");
    sub->add_option("--omega-steps", omega_steps, "Spectrum grid points");
    sub->add_option("--t-final", t_final, "Final time (units of 1/omega_k)");
    sub->add_option("--threads", threads, "Worker threads");
    subs.push_back(sub);
  }
  CLI::App* preset_cmd = app.add_subcommand("preset", "List presets or dump one as scenario JSON");
  std::string dump_name;
  preset_cmd->add_option("name", dump_name, "Preset to dump");
  preset_cmd->add_option("--out", out_dir, "Directory to write <name>.json into");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("config", "usage", e.what(), 2, std::nullopt);
  }

  std::optional<fs::path> out;
  if (!out_dir.empty()) out = fs::path(out_dir);

  try {
    if (preset_cmd->parsed()) {
      if (dump_name.empty()) {
        std::cout << json(preset_names()).dump() << "\n";
        return 0;
      }
      const std::string text = dump(scenario_to_json(preset(dump_name)));
      if (out) {
        write_atomic(*out / (dump_name + ".json"), text);
      } else {
        std::cout << text;
      }
      return 0;
    }

    CLI::App* sub = nullptr;
    for (auto* s : subs) {
      if (s->parsed()) sub = s;
    }
    if (config_path.empty() == preset_name.empty()) {
      throw ConfigError("give exactly one of --config and --preset");
    }
    Scenario scenario = config_path.empty() ? preset(preset_name) : load_scenario(config_path);
    if (sub->count("--fock")) ov.fock = fock;
    if (sub->count("--tol")) ov.tol = tol;
    if (sub->count("--omega-min")) ov.omega_min = omega_min;
    if (sub->count("--omega-max")) ov.omega_max = omega_max;
    if (sub->count("--omega-steps")) ov.omega_steps = omega_steps;
    if (sub->count("--t-final")) ov.t_final = t_final;
    if (sub->count("--threads")) ov.threads = threads;
    apply_overrides(scenario, ov);

    const std::string name = sub->get_name();
    std::vector<fs::path> files;
    if (name == "spectrum") files = run_spectrum(scenario, *out);
    else if (name == "coefficients") files = run_coefficients(scenario, *out);
    else if (name == "evolve") files = run_evolve(scenario, *out);
    else if (name == "steadystate") files = run_steadystate(scenario, *out);
    else if (name == "robust") files = run_robust(scenario, *out);
    else if (name == "compare") files = run_compare(scenario, *out);
    for (const auto& f : files) std::cout << f.string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    return report_error("config", "ConfigError", e.what(), 2, out);
  } catch (const json::exception& e) {
    return report_error("config", "json", e.what(), 2, out);
  } catch (const HeatingDominatedError& e) {
    return report_error("numerical", "HeatingDominatedError", e.what(), 3, out);
  } catch (const StepSizeUnderflow& e) {
    return report_error("numerical", "StepSizeUnderflow", e.what(), 3, out);
  } catch (const DegenerateKernelError& e) {
    return report_error("numerical", "DegenerateKernelError", e.what(), 3, out);
  } catch (const Error& e) {
    return report_error("numerical", "NumericalError", e.what(), 3, out);
  } catch (const fs::filesystem_error& e) {
    return report_error("config", "filesystem", e.what(), 2, out);
  } catch (const std::exception& e) {
    return report_error("numerical", "exception", e.what(), 3, out);
  }
}

}  // namespace phonon_chill::cli
