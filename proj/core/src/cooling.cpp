#include "phonon_chill/cooling.hpp"

#include "phonon_chill/constants.hpp"
#include "phonon_chill/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace phonon_chill {

namespace {

// Runs body(i) for i in [0, n) on up to `threads` workers.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

double phonon_number(const DensityMatrix& rho) {
  return expectation(rho.space().number_operator(), rho).real();
}

}  // namespace

double thermal_occupation(double omega_si, double temperature) {
  if (!(omega_si > 0.0)) throw ConfigError("thermal_occupation: omega must be > 0");
  if (!(temperature >= 0.0)) throw ConfigError("thermal_occupation: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  const double x = si::kHbar * omega_si / (si::kBoltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double rate_equation_nss(double a_plus, double a_minus, double n_bath, double gamma_k) {
  if (!(gamma_k >= 0.0)) throw ConfigError("rate_equation_nss: gamma_k must be >= 0");
  if (!(n_bath >= 0.0)) throw ConfigError("rate_equation_nss: bath occupation must be >= 0");
  const double w = a_minus - a_plus;
  if (!(w + gamma_k > 0.0)) {
    throw HeatingDominatedError("rate_equation_nss: W + gamma_k = " + std::to_string(w + gamma_k) +
                                " <= 0, no steady state");
  }
  return (a_plus + n_bath * gamma_k) / (w + gamma_k);
}

DensityMatrix initial_state(const SchemeConfig& cfg, double n0, InitialPhonons kind) {
  cfg.validate();
  const ComplexMatrix internal = internal_steady_state(cfg);
  ComplexMatrix phonons;
  if (kind == InitialPhonons::Thermal) {
    phonons = thermal_phonon_state(cfg.fock_dim, n0);
  } else {
    const double rounded = std::round(n0);
    if (rounded != n0 || n0 < 0.0) throw ConfigError("initial_state: Fock n0 must be an integer");
    phonons = fock_phonon_state(cfg.fock_dim, static_cast<std::size_t>(rounded));
  }
  return DensityMatrix::product(internal, phonons);
}

ExponentialFit fit_decay(const std::vector<double>& times, const std::vector<double>& n,
                         double tail) {
  if (times.size() != n.size() || n.empty()) throw NumericalError("fit_decay: bad input");
  ExponentialFit fit;
  const double n0 = n.front();
  const double amplitude = n0 - tail;
  if (!(amplitude > 0.0)) {
    fit.non_exponential = true;
    return fit;
  }
  std::size_t begin = n.size();
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (n[k] <= 0.9 * n0) {
      begin = k;
      break;
    }
  }
  std::size_t end = n.size();
  for (std::size_t k = begin; k < n.size(); ++k) {
    if (n[k] <= 2.0 * tail) {
      end = k + 1;
      break;
    }
  }
  std::vector<double> t, y;
  for (std::size_t k = begin; k < end; ++k) {
    const double excess = n[k] - tail;
    if (excess <= 0.0) break;
    t.push_back(times[k]);
    y.push_back(std::log(excess));
  }
  if (t.size() < 3) {
    fit.non_exponential = true;
    return fit;
  }
  const LogLogFit line = [&] {
    // ordinary least squares y = c + s t
    const double m = static_cast<double>(t.size());
    const double st = std::accumulate(t.begin(), t.end(), 0.0);
    const double sy = std::accumulate(y.begin(), y.end(), 0.0);
    double stt = 0.0, sty = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      stt += t[k] * t[k];
      sty += t[k] * y[k];
    }
    LogLogFit l;
    l.slope = (m * sty - st * sy) / (m * stt - st * st);
    l.intercept = (sy - l.slope * st) / m;
    l.points = t.size();
    return l;
  }();
  fit.rate = -line.slope;
  fit.begin = begin;
  fit.end = begin + t.size();
  double sq = 0.0;
  for (std::size_t k = fit.begin; k < fit.end; ++k) {
    const double model = tail + std::exp(line.intercept + line.slope * times[k]);
    sq += (model - n[k]) * (model - n[k]);
  }
  fit.residual = std::sqrt(sq / static_cast<double>(fit.end - fit.begin)) / amplitude;
  fit.non_exponential = fit.residual > 0.2;
  return fit;
}

CoolingResult cooling_trajectory(const SchemeConfig& cfg, const CoolingOptions& options) {
  cfg.validate();
  if (!(options.n0 >= 0.0) || options.n0 > static_cast<double>(cfg.fock_dim) / 3.0) {
    throw ConfigError("cooling_trajectory: n0 must lie in [0, fock_dim/3]");
  }
  CoolingResult r;
  r.scheme = cfg;
  r.coefficients = coefficients(cfg);
  try {
    r.n_ss_rate_eq = rate_equation_nss(r.coefficients.a_plus, r.coefficients.a_minus,
                                       cfg.bath_occupation, cfg.phonon_damping);
  } catch (const HeatingDominatedError&) {
    r.n_ss_rate_eq.reset();
  }

  const HilbertSpace space(cfg.fock_dim);
  const ComplexMatrix h = bare_hamiltonian(cfg, space);
  const std::vector<Jump> jumps = dissipators(cfg, space);
  EvolveOptions eo;
  eo.tol = options.tol;
  eo.samples = options.samples;
  eo.check_positivity = options.check_positivity;
  eo.keep_final_state = false;
  r.trajectory = evolve(h, jumps, initial_state(cfg, options.n0, options.initial),
                        options.t_final, eo);

  const auto& n = r.trajectory.phonon_number;
  r.n_final = n.back();
  const std::size_t tail_count = std::max<std::size_t>(1, n.size() / 10);
  r.n_ss_dynamic =
      std::accumulate(n.end() - static_cast<std::ptrdiff_t>(tail_count), n.end(), 0.0) /
      static_cast<double>(tail_count);
  // A run that has not levelled off is fitted against the rate-equation floor.
  const auto [lo, hi] =
      std::minmax_element(n.end() - static_cast<std::ptrdiff_t>(tail_count), n.end());
  const bool plateau = *hi - *lo <= 0.05 * std::abs(n.front() - r.n_ss_dynamic);
  const double asymptote = plateau || !r.n_ss_rate_eq ? r.n_ss_dynamic : *r.n_ss_rate_eq;
  const ExponentialFit fit = fit_decay(r.trajectory.times, n, asymptote);
  r.fitted_w = fit.rate;
  r.fit_residual = fit.residual;
  r.non_exponential = fit.non_exponential;
  r.fit_begin = fit.begin;
  r.fit_end = fit.end;
  r.final_fock_tail = r.trajectory.fock_tail.back();
  if (options.max_final_fock_tail && r.final_fock_tail > *options.max_final_fock_tail) {
    throw NumericalError("cooling_trajectory: top Fock levels hold " +
                         std::to_string(r.final_fock_tail) + "; increase fock_dim");
  }
  return r;
}

std::string_view to_string(RobustParameter p) {
  switch (p) {
    case RobustParameter::MicrowaveRabi: return "Omega_g";
    case RobustParameter::MicrowaveDetuning: return "Delta_g";
    case RobustParameter::LaserRabi: return "Omega";
  }
  return "unknown";
}

RobustParameter robust_parameter_from_string(std::string_view name) {
  if (name == "Omega_g") return RobustParameter::MicrowaveRabi;
  if (name == "Delta_g") return RobustParameter::MicrowaveDetuning;
  if (name == "Omega") return RobustParameter::LaserRabi;
  throw ConfigError("unknown robustness parameter '" + std::string(name) +
                    "' (expected Omega_g, Delta_g or Omega)");
}

SchemeConfig perturb(const SchemeConfig& cfg, RobustParameter p, double relative) {
  SchemeConfig out = cfg;
  switch (p) {
    case RobustParameter::MicrowaveRabi:
      if (!cfg.microwave_rabi) throw ConfigError("perturb: scheme has no microwave drive");
      // laser detunings stay put, so the dark line moves with the drive
      out.microwave_rabi = *cfg.microwave_rabi * (1.0 + relative);
      if (cfg.kind == SchemeKind::Asymmetric) out.allow_dark_offset = true;
      break;
    case RobustParameter::MicrowaveDetuning:
      if (!cfg.microwave_detuning) throw ConfigError("perturb: scheme has no microwave detuning");
      out.microwave_detuning = *cfg.microwave_detuning * (1.0 + relative);
      break;
    case RobustParameter::LaserRabi:
      out.laser_rabi = cfg.laser_rabi * (1.0 + relative);
      break;
  }
  out.validate();
  return out;
}

LogLogFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw NumericalError("fit_log_log: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double ax = std::abs(x[k]);
    if (ax > 0.0 && y[k] > 0.0) {
      lx.push_back(std::log(ax));
      ly.push_back(std::log(y[k]));
    }
  }
  LogLogFit f;
  f.points = lx.size();
  if (lx.size() < 2) return f;
  const double m = static_cast<double>(lx.size());
  const double sx = std::accumulate(lx.begin(), lx.end(), 0.0);
  const double sy = std::accumulate(ly.begin(), ly.end(), 0.0);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  const double den = m * sxx - sx * sx;
  if (den == 0.0) return f;
  f.slope = (m * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / m;
  return f;
}

double rate_equation_floor(const SchemeConfig& cfg) {
  const Coefficients c = coefficients(cfg);
  return rate_equation_nss(c.a_plus, c.a_minus, cfg.bath_occupation, cfg.phonon_damping);
}

std::vector<double> symmetric_deviations(double lo, double hi, std::size_t per_sign) {
  if (!(lo > 0.0) || !(hi >= lo) || per_sign < 1) {
    throw ConfigError("symmetric_deviations: need 0 < lo <= hi and per_sign >= 1");
  }
  std::vector<double> pos(per_sign);
  for (std::size_t k = 0; k < per_sign; ++k) {
    const double f = per_sign == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(per_sign - 1);
    pos[k] = lo * std::pow(hi / lo, f);
  }
  std::vector<double> out;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back(-*it);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

RobustnessReport robustness_scan(const SchemeConfig& cfg, RobustParameter parameter,
                                 const std::vector<double>& deviations, unsigned threads) {
  for (double d : deviations) {
    if (!(std::abs(d) <= 0.1)) throw ConfigError("robustness_scan: deviations must lie within +-10%");
  }
  RobustnessReport rep;
  rep.parameter = parameter;
  rep.deviations = deviations;
  rep.n_ss_baseline = rate_equation_floor(cfg);
  rep.n_ss.resize(deviations.size());
  parallel_for(deviations.size(), threads, [&](std::size_t i) {
    rep.n_ss[i] = rate_equation_floor(perturb(cfg, parameter, deviations[i]));
  });
  std::vector<double> neg_x, neg_y, pos_x, pos_y;
  for (std::size_t i = 0; i < deviations.size(); ++i) {
    const double dn = std::abs(rep.n_ss[i] - rep.n_ss_baseline);
    rep.delta_n.push_back(dn);
    if (deviations[i] < 0.0) {
      neg_x.push_back(deviations[i]);
      neg_y.push_back(dn);
    } else if (deviations[i] > 0.0) {
      pos_x.push_back(deviations[i]);
      pos_y.push_back(dn);
    }
  }
  rep.fit = fit_log_log(deviations, rep.delta_n);
  rep.fit_negative = fit_log_log(neg_x, neg_y);
  rep.fit_positive = fit_log_log(pos_x, pos_y);
  return rep;
}

JointScanReport joint_scan(const SchemeConfig& cfg, const std::vector<double>& laser_deviations,
                           const std::vector<double>& microwave_deviations) {
  if (cfg.kind != SchemeKind::Asymmetric) throw ConfigError("joint_scan: asymmetric scheme only");
  JointScanReport rep;
  rep.laser_deviations = laser_deviations;
  rep.microwave_deviations = microwave_deviations;
  auto floor_at = [&](double a, double b) {
    return rate_equation_floor(
        perturb(perturb(cfg, RobustParameter::LaserRabi, a), RobustParameter::MicrowaveRabi, b));
  };
  const double n00 = floor_at(0.0, 0.0);
  std::vector<double> na(laser_deviations.size()), nb(microwave_deviations.size());
  for (std::size_t i = 0; i < na.size(); ++i) na[i] = floor_at(laser_deviations[i], 0.0);
  for (std::size_t j = 0; j < nb.size(); ++j) nb[j] = floor_at(0.0, microwave_deviations[j]);

  std::vector<std::array<double, 3>> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < na.size(); ++i) {
    for (std::size_t j = 0; j < nb.size(); ++j) {
      const double a = laser_deviations[i];
      const double b = microwave_deviations[j];
      const double n = floor_at(a, b);
      const double mixed = n - na[i] - nb[j] + n00;
      rep.n_ss.push_back(n);
      rep.mixed.push_back(mixed);
      if (a != 0.0 && b != 0.0 && mixed != 0.0) {
        rows.push_back({1.0, std::log(std::abs(a)), std::log(std::abs(b))});
        rhs.push_back(std::log(std::abs(mixed)));
      }
    }
  }
  if (rows.size() < 3) throw NumericalError("joint_scan: too few nonzero grid points to fit");
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (Eigen::Index c = 0; c < 3; ++c) x(static_cast<Eigen::Index>(k), c) = rows[k][static_cast<std::size_t>(c)];
    y(static_cast<Eigen::Index>(k)) = rhs[k];
  }
  const Eigen::Vector3d coef = x.colPivHouseholderQr().solve(y);
  rep.log_prefactor = coef(0);
  rep.laser_exponent = coef(1);
  rep.microwave_exponent = coef(2);
  return rep;
}

std::vector<SchemeConfig> comparison_set(double lambda, double laser_rabi, double decay_rate,
                                         std::size_t fock_dim) {
  std::vector<SchemeConfig> out{asymmetric_gate_point(lambda, laser_rabi, decay_rate),
                                symmetric_gate_point(lambda, laser_rabi, decay_rate),
                                eit_baseline(lambda, laser_rabi, decay_rate),
                                stark_baseline(lambda, laser_rabi, decay_rate)};
  for (auto& c : out) c.fock_dim = fock_dim;
  return out;
}

std::vector<ComparisonRow> compare_schemes(const std::vector<SchemeConfig>& cfgs,
                                           const CoolingOptions& options, unsigned threads) {
  for (const auto& c : cfgs) {
    if (c.omega_k != cfgs.front().omega_k || c.lambda != cfgs.front().lambda ||
        c.decay_rate != cfgs.front().decay_rate ||
        c.phonon_damping != cfgs.front().phonon_damping ||
        c.bath_occupation != cfgs.front().bath_occupation) {
      throw ConfigError("compare_schemes: rows must share omega_k, lambda, Gamma and bath");
    }
  }
  std::vector<ComparisonRow> rows(cfgs.size());
  parallel_for(cfgs.size(), threads, [&](std::size_t i) {
    rows[i].scheme = cfgs[i];
    try {
      rows[i].result = cooling_trajectory(cfgs[i], options);
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  });
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].result) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a].result->n_final < rows[b].result->n_final;
  });
  for (std::size_t k = 0; k < order.size(); ++k) rows[order[k]].rank = k + 1;
  return rows;
}

DensityMatrix scheme_steady_state(const SchemeConfig& cfg, const SteadyStateOptions& options) {
  cfg.validate();
  const HilbertSpace space(cfg.fock_dim);
  SteadyStateOptions opts = options;
  if (opts.basis.empty()) {
    const auto levels = active_levels(cfg.kind);
    if (levels.size() < space.internal_dim()) opts.basis = level_basis(space, levels);
  }
  return steady_state(bare_hamiltonian(cfg, space), dissipators(cfg, space), space, opts);
}

FockConvergence fock_convergence(const SchemeConfig& cfg, const SteadyStateOptions& options) {
  FockConvergence out;
  out.fock_dim = cfg.fock_dim;
  out.n_ss = phonon_number(scheme_steady_state(cfg, options));
  SchemeConfig doubled = cfg;
  doubled.fock_dim = 2 * cfg.fock_dim;
  out.n_ss_doubled = phonon_number(scheme_steady_state(doubled, options));
  const double scale = std::max(std::abs(out.n_ss), std::abs(out.n_ss_doubled));
  out.relative_change = scale == 0.0 ? 0.0 : std::abs(out.n_ss_doubled - out.n_ss) / scale;
  return out;
}

}  // namespace phonon_chill
