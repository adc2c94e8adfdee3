#include "phonon_chill/spectrum.hpp"

#include "phonon_chill/errors.hpp"
#include "phonon_chill/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace phonon_chill {

namespace {

// Phonon-free generator restricted to the levels the scheme drives.
struct ActiveProblem {
  std::vector<std::size_t> levels;
  ComplexMatrix superop;
  ComplexMatrix rho_ss;  // on the active levels
};

ComplexMatrix restrict_op(const ComplexMatrix& op, const std::vector<std::size_t>& levels) {
  const auto n = static_cast<Eigen::Index>(levels.size());
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = op(static_cast<Eigen::Index>(levels[static_cast<std::size_t>(i)]),
                     static_cast<Eigen::Index>(levels[static_cast<std::size_t>(j)]));
    }
  }
  return out;
}

ActiveProblem active_problem(const SchemeConfig& cfg) {
  ActiveProblem p;
  p.levels = active_levels(cfg.kind);
  const ComplexMatrix h = restrict_op(internal_hamiltonian(cfg), p.levels);
  std::vector<Jump> jumps = internal_dissipators(cfg);
  for (auto& j : jumps) j.op = restrict_op(j.op, p.levels);
  p.superop = Liouvillian(h, jumps).superoperator();
  p.rho_ss = steady_state_dense(p.superop, p.levels.size());
  return p;
}

ComplexMatrix embed_levels(const ComplexMatrix& sub, const std::vector<std::size_t>& levels) {
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t j = 0; j < levels.size(); ++j) {
      out(static_cast<Eigen::Index>(levels[i]), static_cast<Eigen::Index>(levels[j])) =
          sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

// The right-hand side is traceless, so adding |rho_ss>><<1| leaves the
// solution unchanged for w != 0 and selects the traceless (decaying) solution
// at w = 0, where -L alone is singular.
Complex resolvent_trace(const ComplexMatrix& superop, const ComplexMatrix& rho_ss,
                        const ComplexMatrix& left, const ComplexVector& rhs, double omega) {
  const Eigen::Index d = left.rows();
  ComplexMatrix a = Complex(0.0, -omega) * ComplexMatrix::Identity(d * d, d * d) - superop;
  const ComplexVector ss = vectorize(rho_ss);
  for (Eigen::Index i = 0; i < d; ++i) a.col(i * d + i) += ss;
  const ComplexMatrix x = unvectorize(linear_solve(a, rhs), static_cast<std::size_t>(d));
  return (left * x).trace();
}

std::vector<Complex> correlate(const ActiveProblem& p, const ComplexMatrix& x,
                               const ComplexMatrix& y, const std::vector<double>& grid,
                               std::vector<unsigned char>* singular, unsigned threads) {
  const ComplexMatrix xs = restrict_op(x, p.levels);
  const ComplexMatrix ys = restrict_op(y, p.levels);
  const auto n = xs.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix dx = xs - (xs * p.rho_ss).trace() * id;
  const ComplexMatrix dy = ys - (ys * p.rho_ss).trace() * id;
  const ComplexVector rhs = vectorize(dy * p.rho_ss);

  std::vector<Complex> out(grid.size());
  std::vector<unsigned char> flags(grid.size(), 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      try {
        out[k] = kSpectrumNormalization * resolvent_trace(p.superop, p.rho_ss, dx, rhs, grid[k]);
      } catch (const SingularMatrixError&) {
        out[k] = Complex(std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN());
        flags[k] = 1;
      }
    }
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, grid.size()));
  if (workers == 1) {
    work(0, grid.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (grid.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(grid.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  if (singular) *singular = std::move(flags);
  return out;
}

void require_asymmetric(const SchemeConfig& cfg, const char* what) {
  if (cfg.kind != SchemeKind::Asymmetric) {
    throw ConfigError(std::string(what) + ": only defined for the asymmetric scheme");
  }
}

ComplexMatrix dressed_sigma_x(const SchemeConfig& cfg, std::size_t i, std::size_t j) {
  const DressedBasis basis = dressed_basis(cfg.kind);
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
  return basis.u.adjoint() * m * basis.u;
}

}  // namespace

ComplexMatrix force_operator(const SchemeConfig& cfg) { return cfg.lambda * sigma_z_prime(); }

ComplexMatrix internal_superoperator(const SchemeConfig& cfg) {
  return Liouvillian(internal_hamiltonian(cfg), internal_dissipators(cfg)).superoperator();
}

ComplexMatrix internal_steady_state(const SchemeConfig& cfg) {
  const ActiveProblem p = active_problem(cfg);
  return embed_levels(p.rho_ss, p.levels);
}

SpectrumResult spectrum(const SchemeConfig& cfg, const std::vector<double>& grid,
                        unsigned threads) {
  const ActiveProblem p = active_problem(cfg);
  const ComplexMatrix f = force_operator(cfg);
  SpectrumResult r;
  r.omega_grid = grid;
  r.s_values = correlate(p, f, f, grid, &r.singular, threads);

  std::vector<unsigned char> flags;
  const auto ends = correlate(p, f, f, {-cfg.omega_k, cfg.omega_k}, &flags, 1);
  if (flags[0] || flags[1]) {
    throw NumericalError("spectrum: resolvent singular at +-omega_k");
  }
  r.a_plus = 2.0 * ends[0].real();
  r.a_minus = 2.0 * ends[1].real();
  return r;
}

std::vector<Complex> cross_spectrum(const SchemeConfig& cfg, const ComplexMatrix& x,
                                    const ComplexMatrix& y, const std::vector<double>& grid) {
  if (x.rows() != 4 || x.cols() != 4 || y.rows() != 4 || y.cols() != 4) {
    throw NumericalError("cross_spectrum: operators must be 4x4");
  }
  return correlate(active_problem(cfg), x, y, grid, nullptr, 1);
}

Coefficients coefficients(const SchemeConfig& cfg) {
  const ActiveProblem p = active_problem(cfg);
  const ComplexMatrix f = force_operator(cfg);
  std::vector<unsigned char> flags;
  const auto s = correlate(p, f, f, {-cfg.omega_k, cfg.omega_k}, &flags, 1);
  if (flags[0] || flags[1]) throw NumericalError("coefficients: resolvent singular at +-omega_k");
  return {2.0 * s[0].real(), 2.0 * s[1].real()};
}

Complex analytic_heating_denominator(const SchemeConfig& cfg, double x) {
  require_asymmetric(cfg, "analytic_heating");
  cfg.validate();
  const double w2 = cfg.laser_rabi * cfg.laser_rabi;
  const double wg = *cfg.microwave_rabi;
  const double d = *cfg.laser_detuning_minus;
  const double g = cfg.decay_rate;
  const double re = (-0.75 * w2 + 2.0 * d * x + 2.0 * x * x) * (wg + x) - x * w2 / 4.0;
  return {re, g * x * (x + wg)};
}

double analytic_heating(const SchemeConfig& cfg) {
  const Complex m = analytic_heating_denominator(cfg, -cfg.omega_k);
  if (std::abs(m) < 1e-12) {
    throw NumericalError("analytic_heating: |M(-omega_k)| below 1e-12 (singular point)");
  }
  const double wk = cfg.omega_k;
  const double eta = cfg.eta();
  const double w2 = cfg.laser_rabi * cfg.laser_rabi;
  const double gate = 3.0 * *cfg.microwave_rabi - 4.0 * wk;
  return cfg.decay_rate * eta * eta * wk * wk * w2 * gate * gate / (12.0 * std::norm(m));
}

CoolingPeak analytic_cooling_peak(const SchemeConfig& cfg) {
  const double w2 = cfg.laser_rabi * cfg.laser_rabi;
  const double wk = cfg.omega_k;
  const double l2 = cfg.lambda * cfg.lambda;
  CoolingPeak peak;
  switch (cfg.kind) {
    case SchemeKind::Asymmetric:
      peak.a_minus = 48.0 * l2 * w2 / (49.0 * cfg.decay_rate * wk * wk);
      peak.laser_detuning = 3.0 * w2 / (7.0 * wk) - wk;
      break;
    case SchemeKind::Symmetric:
      if (w2 == 0.0) throw ConfigError("analytic_cooling_peak: laser Rabi frequency is zero");
      peak.a_minus = 2.0 * cfg.decay_rate * l2 / w2;
      peak.microwave_rabi = 2.0 * wk;
      peak.microwave_detuning = -wk;
      break;
    default:
      throw ConfigError("analytic_cooling_peak: no closed form for the baselines");
  }
  return peak;
}

ComplexMatrix eit_force(const SchemeConfig& cfg) {
  require_asymmetric(cfg, "eit_force");
  return (cfg.lambda / std::sqrt(2.0)) * dressed_sigma_x(cfg, 1, 2);
}

ComplexMatrix stark_force(const SchemeConfig& cfg) {
  require_asymmetric(cfg, "stark_force");
  return (cfg.lambda / std::sqrt(6.0)) * dressed_sigma_x(cfg, 1, 3);
}

SpectrumComponents spectrum_components(const SchemeConfig& cfg, const std::vector<double>& grid) {
  require_asymmetric(cfg, "spectrum_components");
  const ActiveProblem p = active_problem(cfg);
  const ComplexMatrix f = force_operator(cfg);
  const ComplexMatrix fe = eit_force(cfg);
  const ComplexMatrix fs = stark_force(cfg);
  SpectrumComponents c;
  c.eit = correlate(p, fe, fe, grid, nullptr, 1);
  c.stark = correlate(p, fs, fs, grid, nullptr, 1);
  const auto total = correlate(p, f, f, grid, nullptr, 1);
  c.interference.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    c.interference[k] = total[k] - c.eit[k] - c.stark[k];
  }
  return c;
}

std::vector<double> default_grid(double lo, double hi, std::size_t n, double omega_k) {
  if (n < 2 || !(hi > lo)) throw ConfigError("default_grid: need n >= 2 and hi > lo");
  std::vector<double> grid(n);
  for (std::size_t k = 0; k < n; ++k) {
    grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  for (double x : {-omega_k, 0.0, omega_k}) {
    if (x < lo || x > hi) continue;
    if (std::find(grid.begin(), grid.end(), x) == grid.end()) {
      grid.insert(std::upper_bound(grid.begin(), grid.end(), x), x);
    }
  }
  return grid;
}

}  // namespace phonon_chill
