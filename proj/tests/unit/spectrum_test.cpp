#include <doctest.h>

#include "oracles.hpp"
#include "phonon_chill/errors.hpp"
#include "phonon_chill/spectrum.hpp"

#include <algorithm>
#include <cmath>

using namespace phonon_chill;

namespace {

double max_modulus(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

std::size_t index_of(const std::vector<double>& grid, double x) {
  return static_cast<std::size_t>(std::find(grid.begin(), grid.end(), x) - grid.begin());
}

// The printed closed form, typed in again independently of the library.
double heating_formula(double eta, double w, double wg, double d, double g) {
  const double x = -1.0;
  const double re = (-3.0 * w * w / 4.0 + 2.0 * d * x + 2.0 * x * x) * (wg + x) - x * w * w / 4.0;
  const double im = g * x * (x + wg);
  return g * eta * eta * w * w * std::pow(3.0 * wg - 4.0, 2) / (12.0 * (re * re + im * im));
}

SchemeConfig asymmetric_off_gate(double lambda, double w, double wg, double d, double g) {
  SchemeConfig cfg = asymmetric_gate_point(lambda, w, g, d);
  cfg.microwave_rabi = wg;
  cfg.laser_detuning_plus = d - wg / 2.0;
  return cfg;
}

}  // namespace

TEST_SUITE("spectrum-analysis") {

TEST_CASE("force operator matrix elements") {
  const SchemeConfig a = asymmetric_gate_point(0.1, 2.0, 5.0);
  const ComplexMatrix f = force_operator(a);
  const DressedBasis db = dressed_basis(a.kind);
  CHECK(db.state(1).dot(f * db.state(2)).real() == doctest::Approx(0.1 / std::sqrt(2.0)));
  CHECK(db.state(1).dot(f * db.state(3)).real() == doctest::Approx(0.1 / std::sqrt(6.0)));
  const SchemeConfig s = symmetric_gate_point(0.05, 1.5, 7.5);
  const DressedBasis ds = dressed_basis(s.kind);
  const Complex e = ds.state(2).dot(force_operator(s) * ds.state(1));
  CHECK(e.real() == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(std::abs(e.imag()) <= 1e-16);
}

TEST_CASE("resolvent spectrum matches time-domain correlation integration") {
  oracle::Draws rng(41);
  const std::vector<SchemeConfig> cfgs{
      asymmetric_gate_point(0.1, 2.0, 5.0), symmetric_gate_point(0.05, 1.5, 7.5),
      eit_baseline(0.05, 2.0, 5.0), stark_baseline(0.05, 2.0, 5.0)};
  for (const auto& cfg : cfgs) {
    const ComplexMatrix rho = internal_steady_state(cfg);
    const ComplexMatrix f = force_operator(cfg);
    std::vector<double> grid;
    for (int k = 0; k < 2; ++k) grid.push_back(rng.uniform(-2.0, 3.0));
    const SpectrumResult r = spectrum(cfg, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Complex ref = oracle::time_domain_spectrum(cfg, f, f, rho, grid[k]);
      INFO(to_string(cfg.kind), " w = ", grid[k]);
      CHECK(std::abs(r.s_values[k] - ref) <= 1e-6 * std::abs(ref));
    }
  }
}

TEST_CASE("gate-point spectral zeros and their sensitivity") {
  const std::vector<double> grid = default_grid();
  const std::size_t m1 = index_of(grid, -1.0), zero = index_of(grid, 0.0);
  REQUIRE(m1 < grid.size());
  REQUIRE(zero < grid.size());

  const SchemeConfig a = asymmetric_gate_point(0.1, 2.0, 5.0);
  const SpectrumResult ra = spectrum(a, grid);
  CHECK(std::abs(ra.s_values[m1]) <= 1e-8 * max_modulus(ra.s_values));

  const SchemeConfig s = symmetric_gate_point(0.1, 2.0, 5.0);
  const SpectrumResult rs = spectrum(s, grid);
  CHECK(std::abs(rs.s_values[m1]) <= 1e-8 * max_modulus(rs.s_values));

  const SchemeConfig a_off = asymmetric_off_gate(0.1, 2.0, 4.0 / 3.0 * 1.01,
                                                 *a.laser_detuning_minus, 5.0);
  const SpectrumResult ro = spectrum(a_off, grid);
  CHECK(std::abs(ro.s_values[m1]) > 1e-6 * max_modulus(ro.s_values));
  SchemeConfig s_off = s;
  s_off.microwave_detuning = -1.01;
  const SpectrumResult rso = spectrum(s_off, grid);
  CHECK(std::abs(rso.s_values[m1]) > 1e-6 * max_modulus(rso.s_values));
}

TEST_CASE("spectrum bookkeeping") {
  const SchemeConfig a = asymmetric_gate_point(0.1, 2.0, 5.0);
  const std::vector<double> grid = default_grid(-2.0, 3.0, 201);
  const SpectrumResult one = spectrum(a, grid, 1);
  const SpectrumResult many = spectrum(a, grid, 3);
  CHECK(one.s_values == many.s_values);
  CHECK(std::none_of(one.singular.begin(), one.singular.end(), [](unsigned char c) { return c; }));
  const Coefficients c = coefficients(a);
  CHECK(one.a_plus == c.a_plus);
  CHECK(one.a_minus == c.a_minus);
  CHECK(c.cooling_rate() == c.a_minus - c.a_plus);
  const auto cross = cross_spectrum(a, force_operator(a), force_operator(a), grid);
  for (std::size_t k = 0; k < grid.size(); ++k) CHECK(cross[k] == one.s_values[k]);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(std::isfinite(one.s_values[k].real()));
    // the spectrum of a Hermitian force has a non-negative real part
    CHECK(one.s_values[k].real() >= -1e-12 * max_modulus(one.s_values));
  }
}

TEST_CASE("default grid") {
  const auto g = default_grid();
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(g.front() == -2.0);
  CHECK(g.back() == 3.0);
  for (double x : {-1.0, 0.0, 1.0}) CHECK(std::count(g.begin(), g.end(), x) == 1);
  const auto h = default_grid(-2.0, 3.0, 4);
  CHECK(h.size() == 7);
  CHECK_THROWS_AS(default_grid(1.0, 0.0, 10), ConfigError);
}

TEST_CASE("heating and cooling coefficients at the gate points") {
  const SchemeConfig a = asymmetric_gate_point(0.1, 2.0, 5.0);
  const Coefficients ca = coefficients(a);
  CHECK(ca.a_minus > 0.0);
  CHECK(std::abs(ca.a_plus) <= 1e-8 * ca.a_minus);
  const SchemeConfig s = symmetric_gate_point(0.05, 1.5, 7.5);
  const Coefficients cs = coefficients(s);
  CHECK(std::abs(cs.a_plus) <= 1e-8 * cs.a_minus);
  CHECK(cs.a_minus == doctest::Approx(2 * 7.5 * 0.05 * 0.05 / 2.25).epsilon(0.10));
}

TEST_CASE("closed-form heating coefficient") {
  CHECK(analytic_heating(asymmetric_gate_point(0.1, 2.0, 5.0, 1.0)) == 0.0);

  const SchemeConfig cfg = asymmetric_off_gate(0.1, 2.0, 1.0, 1.0, 5.0);
  const double closed = analytic_heating(cfg);
  CHECK(closed == doctest::Approx(heating_formula(0.1, 2.0, 1.0, 1.0, 5.0)).epsilon(1e-13));
  CHECK(coefficients(cfg).a_plus == doctest::Approx(closed).epsilon(0.10));
  CHECK_THROWS_AS(analytic_heating(symmetric_gate_point(0.1, 2, 5)), ConfigError);

  oracle::Draws rng(42);
  for (int k = 0; k < 100; ++k) {
    const SchemeConfig c = asymmetric_off_gate(rng.uniform(0.0, 0.1), rng.uniform(0.2, 10.0),
                                               rng.uniform(0.1, 4.0), rng.uniform(-5.0, 10.0),
                                               rng.uniform(1.0, 100.0));
    CHECK(analytic_heating(c) >= 0.0);
  }
}

TEST_CASE("closed-form heating agrees with the numeric spectrum over random draws") {
  oracle::Draws rng(43);
  for (int k = 0; k < 50; ++k) {
    const double eta = rng.uniform(0.01, 0.1);
    const double w = rng.uniform(0.5, 4.0);
    const double wg = rng.uniform(0.3, 3.0);
    const double d = rng.uniform(-2.0, 4.0);
    const double g = rng.uniform(1.0, 30.0);
    const SchemeConfig c = asymmetric_off_gate(eta, w, wg, d, g);
    const double closed = analytic_heating(c);
    const double numeric = coefficients(c).a_plus;
    INFO("eta=", eta, " W=", w, " Wg=", wg, " D=", d, " G=", g);
    CHECK(numeric == doctest::Approx(closed).epsilon(0.10));
  }
}

TEST_CASE("peak formulas") {
  const CoolingPeak a = analytic_cooling_peak(asymmetric_gate_point(0.1, 2.0, 15.0));
  CHECK(a.a_minus == doctest::Approx(48.0 * 0.01 * 4.0 / (49.0 * 15.0)).epsilon(1e-14));
  CHECK(a.a_minus == doctest::Approx(2.612e-3).epsilon(1e-3));
  CHECK(*a.laser_detuning == doctest::Approx(3.0 * 4.0 / 7.0 - 1.0));
  const CoolingPeak s = analytic_cooling_peak(symmetric_gate_point(0.05, 1.5, 7.5));
  CHECK(s.a_minus == doctest::Approx(0.016667).epsilon(1e-4));
  CHECK(*s.microwave_rabi == 2.0);
  CHECK(*s.microwave_detuning == -1.0);

  CHECK(analytic_cooling_peak(asymmetric_gate_point(0.1, 4.0, 15.0)).a_minus ==
        doctest::Approx(4.0 * a.a_minus));
  CHECK(analytic_cooling_peak(symmetric_gate_point(0.05, 3.0, 7.5)).a_minus ==
        doctest::Approx(s.a_minus / 4.0));
  CHECK_THROWS_AS(analytic_cooling_peak(eit_baseline(0.05, 2, 5)), ConfigError);
}

TEST_CASE("EIT / Stark / interference decomposition") {
  const SchemeConfig cfg = asymmetric_gate_point(0.1, 2.0, 5.0);
  const std::vector<double> grid = default_grid(-2.0, 3.0, 101);
  const SpectrumComponents c = spectrum_components(cfg, grid);
  const SpectrumResult total = spectrum(cfg, grid);
  const double scale = max_modulus(total.s_values);
  const ComplexMatrix fe = eit_force(cfg), fs = stark_force(cfg);
  const auto es = cross_spectrum(cfg, fe, fs, grid);
  const auto se = cross_spectrum(cfg, fs, fe, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(std::abs(c.eit[k] + c.stark[k] + c.interference[k] - total.s_values[k]) <= 1e-10 * scale);
    CHECK(std::abs(c.interference[k] - es[k] - se[k]) <= 1e-9 * scale);
  }

  // f - f_EIT - f_Stark leaves exactly the b/Y block.
  const DressedBasis db = dressed_basis(cfg.kind);
  const ComplexVector b = db.state(2), y = db.state(3);
  const ComplexMatrix rest = 0.1 * (0.5 * (y * y.adjoint() - b * b.adjoint()) +
                                    (1.0 / std::sqrt(12.0)) * (b * y.adjoint() + y * b.adjoint()));
  CHECK(max_abs(force_operator(cfg) - fe - fs - rest) <= 1e-15);

  oracle::Draws rng(44);
  const ComplexMatrix rho = internal_steady_state(cfg);
  for (int k = 0; k < 3; ++k) {
    const double w = rng.uniform(-2.0, 3.0);
    const std::vector<double> one{w};
    const auto ck = spectrum_components(cfg, one);
    const Complex e_ref = oracle::time_domain_spectrum(cfg, fe, fe, rho, w);
    const Complex s_ref = oracle::time_domain_spectrum(cfg, fs, fs, rho, w);
    const Complex i_ref = oracle::time_domain_spectrum(cfg, fe, fs, rho, w) +
                          oracle::time_domain_spectrum(cfg, fs, fe, rho, w);
    CHECK(std::abs(ck.eit[0] - e_ref) <= 1e-6 * std::abs(e_ref));
    CHECK(std::abs(ck.stark[0] - s_ref) <= 1e-6 * std::abs(s_ref));
    CHECK(std::abs(ck.interference[0] - i_ref) <= 1e-6 * std::abs(i_ref));
  }
  CHECK_THROWS_AS(spectrum_components(symmetric_gate_point(0.1, 2, 5), grid), ConfigError);
}

}
