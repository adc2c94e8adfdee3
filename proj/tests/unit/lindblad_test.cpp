#include <doctest.h>

#include "oracles.hpp"
#include "phonon_chill/cooling.hpp"
#include "phonon_chill/errors.hpp"
#include "phonon_chill/lindblad.hpp"

#include <cmath>

using namespace phonon_chill;

namespace {

std::vector<Jump> random_jumps(oracle::Draws& rng, Eigen::Index d, int count) {
  std::vector<Jump> out;
  for (int k = 0; k < count; ++k) out.push_back({rng.uniform(0.1, 2.0), rng.matrix(d, d), "r"});
  return out;
}

ComplexMatrix vacuum_product(const HilbertSpace& space, const ComplexMatrix& internal) {
  ComplexMatrix vac = ComplexMatrix::Zero(space.fock_dim(), space.fock_dim());
  vac(0, 0) = 1.0;
  return kron(internal, vac);
}

}  // namespace

TEST_SUITE("lindblad-engine") {

TEST_CASE("generator preserves trace and Hermiticity and is linear") {
  oracle::Draws rng(31);
  const ComplexMatrix h = rng.hermitian(6);
  const auto jumps = random_jumps(rng, 6, 3);
  const ComplexMatrix r1 = rng.density(6), r2 = rng.matrix(6, 6);
  const ComplexMatrix out = apply_liouvillian(h, jumps, r1);
  CHECK(std::abs(out.trace()) <= 1e-12);
  CHECK(max_abs(out - out.adjoint()) <= 1e-12);
  CHECK(std::abs(apply_liouvillian(h, jumps, r2).trace()) <= 1e-12);
  const Complex a(0.7, -0.2), b(-1.3, 2.0);
  CHECK(max_abs(apply_liouvillian(h, jumps, a * r1 + b * r2) -
                (a * apply_liouvillian(h, jumps, r1) + b * apply_liouvillian(h, jumps, r2))) <=
        1e-12);
}

TEST_CASE("pure decay generator by hand") {
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  const double gamma = 1.7;
  const std::vector<Jump> jumps{{gamma, lower, "decay"}};
  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
  expect(0, 0) = gamma;
  expect(1, 1) = -gamma;
  CHECK(max_abs(apply_liouvillian(ComplexMatrix::Zero(2, 2), jumps, excited) - expect) <= 1e-15);
}

TEST_CASE("vectorisation convention") {
  oracle::Draws rng(32);
  const ComplexMatrix a = rng.matrix(3, 3), x = rng.matrix(3, 3), b = rng.matrix(3, 3);
  CHECK((vectorize(a * x * b) - kron(a, b.transpose()) * vectorize(x)).norm() <= 1e-12);
  CHECK(max_abs(unvectorize(vectorize(x), 3) - x) == 0.0);
}

TEST_CASE("sparse generator matches the dense reference") {
  SchemeConfig cfg = asymmetric_gate_point(0.05, 2.0, 5.0);
  cfg.phonon_damping = 0.01;
  cfg.bath_occupation = 2.0;
  const HilbertSpace space(4);
  const ComplexMatrix h = bare_hamiltonian(cfg, space);
  const auto jumps = dissipators(cfg, space);
  const Liouvillian gen(h, jumps);
  oracle::Draws rng(33);
  const ComplexMatrix rho = rng.density(16);
  const ComplexMatrix general = rng.matrix(16, 16);
  const ComplexMatrix ref = apply_liouvillian(h, jumps, rho);
  CHECK(max_abs(gen.apply(rho) - ref) <= 1e-12);
  ComplexMatrix out;
  gen.apply_hermitian(rho, out);
  CHECK(max_abs(out - ref) <= 1e-12);
  CHECK(max_abs(gen.apply(general) - apply_liouvillian(h, jumps, general)) <= 1e-12);
  const ComplexMatrix sup = gen.superoperator();
  CHECK((sup * vectorize(general) - vectorize(apply_liouvillian(h, jumps, general))).norm() <=
        1e-11);
}

TEST_CASE("decoupled phonon keeps its occupation") {
  SchemeConfig cfg = symmetric_gate_point(0.0, 1.5, 7.5);
  cfg.fock_dim = 6;
  const DensityMatrix rho0 = initial_state(cfg, 1.0, InitialPhonons::Fock);
  const HilbertSpace space(cfg.fock_dim);
  EvolveOptions eo;
  eo.samples = 21;
  const Trajectory tr =
      evolve(bare_hamiltonian(cfg, space), dissipators(cfg, space), rho0, 50.0, eo);
  for (double n : tr.phonon_number) CHECK(std::abs(n - 1.0) <= 1e-8);
  for (std::size_t k = 1; k < tr.times.size(); ++k) CHECK(tr.times[k] > tr.times[k - 1]);
}

TEST_CASE("damped oscillator follows n0 exp(-gamma t)") {
  SchemeConfig cfg = symmetric_gate_point(0.0, 0.0, 1.0, 0.0, 0.0);
  cfg.phonon_damping = 0.05;
  cfg.fock_dim = 8;
  const HilbertSpace space(cfg.fock_dim);
  ComplexMatrix internal = ComplexMatrix::Zero(4, 4);
  internal(kPlusOne, kPlusOne) = 1.0;
  const DensityMatrix rho0 =
      DensityMatrix::product(internal, fock_phonon_state(cfg.fock_dim, 2));
  EvolveOptions eo;
  eo.samples = 41;
  const Trajectory tr =
      evolve(bare_hamiltonian(cfg, space), dissipators(cfg, space), rho0, 60.0, eo);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double expect = 2.0 * std::exp(-0.05 * tr.times[k]);
    CHECK(std::abs(tr.phonon_number[k] - expect) <= 1e-6 * expect);
  }
}

TEST_CASE("trajectory bookkeeping and determinism") {
  SchemeConfig cfg = symmetric_gate_point(0.1, 1.5, 5.0);
  cfg.fock_dim = 6;
  cfg.phonon_damping = 1e-3;
  cfg.bath_occupation = 1.0;
  const HilbertSpace space(cfg.fock_dim);
  const DensityMatrix rho0 = initial_state(cfg, 1.0);
  EvolveOptions eo;
  eo.sample_times = {0.0, 1.0, 5.0, 40.0};
  const Trajectory a = evolve(bare_hamiltonian(cfg, space), dissipators(cfg, space), rho0, 40.0, eo);
  const Trajectory b = evolve(bare_hamiltonian(cfg, space), dissipators(cfg, space), rho0, 40.0, eo);
  REQUIRE(a.times.size() == 4);
  CHECK(a.times == eo.sample_times);
  CHECK(a.phonon_number == b.phonon_number);
  CHECK(a.steps == b.steps);
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    CHECK(a.trace_error[k] <= 1e-9);
    CHECK(a.hermiticity_error[k] <= 1e-9);
    CHECK(a.min_eigenvalue[k] >= -1e-8);
    double pop = 0.0;
    for (double p : a.populations[k]) pop += p;
    CHECK(pop == doctest::Approx(1.0).epsilon(1e-9));
  }
  REQUIRE(a.final_state);
  a.final_state->validate();
}

TEST_CASE("steady state of a decaying level with a damped oscillator") {
  // A2 -> +1 decay and phonon damping: the only fixed point is |+1>|0>.
  SchemeConfig cfg = symmetric_gate_point(0.0, 0.0, 1.0, 0.0, 0.0);
  cfg.branching = {1.0, 0.0, 0.0};
  cfg.phonon_damping = 0.3;
  cfg.fock_dim = 3;
  const HilbertSpace space(cfg.fock_dim);
  const auto jumps = dissipators(cfg, space);
  // |0> and |-1> are left alone, so restrict to the two coupled levels.
  const std::vector<std::size_t> levels{kA2, kPlusOne};
  SteadyStateOptions opts;
  opts.basis = level_basis(space, levels);
  const DensityMatrix rho = steady_state(bare_hamiltonian(cfg, space), jumps, space, opts);
  ComplexMatrix target = ComplexMatrix::Zero(12, 12);
  target(space.index(kPlusOne, 0), space.index(kPlusOne, 0)) = 1.0;
  CHECK(max_abs(rho.matrix() - target) <= 1e-10);
}

TEST_CASE("degenerate kernel is reported") {
  SchemeConfig cfg = symmetric_gate_point(0.0, 1.5, 5.0);
  cfg.fock_dim = 2;  // phonon number conserved: one stationary state per n
  const HilbertSpace space(cfg.fock_dim);
  try {
    steady_state(bare_hamiltonian(cfg, space), dissipators(cfg, space), space);
    FAIL("expected DegenerateKernelError");
  } catch (const DegenerateKernelError& e) {
    CHECK(e.kernel_dimension() >= 2);
  }
  CHECK_THROWS_AS(steady_state(bare_hamiltonian(cfg, space), std::vector<Jump>{}, space),
                  ConfigError);
}

TEST_CASE("internal asymmetric steady state is dark and agrees with long-time evolution") {
  // Gamma = 150 lambda, eta = 0.05
  const SchemeConfig cfg = asymmetric_gate_point(0.05, 2.0, 7.5);
  const ComplexMatrix rho_ss = internal_steady_state(cfg);
  CHECK(rho_ss(kA2, kA2).real() < 1e-3);

  SchemeConfig free = cfg;
  free.lambda = 0.0;
  free.fock_dim = 2;
  const HilbertSpace space(2);
  const oracle::GeneratorScales sc = oracle::scales(oracle::dense_generator(cfg));
  const DensityMatrix rho0(space, vacuum_product(space, ComplexMatrix::Identity(4, 4) / 4.0));
  EvolveOptions eo;
  eo.samples = 2;
  const Trajectory tr = evolve(bare_hamiltonian(free, space), dissipators(free, space), rho0,
                               30.0 / sc.slowest, eo);
  CHECK(trace_distance(tr.final_state->reduced_internal(), rho_ss) <= 1e-8);
}

TEST_CASE("full-space symmetric steady state is close to the ansatz") {
  SchemeConfig cfg = symmetric_gate_point(0.05, 1.5, 7.5);
  cfg.fock_dim = 6;
  const HilbertSpace space(cfg.fock_dim);
  const DensityMatrix rho = scheme_steady_state(cfg);
  const ComplexVector phi = ansatz_steady_state(cfg, space);
  const double fidelity = phi.dot(rho.matrix() * phi).real();
  CHECK(fidelity >= 1.0 - 5.0 * 0.05 * 0.05);
}

TEST_CASE("expectation values") {
  const HilbertSpace space(4);
  const DensityMatrix rho =
      DensityMatrix::product(ComplexMatrix::Identity(4, 4) / 4.0, fock_phonon_state(4, 2));
  CHECK(expectation(ComplexMatrix::Identity(16, 16), rho) == Complex(1.0));
  CHECK(expectation(space.number_operator(), rho).real() == doctest::Approx(2.0));
  CHECK_THROWS_AS(expectation(ComplexMatrix::Identity(3, 3), rho), NumericalError);

  for (double eta : {0.02, 0.04}) {
    const SchemeConfig cfg = asymmetric_gate_point(eta, 2.0, 5.0);
    const ComplexVector phi = ansatz_steady_state(cfg, space);
    const DensityMatrix pure = DensityMatrix::pure(space, phi);
    const Complex sz = expectation(space.embed_internal(sigma_z_prime()), pure);
    CHECK(std::abs(sz.imag()) <= 1e-12);
    CHECK(std::abs(sz) <= 2.0 * eta * eta);
  }
}

TEST_CASE("density matrix helpers") {
  const ComplexMatrix th = thermal_phonon_state(40, 1.5);
  double mean = 0.0;
  for (int n = 0; n < 40; ++n) mean += n * th(n, n).real();
  CHECK(mean == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(th.trace().real() == doctest::Approx(1.0).epsilon(1e-14));

  ComplexMatrix p = ComplexMatrix::Zero(2, 2), q = ComplexMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  q(1, 1) = 1.0;
  CHECK(trace_distance(p, q) == doctest::Approx(1.0));
  CHECK(trace_distance(p, p) == 0.0);

  const HilbertSpace space(2);
  ComplexMatrix bad = ComplexMatrix::Identity(8, 8) / 8.0;
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix(space, bad).validate(), NumericalError);
  ComplexMatrix neg = ComplexMatrix::Identity(8, 8) / 8.0;
  neg(0, 0) = -0.1;
  neg(1, 1) += 0.225;
  CHECK_THROWS_AS(DensityMatrix(space, neg).validate(), NumericalError);
}

}
