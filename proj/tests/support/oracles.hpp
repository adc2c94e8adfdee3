#pragma once

// Reference calculations the tests compare the library against. They use the
// dense reference generator and plain fixed-step RK4, nothing from the
// resolvent or the adaptive integrator.

#include "phonon_chill/lindblad.hpp"
#include "phonon_chill/scheme_models.hpp"
#include "phonon_chill/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using namespace phonon_chill;

// Phonon-free generator as a d^2 x d^2 matrix built column by column from
// the reference apply_liouvillian.
inline ComplexMatrix dense_generator(const SchemeConfig& cfg) {
  const ComplexMatrix h = internal_hamiltonian(cfg);
  const std::vector<Jump> jumps = internal_dissipators(cfg);
  const Eigen::Index d = h.rows();
  ComplexMatrix out(d * d, d * d);
  for (Eigen::Index c = 0; c < d * d; ++c) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(c / d, c % d) = 1.0;
    const ComplexMatrix image = apply_liouvillian(h, jumps, e);
    for (Eigen::Index r = 0; r < d * d; ++r) out(r, c) = image(r / d, r % d);
  }
  return out;
}

// Slowest nonzero decay rate and spectral radius of a generator.
struct GeneratorScales {
  double slowest = 0.0;
  double radius = 0.0;
};

inline GeneratorScales scales(const ComplexMatrix& gen) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(gen, false);
  GeneratorScales s{1e300, 0.0};
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const Complex ev = es.eigenvalues()(k);
    s.radius = std::max(s.radius, std::abs(ev));
    if (-ev.real() > 1e-9) s.slowest = std::min(s.slowest, -ev.real());
  }
  return s;
}

// int_0^T e^{iwt} Tr[dx e^{Lt}(dy rho_ss)] dt with classical RK4 on the
// augmented system (X, I); T covers `damping_times` of the slowest mode.
inline Complex time_domain_spectrum(const SchemeConfig& cfg, const ComplexMatrix& x,
                                    const ComplexMatrix& y, const ComplexMatrix& rho_ss,
                                    double omega, double damping_times = 50.0) {
  const ComplexMatrix gen = dense_generator(cfg);
  const GeneratorScales s = scales(gen);
  const double t_end = damping_times / s.slowest;
  const double h0 = 0.02 / std::max(s.radius, std::abs(omega) + 1.0);
  const auto steps = static_cast<long>(std::ceil(t_end / h0));
  const double h = t_end / static_cast<double>(steps);

  const Eigen::Index d = x.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix dx = x - (x * rho_ss).trace() * id;
  const ComplexMatrix dy = y - (y * rho_ss).trace() * id;
  const ComplexMatrix start = dy * rho_ss;

  ComplexVector v(d * d), left(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      v(i * d + j) = start(i, j);
      left(i * d + j) = dx(j, i);  // Tr[dx X] = sum dx(j,i) X(i,j)
    }
  }
  // One RK4 step is linear in the state: v -> P v, and its quadrature
  // increment is e^{iwt} q.v with t the step start.
  const Eigen::Index n = d * d;
  const ComplexMatrix one = ComplexMatrix::Identity(n, n);
  const ComplexMatrix k1 = gen;
  const ComplexMatrix v2 = one + 0.5 * h * k1;
  const ComplexMatrix k2 = gen * v2;
  const ComplexMatrix v3 = one + 0.5 * h * k2;
  const ComplexMatrix k3 = gen * v3;
  const ComplexMatrix v4 = one + h * k3;
  const ComplexMatrix k4 = gen * v4;
  const ComplexMatrix step = one + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  const Complex half = std::exp(Complex(0.0, 0.5 * omega * h));
  const Complex full = std::exp(Complex(0.0, omega * h));
  const Eigen::Matrix<Complex, 1, Eigen::Dynamic> q =
      h / 6.0 * left.transpose() * (one + 2.0 * half * (v2 + v3) + full * v4);

  const double v0 = v.norm();
  Complex acc = 0.0;
  for (long k = 0; k < steps; ++k) {
    acc += std::exp(Complex(0.0, omega * static_cast<double>(k) * h)) * (q * v)(0);
    v = step * v;
    // the remaining tail is below double precision
    if (k % 1024 == 0 && v.norm() <= 1e-17 * v0) break;
  }
  return acc;
}

// Fixed-seed uniform draws.
class Draws {
 public:
  explicit Draws(unsigned seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Complex complex_normal() {
    std::normal_distribution<double> n;
    return {n(rng_), n(rng_)};
  }
  ComplexMatrix matrix(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_normal();
    return m;
  }
  ComplexMatrix hermitian(Eigen::Index n) {
    const ComplexMatrix m = matrix(n, n);
    return 0.5 * (m + m.adjoint());
  }
  // Random density matrix: G G^+ / Tr.
  ComplexMatrix density(Eigen::Index n) {
    const ComplexMatrix g = matrix(n, n);
    const ComplexMatrix r = g * g.adjoint();
    return r / r.trace();
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
