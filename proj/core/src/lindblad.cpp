#include "phonon_chill/lindblad.hpp"

#include "phonon_chill/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace phonon_chill {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a.rows() << "x" << a.cols() << " vs "
        << b.rows() << "x" << b.cols() << ")";
    throw NumericalError(msg.str());
  }
}

SparseComplexMatrix to_sparse(const ComplexMatrix& m) {
  return m.sparseView(Complex(0.0), 0.0);
}

double generator_scale(const ComplexMatrix& h, std::span<const Jump> diss) {
  double scale = max_abs(h);
  for (const auto& j : diss) {
    const double n = max_abs(j.op);
    scale += j.rate * n * n;
  }
  return scale;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Observer {
  const HilbertSpace& space;
  bool check_positivity;
  Trajectory& out;

  void record(double t, const ComplexMatrix& rho) {
    const std::size_t nf = space.fock_dim();
    double n = 0.0;
    std::array<double, 4> pops{};
    double tail = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t k = 0; k < nf; ++k) {
        const auto idx = static_cast<Eigen::Index>(i * nf + k);
        const double p = rho(idx, idx).real();
        pops[i] += p;
        n += static_cast<double>(k) * p;
        if (k + 2 >= nf) tail += p;
      }
    }
    out.times.push_back(t);
    out.phonon_number.push_back(n);
    out.populations.push_back(pops);
    out.trace_error.push_back(std::abs(rho.trace() - Complex(1.0)));
    out.hermiticity_error.push_back(max_abs(rho - rho.adjoint()));
    out.fock_tail.push_back(tail);
    if (check_positivity) {
      const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
      out.min_eigenvalue.push_back(es.eigenvalues().minCoeff());
    }
  }
};

}  // namespace

// --- DensityMatrix -----------------------------------------------------------

DensityMatrix::DensityMatrix(const HilbertSpace& space, ComplexMatrix rho)
    : space_(space), rho_(std::move(rho)) {
  const auto d = static_cast<Eigen::Index>(space_.total_dim());
  if (rho_.rows() != d || rho_.cols() != d) {
    throw NumericalError("DensityMatrix: matrix is " + std::to_string(rho_.rows()) + "x" +
                         std::to_string(rho_.cols()) + ", space needs " +
                         std::to_string(d));
  }
  if (!rho_.allFinite()) throw NumericalError("DensityMatrix: non-finite entries");
}

DensityMatrix DensityMatrix::pure(const HilbertSpace& space, const ComplexVector& psi) {
  const ComplexVector v = psi.normalized();
  return DensityMatrix(space, v * v.adjoint());
}

DensityMatrix DensityMatrix::product(const ComplexMatrix& internal, const ComplexMatrix& phonon) {
  if (internal.rows() != 4 || internal.cols() != 4) {
    throw NumericalError("DensityMatrix::product: internal state must be 4x4");
  }
  const HilbertSpace space(static_cast<std::size_t>(phonon.rows()));
  return DensityMatrix(space, kron(internal, phonon));
}

double DensityMatrix::trace_error() const { return std::abs(rho_.trace() - Complex(1.0)); }

double DensityMatrix::hermiticity_error() const { return max_abs(rho_ - rho_.adjoint()); }

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double hermitian_tol, double trace_tol,
                             double positivity_tol) const {
  if (hermiticity_error() > hermitian_tol) {
    throw NumericalError("density matrix not Hermitian: " + std::to_string(hermiticity_error()));
  }
  if (trace_error() > trace_tol) {
    throw NumericalError("density matrix trace error " + std::to_string(trace_error()));
  }
  if (min_eigenvalue() < -positivity_tol) {
    throw NumericalError("density matrix has eigenvalue " + std::to_string(min_eigenvalue()));
  }
}

ComplexMatrix DensityMatrix::reduced_internal() const {
  const auto nf = static_cast<Eigen::Index>(space_.fock_dim());
  ComplexMatrix out(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) out(i, j) = rho_.block(i * nf, j * nf, nf, nf).trace();
  }
  return out;
}

ComplexMatrix DensityMatrix::reduced_phonon() const {
  const auto nf = static_cast<Eigen::Index>(space_.fock_dim());
  ComplexMatrix out = ComplexMatrix::Zero(nf, nf);
  for (Eigen::Index i = 0; i < 4; ++i) out += rho_.block(i * nf, i * nf, nf, nf);
  return out;
}

ComplexMatrix thermal_phonon_state(std::size_t fock_dim, double n0) {
  if (fock_dim < 2) throw ConfigError("thermal_phonon_state: fock_dim must be >= 2");
  if (!(n0 >= 0.0)) throw ConfigError("thermal_phonon_state: n0 must be >= 0");
  const auto nf = static_cast<Eigen::Index>(fock_dim);
  ComplexMatrix rho = ComplexMatrix::Zero(nf, nf);
  const double q = n0 / (1.0 + n0);
  double total = 0.0;
  for (Eigen::Index k = 0; k < nf; ++k) {
    const double p = std::pow(q, static_cast<double>(k));
    rho(k, k) = p;
    total += p;
  }
  return rho / total;
}

ComplexMatrix fock_phonon_state(std::size_t fock_dim, std::size_t n) {
  if (n >= fock_dim) throw ConfigError("fock_phonon_state: n outside truncation");
  ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(fock_dim),
                                          static_cast<Eigen::Index>(fock_dim));
  rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = 1.0;
  return rho;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "trace_distance");
  const ComplexMatrix diff = a - b;
  const ComplexMatrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// --- generator ---------------------------------------------------------------

ComplexMatrix apply_liouvillian(const ComplexMatrix& h, std::span<const Jump> diss,
                                const ComplexMatrix& rho) {
  require_same_dim(h, rho, "apply_liouvillian");
  ComplexMatrix out = -kI * (h * rho - rho * h);
  for (const auto& j : diss) {
    require_same_dim(j.op, rho, "apply_liouvillian");
    const ComplexMatrix jd = j.op.adjoint();
    const ComplexMatrix jdj = jd * j.op;
    out += (j.rate / 2.0) * (2.0 * j.op * rho * jd - jdj * rho - rho * jdj);
  }
  return out;
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  const Eigen::Index d = rho.rows();
  ComplexVector v(d * rho.cols());
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j) = rho(i, j);
  }
  return v;
}

ComplexMatrix unvectorize(const ComplexVector& v, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (v.size() != d * d) throw NumericalError("unvectorize: length mismatch");
  ComplexMatrix rho(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) rho(i, j) = v(i * d + j);
  }
  return rho;
}

Liouvillian::Liouvillian(const ComplexMatrix& h, std::span<const Jump> diss)
    : dim_(static_cast<std::size_t>(h.rows())), h_(h) {
  if (h.rows() != h.cols()) throw NumericalError("Liouvillian: Hamiltonian not square");
  ComplexMatrix k = h;
  for (const auto& j : diss) {
    require_same_dim(h, j.op, "Liouvillian");
    if (j.rate < 0.0) throw ConfigError("Liouvillian: negative jump rate");
    k -= (kI * (j.rate / 2.0)) * (j.op.adjoint() * j.op);
    const ComplexMatrix scaled = std::sqrt(j.rate) * j.op;
    jumps_.push_back(to_sparse(scaled));
    jumps_adjoint_.push_back(to_sparse(scaled.adjoint()));
  }
  k_ = to_sparse(k);
  const auto d = static_cast<Eigen::Index>(dim_);
  scratch_.resize(d, d);
  scratch2_.resize(d, d);
}

void Liouvillian::apply(const ComplexMatrix& rho, ComplexMatrix& out) const {
  if (rho.rows() != static_cast<Eigen::Index>(dim_) || rho.cols() != rho.rows()) {
    throw NumericalError("Liouvillian::apply: dimension mismatch");
  }
  // -i (K rho - rho K^+)
  scratch_.noalias() = k_ * rho;
  const ComplexMatrix rho_adj = rho.adjoint();
  scratch2_.noalias() = k_ * rho_adj;  // (rho K^+)^+ = K rho^+
  out.noalias() = -kI * scratch_;
  out.noalias() += kI * scratch2_.adjoint();
  for (std::size_t n = 0; n < jumps_.size(); ++n) {
    scratch_.noalias() = jumps_[n] * rho;
    out.noalias() += scratch_ * jumps_adjoint_[n];
  }
}

ComplexMatrix Liouvillian::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out(rho.rows(), rho.cols());
  apply(rho, out);
  return out;
}

void Liouvillian::apply_hermitian(const ComplexMatrix& rho, ComplexMatrix& out) const {
  if (rho.rows() != static_cast<Eigen::Index>(dim_) || rho.cols() != rho.rows()) {
    throw NumericalError("Liouvillian::apply_hermitian: dimension mismatch");
  }
  scratch_.noalias() = k_ * rho;
  out.noalias() = -kI * scratch_;
  out.noalias() += kI * scratch_.adjoint();
  for (std::size_t n = 0; n < jumps_.size(); ++n) {
    scratch_.noalias() = jumps_[n] * rho;
    out.noalias() += scratch_ * jumps_adjoint_[n];
  }
}

ComplexMatrix Liouvillian::superoperator() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix k = ComplexMatrix(k_);
  // vec(K rho) = (K (x) 1) vec rho;  vec(rho K^+) = (1 (x) conj(K)) vec rho
  ComplexMatrix l = -kI * kron(k, id) + kI * kron(id, k.conjugate());
  for (const auto& j : jumps_) {
    const ComplexMatrix jd = ComplexMatrix(j);
    l += kron(jd, jd.conjugate());
  }
  return l;
}

// --- integration -------------------------------------------------------------

Trajectory evolve(const ComplexMatrix& h, std::span<const Jump> diss, const DensityMatrix& rho0,
                  double t_final, const EvolveOptions& options) {
  return evolve(Liouvillian(h, diss), rho0, t_final, options);
}

Trajectory evolve(const Liouvillian& generator, const DensityMatrix& rho0, double t_final,
                  const EvolveOptions& options) {
  if (!(t_final > 0.0)) throw ConfigError("evolve: t_final must be > 0");
  if (generator.dim() != rho0.space().total_dim()) {
    throw NumericalError("evolve: generator and state dimensions differ");
  }
  if (!(options.tol > 0.0)) throw ConfigError("evolve: tol must be > 0");
  rho0.validate();

  std::vector<double> samples = options.sample_times;
  if (samples.empty()) {
    const std::size_t n = std::max<std::size_t>(options.samples, 2);
    samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      samples[k] = t_final * static_cast<double>(k) / static_cast<double>(n - 1);
    }
  }
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (samples[k] < 0.0 || samples[k] > t_final * (1.0 + 1e-12) ||
        (k > 0 && samples[k] <= samples[k - 1])) {
      throw ConfigError("evolve: sample times must be strictly increasing within [0, t_final]");
    }
  }

  Trajectory traj;
  Observer observer{rho0.space(), options.check_positivity, traj};

  const auto d = static_cast<Eigen::Index>(generator.dim());
  ComplexMatrix y = rho0.matrix();
  ComplexMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d);
  ComplexMatrix stage(d, d), y_new(d, d), err(d, d);

  double t = 0.0;
  double h = std::min(options.initial_step, t_final);
  if (options.max_step > 0.0) h = std::min(h, options.max_step);
  std::size_t next = 0;
  while (next < samples.size() && samples[next] <= 0.0) {
    observer.record(0.0, y);
    ++next;
  }

  generator.apply_hermitian(y, k1);
  const double tol = options.tol;

  while (next < samples.size()) {
    const double target = samples[next];
    double step = std::min(h, target - t);
    const bool clamped = step < h;

    stage.noalias() = y + (step * a21) * k1;
    generator.apply_hermitian(stage, k2);
    stage.noalias() = y + step * (a31 * k1 + a32 * k2);
    generator.apply_hermitian(stage, k3);
    stage.noalias() = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
    generator.apply_hermitian(stage, k4);
    stage.noalias() = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    generator.apply_hermitian(stage, k5);
    stage.noalias() = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    generator.apply_hermitian(stage, k6);
    y_new.noalias() = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    generator.apply_hermitian(y_new, k7);
    err.noalias() = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        const double scale = tol + tol * std::max(std::abs(y(i, j)), std::abs(y_new(i, j)));
        err_norm = std::max(err_norm, std::abs(err(i, j)) / scale);
      }
    }

    if (!(err_norm <= 1.0)) {
      ++traj.rejected_steps;
      const double factor = std::isfinite(err_norm)
                                ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2))
                                : 0.2;
      h = step * factor;
      if (h < 1e-13 * std::max(1.0, std::abs(t))) {
        throw StepSizeUnderflow("evolve: step size underflow at t = " + std::to_string(t), t);
      }
      continue;
    }

    ++traj.steps;
    t = clamped ? target : t + step;
    y.swap(y_new);
    k1.swap(k7);

    // Keep the operand exactly Hermitian so the half-cost generator stays valid.
    stage = 0.5 * (y + y.adjoint());
    y = stage;

    const double drift = std::abs(y.trace() - Complex(1.0));
    if (drift > options.max_trace_drift) {
      throw NumericalError("evolve: trace drift " + std::to_string(drift) + " at t = " +
                           std::to_string(t));
    }

    const double factor =
        err_norm == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err_norm, -0.2)));
    if (!clamped) {
      h = step * factor;
    } else {
      h = std::max(h, step * factor);
    }
    if (options.max_step > 0.0) h = std::min(h, options.max_step);

    while (next < samples.size() && samples[next] <= t) {
      observer.record(t, y);
      ++next;
    }
  }

  if (options.keep_final_state) traj.final_state = DensityMatrix(rho0.space(), y);
  return traj;
}

// --- steady state ------------------------------------------------------------

ComplexMatrix steady_state_dense(const ComplexMatrix& superop, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (superop.rows() != d * d || superop.cols() != d * d) {
    throw NumericalError("steady_state_dense: superoperator has wrong size");
  }
  ComplexVector v;
  if (d * d <= 256) {
    // Small systems: the SVD tells us the kernel dimension directly.
    const ComplexMatrix kernel = null_space(superop, kKernelTolerance);
    if (kernel.cols() == 0) throw FullRankError("steady_state: generator has no kernel");
    if (kernel.cols() > 1) {
      throw DegenerateKernelError("steady_state: kernel dimension " +
                                      std::to_string(kernel.cols()),
                                  static_cast<int>(kernel.cols()));
    }
    v = kernel.col(0);
  } else {
    ComplexMatrix a = superop;
    ComplexVector rhs = ComplexVector::Zero(d * d);
    a.row(0).setZero();
    for (Eigen::Index i = 0; i < d; ++i) a(0, i * d + i) = 1.0;
    rhs(0) = 1.0;
    try {
      v = linear_solve(a, rhs);
    } catch (const SingularMatrixError&) {
      throw DegenerateKernelError("steady_state: trace-constrained system is singular "
                                  "(stationary state not unique)",
                                  -1);
    }
  }
  ComplexMatrix rho = unvectorize(v, dim);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-14) throw NumericalError("steady_state: kernel vector is traceless");
  rho /= tr;
  return 0.5 * (rho + rho.adjoint());
}

namespace {

struct Restricted {
  ComplexMatrix h;
  std::vector<Jump> jumps;
};

Restricted restrict_to(const ComplexMatrix& h, std::span<const Jump> diss,
                       const std::vector<std::size_t>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::vector<bool> inside(static_cast<std::size_t>(h.rows()), false);
  for (auto b : basis) {
    if (b >= inside.size()) throw ConfigError("steady_state: basis index out of range");
    inside[b] = true;
  }
  auto leaks = [&](const ComplexMatrix& op) {
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
      if (inside[static_cast<std::size_t>(i)]) continue;
      for (auto b : basis) {
        if (op(i, static_cast<Eigen::Index>(b)) != Complex(0.0)) return true;
      }
    }
    return false;
  };
  auto project = [&](const ComplexMatrix& op) {
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        out(i, j) = op(static_cast<Eigen::Index>(basis[static_cast<std::size_t>(i)]),
                       static_cast<Eigen::Index>(basis[static_cast<std::size_t>(j)]));
      }
    }
    return out;
  };
  if (leaks(h)) throw ConfigError("steady_state: Hamiltonian couples the subspace outward");
  Restricted r{project(h), {}};
  for (const auto& j : diss) {
    if (leaks(j.op)) throw ConfigError("steady_state: jump leaves the subspace");
    r.jumps.push_back({j.rate, project(j.op), j.label});
  }
  return r;
}

}  // namespace

DensityMatrix steady_state(const ComplexMatrix& h, std::span<const Jump> diss,
                           const HilbertSpace& space, const SteadyStateOptions& options) {
  if (diss.empty()) throw ConfigError("steady_state: dissipator list is empty");
  const auto d = static_cast<Eigen::Index>(space.total_dim());
  if (h.rows() != d) throw NumericalError("steady_state: Hamiltonian dimension mismatch");

  std::vector<std::size_t> basis = options.basis;
  if (basis.empty()) {
    basis.resize(space.total_dim());
    for (std::size_t i = 0; i < basis.size(); ++i) basis[i] = i;
  }
  const Restricted sub = restrict_to(h, diss, basis);
  const auto n = static_cast<Eigen::Index>(basis.size());

  ComplexMatrix rho_sub;
  if (basis.size() <= options.dense_limit) {
    rho_sub = steady_state_dense(Liouvillian(sub.h, sub.jumps).superoperator(), basis.size());
  } else {
    // Long-time evolution of the full problem from the maximally mixed state
    // on the subspace; the dynamics never leaves it.
    const Liouvillian gen(h, diss);
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    for (auto b : basis) {
      rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = 1.0 / static_cast<double>(n);
    }
    const double window = options.window > 0.0 ? options.window : options.max_time / 200.0;
    EvolveOptions eo;
    eo.tol = options.tol;
    eo.samples = 2;
    eo.check_positivity = false;
    double t = 0.0;
    bool converged = false;
    while (t < options.max_time) {
      const Trajectory tr = evolve(gen, DensityMatrix(space, rho), window, eo);
      const ComplexMatrix& next = tr.final_state->matrix();
      const double change = max_abs(next - rho);
      rho = next;
      t += window;
      if (change <= options.convergence_tolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NumericalError("steady_state: long-time evolution did not converge by t = " +
                           std::to_string(options.max_time));
    }
    rho_sub.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        rho_sub(i, j) = rho(static_cast<Eigen::Index>(basis[static_cast<std::size_t>(i)]),
                            static_cast<Eigen::Index>(basis[static_cast<std::size_t>(j)]));
      }
    }
  }

  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      rho(static_cast<Eigen::Index>(basis[static_cast<std::size_t>(i)]),
          static_cast<Eigen::Index>(basis[static_cast<std::size_t>(j)])) = rho_sub(i, j);
    }
  }

  const double residual = max_abs(apply_liouvillian(h, diss, rho));
  const double scale = generator_scale(h, diss);
  if (residual > 1e-9 * scale) {
    throw NumericalError("steady_state: residual " + std::to_string(residual) +
                         " exceeds 1e-9 of the generator scale");
  }
  return DensityMatrix(space, rho);
}

Complex expectation(const ComplexMatrix& op, const ComplexMatrix& rho) {
  require_same_dim(op, rho, "expectation");
  return (op * rho).trace();
}

Complex expectation(const ComplexMatrix& op, const DensityMatrix& rho) {
  return expectation(op, rho.matrix());
}

std::vector<std::size_t> level_basis(const HilbertSpace& space,
                                     std::span<const std::size_t> levels) {
  std::vector<std::size_t> out;
  for (auto level : levels) {
    for (std::size_t n = 0; n < space.fock_dim(); ++n) out.push_back(space.index(level, n));
  }
  return out;
}

}  // namespace phonon_chill
