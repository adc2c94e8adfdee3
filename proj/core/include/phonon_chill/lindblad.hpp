#pragma once

// Lindblad master equation on the internal (x) Fock space:
//
//   d rho/dt = -i[H, rho] + sum_k (r_k/2) (2 J_k rho J_k^+ - J_k^+ J_k rho - rho J_k^+ J_k)
//
// Time evolution never builds the d^2 x d^2 superoperator. The generator keeps
// K = H - (i/2) sum r_k J_k^+ J_k and the jumps in sparse form, so one
// application costs a handful of sparse x dense products.

#include "phonon_chill/operator_core.hpp"
#include "phonon_chill/scheme_models.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace phonon_chill {

using SparseComplexMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

class DensityMatrix {
 public:
  DensityMatrix(const HilbertSpace& space, ComplexMatrix rho);

  static DensityMatrix pure(const HilbertSpace& space, const ComplexVector& psi);
  // internal (4x4) (x) phonon (fock_dim x fock_dim)
  static DensityMatrix product(const ComplexMatrix& internal, const ComplexMatrix& phonon);

  const HilbertSpace& space() const noexcept { return space_; }
  const ComplexMatrix& matrix() const noexcept { return rho_; }

  double trace_error() const;       // |Tr rho - 1|
  double hermiticity_error() const; // max|rho - rho^+|
  double min_eigenvalue() const;

  // Throws NumericalError unless Hermitian to `hermitian_tol`, unit trace to
  // `trace_tol` and eigenvalues >= -`positivity_tol`.
  void validate(double hermitian_tol = 1e-10, double trace_tol = 1e-9,
                double positivity_tol = 1e-8) const;

  ComplexMatrix reduced_internal() const;  // trace over phonons, 4x4
  ComplexMatrix reduced_phonon() const;    // trace over internal levels

 private:
  HilbertSpace space_;
  ComplexMatrix rho_;
};

// Truncated thermal distribution with mean occupation n0 (before truncation),
// renormalised to unit trace.
ComplexMatrix thermal_phonon_state(std::size_t fock_dim, double n0);
ComplexMatrix fock_phonon_state(std::size_t fock_dim, std::size_t n);

// 1/2 |a - b|_1 for Hermitian a, b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Reference dense evaluation of the generator; used by tests and by small
// internal-only calculations.
ComplexMatrix apply_liouvillian(const ComplexMatrix& h, std::span<const Jump> diss,
                                const ComplexMatrix& rho);

// Row-major vectorisation: vec(rho)[i*d + j] = rho(i, j), so that
// vec(A X B) = (A (x) B^T) vec(X).
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v, std::size_t dim);

class Liouvillian {
 public:
  Liouvillian(const ComplexMatrix& h, std::span<const Jump> diss);

  std::size_t dim() const noexcept { return dim_; }

  // General operand (need not be Hermitian).
  void apply(const ComplexMatrix& rho, ComplexMatrix& out) const;
  ComplexMatrix apply(const ComplexMatrix& rho) const;

  // Hermitian operand: uses rho K^+ = (K rho)^+, half the work of apply().
  void apply_hermitian(const ComplexMatrix& rho, ComplexMatrix& out) const;

  // Dense d^2 x d^2 matrix in the vectorize() convention.
  ComplexMatrix superoperator() const;

 private:
  std::size_t dim_;
  ComplexMatrix h_;
  SparseComplexMatrix k_;  // H - (i/2) sum r J^+ J
  std::vector<SparseComplexMatrix> jumps_;   // sqrt(r) J
  std::vector<SparseComplexMatrix> jumps_adjoint_;
  mutable ComplexMatrix scratch_;
  mutable ComplexMatrix scratch2_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> phonon_number;
  std::vector<std::array<double, 4>> populations;
  std::vector<double> trace_error;
  std::vector<double> hermiticity_error;
  std::vector<double> min_eigenvalue;
  // Highest-two-Fock-level population; guards truncation.
  std::vector<double> fock_tail;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  std::optional<DensityMatrix> final_state;
};

struct EvolveOptions {
  // Absolute and relative local error tolerance for the embedded 5(4) pair.
  double tol = 1e-10;
  // Observables are recorded at these times (strictly increasing, >= 0). When
  // empty, `samples` uniformly spaced points on [0, t_final] are used.
  std::vector<double> sample_times;
  std::size_t samples = 201;
  double initial_step = 1e-3;
  double max_step = 0.0;  // 0: unlimited
  // Trace drift beyond this aborts the run.
  double max_trace_drift = 1e-7;
  bool check_positivity = true;
  bool keep_final_state = true;
};

// Adaptive Dormand-Prince 5(4) integration. Deterministic for identical
// inputs. Throws StepSizeUnderflow (with the time reached) when the step
// collapses and NumericalError on trace drift.
Trajectory evolve(const ComplexMatrix& h, std::span<const Jump> diss,
                  const DensityMatrix& rho0, double t_final,
                  const EvolveOptions& options = {});
Trajectory evolve(const Liouvillian& generator, const DensityMatrix& rho0, double t_final,
                  const EvolveOptions& options = {});

struct SteadyStateOptions {
  // Dense kernel solve up to this total dimension, long-time evolution above.
  std::size_t dense_limit = 40;
  // Fallback: integrate until |rho(t) - rho(t - window)|_max <= tolerance.
  double convergence_tolerance = 1e-10;
  double window = 0.0;       // 0: derived from max_time / 200
  double max_time = 1e6;
  double tol = 1e-10;
  // Restrict to these basis indices (levels that the dynamics never leaves).
  // Empty: full space.
  std::vector<std::size_t> basis;
};

// Unique stationary state of the generator. The dense path replaces one
// population equation of vec(L) by the trace condition and solves the
// resulting system; a degenerate kernel makes that system singular and is
// reported as DegenerateKernelError.
DensityMatrix steady_state(const ComplexMatrix& h, std::span<const Jump> diss,
                           const HilbertSpace& space, const SteadyStateOptions& options = {});

// Kernel of a small superoperator, reported with its dimension.
ComplexMatrix steady_state_dense(const ComplexMatrix& superop, std::size_t dim);

Complex expectation(const ComplexMatrix& op, const DensityMatrix& rho);
Complex expectation(const ComplexMatrix& op, const ComplexMatrix& rho);

// Basis indices of `levels` (x) all phonon states.
std::vector<std::size_t> level_basis(const HilbertSpace& space,
                                     std::span<const std::size_t> levels);

}  // namespace phonon_chill
