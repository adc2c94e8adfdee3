#pragma once

// Dense complex linear algebra used by every other module: Kronecker
// products, truncated Fock-space ladder operators, the (internal level) x
// (phonon) index bookkeeping, and the two solvers the engine relies on.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <utility>

namespace phonon_chill {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kSolverResidualTolerance = 1e-10;
inline constexpr double kKernelTolerance = 1e-10;
inline constexpr double kPivotTolerance = 1e-14;

// Tensor product space of the four internal levels and a truncated phonon
// ladder. The internal index varies slowest: state = internal * fock_dim + n.
class HilbertSpace {
 public:
  static constexpr std::size_t kInternalDim = 4;

  explicit HilbertSpace(std::size_t fock_dim);

  std::size_t internal_dim() const noexcept { return kInternalDim; }
  std::size_t fock_dim() const noexcept { return fock_dim_; }
  std::size_t total_dim() const noexcept { return kInternalDim * fock_dim_; }

  std::size_t index(std::size_t internal, std::size_t phonon) const;
  std::pair<std::size_t, std::size_t> split(std::size_t index) const;

  // a (x) 1 lifted operators on the full space.
  ComplexMatrix embed_internal(const ComplexMatrix& internal_op) const;
  ComplexMatrix embed_phonon(const ComplexMatrix& phonon_op) const;

  ComplexMatrix annihilation() const;
  ComplexMatrix number_operator() const;
  ComplexMatrix internal_projector(std::size_t level) const;

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

 private:
  std::size_t fock_dim_;
};

// (a (x) b)[i*n + k, j*n + l] = a[i, j] * b[k, l]. Throws ConfigError for
// non-square input.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Truncated bosonic lowering operator: a[n-1, n] = sqrt(n).
ComplexMatrix annihilation(std::size_t n_f);

// Solve a x = rhs by partial-pivot LU. Throws SingularMatrixError when a
// pivot falls below kPivotTolerance * max|a|.
ComplexVector linear_solve(const ComplexMatrix& a, const ComplexVector& rhs);

// Orthonormal basis (as columns) of { v : |a v| <= tol |a| }, from the SVD.
ComplexMatrix null_space(const ComplexMatrix& a, double tol = kKernelTolerance);

// Unit vector in the kernel of `a`; FullRankError when none meets `tol`.
// Returns the direction of the smallest singular value when the kernel is
// larger than one-dimensional.
ComplexVector null_vector(const ComplexMatrix& a, double tol = kKernelTolerance);

double max_abs(const ComplexMatrix& a);

// max|a - a^dagger| / max|a|; zero for the zero matrix.
double hermiticity_error(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double rel_tol = kHermitianTolerance);

bool all_finite(const ComplexMatrix& a);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace phonon_chill
