#include "phonon_chill/operator_core.hpp"

#include "phonon_chill/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace phonon_chill {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw ConfigError(std::string(what) + ": expected a square matrix, got " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

HilbertSpace::HilbertSpace(std::size_t fock_dim) : fock_dim_(fock_dim) {
  if (fock_dim < 2) {
    throw ConfigError("HilbertSpace: fock_dim must be >= 2, got " +
                      std::to_string(fock_dim));
  }
}

std::size_t HilbertSpace::index(std::size_t internal, std::size_t phonon) const {
  if (internal >= kInternalDim || phonon >= fock_dim_) {
    throw ConfigError("HilbertSpace::index: out of range");
  }
  return internal * fock_dim_ + phonon;
}

std::pair<std::size_t, std::size_t> HilbertSpace::split(std::size_t index) const {
  if (index >= total_dim()) throw ConfigError("HilbertSpace::split: out of range");
  return {index / fock_dim_, index % fock_dim_};
}

ComplexMatrix HilbertSpace::embed_internal(const ComplexMatrix& internal_op) const {
  if (internal_op.rows() != static_cast<Eigen::Index>(kInternalDim) ||
      internal_op.cols() != static_cast<Eigen::Index>(kInternalDim)) {
    throw ConfigError("embed_internal: operator must be 4x4");
  }
  return kron(internal_op, ComplexMatrix::Identity(fock_dim_, fock_dim_));
}

ComplexMatrix HilbertSpace::embed_phonon(const ComplexMatrix& phonon_op) const {
  if (phonon_op.rows() != static_cast<Eigen::Index>(fock_dim_) ||
      phonon_op.cols() != static_cast<Eigen::Index>(fock_dim_)) {
    throw ConfigError("embed_phonon: operator must be fock_dim x fock_dim");
  }
  return kron(ComplexMatrix::Identity(kInternalDim, kInternalDim), phonon_op);
}

ComplexMatrix HilbertSpace::annihilation() const {
  return embed_phonon(phonon_chill::annihilation(fock_dim_));
}

ComplexMatrix HilbertSpace::number_operator() const {
  const ComplexMatrix a = phonon_chill::annihilation(fock_dim_);
  return embed_phonon(a.adjoint() * a);
}

ComplexMatrix HilbertSpace::internal_projector(std::size_t level) const {
  if (level >= kInternalDim) throw ConfigError("internal_projector: level out of range");
  ComplexMatrix p = ComplexMatrix::Zero(kInternalDim, kInternalDim);
  p(level, level) = 1.0;
  return embed_internal(p);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "kron");
  require_square(b, "kron");
  const Eigen::Index m = a.rows();
  const Eigen::Index n = b.rows();
  ComplexMatrix out(m * n, m * n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out.block(i * n, j * n, n, n) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix annihilation(std::size_t n_f) {
  if (n_f < 2) {
    throw ConfigError("annihilation: n_f must be >= 2, got " + std::to_string(n_f));
  }
  const auto n = static_cast<Eigen::Index>(n_f);
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

ComplexVector linear_solve(const ComplexMatrix& a, const ComplexVector& rhs) {
  require_square(a, "linear_solve");
  if (rhs.size() != a.rows()) {
    throw ConfigError("linear_solve: rhs length " + std::to_string(rhs.size()) +
                      " does not match matrix dimension " + std::to_string(a.rows()));
  }
  const double scale = max_abs(a);
  if (scale == 0.0) throw SingularMatrixError("linear_solve: zero matrix");

  const Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const double smallest_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(smallest_pivot > kPivotTolerance * scale)) {
    throw SingularMatrixError("linear_solve: numerically singular system (pivot " +
                              std::to_string(smallest_pivot) + ", scale " +
                              std::to_string(scale) + ")");
  }
  return lu.solve(rhs);
}

ComplexMatrix null_space(const ComplexMatrix& a, double tol) {
  require_square(a, "null_space");
  const Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double norm = sigma.size() > 0 ? sigma(0) : 0.0;
  // Singular values are sorted in decreasing order.
  Eigen::Index first = sigma.size();
  while (first > 0 && sigma(first - 1) <= tol * norm) --first;
  const Eigen::Index kernel = sigma.size() - first;
  return svd.matrixV().rightCols(kernel);
}

ComplexVector null_vector(const ComplexMatrix& a, double tol) {
  const ComplexMatrix kernel = null_space(a, tol);
  if (kernel.cols() == 0) {
    throw FullRankError("null_vector: matrix has full rank at tolerance " +
                        std::to_string(tol));
  }
  return kernel.col(kernel.cols() - 1);
}

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermiticity_error(const ComplexMatrix& a) {
  const double scale = max_abs(a);
  if (scale == 0.0) return 0.0;
  return max_abs(a - a.adjoint()) / scale;
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  return a.rows() == a.cols() && hermiticity_error(a) <= rel_tol;
}

bool all_finite(const ComplexMatrix& a) { return a.allFinite(); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

}  // namespace phonon_chill
