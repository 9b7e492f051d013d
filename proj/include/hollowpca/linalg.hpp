#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>

#include "hollowpca/error.hpp"

namespace hollowpca {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n x d sample matrix; row i is the observation x_i. Entries are finite.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(RowMatrix values);

  Index rows() const noexcept { return m_.rows(); }
  Index cols() const noexcept { return m_.cols(); }
  const RowMatrix& values() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }
  auto row(Index i) const { return m_.row(i); }

 private:
  RowMatrix m_;
};

/// Dense symmetric matrix. Symmetry is exact: m(i, j) == m(j, i) bitwise.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  /// Throws InvalidParameter unless `m` is square, finite and exactly symmetric.
  static SymmetricMatrix from_dense(Matrix m);
  /// Copies the lower triangle onto the upper one.
  static SymmetricMatrix from_lower(Matrix m);
  static SymmetricMatrix zero(Index n);
  static SymmetricMatrix identity(Index n);

  Index dim() const noexcept { return m_.rows(); }
  const Matrix& values() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }
  double frobenius_norm() const { return m_.norm(); }

 private:
  explicit SymmetricMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

enum class EigenOrdering { DescendingByValue, DescendingByAbsValue };

inline constexpr double kDefaultEigenTol = 1e-10;

/// Eigenpairs sorted per `ordering`. `vectors` holds one orthonormal column per
/// value; a full decomposition has n columns, a window fewer. Each column is
/// signed so its largest-magnitude entry is positive.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
  EigenOrdering ordering = EigenOrdering::DescendingByValue;
  /// Index (under `ordering`) of the first stored pair.
  Index offset = 0;
  /// max_j ||S v_j - lambda_j v_j||_2 / max(1, ||S||_F)
  double residual = 0.0;

  Index dim() const noexcept { return vectors.rows(); }
  Index size() const noexcept { return values.size(); }
};

struct EigenWindow {
  Vector values;
  Matrix vectors;
};

/// r x r alignment matrix such as H = U^T Ubar or its polar factor sgn(H).
using AlignmentMatrix = Matrix;

struct SmallSvd {
  Matrix left;
  Vector singular;
  Matrix right;
};

/// Exponent of an l_{2,p} norm; p >= 1 or the infinity sentinel.
class LpExponent {
 public:
  explicit LpExponent(double p);
  static constexpr LpExponent infinity() noexcept { return LpExponent(); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Finite exponent; +inf for the sentinel.
  double value() const noexcept { return infinite_ ? std::numeric_limits<double>::infinity() : p_; }

 private:
  constexpr LpExponent() noexcept : p_(0.0), infinite_(true) {}
  double p_;
  bool infinite_;
};

/// Zeroes the diagonal; off-diagonal entries are copied untouched.
SymmetricMatrix hollow(const SymmetricMatrix& m);
/// Same operator on a general square matrix.
Matrix hollow(const Matrix& m);

/// XX^T. Computed tile-by-tile in parallel; see reference::gram for the serial
/// version it is checked against.
SymmetricMatrix gram(const DataMatrix& x);

/// Full symmetric eigendecomposition. Cyclic Jacobi for n <= 64, Householder
/// tridiagonalization plus implicit QL above that. Throws ConvergenceFailure
/// when the residual exceeds `tol`.
EigenDecomposition eigh(const SymmetricMatrix& s, EigenOrdering ordering,
                        double tol = kDefaultEigenTol);

enum class EigenSolver {
  Dense,
  /// Lanczos with full reorthogonalization from a fixed start vector. Only for
  /// windows whose eigenvalues are simple: a single Krylov sequence cannot see
  /// the second copy of a repeated eigenvalue. Falls back to Dense when it does
  /// not converge within its iteration budget.
  Krylov,
};

/// Eigenpairs s+1..s+r under `ordering`. Equivalent to top_window(eigh(...), s, r)
/// up to the basis chosen inside repeated eigenvalues.
EigenDecomposition eigh_window(const SymmetricMatrix& s, EigenOrdering ordering, Index offset,
                               Index count, double tol = kDefaultEigenTol,
                               EigenSolver solver = EigenSolver::Dense);

/// Pairs offset+1..offset+count of an existing decomposition.
EigenWindow top_window(const EigenDecomposition& e, Index offset, Index count);

SmallSvd svd_small(const AlignmentMatrix& h);

/// Polar factor U V^T of h. Throws RankDeficient if a singular value <= 1e-12.
AlignmentMatrix matrix_sign(const AlignmentMatrix& h);

/// (sum_i ||a_i||_2^p)^{1/p} over rows of `a`; max row norm for p = inf.
/// A column vector gives the plain l_p norm.
double norm_2p(const Eigen::Ref<const Matrix>& a, LpExponent p);

/// Normalizes each column so its largest-magnitude entry is positive.
void canonicalize_signs(Matrix& vectors);

/// sgn with sgn(0) = +1.
inline int sign_of(double v) noexcept { return v < 0.0 ? -1 : 1; }

namespace reference {

/// Plain double loop over rows; serial.
SymmetricMatrix gram(const DataMatrix& x);

/// Cyclic Jacobi on the whole matrix regardless of size.
EigenDecomposition eigh_jacobi(const SymmetricMatrix& s, EigenOrdering ordering,
                               double tol = kDefaultEigenTol, int max_sweeps = 100);

}  // namespace reference

}  // namespace hollowpca
