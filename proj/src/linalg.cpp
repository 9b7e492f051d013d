#include "hollowpca/linalg.hpp"
#include "hollowpca/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace hollowpca {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NonpositiveEigenvalue: return "NonpositiveEigenvalue";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::ZeroEigengap: return "ZeroEigengap";
  }
  return "Unknown";
}

DataMatrix::DataMatrix(RowMatrix values) : m_(std::move(values)) {
  require(m_.rows() >= 1 && m_.cols() >= 1, ErrorKind::InvalidParameter,
          "data matrix needs at least one row and one column");
  require(m_.allFinite(), ErrorKind::InvalidParameter, "data matrix has non-finite entries");
}

SymmetricMatrix SymmetricMatrix::from_dense(Matrix m) {
  require(m.rows() == m.cols(), ErrorKind::InvalidParameter, "symmetric matrix must be square");
  require(m.allFinite(), ErrorKind::InvalidParameter, "symmetric matrix has non-finite entries");
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i)
      if (m(i, j) != m(j, i)) fail(ErrorKind::InvalidParameter, "matrix is not exactly symmetric");
  return SymmetricMatrix(std::move(m));
}

SymmetricMatrix SymmetricMatrix::from_lower(Matrix m) {
  require(m.rows() == m.cols(), ErrorKind::InvalidParameter, "symmetric matrix must be square");
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i) m(j, i) = m(i, j);
  require(m.allFinite(), ErrorKind::InvalidParameter, "symmetric matrix has non-finite entries");
  return SymmetricMatrix(std::move(m));
}

SymmetricMatrix SymmetricMatrix::zero(Index n) { return SymmetricMatrix(Matrix::Zero(n, n)); }

SymmetricMatrix SymmetricMatrix::identity(Index n) {
  return SymmetricMatrix(Matrix::Identity(n, n));
}

LpExponent::LpExponent(double p) : p_(p), infinite_(false) {
  require(std::isfinite(p) && p >= 1.0, ErrorKind::InvalidParameter,
          "l_p exponent must be finite and >= 1 (use LpExponent::infinity())");
}

SymmetricMatrix hollow(const SymmetricMatrix& m) {
  Matrix out = m.values();
  out.diagonal().setZero();
  return SymmetricMatrix::from_lower(std::move(out));
}

Matrix hollow(const Matrix& m) {
  require(m.rows() == m.cols(), ErrorKind::InvalidParameter, "hollow needs a square matrix");
  Matrix out = m;
  out.diagonal().setZero();
  return out;
}

SymmetricMatrix gram(const DataMatrix& x) {
  constexpr Index kTile = 128;
  const RowMatrix& v = x.values();
  const Index n = v.rows();
  const Index tiles = (n + kTile - 1) / kTile;

  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(tiles * (tiles + 1) / 2));
  for (Index ti = 0; ti < tiles; ++ti)
    for (Index tj = 0; tj <= ti; ++tj) pairs.emplace_back(ti, tj);

  Matrix g(n, n);
  const auto count = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto [ti, tj] = pairs[static_cast<std::size_t>(k)];
    const Index i0 = ti * kTile, j0 = tj * kTile;
    const Index ni = std::min(kTile, n - i0), nj = std::min(kTile, n - j0);
    g.block(i0, j0, ni, nj).noalias() = v.middleRows(i0, ni) * v.middleRows(j0, nj).transpose();
  }
  return SymmetricMatrix::from_lower(std::move(g));
}

void canonicalize_signs(Matrix& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < vectors.rows(); ++i) {
      const double a = std::abs(vectors(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (vectors.rows() > 0 && vectors(arg, j) < 0.0) vectors.col(j) = -vectors.col(j);
  }
}

namespace {

// Positions 0..k-1 of `values` sorted per ordering; ties broken by value then index.
std::vector<Index> sorted_order(const Vector& values, EigenOrdering ordering) {
  std::vector<Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    if (ordering == EigenOrdering::DescendingByAbsValue) {
      const double fa = std::abs(values(a)), fb = std::abs(values(b));
      if (fa != fb) return fa > fb;
    }
    return values(a) > values(b);
  });
  return idx;
}

double residual_of(const SymmetricMatrix& s, const Vector& values, const Matrix& vectors) {
  if (vectors.cols() == 0) return 0.0;
  const Matrix r = s.values() * vectors - vectors * values.asDiagonal();
  return r.colwise().norm().maxCoeff() / std::max(1.0, s.frobenius_norm());
}

EigenDecomposition finish(const SymmetricMatrix& s, const Vector& raw_values, const Matrix& raw_vectors,
                          EigenOrdering ordering, Index offset, Index count, double tol) {
  const auto order = sorted_order(raw_values, ordering);
  EigenDecomposition e;
  e.ordering = ordering;
  e.offset = offset;
  e.values.resize(count);
  e.vectors.resize(raw_vectors.rows(), count);
  for (Index k = 0; k < count; ++k) {
    const Index src = order[static_cast<std::size_t>(offset + k)];
    e.values(k) = raw_values(src);
    e.vectors.col(k) = raw_vectors.col(src);
  }
  canonicalize_signs(e.vectors);
  e.residual = residual_of(s, e.values, e.vectors);
  if (!(e.residual <= tol))
    fail(ErrorKind::ConvergenceFailure,
         "eigen residual " + std::to_string(e.residual) + " exceeds tolerance " + std::to_string(tol));
  return e;
}

struct RawEigen {
  Vector values;
  Matrix vectors;
};

RawEigen dense_raw(const SymmetricMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.values(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) fail(ErrorKind::ConvergenceFailure, "implicit QL did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RawEigen jacobi_raw(const SymmetricMatrix& s, int max_sweeps) {
  const Index n = s.dim();
  Matrix a = s.values();
  Matrix v = Matrix::Identity(n, n);
  const double scale = a.norm();
  bool converged = false;
  for (int sweep = 0; sweep <= max_sweeps; ++sweep) {
    double off = 0.0;
    for (Index q = 1; q < n; ++q)
      for (Index p = 0; p < q; ++p) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= 1e-15 * scale) {
      converged = true;
      break;
    }
    if (sweep == max_sweeps) break;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) fail(ErrorKind::ConvergenceFailure, "Jacobi sweeps exceeded the iteration cap");
  return {a.diagonal(), std::move(v)};
}

constexpr Index kJacobiMaxDim = 64;

RawEigen any_raw(const SymmetricMatrix& s) {
  return s.dim() <= kJacobiMaxDim ? jacobi_raw(s, 100) : dense_raw(s);
}

// Lanczos with full reorthogonalization. Returns the k largest Ritz pairs (and
// the k smallest when `both_ends`) once their residual bounds drop below
// `target`; empty when the budget runs out or the recursion breaks down.
std::optional<RawEigen> lanczos_raw(const SymmetricMatrix& s, Index k, bool both_ends, double target) {
  const Index n = s.dim();
  const Index budget = std::min<Index>(n, std::max<Index>(300, 4 * k));
  Matrix q(n, budget);
  Vector alpha(budget), beta(budget);

  // Fixed start vector so repeated calls are reproducible.
  Philox4x32 gen(Seed(0x6c616e63ULL, {static_cast<std::uint64_t>(n)}));
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = gen.normal();
  q.col(0) = v / v.norm();

  const Index first_check = std::min(budget, std::max<Index>(2 * (both_ends ? 2 * k : k) + 10, 20));
  for (Index j = 0; j < budget; ++j) {
    Vector w = s.values() * q.col(j);
    alpha(j) = q.col(j).dot(w);
    for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
    beta(j) = w.norm();
    const Index m = j + 1;
    const bool last = m == budget || beta(j) <= 1e-14 * std::max(1.0, std::abs(alpha(j)));
    if (last || (m >= first_check && (m - first_check) % 10 == 0)) {
      Matrix t = Matrix::Zero(m, m);
      t.diagonal() = alpha.head(m);
      for (Index i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta(i);
      Eigen::SelfAdjointEigenSolver<Matrix> small(t);
      if (small.info() != Eigen::Success) return std::nullopt;
      const Index want = std::min(k, m);
      std::vector<Index> cols;
      for (Index c = 0; c < want; ++c) cols.push_back(m - 1 - c);
      if (both_ends)
        for (Index c = 0; c < want && c < m - want; ++c) cols.push_back(c);
      if (want == k) {
        bool converged = true;
        for (Index c : cols)
          converged = converged && beta(j) * std::abs(small.eigenvectors()(m - 1, c)) <= target;
        if (converged) {
          RawEigen out;
          out.values.resize(static_cast<Index>(cols.size()));
          out.vectors.resize(n, static_cast<Index>(cols.size()));
          for (std::size_t c = 0; c < cols.size(); ++c) {
            out.values(static_cast<Index>(c)) = small.eigenvalues()(cols[c]);
            out.vectors.col(static_cast<Index>(c)) = q.leftCols(m) * small.eigenvectors().col(cols[c]);
          }
          return out;
        }
      }
      if (last) return std::nullopt;
    }
    q.col(j + 1) = w / beta(j);
  }
  return std::nullopt;
}

void check_eigh_args(const SymmetricMatrix& s, double tol) {
  require(s.dim() >= 1, ErrorKind::InvalidParameter, "eigh needs dim >= 1");
  require(tol > 0.0, ErrorKind::InvalidParameter, "eigh tolerance must be positive");
}

}  // namespace

EigenDecomposition eigh(const SymmetricMatrix& s, EigenOrdering ordering, double tol) {
  check_eigh_args(s, tol);
  auto raw = any_raw(s);
  return finish(s, raw.values, raw.vectors, ordering, 0, s.dim(), tol);
}

EigenDecomposition eigh_window(const SymmetricMatrix& s, EigenOrdering ordering, Index offset,
                               Index count, double tol, EigenSolver solver) {
  check_eigh_args(s, tol);
  const Index n = s.dim();
  require(count >= 1 && offset >= 0 && offset + count <= n, ErrorKind::IndexOutOfRange,
          "eigen window outside [0, n]");
  const Index k = offset + count;
  const bool both_ends = ordering == EigenOrdering::DescendingByAbsValue;
  if (solver == EigenSolver::Krylov && n > kJacobiMaxDim && (both_ends ? 2 * k : k) * 8 <= n) {
    const double target = 0.1 * tol * std::max(1.0, s.frobenius_norm());
    if (auto raw = lanczos_raw(s, k, both_ends, target)) {
      try {
        return finish(s, raw->values, raw->vectors, ordering, offset, count, tol);
      } catch (const Error&) {
        // fall through to the dense path
      }
    }
  }
  auto raw = any_raw(s);
  return finish(s, raw.values, raw.vectors, ordering, offset, count, tol);
}

EigenWindow top_window(const EigenDecomposition& e, Index offset, Index count) {
  const Index n = e.size();
  require(offset >= 0 && count >= 0 && offset + count <= n, ErrorKind::IndexOutOfRange,
          "window outside the stored eigenpairs");
  return {e.values.segment(offset, count), e.vectors.middleCols(offset, count)};
}

SmallSvd svd_small(const AlignmentMatrix& h) {
  require(h.rows() >= 1 && h.rows() == h.cols(), ErrorKind::InvalidParameter,
          "svd_small needs a non-empty square matrix");
  require(h.allFinite(), ErrorKind::InvalidParameter, "svd_small input has non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) fail(ErrorKind::ConvergenceFailure, "Jacobi SVD did not converge");
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

AlignmentMatrix matrix_sign(const AlignmentMatrix& h) {
  const SmallSvd svd = svd_small(h);
  if (svd.singular.minCoeff() <= 1e-12)
    fail(ErrorKind::RankDeficient, "alignment matrix is rank deficient (eigenspaces nearly orthogonal)");
  return svd.left * svd.right.transpose();
}

double norm_2p(const Eigen::Ref<const Matrix>& a, LpExponent p) {
  if (a.rows() == 0) return 0.0;
  const Vector rows = a.rowwise().norm();
  const double peak = rows.maxCoeff();
  if (p.is_infinite() || peak == 0.0) return peak;
  const long double q = p.value();
  long double acc = 0.0L;
  for (Index i = 0; i < rows.size(); ++i)
    acc += std::pow(static_cast<long double>(rows(i)) / peak, q);
  return static_cast<double>(static_cast<long double>(peak) * std::pow(acc, 1.0L / q));
}

namespace reference {

SymmetricMatrix gram(const DataMatrix& x) {
  const Index n = x.rows(), d = x.cols();
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (Index k = 0; k < d; ++k) acc += x(i, k) * x(j, k);
      g(i, j) = acc;
    }
  }
  return SymmetricMatrix::from_lower(std::move(g));
}

EigenDecomposition eigh_jacobi(const SymmetricMatrix& s, EigenOrdering ordering, double tol,
                               int max_sweeps) {
  check_eigh_args(s, tol);
  auto raw = jacobi_raw(s, max_sweeps);
  return finish(s, raw.values, raw.vectors, ordering, 0, s.dim(), tol);
}

}  // namespace reference

}  // namespace hollowpca
