#include "hollowpca/estimators.hpp"

#include <cmath>
#include <limits>

namespace hollowpca {

SpectralEmbedding hollowed_embedding(const SymmetricMatrix& s, Index r, const EmbeddingOptions& opts) {
  require(r >= 1 && r <= s.dim(), ErrorKind::InvalidParameter, "embedding rank must lie in [1, n]");
  if (opts.require_hollow)
    require(s.values().diagonal().isZero(0.0), ErrorKind::InvalidParameter,
            "embedding input must be hollowed (zero diagonal)");
  SpectralEmbedding emb;
  emb.hollowed = opts.require_hollow;
  emb.eigen = eigh_window(s, EigenOrdering::DescendingByValue, 0, r, opts.tol);
  if (emb.eigen.values.minCoeff() <= 0.0)
    fail(ErrorKind::NonpositiveEigenvalue, "a leading eigenvalue is <= 0; PC scores are undefined");
  emb.scores = emb.eigen.vectors * emb.eigen.values.cwiseSqrt().asDiagonal();
  return emb;
}

namespace {

struct LloydRun {
  Matrix centers;
  std::vector<int> labels;
  double cost = std::numeric_limits<double>::infinity();
  int repairs = 0;
  std::vector<double> trace;
};

// Nearest center per point (lowest index on ties); returns the objective.
double assign(const Eigen::Ref<const Matrix>& pts, const Matrix& centers, std::vector<int>& labels,
              Vector& dist) {
  const Index n = pts.rows(), k = centers.rows();
  double cost = 0.0;
  for (Index i = 0; i < n; ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < k; ++j) {
      const double dd = (pts.row(i) - centers.row(j)).squaredNorm();
      if (dd < best_d) {
        best_d = dd;
        best = static_cast<int>(j);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    dist(i) = best_d;
    cost += best_d;
  }
  return cost;
}

Matrix seed_plus_plus(const Eigen::Ref<const Matrix>& pts, Index k, Philox4x32& gen) {
  const Index n = pts.rows();
  Matrix centers(k, pts.cols());
  centers.row(0) = pts.row(static_cast<Index>(gen.below(static_cast<std::uint64_t>(n))));
  Vector d2(n);
  for (Index i = 0; i < n; ++i) d2(i) = (pts.row(i) - centers.row(0)).squaredNorm();
  for (Index c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index pick = 0;
    if (total > 0.0) {
      const double target = gen.uniform() * total;
      pick = -1;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc > target) {
          pick = i;
          break;
        }
      }
      if (pick < 0)  // rounding left target >= acc; take the last admissible point
        for (Index i = n - 1; i >= 0 && pick < 0; --i)
          if (d2(i) > 0.0) pick = i;
    } else {
      pick = static_cast<Index>(gen.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = pts.row(pick);
    for (Index i = 0; i < n; ++i) d2(i) = std::min(d2(i), (pts.row(i) - centers.row(c)).squaredNorm());
  }
  return centers;
}

LloydRun lloyd(const Eigen::Ref<const Matrix>& pts, Index k, int max_iter, Philox4x32& gen) {
  const Index n = pts.rows(), dim = pts.cols();
  LloydRun run;
  run.centers = seed_plus_plus(pts, k, gen);
  run.labels.assign(static_cast<std::size_t>(n), 0);
  Vector dist(n);
  run.cost = assign(pts, run.centers, run.labels, dist);
  run.trace.push_back(run.cost);

  std::vector<int> next(run.labels.size());
  for (int it = 0; it < max_iter; ++it) {
    Matrix sums = Matrix::Zero(k, dim);
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      const int l = run.labels[static_cast<std::size_t>(i)];
      sums.row(l) += pts.row(i);
      ++counts[static_cast<std::size_t>(l)];
    }
    for (Index j = 0; j < k; ++j) {
      const auto cnt = counts[static_cast<std::size_t>(j)];
      if (cnt > 0) run.centers.row(j) = sums.row(j) / static_cast<double>(cnt);
    }
    // Reseed empty clusters at the point farthest from its current center.
    for (Index j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) continue;
      for (Index i = 0; i < n; ++i)
        dist(i) = (pts.row(i) - run.centers.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
      Index far = 0;
      dist.maxCoeff(&far);
      run.centers.row(j) = pts.row(far);
      run.labels[static_cast<std::size_t>(far)] = static_cast<int>(j);
      counts[static_cast<std::size_t>(j)] = 1;
      ++run.repairs;
    }
    run.cost = assign(pts, run.centers, next, dist);
    run.trace.push_back(run.cost);
    const bool stable = next == run.labels;
    run.labels.swap(next);
    if (stable) break;
  }
  return run;
}

}  // namespace

KMeansResult kmeans_approx(const Eigen::Ref<const Matrix>& points, Index k, const KMeansOptions& opts,
                           const Seed& seed) {
  const Index n = points.rows();
  require(n >= 1 && points.cols() >= 1, ErrorKind::InvalidParameter, "k-means needs a non-empty point set");
  require(k >= 1 && k <= n, ErrorKind::InvalidParameter, "k-means needs 1 <= K <= n");
  require(opts.restarts >= 1 && opts.max_iter >= 1, ErrorKind::InvalidParameter,
          "k-means needs restarts >= 1 and max_iter >= 1");
  require(points.allFinite(), ErrorKind::InvalidParameter, "k-means points must be finite");

  LloydRun best;
  for (int t = 0; t < opts.restarts; ++t) {
    Philox4x32 gen(seed.child(static_cast<std::uint64_t>(t)));
    LloydRun run = lloyd(points, k, opts.max_iter, gen);
    if (run.cost < best.cost) best = std::move(run);
  }
  std::vector<int> labels = best.labels;
  for (int& l : labels) ++l;
  KMeansResult out;
  out.centers = std::move(best.centers);
  out.labels = LabelVector::multiclass(std::move(labels), static_cast<int>(k));
  out.cost = best.cost;
  out.restarts_used = opts.restarts;
  out.empty_repairs = best.repairs;
  out.cost_trace = std::move(best.trace);
  return out;
}

KMeansResult spectral_cluster(const SymmetricMatrix& s, Index k, Index r, const SpectralClusterOptions& opts,
                              const Seed& seed) {
  require(k >= 1 && k <= s.dim(), ErrorKind::InvalidParameter, "need 1 <= K <= n");
  require(r >= 1 && r <= k, ErrorKind::InvalidParameter, "embedding dimension must satisfy 1 <= r <= K");
  if (k == 1) {
    KMeansResult trivial;
    trivial.centers = Matrix::Zero(1, 0);
    trivial.labels = LabelVector::multiclass(std::vector<int>(static_cast<std::size_t>(s.dim()), 1), 1);
    return trivial;
  }
  const SymmetricMatrix input = opts.hollow ? hollow(s) : s;
  const SpectralEmbedding emb = hollowed_embedding(input, r, {opts.tol, opts.hollow});
  return kmeans_approx(emb.scores, k, opts.kmeans, seed);
}

KMeansResult spectral_cluster(const DataMatrix& x, Index k, Index r, const SpectralClusterOptions& opts,
                              const Seed& seed) {
  return spectral_cluster(kernel_gram(x, opts.kernel), k, r, opts, seed);
}

LabelVector sign_estimator(const SymmetricMatrix& s, double tol, EigenSolver solver) {
  const auto top = eigh_window(s, EigenOrdering::DescendingByValue, 0, 1, tol, solver);
  return sign_labels(top.vectors.col(0));
}

int oracle_lda(const DataMatrix& x, const LabelVector& y, Index i) {
  const Index n = x.rows();
  require(n >= 2, ErrorKind::InvalidParameter, "oracle LDA needs n >= 2");
  require(y.mode() == LabelMode::Binary && y.size() == n, ErrorKind::InvalidParameter,
          "oracle LDA needs binary labels of length n");
  require(i >= 0 && i < n, ErrorKind::IndexOutOfRange, "oracle LDA index outside the sample");
  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
  for (Index j = 0; j < n; ++j)
    if (j != i) mean += y[j] * x.row(j);
  mean /= static_cast<double>(n - 1);
  return sign_of(x.row(i).dot(mean));
}

LabelVector oracle_lda_all(const DataMatrix& x, const LabelVector& y) {
  const Index n = x.rows();
  require(n >= 2, ErrorKind::InvalidParameter, "oracle LDA needs n >= 2");
  require(y.mode() == LabelMode::Binary && y.size() == n, ErrorKind::InvalidParameter,
          "oracle LDA needs binary labels of length n");
  const Vector signs = y.as_signs();
  const Eigen::RowVectorXd total = signs.transpose() * x.values();
  // <x_i, total - y_i x_i>; the 1/(n-1) factor does not change the sign.
  const Vector score = x.values() * total.transpose() - signs.cwiseProduct(x.values().rowwise().squaredNorm());
  return sign_labels(score);
}

SymmetricMatrix leave_one_out_gram(const SymmetricMatrix& g, Index m) {
  require(m >= 0 && m < g.dim(), ErrorKind::IndexOutOfRange, "leave-one-out index outside [0, n)");
  Matrix out = g.values();
  out.row(m).setZero();
  out.col(m).setZero();
  return SymmetricMatrix::from_lower(std::move(out));
}

namespace {

struct GramTop {
  double lambda;
  Vector u;
};

GramTop leading_gram_pair(const SymmetricMatrix& g, double tol) {
  const auto e = eigh_window(g, EigenOrdering::DescendingByValue, 0, 1, tol);
  return {e.values(0), e.vectors.col(0)};
}

double attribute_weight(double lambda, Index n, Index d) {
  const double nn = static_cast<double>(n);
  const double denom = nn * lambda + nn * static_cast<double>(d);
  if (!(denom > 1e-12)) fail(ErrorKind::DegenerateSpectrum, "attribute weight denominator is not positive");
  return 2.0 * lambda * lambda / denom;
}

void check_pair(const SymmetricMatrix& a, const SymmetricMatrix& g, Index d) {
  require(a.dim() == g.dim(), ErrorKind::InvalidParameter, "graph and Gram matrix sizes differ");
  require(a.dim() >= 2, ErrorKind::InvalidParameter, "CSBM estimators need n >= 2");
  require(d >= 1, ErrorKind::InvalidParameter, "attribute dimension must be >= 1");
}

}  // namespace

CsbmEstimate csbm_aggregated(const SymmetricMatrix& a, const SymmetricMatrix& g, Index d, double tol) {
  check_pair(a, g, d);
  const Index n = a.dim();
  const auto ea = eigh_window(a, EigenOrdering::DescendingByAbsValue, 0, 2, tol);
  const double l1 = ea.values(0), l2 = ea.values(1);
  if (!(l1 - l2 > 1e-12) || !(l1 + l2 > 0.0))
    fail(ErrorKind::DegenerateSpectrum, "lambda_1(A) +- lambda_2(A) leave the log-odds weight undefined");
  Vector u2 = ea.vectors.col(1);

  const GramTop top = leading_gram_pair(g, tol);
  if (u2.dot(top.u) < 0.0) u2 = -u2;

  CsbmEstimate est;
  est.variant = CsbmVariant::Aggregated;
  est.lambda1_graph = l1;
  est.lambda2_graph = l2;
  est.lambda1_gram = top.lambda;
  est.weight_graph = std::log((l1 + l2) / (l1 - l2)) * l2;
  est.weight_attributes = attribute_weight(top.lambda, n, d);
  est.u_hat = est.weight_graph * u2 + est.weight_attributes * top.u;
  est.labels = sign_labels(est.u_hat);
  return est;
}

CsbmEstimate csbm_modified(const SymmetricMatrix& a, const SymmetricMatrix& g, Index d, double tol) {
  check_pair(a, g, d);
  const Index n = a.dim();
  const GramTop top = leading_gram_pair(g, tol);
  const Vector y_g = sign_labels(top.u).as_signs();

  const double total = a.values().sum();
  const Vector ay = a.values() * y_g;
  const double aligned = y_g.dot(ay);
  const double denom = total - aligned;
  if (!(denom > 1e-12) || !((total + aligned) / denom > 0.0))
    fail(ErrorKind::DegenerateSpectrum, "edge-count log-odds ratio is undefined");

  CsbmEstimate est;
  est.variant = CsbmVariant::Modified;
  est.lambda1_gram = top.lambda;
  est.weight_graph = std::log((total + aligned) / denom) / std::sqrt(static_cast<double>(n));
  est.weight_attributes = attribute_weight(top.lambda, n, d);
  est.u_hat = est.weight_graph * ay + est.weight_attributes * top.u;
  est.labels = sign_labels(est.u_hat);
  return est;
}

CsbmEstimate csbm_aggregated(const SymmetricMatrix& a, const DataMatrix& x, double tol) {
  return csbm_aggregated(a, hollow(gram(x)), x.cols(), tol);
}

CsbmEstimate csbm_modified(const SymmetricMatrix& a, const DataMatrix& x, double tol) {
  return csbm_modified(a, hollow(gram(x)), x.cols(), tol);
}

}  // namespace hollowpca
