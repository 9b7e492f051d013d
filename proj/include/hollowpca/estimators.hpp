#pragma once

#include <variant>

#include "hollowpca/kernels.hpp"
#include "hollowpca/linalg.hpp"
#include "hollowpca/models.hpp"
#include "hollowpca/rng.hpp"

namespace hollowpca {

/// Rows of U Lambda^{1/2} for the top-r eigenpairs (descending by value).
struct SpectralEmbedding {
  Matrix scores;
  EigenDecomposition eigen;
  bool hollowed = true;
};

struct EmbeddingOptions {
  double tol = kDefaultEigenTol;
  /// When true the input must already have a zero diagonal.
  bool require_hollow = true;
};

/// Throws NonpositiveEigenvalue if any of the r leading eigenvalues is <= 0.
SpectralEmbedding hollowed_embedding(const SymmetricMatrix& s, Index r, const EmbeddingOptions& opts = {});

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 100;
};

struct KMeansResult {
  Matrix centers;  // K x r
  LabelVector labels;
  double cost = 0.0;
  int restarts_used = 0;
  /// Empty clusters reseeded during the winning run.
  int empty_repairs = 0;
  /// Lloyd objective after each step of the winning run.
  std::vector<double> cost_trace;
};

/// Best of `restarts` runs of k-means++ seeding followed by Lloyd iterations.
/// Ties in cost go to the lowest restart index.
KMeansResult kmeans_approx(const Eigen::Ref<const Matrix>& points, Index k, const KMeansOptions& opts,
                           const Seed& seed);

struct SpectralClusterOptions {
  KMeansOptions kmeans;
  double tol = kDefaultEigenTol;
  /// Used when clustering raw data through a kernel.
  KernelSpec kernel = LinearKernel{};
  /// Zero the kernel diagonal before embedding. Off only for comparisons.
  bool hollow = true;
};

/// Builds hollow(kernel_gram(x)) and clusters its PC scores into k groups.
KMeansResult spectral_cluster(const DataMatrix& x, Index k, Index r, const SpectralClusterOptions& opts,
                              const Seed& seed);
/// Same pipeline on a prebuilt similarity matrix (hollowed unless opts.hollow is false).
KMeansResult spectral_cluster(const SymmetricMatrix& s, Index k, Index r, const SpectralClusterOptions& opts,
                              const Seed& seed);

/// sgn of the leading (by value) eigenvector, sgn(0) = +1.
LabelVector sign_estimator(const SymmetricMatrix& s, double tol = kDefaultEigenTol,
                           EigenSolver solver = EigenSolver::Dense);

/// sgn(<x_i, mean_{j != i} y_j x_j>).
int oracle_lda(const DataMatrix& x, const LabelVector& y, Index i);
/// oracle_lda for every i in O(nd).
LabelVector oracle_lda_all(const DataMatrix& x, const LabelVector& y);

/// G with row and column m set to zero.
SymmetricMatrix leave_one_out_gram(const SymmetricMatrix& g, Index m);

enum class CsbmVariant { Aggregated, Modified };

struct CsbmEstimate {
  Vector u_hat;
  LabelVector labels;
  double weight_graph = 0.0;
  double weight_attributes = 0.0;
  CsbmVariant variant = CsbmVariant::Aggregated;
  /// Leading eigenvalue of the hollowed Gram matrix.
  double lambda1_gram = 0.0;
  /// lambda_1(A), lambda_2(A) by magnitude (aggregated variant only).
  double lambda1_graph = 0.0;
  double lambda2_graph = 0.0;
};

/// Combines u_2(A) and u_1(G) with plug-in log-odds weights.
CsbmEstimate csbm_aggregated(const SymmetricMatrix& a, const DataMatrix& x, double tol = kDefaultEigenTol);
/// Replaces the u_2(A) term with A yhat_G weighted from edge counts.
CsbmEstimate csbm_modified(const SymmetricMatrix& a, const DataMatrix& x, double tol = kDefaultEigenTol);

/// Same estimators with G = hollow(gram(x)) supplied by the caller.
CsbmEstimate csbm_aggregated(const SymmetricMatrix& a, const SymmetricMatrix& g, Index d,
                             double tol = kDefaultEigenTol);
CsbmEstimate csbm_modified(const SymmetricMatrix& a, const SymmetricMatrix& g, Index d,
                           double tol = kDefaultEigenTol);

}  // namespace hollowpca
