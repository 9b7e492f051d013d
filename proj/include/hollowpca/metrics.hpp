#pragma once

#include <string_view>
#include <vector>

#include "hollowpca/linalg.hpp"
#include "hollowpca/models.hpp"

namespace hollowpca {

/// Fraction of mislabelled points after the best relabeling: the two global
/// sign flips when both inputs are binary, otherwise the best permutation of
/// 1..K (exhaustive for K <= 8, Hungarian assignment above). Always in [0, 1].
double misclassification(const LabelVector& yhat, const LabelVector& y, int k = 2);

/// Number of mislabelled points under the same matching (n times the rate).
Index mismatch_count(const LabelVector& yhat, const LabelVector& y, int k = 2);

/// ||mu||^4 / (||mu||^2 + d/n). Returns ||mu||^2 when d == 0.
double snr_gmm(double mu_norm, Index d, Index n);

/// Spectral and Hilbert-Schmidt norms of a noise covariance.
struct NoiseScale {
  double op = 0.0;
  double hs = 0.0;
};
NoiseScale noise_scale(const SymmetricMatrix& sigma);
NoiseScale isotropic_noise_scale(double variance, Index d);

/// ||Sigma||_HS^2 / ||Sigma||_op^2
double effective_rank(const NoiseScale& scale);

/// min{ sbar^2 / ||Sigma||_op, n sbar^4 / ||Sigma||_HS^2 }, sbar the minimum
/// pairwise distance between the rows of `centers`.
double snr_mixture(const RowMatrix& centers, const SymmetricMatrix& sigma, Index n);
double snr_mixture(const RowMatrix& centers, const NoiseScale& sigma, Index n);
double min_center_separation(const RowMatrix& centers);

/// ((sqrt(a) - sqrt(b))^2 + c) / 2
double istar(double a, double b, double c);

/// (a/2)(1 - (a/b)^t) + (b/2)(1 - (b/a)^t) - 2c(t + t^2); concave in t with
/// maximum istar(a, b, c) at t = -1/2.
double rate_function(double t, double a, double b, double c);

struct Diagnostics {
  double eigengap = 0.0;
  double kappa = 0.0;
  double incoherence = 0.0;
  double gamma = 0.0;
  /// gamma * kappa * mu; small values indicate the incoherence regime.
  double gamma_kappa_mu = 0.0;
  Index r = 0;
  Index s = 0;
};

/// Regularity quantities of the signal Gram matrix for eigen window (s, r).
/// Throws ZeroEigengap when the window is not separated.
Diagnostics diagnostics(const DataMatrix& signal, Index s, Index r, const NoiseScale& sigma);
Diagnostics diagnostics(const DataMatrix& signal, Index s, Index r, const SymmetricMatrix& sigma);

enum class ResidualKind {
  VectorsVsGramLinear,     // U sgn(H) - G Ubar Lbar^-1
  VectorsVsLinearization,  // U sgn(H) - [Ubar + H(ZX^T) Ubar Lbar^-1]
  ScoresVsGramLinear,      // U L^1/2 sgn(H) - G Ubar Lbar^-1/2
  ScoresVsLinearization,   // U L^1/2 sgn(H) - [Ubar Lbar^1/2 + H(ZX^T) Ubar Lbar^-1/2]
};

std::string_view to_string(ResidualKind kind) noexcept;

struct ResidualReport {
  LpExponent p = LpExponent::infinity();
  double lhs = 0.0;
  double rhs_scale = 0.0;
  double ratio = 0.0;
  ResidualKind which = ResidualKind::VectorsVsGramLinear;
};

struct LpResidualOptions {
  /// Use H(XX^T); false switches to the raw Gram matrix (and ZX^T unhollowed).
  bool hollow = true;
  /// Also form the PC-score residuals (needs positive leading eigenvalues of G).
  bool include_scores = true;
  double tol = kDefaultEigenTol;
};

struct LpResiduals {
  std::vector<ResidualReport> reports;
  /// sgn(H) for H = U^T Ubar.
  AlignmentMatrix alignment;
  /// Residual matrices, one per report, n x r.
  std::vector<Matrix> residuals;
  Matrix signal_vectors;  // Ubar
  Vector signal_values;   // diag of Lbar
  Vector values;          // diag of Lambda
};

LpResiduals lp_residuals(const DataMatrix& x, const DataMatrix& signal, Index s, Index r, LpExponent p,
                         const LpResidualOptions& opts = {});

/// Re-evaluates stored residual matrices at another exponent.
std::vector<ResidualReport> residual_reports(const LpResiduals& res, LpExponent p);

/// |{i : |r_i| > t}|; never exceeds markov_bound(r, p, t).
Index markov_outlier_count(const Eigen::Ref<const Vector>& r, double p, double t);
/// (||r||_p / t)^p
double markov_bound(const Eigen::Ref<const Vector>& r, double p, double t);

}  // namespace hollowpca
