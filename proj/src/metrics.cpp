#include "hollowpca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hollowpca {

namespace {

// Max-weight perfect matching on a square weight matrix (Hungarian method).
Index hungarian_max(const std::vector<std::vector<Index>>& w) {
  const auto k = static_cast<int>(w.size());
  const Index big = std::numeric_limits<Index>::max() / 4;
  // Minimise cost = -w using the potentials formulation (1-based arrays).
  std::vector<Index> u(static_cast<std::size_t>(k + 1), 0), v(static_cast<std::size_t>(k + 1), 0);
  std::vector<int> p(static_cast<std::size_t>(k + 1), 0), way(static_cast<std::size_t>(k + 1), 0);
  for (int i = 1; i <= k; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<Index> minv(static_cast<std::size_t>(k + 1), big);
    std::vector<char> used(static_cast<std::size_t>(k + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      Index delta = big;
      int j1 = 0;
      for (int j = 1; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const Index cur = -w[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                          u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  Index total = 0;
  for (int j = 1; j <= k; ++j)
    total += w[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)][static_cast<std::size_t>(j - 1)];
  return total;
}

Index max_matched(const std::vector<std::vector<Index>>& confusion) {
  const auto k = confusion.size();
  if (k > 8) return hungarian_max(confusion);
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Index best = 0;
  do {
    Index agree = 0;
    for (std::size_t b = 0; b < k; ++b) agree += confusion[perm[b]][b];
    best = std::max(best, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

Index mismatch_count(const LabelVector& yhat, const LabelVector& y, int k) {
  require(yhat.size() == y.size(), ErrorKind::InvalidParameter, "label vectors differ in length");
  const Index n = y.size();
  if (yhat.mode() == LabelMode::Binary && y.mode() == LabelMode::Binary) {
    Index differ = 0;
    for (Index i = 0; i < n; ++i) differ += yhat[i] != y[i];
    return std::min(differ, n - differ);
  }
  const LabelVector a = yhat.as_multiclass(), b = y.as_multiclass();
  const int classes = std::max({k, a.classes(), b.classes()});
  std::vector<std::vector<Index>> confusion(static_cast<std::size_t>(classes),
                                            std::vector<Index>(static_cast<std::size_t>(classes), 0));
  for (Index i = 0; i < n; ++i)
    ++confusion[static_cast<std::size_t>(a[i] - 1)][static_cast<std::size_t>(b[i] - 1)];
  return n - max_matched(confusion);
}

double misclassification(const LabelVector& yhat, const LabelVector& y, int k) {
  require(y.size() >= 1, ErrorKind::InvalidParameter, "empty label vectors");
  return static_cast<double>(mismatch_count(yhat, y, k)) / static_cast<double>(y.size());
}

double snr_gmm(double mu_norm, Index d, Index n) {
  require(mu_norm >= 0.0 && n >= 1 && d >= 0, ErrorKind::InvalidParameter, "snr_gmm needs mu >= 0, n >= 1");
  const double m2 = mu_norm * mu_norm;
  if (d == 0) return m2;
  return m2 * m2 / (m2 + static_cast<double>(d) / static_cast<double>(n));
}

NoiseScale noise_scale(const SymmetricMatrix& sigma) {
  const auto e = eigh_window(sigma, EigenOrdering::DescendingByAbsValue, 0, 1);
  return {std::abs(e.values(0)), sigma.frobenius_norm()};
}

NoiseScale isotropic_noise_scale(double variance, Index d) {
  return {variance, variance * std::sqrt(static_cast<double>(d))};
}

double effective_rank(const NoiseScale& scale) {
  require(scale.op > 0.0, ErrorKind::InvalidParameter, "effective rank of a zero covariance");
  return scale.hs * scale.hs / (scale.op * scale.op);
}

double min_center_separation(const RowMatrix& centers) {
  require(centers.rows() >= 2, ErrorKind::InvalidParameter, "need at least two centers");
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < centers.rows(); ++i)
    for (Index j = i + 1; j < centers.rows(); ++j) best = std::min(best, (centers.row(i) - centers.row(j)).norm());
  return best;
}

double snr_mixture(const RowMatrix& centers, const NoiseScale& sigma, Index n) {
  require(sigma.op > 0.0 && sigma.hs > 0.0, ErrorKind::InvalidParameter, "noise covariance must be nonzero");
  const double s = min_center_separation(centers);
  const double s2 = s * s;
  return std::min(s2 / sigma.op, static_cast<double>(n) * s2 * s2 / (sigma.hs * sigma.hs));
}

double snr_mixture(const RowMatrix& centers, const SymmetricMatrix& sigma, Index n) {
  require(sigma.dim() == centers.cols(), ErrorKind::InvalidParameter, "covariance dimension mismatch");
  require(!sigma.values().isZero(0.0), ErrorKind::InvalidParameter, "noise covariance must be nonzero");
  return snr_mixture(centers, noise_scale(sigma), n);
}

double istar(double a, double b, double c) {
  const double gap = std::sqrt(a) - std::sqrt(b);
  return (gap * gap + c) / 2.0;
}

double rate_function(double t, double a, double b, double c) {
  return a / 2.0 * (1.0 - std::pow(a / b, t)) + b / 2.0 * (1.0 - std::pow(b / a, t)) - 2.0 * c * (t + t * t);
}

Diagnostics diagnostics(const DataMatrix& signal, Index s, Index r, const NoiseScale& sigma) {
  const Index n = signal.rows();
  require(r >= 1 && s >= 0 && s + r <= n, ErrorKind::IndexOutOfRange, "diagnostics window outside [0, n]");
  const auto e = eigh(gram(signal), EigenOrdering::DescendingByValue);
  const Vector& lam = e.values;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double before = s == 0 ? inf : lam(s - 1);
  const double after = s + r == n ? -inf : lam(s + r);
  const double gap = std::min(before - lam(s), lam(s + r - 1) - after);
  if (!(gap > 1e-12)) fail(ErrorKind::ZeroEigengap, "signal eigengap is zero for this window");

  Diagnostics out;
  out.s = s;
  out.r = r;
  out.eigengap = gap;
  out.kappa = lam(0) / gap;
  const double spectral = std::sqrt(std::max(lam(0), 0.0));
  const double row_max = signal.values().rowwise().norm().maxCoeff();
  const double nr = static_cast<double>(n) / static_cast<double>(r);
  out.incoherence = spectral > 0.0 ? std::max(row_max / spectral * std::sqrt(nr), 1.0) : 1.0;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  out.gamma = std::max({out.kappa * out.incoherence / std::sqrt(nr), sqrt_n * std::sqrt(out.kappa * sigma.op / gap),
                        sqrt_n * sigma.hs / gap});
  out.gamma_kappa_mu = out.gamma * out.kappa * out.incoherence;
  return out;
}

Diagnostics diagnostics(const DataMatrix& signal, Index s, Index r, const SymmetricMatrix& sigma) {
  require(sigma.dim() == signal.cols(), ErrorKind::InvalidParameter, "covariance dimension mismatch");
  return diagnostics(signal, s, r, sigma.values().isZero(0.0) ? NoiseScale{} : noise_scale(sigma));
}

std::string_view to_string(ResidualKind kind) noexcept {
  switch (kind) {
    case ResidualKind::VectorsVsGramLinear: return "vectors_vs_gram";
    case ResidualKind::VectorsVsLinearization: return "vectors_vs_linearization";
    case ResidualKind::ScoresVsGramLinear: return "scores_vs_gram";
    case ResidualKind::ScoresVsLinearization: return "scores_vs_linearization";
  }
  return "unknown";
}

std::vector<ResidualReport> residual_reports(const LpResiduals& res, LpExponent p) {
  static constexpr ResidualKind kinds[] = {ResidualKind::VectorsVsGramLinear, ResidualKind::VectorsVsLinearization,
                                           ResidualKind::ScoresVsGramLinear, ResidualKind::ScoresVsLinearization};
  const double base = norm_2p(res.signal_vectors, p);
  const double score_scale = base * std::sqrt(res.signal_values.maxCoeff());
  std::vector<ResidualReport> out;
  for (std::size_t k = 0; k < res.residuals.size(); ++k) {
    ResidualReport rep;
    rep.p = p;
    rep.which = kinds[k];
    rep.lhs = norm_2p(res.residuals[k], p);
    rep.rhs_scale = k < 2 ? base : score_scale;
    rep.ratio = rep.lhs / rep.rhs_scale;
    out.push_back(rep);
  }
  return out;
}

LpResiduals lp_residuals(const DataMatrix& x, const DataMatrix& signal, Index s, Index r, LpExponent p,
                         const LpResidualOptions& opts) {
  require(x.rows() == signal.rows() && x.cols() == signal.cols(), ErrorKind::InvalidParameter,
          "data and signal matrices differ in shape");
  require(p.is_infinite() || p.value() >= 2.0, ErrorKind::InvalidParameter, "lp_residuals needs p >= 2");
  const Index n = x.rows();
  require(r >= 1 && s >= 0 && s + r <= n, ErrorKind::IndexOutOfRange, "residual window outside [0, n]");

  const SymmetricMatrix g = opts.hollow ? hollow(gram(x)) : gram(x);
  const auto e = eigh_window(g, EigenOrdering::DescendingByValue, s, r, opts.tol);
  const auto ebar = eigh_window(gram(signal), EigenOrdering::DescendingByValue, s, r, opts.tol);
  if (ebar.values.minCoeff() <= 0.0)
    fail(ErrorKind::NonpositiveEigenvalue, "signal eigenvalues in the window must be positive");

  LpResiduals out;
  out.values = e.values;
  out.signal_values = ebar.values;
  out.signal_vectors = ebar.vectors;
  const Matrix& u = e.vectors;
  const Matrix& ubar = ebar.vectors;
  out.alignment = matrix_sign(u.transpose() * ubar);

  // H(Z X^T) Ubar = Z (X^T Ubar) - diag(<z_i, x_i>) Ubar
  const RowMatrix z = x.values() - signal.values();
  Matrix zx_ubar = z * (x.values().transpose() * ubar);
  if (opts.hollow) {
    const Vector self = z.cwiseProduct(x.values()).rowwise().sum();
    zx_ubar -= self.asDiagonal() * ubar;
  }
  const Matrix g_ubar = g.values() * ubar;
  const Vector inv = ebar.values.cwiseInverse();
  const Vector inv_sqrt = ebar.values.cwiseSqrt().cwiseInverse();
  const Vector sqrt_bar = ebar.values.cwiseSqrt();

  const Matrix aligned = u * out.alignment;
  out.residuals.push_back(aligned - g_ubar * inv.asDiagonal());
  out.residuals.push_back(aligned - (ubar + zx_ubar * inv.asDiagonal()));
  if (opts.include_scores) {
    if (e.values.minCoeff() <= 0.0)
      fail(ErrorKind::NonpositiveEigenvalue, "PC-score residuals need positive leading eigenvalues");
    const Matrix scores = u * e.values.cwiseSqrt().asDiagonal() * out.alignment;
    out.residuals.push_back(scores - g_ubar * inv_sqrt.asDiagonal());
    out.residuals.push_back(scores - (ubar * sqrt_bar.asDiagonal() + zx_ubar * inv_sqrt.asDiagonal()));
  }
  out.reports = residual_reports(out, p);
  return out;
}

Index markov_outlier_count(const Eigen::Ref<const Vector>& r, double p, double t) {
  require(p >= 1.0 && t > 0.0, ErrorKind::InvalidParameter, "markov count needs p >= 1 and t > 0");
  return (r.array().abs() > t).count();
}

double markov_bound(const Eigen::Ref<const Vector>& r, double p, double t) {
  require(p >= 1.0 && t > 0.0, ErrorKind::InvalidParameter, "markov bound needs p >= 1 and t > 0");
  return std::pow(norm_2p(r, LpExponent(p)) / t, p);
}

}  // namespace hollowpca
