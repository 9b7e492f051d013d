#include "hollowpca/models.hpp"

#include <cmath>

namespace hollowpca {

LabelVector LabelVector::binary(std::vector<int> values) {
  for (int v : values)
    require(v == 1 || v == -1, ErrorKind::InvalidParameter, "binary labels must be +1 or -1");
  return LabelVector(std::move(values), LabelMode::Binary, 2);
}

LabelVector LabelVector::multiclass(std::vector<int> values, int classes) {
  require(classes >= 1, ErrorKind::InvalidParameter, "need at least one class");
  for (int v : values)
    require(v >= 1 && v <= classes, ErrorKind::InvalidParameter, "multiclass label outside 1..K");
  return LabelVector(std::move(values), LabelMode::Multiclass, classes);
}

Vector LabelVector::as_signs() const {
  require(mode_ == LabelMode::Binary, ErrorKind::InvalidParameter, "as_signs needs binary labels");
  Vector out(size());
  for (Index i = 0; i < size(); ++i) out(i) = (*this)[i];
  return out;
}

LabelVector LabelVector::flipped() const {
  require(mode_ == LabelMode::Binary, ErrorKind::InvalidParameter, "flipped needs binary labels");
  auto out = values_;
  for (int& v : out) v = -v;
  return LabelVector(std::move(out), LabelMode::Binary, 2);
}

LabelVector LabelVector::as_multiclass() const {
  if (mode_ == LabelMode::Multiclass) return *this;
  auto out = values_;
  for (int& v : out) v = v == 1 ? 1 : 2;
  return LabelVector(std::move(out), LabelMode::Multiclass, 2);
}

LabelVector sign_labels(const Eigen::Ref<const Vector>& v) {
  std::vector<int> out(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = sign_of(v(i));
  return LabelVector::binary(std::move(out));
}

GmmParams GmmParams::symmetric_binary(const Vector& mu, NoiseCov noise) {
  GmmParams p;
  p.centers.resize(2, mu.size());
  p.centers.row(0) = mu.transpose();
  p.centers.row(1) = -mu.transpose();
  p.noise = std::move(noise);
  p.mode = LabelMode::Binary;
  return p;
}

namespace {

// Draws z ~ N(0, Sigma) into `out` from `gen`.
class NoiseSampler {
 public:
  NoiseSampler(const NoiseCov& cov, Index d) : d_(d) {
    if (const auto* iso = std::get_if<IsotropicNoise>(&cov)) {
      require(std::isfinite(iso->variance) && iso->variance >= 0.0, ErrorKind::InvalidParameter,
              "isotropic noise variance must be >= 0");
      scale_ = Vector::Constant(d, std::sqrt(iso->variance));
    } else if (const auto* diag = std::get_if<DiagonalNoise>(&cov)) {
      require(diag->variances.size() == d, ErrorKind::InvalidParameter, "diagonal noise has wrong dimension");
      require(diag->variances.allFinite() && diag->variances.minCoeff() >= 0.0, ErrorKind::InvalidParameter,
              "diagonal noise variances must be >= 0");
      scale_ = diag->variances.cwiseSqrt();
    } else {
      const auto& sigma = std::get<DenseNoise>(cov).covariance;
      require(sigma.dim() == d, ErrorKind::InvalidParameter, "dense noise covariance has wrong dimension");
      // Pivoted LDL^T accepts singular PSD matrices; a negative pivot means not PSD.
      Eigen::LDLT<Matrix> ldlt(sigma.values());
      const Vector pivots = ldlt.vectorD();
      const double tol = 1e-12 * std::max(1.0, sigma.values().cwiseAbs().maxCoeff());
      require(ldlt.info() == Eigen::Success && pivots.minCoeff() >= -tol, ErrorKind::InvalidParameter,
              "noise covariance is not positive semidefinite");
      Matrix l = ldlt.matrixL();
      l = l * pivots.cwiseMax(0.0).cwiseSqrt().asDiagonal();
      factor_ = ldlt.transpositionsP().transpose() * l;
      dense_ = true;
    }
  }

  template <class Row>
  void draw(Philox4x32& gen, Row&& out) const {
    Vector g(d_);
    for (Index k = 0; k < d_; ++k) g(k) = gen.normal();
    if (dense_)
      out += (factor_ * g).transpose();
    else
      out += g.cwiseProduct(scale_).transpose();
  }

 private:
  Index d_;
  Vector scale_;
  Matrix factor_;
  bool dense_ = false;
};

LabelVector draw_labels(const LabelSource& source, LabelMode mode, Index classes, Index n, const Seed& seed) {
  if (const auto* fixed = std::get_if<LabelVector>(&source)) {
    require(fixed->size() == n, ErrorKind::InvalidParameter, "fixed labels have the wrong length");
    require(fixed->mode() == mode, ErrorKind::InvalidParameter, "fixed labels have the wrong mode");
    if (mode == LabelMode::Multiclass)
      require(fixed->classes() <= classes, ErrorKind::InvalidParameter, "label exceeds the number of centers");
    return *fixed;
  }
  Philox4x32 gen(seed);
  std::vector<int> out(static_cast<std::size_t>(n));
  for (auto& v : out) {
    const auto k = static_cast<int>(gen.below(static_cast<std::uint64_t>(classes)));
    v = mode == LabelMode::Binary ? (k == 0 ? 1 : -1) : k + 1;
  }
  return mode == LabelMode::Binary ? LabelVector::binary(std::move(out))
                                   : LabelVector::multiclass(std::move(out), static_cast<int>(classes));
}

DataMatrix add_gmm_noise(const GmmParams& params, const RowMatrix& signal, const Seed& seed) {
  const Index n = signal.rows(), d = signal.cols();
  const NoiseSampler base(params.noise, d);
  std::map<Index, NoiseSampler> overrides;
  for (const auto& [row, cov] : params.noise_overrides) {
    require(row >= 0 && row < n, ErrorKind::IndexOutOfRange, "noise override row outside the sample");
    overrides.emplace(row, NoiseSampler(cov, d));
  }
  RowMatrix x = signal;
  Philox4x32 gen(seed);
  for (Index i = 0; i < n; ++i) {
    const auto it = overrides.find(i);
    (it == overrides.end() ? base : it->second).draw(gen, x.row(i));
  }
  return DataMatrix(std::move(x));
}

}  // namespace

GmmSample sample_gmm(const GmmParams& params, Index n, const Seed& seed) {
  require(n >= 1, ErrorKind::InvalidParameter, "sample size must be >= 1");
  require(params.classes() >= 1 && params.dim() >= 1, ErrorKind::InvalidParameter, "GMM needs centers");
  require(params.centers.allFinite(), ErrorKind::InvalidParameter, "GMM centers must be finite");
  if (params.mode == LabelMode::Binary)
    require(params.classes() == 2, ErrorKind::InvalidParameter, "binary GMM needs exactly two centers");

  LabelVector labels = draw_labels(params.labels, params.mode, params.classes(), n, seed.child(0));
  RowMatrix signal(n, params.dim());
  for (Index i = 0; i < n; ++i) {
    const int y = labels[i];
    const Index k = params.mode == LabelMode::Binary ? (y == 1 ? 0 : 1) : y - 1;
    signal.row(i) = params.centers.row(k);
  }
  DataMatrix x = add_gmm_noise(params, signal, seed.child(1));
  return {std::move(x), DataMatrix(std::move(signal)), std::move(labels)};
}

SymmetricMatrix sample_sbm(const SbmParams& params, const Seed& seed) {
  require(params.n >= 1, ErrorKind::InvalidParameter, "SBM needs n >= 1");
  require(params.labels.size() == params.n, ErrorKind::InvalidParameter, "SBM labels have the wrong length");
  require(params.alpha >= 0.0 && params.alpha <= 1.0 && params.beta >= 0.0 && params.beta <= 1.0,
          ErrorKind::InvalidParameter, "SBM edge probabilities must lie in [0, 1]");
  const Index n = params.n;
  Matrix a = Matrix::Zero(n, n);
  Philox4x32 gen(seed);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double p = params.labels[i] == params.labels[j] ? params.alpha : params.beta;
      if (gen.uniform() < p) a(i, j) = 1.0;
    }
  }
  return SymmetricMatrix::from_lower(std::move(a));
}

double CsbmParams::radius() const {
  require(n >= 1 && c > 0.0 && q > 0.0, ErrorKind::InvalidParameter, "CSBM radius needs n >= 1, c > 0, q > 0");
  const double cq = c * q;
  const double ratio = static_cast<double>(d) / static_cast<double>(n);
  const double r2 = 0.5 * (cq + std::sqrt(cq * cq + 4.0 * cq * ratio));
  require(std::isfinite(r2) && r2 > 0.0, ErrorKind::InvalidParameter, "no positive radius solves the SNR equation");
  return std::sqrt(r2);
}

void CsbmParams::validate() const {
  require(n >= 2, ErrorKind::InvalidParameter, "CSBM needs n >= 2");
  require(d >= 2, ErrorKind::InvalidParameter, "CSBM needs d >= 2");
  require(a > 0.0 && b > 0.0 && c > 0.0 && q > 0.0, ErrorKind::InvalidParameter,
          "CSBM needs a, b, c, q > 0");
  require(alpha() > 0.0 && alpha() < 1.0 && beta() > 0.0 && beta() < 1.0, ErrorKind::InvalidParameter,
          "derived edge probabilities must lie in (0, 1)");
  (void)radius();
}

CsbmSample sample_csbm(const CsbmParams& params, const Seed& seed) {
  params.validate();
  const LabelVector y = draw_labels(UniformLabels{}, LabelMode::Binary, 2, params.n,
                                    seed.child(seed_streams::kLabels));
  Philox4x32 gen(seed.child(seed_streams::kDirection));
  Vector g(params.d);
  for (Index k = 0; k < params.d; ++k) g(k) = gen.normal();
  const Vector mu = params.radius() * g / g.norm();
  return sample_csbm_given(params, y, mu, seed);
}

CsbmSample sample_csbm_given(const CsbmParams& params, const LabelVector& y, const Vector& mu,
                             const Seed& seed) {
  params.validate();
  require(y.mode() == LabelMode::Binary && y.size() == params.n, ErrorKind::InvalidParameter,
          "CSBM labels must be binary of length n");
  require(mu.size() == params.d, ErrorKind::InvalidParameter, "CSBM direction has the wrong dimension");
  SbmParams sbm{params.n, params.alpha(), params.beta(), y};
  SymmetricMatrix a = sample_sbm(sbm, seed.child(seed_streams::kGraph));

  GmmParams gmm = GmmParams::symmetric_binary(mu);
  gmm.labels = y;
  RowMatrix signal = y.as_signs() * mu.transpose();
  DataMatrix x = add_gmm_noise(gmm, signal, seed.child(seed_streams::kNoise));
  return {y, mu, std::move(a), std::move(x)};
}

}  // namespace hollowpca
