#pragma once

#include <map>
#include <variant>
#include <vector>

#include "hollowpca/linalg.hpp"
#include "hollowpca/rng.hpp"

namespace hollowpca {

enum class LabelMode { Binary, Multiclass };

/// Cluster labels: +-1 in binary mode, 1..K in multiclass mode.
class LabelVector {
 public:
  LabelVector() = default;
  static LabelVector binary(std::vector<int> values);
  static LabelVector multiclass(std::vector<int> values, int classes);

  LabelMode mode() const noexcept { return mode_; }
  int classes() const noexcept { return classes_; }
  Index size() const noexcept { return static_cast<Index>(values_.size()); }
  int operator[](Index i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& values() const noexcept { return values_; }

  /// Labels as a real vector (binary mode only).
  Vector as_signs() const;
  LabelVector flipped() const;
  /// Binary labels re-encoded as 1 (for +1) and 2 (for -1).
  LabelVector as_multiclass() const;

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  LabelVector(std::vector<int> values, LabelMode mode, int classes)
      : values_(std::move(values)), mode_(mode), classes_(classes) {}
  std::vector<int> values_;
  LabelMode mode_ = LabelMode::Binary;
  int classes_ = 2;
};

/// Entrywise sign with sgn(0) = +1.
LabelVector sign_labels(const Eigen::Ref<const Vector>& v);

struct IsotropicNoise {
  double variance = 1.0;
};
struct DiagonalNoise {
  Vector variances;
};
struct DenseNoise {
  SymmetricMatrix covariance;
};
using NoiseCov = std::variant<IsotropicNoise, DiagonalNoise, DenseNoise>;

/// Labels drawn i.i.d. uniformly over the classes.
struct UniformLabels {};
using LabelSource = std::variant<UniformLabels, LabelVector>;

/// x_i = mu_{y_i} + z_i, z_i ~ N(0, Sigma_i).
struct GmmParams {
  /// K x d, row k is the center of class k+1. In binary mode row 0 is the
  /// center of label +1 and row 1 the center of label -1.
  RowMatrix centers;
  NoiseCov noise = IsotropicNoise{};
  /// Per-sample covariances replacing `noise` for the listed rows.
  std::map<Index, NoiseCov> noise_overrides;
  LabelSource labels = UniformLabels{};
  LabelMode mode = LabelMode::Multiclass;

  /// Two classes at +mu and -mu with +-1 labels.
  static GmmParams symmetric_binary(const Vector& mu, NoiseCov noise = IsotropicNoise{});

  Index classes() const noexcept { return centers.rows(); }
  Index dim() const noexcept { return centers.cols(); }
};

struct GmmSample {
  DataMatrix x;
  /// Noise-free signal rows mu_{y_i}.
  DataMatrix signal;
  LabelVector labels;
};

GmmSample sample_gmm(const GmmParams& params, Index n, const Seed& seed);

struct SbmParams {
  Index n = 0;
  double alpha = 0.5;
  double beta = 0.5;
  LabelVector labels;
};

/// Symmetric 0/1 adjacency with zero diagonal. alpha and beta may be any
/// probability in [0, 1] here; CSBM parameters are held to the open interval.
SymmetricMatrix sample_sbm(const SbmParams& params, const Seed& seed);

struct CsbmParams {
  Index n = 0;
  Index d = 2;
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double q = 1.0;

  double alpha() const noexcept { return a * q / static_cast<double>(n); }
  double beta() const noexcept { return b * q / static_cast<double>(n); }
  /// Positive root of R^4 / (R^2 + d/n) = c q.
  double radius() const;
  void validate() const;
};

struct CsbmSample {
  LabelVector y;
  Vector mu;
  SymmetricMatrix adjacency;
  DataMatrix x;
};

CsbmSample sample_csbm(const CsbmParams& params, const Seed& seed);

/// Draws only the graph and the attributes for a fixed (y, mu); uses the same
/// seed streams as sample_csbm does for those two parts.
CsbmSample sample_csbm_given(const CsbmParams& params, const LabelVector& y, const Vector& mu,
                             const Seed& seed);

namespace seed_streams {
inline constexpr std::uint64_t kLabels = 0;
inline constexpr std::uint64_t kDirection = 1;
inline constexpr std::uint64_t kGraph = 2;
inline constexpr std::uint64_t kNoise = 3;
}  // namespace seed_streams

}  // namespace hollowpca
