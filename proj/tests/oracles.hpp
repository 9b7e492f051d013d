#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include <hollowpca/linalg.hpp>

namespace oracle {

using hollowpca::Index;
using hollowpca::Matrix;
using Real = long double;
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

/// Coefficients c_0..c_n of det(lambda I - A) = sum c_k lambda^(n-k), c_0 = 1,
/// via the Faddeev-LeVerrier recursion.
inline std::vector<Real> charpoly(const Matrix& a) {
  const Index n = a.rows();
  const RealMatrix am = a.cast<Real>();
  std::vector<Real> c(static_cast<std::size_t>(n + 1), 0.0L);
  c[0] = 1.0L;
  RealMatrix m = RealMatrix::Zero(n, n);
  for (Index k = 1; k <= n; ++k) {
    m = am * m + c[static_cast<std::size_t>(k - 1)] * RealMatrix::Identity(n, n);
    c[static_cast<std::size_t>(k)] = -(am * m).trace() / static_cast<Real>(k);
  }
  return c;
}

inline Real horner(const std::vector<Real>& c, Real x) {
  Real v = 0.0L;
  for (Real ck : c) v = v * x + ck;
  return v;
}

inline Real horner_derivative(const std::vector<Real>& c, Real x) {
  const auto n = static_cast<Index>(c.size()) - 1;
  Real v = 0.0L;
  for (Index k = 0; k < n; ++k) v = v * x + c[static_cast<std::size_t>(k)] * static_cast<Real>(n - k);
  return v;
}

/// Sorted (ascending) roots of the characteristic polynomial of a symmetric
/// matrix of dimension <= 4: closed forms up to the cubic, Durand-Kerner for
/// the quartic, each polished by Newton steps.
inline std::vector<double> charpoly_roots(const Matrix& a) {
  const Index n = a.rows();
  const auto c = charpoly(a);
  std::vector<Real> roots;
  if (n == 1) {
    roots = {-c[1]};
  } else if (n == 2) {
    const Real b = c[1], cc = c[2];
    const Real disc = std::max(0.0L, b * b - 4.0L * cc);
    const Real q = -0.5L * (b + (b >= 0 ? 1.0L : -1.0L) * std::sqrt(disc));
    roots = {q, q != 0.0L ? cc / q : 0.0L};
  } else if (n == 3) {
    const Real c1 = c[1], c2 = c[2], c3 = c[3];
    const Real p = c2 - c1 * c1 / 3.0L;
    const Real q = 2.0L * c1 * c1 * c1 / 27.0L - c1 * c2 / 3.0L + c3;
    const Real shift = -c1 / 3.0L;
    if (p > -1e-30L) {
      roots = {shift, shift, shift};
    } else {
      const Real m = 2.0L * std::sqrt(-p / 3.0L);
      const Real arg = std::clamp(3.0L * q / (p * m), -1.0L, 1.0L);
      const Real theta = std::acos(arg) / 3.0L;
      const Real pi = 3.141592653589793238462643383279502884L;
      for (int k = 0; k < 3; ++k) roots.push_back(shift + m * std::cos(theta - 2.0L * pi * k / 3.0L));
    }
  } else {
    using C = std::complex<Real>;
    std::vector<C> z(static_cast<std::size_t>(n));
    const C seed(0.4L, 0.9L);
    const Real scale = 1.0L + std::abs(c[1]) + std::sqrt(std::abs(c[2]));
    for (Index k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = scale * std::pow(seed, static_cast<Real>(k));
    for (int it = 0; it < 2000; ++it) {
      Real change = 0.0L;
      for (Index i = 0; i < n; ++i) {
        C num = 0.0L;
        for (Real ck : c) num = num * z[static_cast<std::size_t>(i)] + ck;
        C den = 1.0L;
        for (Index j = 0; j < n; ++j)
          if (j != i) den *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
        const C step = num / den;
        z[static_cast<std::size_t>(i)] -= step;
        change = std::max(change, std::abs(step));
      }
      if (change < 1e-30L) break;
    }
    for (const auto& zi : z) roots.push_back(zi.real());
  }
  for (auto& r : roots) {
    for (int it = 0; it < 8; ++it) {
      const Real d = horner_derivative(c, r);
      if (std::abs(d) < 1e-24L) break;
      const Real step = horner(c, r) / d;
      if (!std::isfinite(static_cast<double>(step))) break;
      r -= step;
    }
  }
  std::vector<double> out(roots.begin(), roots.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// Orthogonal polar factor of a nonsingular square matrix by the Newton
/// iteration X <- (X + X^{-T}) / 2.
inline Matrix polar_newton(const Matrix& h) {
  RealMatrix x = h.cast<Real>();
  for (int it = 0; it < 200; ++it) {
    const RealMatrix next = 0.5L * (x + x.inverse().transpose());
    const Real change = (next - x).norm();
    x = next;
    if (change < 1e-18L) break;
  }
  return x.cast<double>();
}

/// Minimum k-means cost with K = 2 nonempty clusters over every partition.
inline double kmeans2_optimum(const Matrix& points) {
  const Index n = points.rows();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned long mask = 1; mask < (1ul << (n - 1)); ++mask) {
    // point n-1 always in cluster 0, so each split is visited once
    double cost = 0.0;
    for (int side = 0; side < 2; ++side) {
      Eigen::RowVectorXd centre = Eigen::RowVectorXd::Zero(points.cols());
      Index size = 0;
      for (Index i = 0; i < n; ++i)
        if (static_cast<int>((mask >> i) & 1ul) == side) {
          centre += points.row(i);
          ++size;
        }
      if (size == 0) continue;
      centre /= static_cast<double>(size);
      for (Index i = 0; i < n; ++i)
        if (static_cast<int>((mask >> i) & 1ul) == side) cost += (points.row(i) - centre).squaredNorm();
    }
    best = std::min(best, cost);
  }
  return best;
}

/// n^-1 min over relabelings tau of |{i : yhat_i != tau(y_i)}|, labels 1..k,
/// by direct enumeration of all k! maps.
inline double brute_misclassification(const std::vector<int>& yhat, const std::vector<int>& y, int k) {
  std::vector<int> tau(static_cast<std::size_t>(k));
  std::iota(tau.begin(), tau.end(), 1);
  std::size_t best = y.size();
  do {
    std::size_t miss = 0;
    for (std::size_t i = 0; i < y.size(); ++i) miss += yhat[i] != tau[static_cast<std::size_t>(y[i] - 1)];
    best = std::min(best, miss);
  } while (std::next_permutation(tau.begin(), tau.end()));
  return static_cast<double>(best) / static_cast<double>(y.size());
}

}  // namespace oracle
