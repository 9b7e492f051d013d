#include "hollowpca/kernels.hpp"

#include <cmath>
#include <cstddef>

namespace hollowpca {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double int_pow(double base, int exponent) {
  double out = 1.0;
  for (int k = 0; k < exponent; ++k) out *= base;
  return out;
}

}  // namespace

void validate(const KernelSpec& spec) {
  std::visit(overloaded{
                 [](const LinearKernel&) {},
                 [](const GaussianKernel& k) {
                   require(std::isfinite(k.eta) && k.eta > 0.0, ErrorKind::InvalidParameter,
                           "gaussian kernel needs eta > 0");
                 },
                 [](const PolynomialKernel& k) {
                   require(k.degree >= 1, ErrorKind::InvalidParameter, "polynomial degree must be >= 1");
                   require(std::isfinite(k.offset) && k.offset >= 0.0, ErrorKind::InvalidParameter,
                           "polynomial offset must be >= 0");
                 },
             },
             spec);
}

std::string describe(const KernelSpec& spec) {
  return std::visit(overloaded{
                        [](const LinearKernel&) { return std::string("linear"); },
                        [](const GaussianKernel& k) { return "gaussian(eta=" + std::to_string(k.eta) + ")"; },
                        [](const PolynomialKernel& k) {
                          return "polynomial(degree=" + std::to_string(k.degree) +
                                 ",offset=" + std::to_string(k.offset) + ")";
                        },
                    },
                    spec);
}

SymmetricMatrix kernel_gram(const DataMatrix& x, const KernelSpec& spec) {
  validate(spec);
  if (std::holds_alternative<LinearKernel>(spec)) return gram(x);

  const Index n = x.rows();
  Matrix k(n, n);
  if (const auto* poly = std::get_if<PolynomialKernel>(&spec)) {
    const SymmetricMatrix g = gram(x);
    const auto total = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < total; ++i)
      for (Index j = 0; j <= i; ++j) k(i, j) = int_pow(g(i, j) + poly->offset, poly->degree);
    return SymmetricMatrix::from_lower(std::move(k));
  }

  const double eta = std::get<GaussianKernel>(spec).eta;
  const RowMatrix& v = x.values();
  const auto total = static_cast<std::ptrdiff_t>(n);
  // Distances are formed from differences, not norm expansions, so x_i == x_j gives exactly 1.
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < total; ++i)
    for (Index j = 0; j <= i; ++j) k(i, j) = std::exp(-eta * (v.row(i) - v.row(j)).squaredNorm());
  return SymmetricMatrix::from_lower(std::move(k));
}

namespace reference {

SymmetricMatrix kernel_gram(const DataMatrix& x, const KernelSpec& spec) {
  validate(spec);
  const Index n = x.rows(), d = x.cols();
  Matrix k(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      double dot = 0.0, dist = 0.0;
      for (Index c = 0; c < d; ++c) {
        dot += x(i, c) * x(j, c);
        const double diff = x(i, c) - x(j, c);
        dist += diff * diff;
      }
      k(i, j) = std::visit(overloaded{
                               [&](const LinearKernel&) { return dot; },
                               [&](const GaussianKernel& g) { return std::exp(-g.eta * dist); },
                               [&](const PolynomialKernel& p) { return int_pow(dot + p.offset, p.degree); },
                           },
                           spec);
    }
  }
  return SymmetricMatrix::from_lower(std::move(k));
}

}  // namespace reference

}  // namespace hollowpca
