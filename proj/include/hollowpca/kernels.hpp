#pragma once

#include <string>
#include <variant>

#include "hollowpca/linalg.hpp"

namespace hollowpca {

struct LinearKernel {};

/// k(x, y) = exp(-eta ||x - y||^2), eta > 0.
struct GaussianKernel {
  double eta = 1.0;
};

/// k(x, y) = (<x, y> + offset)^degree with degree >= 1, offset >= 0.
struct PolynomialKernel {
  int degree = 2;
  double offset = 0.0;
};

using KernelSpec = std::variant<LinearKernel, GaussianKernel, PolynomialKernel>;

/// Throws InvalidParameter when a kernel parameter is out of range.
void validate(const KernelSpec& spec);
std::string describe(const KernelSpec& spec);

/// K_ij = k(x_i, x_j). The linear kernel returns gram(x) unchanged.
SymmetricMatrix kernel_gram(const DataMatrix& x, const KernelSpec& spec);

namespace reference {
SymmetricMatrix kernel_gram(const DataMatrix& x, const KernelSpec& spec);
}

}  // namespace hollowpca
