#pragma once

#include <hollowpca/linalg.hpp>
#include <hollowpca/rng.hpp>

namespace testing_support {

using namespace hollowpca;

inline Matrix gaussian_matrix(Philox4x32& gen, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = gen.normal();
  return m;
}

inline SymmetricMatrix random_symmetric(Philox4x32& gen, Index n) {
  const Matrix a = gaussian_matrix(gen, n, n);
  return SymmetricMatrix::from_lower(a);
}

inline DataMatrix random_data(Philox4x32& gen, Index n, Index d) {
  RowMatrix x(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) x(i, j) = gen.normal();
  return DataMatrix(std::move(x));
}

}  // namespace testing_support
