#pragma once

#include <initializer_list>
#include <vector>

#include "stieltjes/numerics.hpp"

namespace testing_support {

using stieltjes::Complex;
using stieltjes::Index;
using stieltjes::Matrix;

inline Matrix eye(Index n) { return Matrix::Identity(n, n); }

inline Matrix diag(std::initializer_list<Complex> d) {
  const Index n = static_cast<Index>(d.size());
  Matrix m = Matrix::Zero(n, n);
  Index i = 0;
  for (Complex v : d) m(i, i) = v, ++i;
  return m;
}

inline Matrix mat(Index rows, Index cols, std::initializer_list<Complex> row_major) {
  Matrix m(rows, cols);
  Index k = 0;
  for (Complex v : row_major) m(k / cols, k % cols) = v, ++k;
  return m;
}

inline double dist(const Matrix& a, const Matrix& b) { return stieltjes::spectral_norm(a - b); }

constexpr Complex I1(0.0, 1.0);

}  // namespace testing_support
