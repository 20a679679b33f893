#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nplab/error.hpp"

namespace nplab {

template <class R>
using Mat = Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic>;

// Berkowitz: coefficients c_0..c_n with det(I - sA) = sum c_l s^l.
// Division free, so it works over Z/p^N, truncated series, polynomials.
template <class R>
std::vector<R> berkowitz(const Mat<R>& A) {
  const int n = (int)A.rows();
  if (n == 0) return {R(1)};
  std::vector<R> cp{R(1), -A(0, 0)};
  for (int r = 1; r < n; ++r) {
    // A_{r+1} = [[M, C], [Row, a]] with M the leading r x r block
    std::vector<R> t(r + 2, R(0));
    t[0] = R(1);
    t[1] = -A(r, r);
    std::vector<R> v(r);
    for (int i = 0; i < r; ++i) v[i] = A(i, r);
    for (int k = 2; k <= r + 1; ++k) {
      R dot(0);
      for (int i = 0; i < r; ++i) dot += A(r, i) * v[i];
      t[k] = -dot;
      if (k == r + 1) break;
      std::vector<R> w(r, R(0));
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) w[i] += A(i, j) * v[j];
      v = std::move(w);
    }
    std::vector<R> nc(r + 2, R(0));
    for (int i = 0; i <= r + 1; ++i)
      for (int j = 0; j <= std::min(i, r); ++j) nc[i] += t[i - j] * cp[j];
    cp = std::move(nc);
  }
  return cp;
}

template <class R>
R det_berkowitz(const Mat<R>& A) {
  auto c = berkowitz(A);
  R d = c.back();
  return (A.rows() % 2) ? -d : d;
}

// Gaussian elimination over a field type with inverse() / is_zero()
template <class F>
F det_field(Mat<F> A) {
  const int n = (int)A.rows();
  F det(1);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (!is_zero(A(r, c))) {
        piv = r;
        break;
      }
    if (piv < 0) return A(0, 0) * F(0);
    if (piv != c) {
      A.row(piv).swap(A.row(c));
      det = -det;
    }
    det *= A(c, c);
    F inv = A(c, c).inverse();
    for (int r = c + 1; r < n; ++r) {
      if (is_zero(A(r, c))) continue;
      F f = A(r, c) * inv;
      for (int j = c; j < n; ++j) A(r, j) -= f * A(c, j);
    }
  }
  return det;
}

// sign of the permutation given as an image vector
inline int perm_sign(std::vector<int> perm) {
  int s = 1;
  for (int i = 0; i < (int)perm.size(); ++i)
    while (perm[i] != i) {
      std::swap(perm[i], perm[perm[i]]);
      s = -s;
    }
  return s;
}

}  // namespace nplab
