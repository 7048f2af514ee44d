#pragma once

// Dense exact matrices (row-major) over Z and Q with the linear algebra
// the rest of the library needs: products, rank, rational solving,
// kernels, inverses, determinants.  Sizes here are tiny (ambient
// dimensions <= 6, chain groups a few hundred), so fraction-full Gaussian
// elimination is entirely adequate.

#include <cassert>
#include <optional>

#include "rational.hpp"

namespace tropcontract {

using ZMat = std::vector<ZVec>;
using QMat = std::vector<QVec>;

inline size_t rows(const ZMat& m) { return m.size(); }
inline size_t cols(const ZMat& m) { return m.empty() ? 0 : m[0].size(); }
inline size_t rows(const QMat& m) { return m.size(); }
inline size_t cols(const QMat& m) { return m.empty() ? 0 : m[0].size(); }

inline ZMat zmat(size_t r, size_t c) { return ZMat(r, ZVec(c, 0)); }
inline QMat qmat(size_t r, size_t c) { return QMat(r, QVec(c, 0)); }

inline ZMat identity_z(size_t n) {
  ZMat m = zmat(n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline QMat identity_q(size_t n) {
  QMat m = qmat(n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline QMat to_qmat(const ZMat& m) {
  QMat out(rows(m), QVec(cols(m)));
  for (size_t i = 0; i < rows(m); ++i)
    for (size_t j = 0; j < cols(m); ++j) out[i][j] = Rat(m[i][j]);
  return out;
}

template <typename Mat>
Mat transpose(const Mat& m) {
  Mat out(cols(m), typename Mat::value_type(rows(m)));
  for (size_t i = 0; i < rows(m); ++i)
    for (size_t j = 0; j < cols(m); ++j) out[j][i] = m[i][j];
  return out;
}

template <typename Mat>
Mat mul(const Mat& a, const Mat& b) {
  assert(cols(a) == rows(b));
  Mat out(rows(a), typename Mat::value_type(cols(b), 0));
  for (size_t i = 0; i < rows(a); ++i)
    for (size_t k = 0; k < cols(a); ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < cols(b); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

inline QVec mul(const QMat& a, const QVec& v) {
  assert(cols(a) == v.size());
  QVec out(rows(a), 0);
  for (size_t i = 0; i < rows(a); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

inline ZVec mul(const ZMat& a, const ZVec& v) {
  assert(cols(a) == v.size());
  ZVec out(rows(a), 0);
  for (size_t i = 0; i < rows(a); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

inline QVec mul(const ZMat& a, const QVec& v) {
  assert(cols(a) == v.size());
  QVec out(rows(a), 0);
  for (size_t i = 0; i < rows(a); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += Rat(a[i][j]) * v[j];
  return out;
}

// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<size_t> rref(QMat& m) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols(m) && r < rows(m); ++c) {
    size_t p = r;
    while (p < rows(m) && m[p][c] == 0) ++p;
    if (p == rows(m)) continue;
    std::swap(m[p], m[r]);
    Rat inv = 1 / m[r][c];
    for (size_t j = c; j < cols(m); ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows(m); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (size_t j = c; j < cols(m); ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline size_t rank(QMat m) { return rref(m).size(); }
inline size_t rank(const ZMat& m) { return rank(to_qmat(m)); }

// Basis of the (right) null space of m over Q, as rows of the result.
inline QMat kernel_q(QMat m) {
  size_t n = cols(m);
  std::vector<size_t> pivots = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (size_t c : pivots) is_pivot[c] = true;
  QMat basis;
  for (size_t c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    QVec v(n, 0);
    v[c] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][c];
    basis.push_back(v);
  }
  return basis;
}

// Solves m * x = b over Q; nullopt when inconsistent.  When the system is
// underdetermined, returns the solution with zeros in the free columns.
inline std::optional<QVec> solve_q(QMat m, QVec b) {
  size_t n = cols(m);
  for (size_t i = 0; i < rows(m); ++i) m[i].push_back(b[i]);
  std::vector<size_t> pivots = rref(m);
  QVec x(n, 0);
  for (size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == n) return std::nullopt;  // pivot in augmented column
    x[pivots[i]] = m[i][n];
  }
  // Verify (free columns were set to zero, so residual must vanish).
  for (size_t i = pivots.size(); i < rows(m); ++i)
    if (m[i][n] != 0) return std::nullopt;
  return x;
}

inline std::optional<QMat> inverse_q(const QMat& a) {
  size_t n = rows(a);
  assert(cols(a) == n);
  QMat work(n, QVec(2 * n, 0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) work[i][j] = a[i][j];
    work[i][n + i] = 1;
  }
  std::vector<size_t> pivots = rref(work);
  if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
  QMat inv(n, QVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = work[i][n + j];
  return inv;
}

inline Rat det_q(QMat m) {
  size_t n = rows(m);
  assert(cols(m) == n);
  Rat d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    Rat inv = 1 / m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] * inv;
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

inline Int det_z(const ZMat& m) {
  Rat d = det_q(to_qmat(m));
  assert(d.get_den() == 1);
  return d.get_num();
}

// Rows of `gens` spanning a Q-subspace; returns a canonical RREF basis
// (rows), used to compare subspaces for equality.
inline QMat row_space_basis(QMat gens) {
  std::vector<size_t> pivots = rref(gens);
  gens.resize(pivots.size());
  return gens;
}

inline bool same_row_space(const QMat& a, const QMat& b) {
  return row_space_basis(a) == row_space_basis(b);
}

// Is v in the row space of gens?
inline bool in_row_space(const QMat& gens, const QVec& v) {
  if (gens.empty()) return is_zero(v);
  return solve_q(transpose(gens), v).has_value();
}

}  // namespace tropcontract
