#pragma once

// Integer lattice algorithms: Hermite and Smith normal forms, saturation,
// sublattice intersection, quotients with a chosen integral section,
// exterior powers, and homology of a pair of integer matrices as a
// finitely generated abelian group (free rank + invariant factors).

#include <algorithm>
#include <map>

#include "matrix.hpp"

namespace tropcontract {

struct HnfResult {
  ZMat H;  // A * U = H, column-style Hermite normal form (zero columns last)
  ZMat U;  // unimodular
};

// Column-style HNF: pivots positive and strictly descending row indices
// left to right; entries left of a pivot (same row) reduced into
// [0, pivot).  Canonical for the column lattice, so two generator sets
// span the same sublattice iff their trimmed HNFs agree.
inline HnfResult hermite_normal_form(const ZMat& A) {
  ZMat H = A;
  size_t d = rows(A), n = cols(A);
  ZMat U = identity_z(n);
  auto colop_combine = [&](size_t j, size_t k, const Int& a, const Int& b,
                           const Int& c, const Int& e) {
    // (col_j, col_k) <- (a*col_j + b*col_k, c*col_j + e*col_k)
    for (size_t i = 0; i < d; ++i) {
      Int x = a * H[i][j] + b * H[i][k];
      Int y = c * H[i][j] + e * H[i][k];
      H[i][j] = x;
      H[i][k] = y;
    }
    for (size_t i = 0; i < n; ++i) {
      Int x = a * U[i][j] + b * U[i][k];
      Int y = c * U[i][j] + e * U[i][k];
      U[i][j] = x;
      U[i][k] = y;
    }
  };
  size_t c = 0;
  std::vector<std::pair<size_t, size_t>> pivots;  // (row, col)
  for (size_t r = 0; r < d && c < n; ++r) {
    // Clear row r across columns c..n-1 down to a single gcd entry at c.
    size_t nz = c;
    while (nz < n && H[r][nz] == 0) ++nz;
    if (nz == n) continue;
    if (nz != c) {
      for (size_t i = 0; i < d; ++i) std::swap(H[i][c], H[i][nz]);
      for (size_t i = 0; i < n; ++i) std::swap(U[i][c], U[i][nz]);
    }
    for (size_t j = c + 1; j < n; ++j) {
      if (H[r][j] == 0) continue;
      Int x, y;
      Int g = gcdext(H[r][c], H[r][j], x, y);
      Int a = H[r][c] / g, b = H[r][j] / g;
      // col_c <- x*col_c + y*col_j (gcd), col_j <- -b*col_c + a*col_j (0)
      colop_combine(c, j, x, y, -b, a);
    }
    if (H[r][c] < 0) {
      for (size_t i = 0; i < d; ++i) H[i][c] = -H[i][c];
      for (size_t i = 0; i < n; ++i) U[i][c] = -U[i][c];
    }
    // Reduce earlier pivot columns in row r into [0, H[r][c]).
    for (size_t j = 0; j < c; ++j) {
      Int q = fdiv(H[r][j], H[r][c]);
      if (q == 0) continue;
      for (size_t i = 0; i < d; ++i) H[i][j] -= q * H[i][c];
      for (size_t i = 0; i < n; ++i) U[i][j] -= q * U[i][c];
    }
    pivots.push_back({r, c});
    ++c;
  }
  return {H, U};
}

// Canonical basis (as a list of vectors) of the sublattice generated by
// `gens` (each a vector in Z^d): nonzero columns of the HNF.
inline std::vector<ZVec> lattice_basis(const std::vector<ZVec>& gens,
                                       size_t d) {
  ZMat A = zmat(d, gens.size());
  for (size_t j = 0; j < gens.size(); ++j)
    for (size_t i = 0; i < d; ++i) A[i][j] = gens[j][i];
  ZMat H = hermite_normal_form(A).H;
  std::vector<ZVec> basis;
  for (size_t j = 0; j < cols(H); ++j) {
    ZVec v(d);
    bool nonzero = false;
    for (size_t i = 0; i < d; ++i) {
      v[i] = H[i][j];
      nonzero |= (v[i] != 0);
    }
    if (nonzero) basis.push_back(v);
  }
  return basis;
}

inline bool same_sublattice(const std::vector<ZVec>& a,
                            const std::vector<ZVec>& b, size_t d) {
  return lattice_basis(a, d) == lattice_basis(b, d);
}

struct SnfResult {
  ZMat S;  // U * A * V = S, diagonal, d1 | d2 | ... , nonnegative
  ZMat U;  // unimodular (rows x rows)
  ZMat V;  // unimodular (cols x cols)
};

inline SnfResult smith_normal_form(const ZMat& A) {
  size_t m = rows(A), n = cols(A);
  ZMat S = A, U = identity_z(m), V = identity_z(n);
  // row_t <- x*row_t + y*row_i ; row_i <- -b*row_t + a*row_i (det = 1 when
  // x*a + y*b = 1), applied to S and U simultaneously.
  auto row_combine = [&](size_t t, size_t i, const Int& x, const Int& y,
                         const Int& a, const Int& b) {
    for (size_t j = 0; j < n; ++j) {
      Int rt = x * S[t][j] + y * S[i][j];
      Int ri = -b * S[t][j] + a * S[i][j];
      S[t][j] = rt;
      S[i][j] = ri;
    }
    for (size_t j = 0; j < m; ++j) {
      Int rt = x * U[t][j] + y * U[i][j];
      Int ri = -b * U[t][j] + a * U[i][j];
      U[t][j] = rt;
      U[i][j] = ri;
    }
  };
  auto col_combine = [&](size_t t, size_t j, const Int& x, const Int& y,
                         const Int& a, const Int& b) {
    for (size_t i = 0; i < m; ++i) {
      Int ct = x * S[i][t] + y * S[i][j];
      Int cj = -b * S[i][t] + a * S[i][j];
      S[i][t] = ct;
      S[i][j] = cj;
    }
    for (size_t i = 0; i < n; ++i) {
      Int ct = x * V[i][t] + y * V[i][j];
      Int cj = -b * V[i][t] + a * V[i][j];
      V[i][t] = ct;
      V[i][j] = cj;
    }
  };
  auto diagonalize = [&]() {
    size_t t = 0;
    while (t < m && t < n) {
      size_t pi = m, pj = n;
      for (size_t i = t; i < m && pi == m; ++i)
        for (size_t j = t; j < n; ++j)
          if (S[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == m) break;
      if (pi != t) {
        std::swap(S[pi], S[t]);
        std::swap(U[pi], U[t]);
      }
      if (pj != t) {
        for (size_t i = 0; i < m; ++i) std::swap(S[i][pj], S[i][t]);
        for (size_t i = 0; i < n; ++i) std::swap(V[i][pj], V[i][t]);
      }
      bool dirty = true;
      while (dirty) {
        dirty = false;
        for (size_t i = t + 1; i < m; ++i) {
          if (S[i][t] == 0) continue;
          if (S[i][t] % S[t][t] == 0) {
            // Plain subtraction keeps row t intact (termination argument
            // needs this case to not disturb the pivot row).
            row_combine(t, i, 1, 0, 1, S[i][t] / S[t][t]);
          } else {
            Int x, y;
            Int g = gcdext(S[t][t], S[i][t], x, y);
            row_combine(t, i, x, y, S[t][t] / g, S[i][t] / g);
          }
          dirty = true;
        }
        for (size_t j = t + 1; j < n; ++j) {
          if (S[t][j] == 0) continue;
          if (S[t][j] % S[t][t] == 0) {
            col_combine(t, j, 1, 0, 1, S[t][j] / S[t][t]);
          } else {
            Int x, y;
            Int g = gcdext(S[t][t], S[t][j], x, y);
            col_combine(t, j, x, y, S[t][t] / g, S[t][j] / g);
          }
          dirty = true;
        }
      }
      ++t;
    }
    for (size_t i = 0; i < std::min(m, n); ++i)
      if (S[i][i] < 0) {
        for (size_t j = 0; j < n; ++j) S[i][j] = -S[i][j];
        for (size_t j = 0; j < m; ++j) U[i][j] = -U[i][j];
      }
  };
  diagonalize();
  // Enforce the divisibility chain d_i | d_{i+1}: on a violation, merge
  // the two columns and re-diagonalize (cheap at these sizes).
  size_t rk = std::min(m, n);
  bool ok = false;
  while (!ok) {
    ok = true;
    for (size_t i = 0; i + 1 < rk && ok; ++i) {
      if (S[i][i] == 0 || S[i + 1][i + 1] == 0) continue;
      if (S[i + 1][i + 1] % S[i][i] != 0) {
        for (size_t k = 0; k < m; ++k) S[k][i] += S[k][i + 1];
        for (size_t k = 0; k < n; ++k) V[k][i] += V[k][i + 1];
        diagonalize();
        ok = false;
      }
    }
  }
  return {S, U, V};
}

// Integer kernel of A (as a map Z^n -> Z^m): basis vectors of
// {x in Z^n : A x = 0}.  The result is automatically saturated.
inline std::vector<ZVec> integer_kernel(const ZMat& A) {
  if (rows(A) == 0) {
    std::vector<ZVec> basis;
    // Kernel of the empty map is everything; caller supplies n via cols.
    size_t n = cols(A);
    for (size_t i = 0; i < n; ++i) {
      ZVec e(n, 0);
      e[i] = 1;
      basis.push_back(e);
    }
    return basis;
  }
  HnfResult h = hermite_normal_form(A);
  std::vector<ZVec> basis;
  size_t n = cols(A);
  for (size_t j = 0; j < n; ++j) {
    bool zero = true;
    for (size_t i = 0; i < rows(A); ++i) zero &= (h.H[i][j] == 0);
    if (!zero) continue;
    ZVec v(n);
    for (size_t i = 0; i < n; ++i) v[i] = h.U[i][j];
    basis.push_back(v);
  }
  return basis;
}

// Saturation of the sublattice generated by `gens` inside Z^d:
// span_Q(gens) intersected with Z^d.
inline std::vector<ZVec> saturate(const std::vector<ZVec>& gens, size_t d) {
  if (gens.empty()) return {};
  // Integer linear forms vanishing on the span: kernel of x -> (<g,x>)_g.
  ZMat A = zmat(gens.size(), d);
  for (size_t i = 0; i < gens.size(); ++i) A[i] = gens[i];
  std::vector<ZVec> forms = integer_kernel(A);
  if (forms.empty()) {
    std::vector<ZVec> full;
    for (size_t i = 0; i < d; ++i) {
      ZVec e(d, 0);
      e[i] = 1;
      full.push_back(e);
    }
    return full;
  }
  ZMat F = zmat(forms.size(), d);
  for (size_t i = 0; i < forms.size(); ++i) F[i] = forms[i];
  return lattice_basis(integer_kernel(F), d);
}

inline bool is_saturated(const std::vector<ZVec>& gens, size_t d) {
  return lattice_basis(gens, d) == saturate(gens, d);
}

// Intersection of two sublattices of Z^d given by generators.
inline std::vector<ZVec> lattice_intersection(const std::vector<ZVec>& a,
                                              const std::vector<ZVec>& b,
                                              size_t d) {
  if (a.empty() || b.empty()) return {};
  size_t na = a.size(), nb = b.size();
  ZMat M = zmat(d, na + nb);
  for (size_t j = 0; j < na; ++j)
    for (size_t i = 0; i < d; ++i) M[i][j] = a[j][i];
  for (size_t j = 0; j < nb; ++j)
    for (size_t i = 0; i < d; ++i) M[i][na + j] = -b[j][i];
  std::vector<ZVec> ker = integer_kernel(M);
  std::vector<ZVec> gens;
  for (const auto& k : ker) {
    ZVec v(d, 0);
    for (size_t j = 0; j < na; ++j)
      for (size_t i = 0; i < d; ++i) v[i] += k[j] * a[j][i];
    gens.push_back(v);
  }
  return lattice_basis(gens, d);
}

// Membership of an integer vector in the sublattice generated by gens.
inline bool in_sublattice(const std::vector<ZVec>& gens, const ZVec& v,
                          size_t d) {
  std::vector<ZVec> with = gens;
  with.push_back(v);
  return lattice_basis(gens, d) == lattice_basis(with, d);
}

struct QuotientWithSection {
  ZMat projection;  // (d-k) x d, kernel = the sublattice
  ZMat section;     // d x (d-k), projection * section = identity
};

// Quotient Z^d / K for a saturated sublattice K (given by generators).
// Errors if K is not saturated (the quotient would have torsion).
inline QuotientWithSection quotient_with_section(const std::vector<ZVec>& K,
                                                 size_t d) {
  std::vector<ZVec> basis = lattice_basis(K, d);
  size_t k = basis.size();
  if (!is_saturated(K, d))
    throw std::invalid_argument(
        "quotient_with_section: sublattice is not saturated");
  ZMat M = zmat(d, k);
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < d; ++i) M[i][j] = basis[j][i];
  SnfResult s = k ? smith_normal_form(M) : SnfResult{M, identity_z(d), {}};
  // U*M*V = diag(1..1): U maps K onto the first k coordinates.
  ZMat U = k ? s.U : identity_z(d);
  QMat Uinv_q = *inverse_q(to_qmat(U));
  ZMat proj = zmat(d - k, d), sect = zmat(d, d - k);
  for (size_t i = 0; i < d - k; ++i)
    for (size_t j = 0; j < d; ++j) proj[i][j] = U[k + i][j];
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d - k; ++j) {
      assert(Uinv_q[i][k + j].get_den() == 1);
      sect[i][j] = Uinv_q[i][k + j].get_num();
    }
  return {proj, sect};
}

// Finitely generated abelian group: Z^rank + sum Z/f_i with the f_i >= 2
// forming a divisibility chain.
struct FgAbelianGroup {
  size_t rank = 0;
  std::vector<Int> invariant_factors;
  bool operator==(const FgAbelianGroup&) const = default;
  bool is_trivial() const { return rank == 0 && invariant_factors.empty(); }
  std::string str() const {
    std::string s = "Z^" + std::to_string(rank);
    for (const auto& f : invariant_factors) s += " + Z/" + f.get_str();
    return s;
  }
};

// Cokernel of an integer matrix A: Z^m / column-span(A).
inline FgAbelianGroup cokernel(const ZMat& A) {
  size_t m = rows(A);
  if (cols(A) == 0) return {m, {}};
  SnfResult s = smith_normal_form(A);
  FgAbelianGroup g;
  size_t rk = 0;
  for (size_t i = 0; i < std::min(rows(A), cols(A)); ++i) {
    if (s.S[i][i] == 0) break;
    ++rk;
    if (s.S[i][i] >= 2) g.invariant_factors.push_back(s.S[i][i]);
  }
  g.rank = m - rk;
  return g;
}

// Homology ker(d1) / im(d2) of  C2 --d2--> C1 --d1--> C0  (matrices act on
// column vectors).  Errors unless d1 * d2 = 0.
inline FgAbelianGroup homology_of_pair(const ZMat& d2, const ZMat& d1) {
  size_t n1 = cols(d1) ? cols(d1) : rows(d2);
  if (cols(d1) && rows(d2) && cols(d1) != rows(d2))
    throw std::invalid_argument("homology_of_pair: shape mismatch");
  if (cols(d1) && cols(d2)) {
    ZMat prod = mul(d1, d2);
    for (const auto& row : prod)
      for (const auto& x : row)
        if (x != 0)
          throw std::invalid_argument("homology_of_pair: d1*d2 != 0");
  }
  std::vector<ZVec> kb;
  if (cols(d1) == 0) {
    for (size_t i = 0; i < n1; ++i) {
      ZVec e(n1, 0);
      e[i] = 1;
      kb.push_back(e);
    }
  } else {
    kb = integer_kernel(d1);
  }
  size_t k = kb.size();
  // Express the columns of d2 in the kernel basis (exactly integral since
  // the integer kernel is saturated).
  ZMat coords = zmat(k, cols(d2));
  if (k && cols(d2)) {
    QMat Kt = qmat(n1, k);
    for (size_t j = 0; j < k; ++j)
      for (size_t i = 0; i < n1; ++i) Kt[i][j] = Rat(kb[j][i]);
    for (size_t j = 0; j < cols(d2); ++j) {
      QVec col(n1);
      for (size_t i = 0; i < n1; ++i) col[i] = Rat(d2[i][j]);
      auto x = solve_q(Kt, col);
      assert(x.has_value());
      for (size_t i = 0; i < k; ++i) {
        assert((*x)[i].get_den() == 1);
        coords[i][j] = (*x)[i].get_num();
      }
    }
  }
  return cokernel(coords);
}

// Lexicographically ordered p-element subsets of {0..n-1}.
inline std::vector<std::vector<size_t>> p_subsets(size_t n, size_t p) {
  std::vector<std::vector<size_t>> out;
  if (p > n) return out;
  std::vector<size_t> idx(p);
  for (size_t i = 0; i < p; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    size_t i = p;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - p) {
        ++idx[i];
        for (size_t j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return out;
    }
    if (p == 0) return out;
  }
}

// Matrix of wedge^p(T) for T: Z^n -> Z^m, in the lex-ordered p-subset
// bases: entry (I,J) is the minor of rows I and columns J.
inline ZMat wedge_power(const ZMat& T, size_t p) {
  size_t m = rows(T), n = cols(T);
  auto R = p_subsets(m, p), C = p_subsets(n, p);
  ZMat W = zmat(R.size(), C.size());
  for (size_t a = 0; a < R.size(); ++a)
    for (size_t b = 0; b < C.size(); ++b) {
      ZMat minor = zmat(p, p);
      for (size_t i = 0; i < p; ++i)
        for (size_t j = 0; j < p; ++j) minor[i][j] = T[R[a][i]][C[b][j]];
      W[a][b] = p == 0 ? Int(1) : det_z(minor);
    }
  return W;
}

// Coordinates of the wedge v_{I[0]} ^ ... ^ v_{I[p-1]} of vectors in Z^d,
// in the lex-ordered p-subset basis of wedge^p Z^d.
inline ZVec wedge_vector(const std::vector<ZVec>& vs, size_t d) {
  size_t p = vs.size();
  auto B = p_subsets(d, p);
  ZVec out(B.size());
  for (size_t b = 0; b < B.size(); ++b) {
    ZMat minor = zmat(p, p);
    for (size_t i = 0; i < p; ++i)
      for (size_t j = 0; j < p; ++j) minor[i][j] = vs[i][B[b][j]];
    out[b] = p == 0 ? Int(1) : det_z(minor);
  }
  return out;
}

}  // namespace tropcontract
