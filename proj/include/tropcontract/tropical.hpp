#pragma once

// Min-plus tropical polynomials and their polyhedral geometry: evaluation
// with argmin sets, the regular (dual) subdivision induced by the
// coefficients, common refinements of several hypersurfaces, stable
// intersection supports via the Minkowski-dimension criterion, and an
// independent first-order perturbation oracle for the same support.

#include "polyhedron.hpp"

namespace tropcontract {

struct TropicalPolynomial {
  size_t d = 0;                 // ambient dimension of N_R
  std::vector<ZVec> monomials;  // exponents m in M = Z^d
  QVec coeffs;                  // a_m; f(n) = min_m (a_m + <m,n>)

  std::pair<Rat, std::vector<size_t>> evaluate(const QVec& n) const {
    Rat best;
    std::vector<size_t> arg;
    for (size_t i = 0; i < monomials.size(); ++i) {
      Rat v = coeffs[i] + dot(monomials[i], n);
      if (arg.empty() || v < best) {
        best = v;
        arg = {i};
      } else if (v == best) {
        arg.push_back(i);
      }
    }
    return {best, arg};
  }

  // Index of the zero monomial, if present.
  std::optional<size_t> zero_monomial() const {
    for (size_t i = 0; i < monomials.size(); ++i)
      if (is_zero(monomials[i])) return i;
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Dual (regular) subdivision
// ---------------------------------------------------------------------------

// Cells of the regular subdivision of the support induced by lifting
// m -> (m, a_m) and taking lower faces.  Each cell is the sorted set of
// term indices lying on a bounded face of the lifted polyhedron
// conv{(m, a_m)} + R_{>=0}(0,..,0,1); all dimensions are included
// (vertices of the subdivision are singleton cells).
inline std::vector<std::vector<size_t>> dual_subdivision(
    const TropicalPolynomial& f) {
  size_t d = f.d;
  std::vector<QVec> lifted;
  for (size_t i = 0; i < f.monomials.size(); ++i) {
    QVec p(d + 1);
    for (size_t j = 0; j < d; ++j) p[j] = Rat(f.monomials[i][j]);
    p[d] = f.coeffs[i];
    lifted.push_back(p);
  }
  ZVec up(d + 1, 0);
  up[d] = 1;
  Polyhedron lift = polyhedron_from_vrep(lifted, {up}, {}, d + 1);
  std::vector<std::vector<size_t>> cells;
  for (const auto& face : face_lattice(lift)) {
    if (!face.poly.is_bounded()) continue;  // only lower faces
    std::vector<size_t> cell;
    for (size_t i = 0; i < lifted.size(); ++i)
      if (face.poly.contains(lifted[i])) cell.push_back(i);
    if (!cell.empty()) cells.push_back(cell);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

// ---------------------------------------------------------------------------
// Common refinement of argmin structures
// ---------------------------------------------------------------------------

struct RefinementCell {
  std::vector<std::vector<size_t>> argmin;  // one term-index set per f_i
  Polyhedron poly;                          // closed cell in N_R
};

// The closed region where argmin(f_i) contains S_i for every i.
inline Polyhedron argmin_region(const std::vector<TropicalPolynomial>& fs,
                                const std::vector<std::vector<size_t>>& S) {
  size_t d = fs[0].d;
  std::vector<std::pair<ZVec, Rat>> ineqs, eqs;
  for (size_t i = 0; i < fs.size(); ++i) {
    const auto& f = fs[i];
    size_t m0 = S[i][0];
    for (size_t j : S[i]) {
      if (j == m0) continue;
      ZVec a(d);
      for (size_t t = 0; t < d; ++t) a[t] = f.monomials[j][t] - f.monomials[m0][t];
      eqs.push_back({a, f.coeffs[m0] - f.coeffs[j]});
    }
    for (size_t j = 0; j < f.monomials.size(); ++j) {
      if (std::find(S[i].begin(), S[i].end(), j) != S[i].end()) continue;
      ZVec a(d);
      for (size_t t = 0; t < d; ++t) a[t] = f.monomials[j][t] - f.monomials[m0][t];
      ineqs.push_back({a, f.coeffs[m0] - f.coeffs[j]});
    }
  }
  return polyhedron_from_hrep(ineqs, eqs, d);
}

// All cells of the common refinement of the argmin structures of the
// given polynomials (the whole of N_R is decomposed; cells where no f_i
// bends are included with singleton argmin sets).
inline std::vector<RefinementCell> common_refinement(
    const std::vector<TropicalPolynomial>& fs) {
  std::vector<std::vector<std::vector<size_t>>> duals;
  for (const auto& f : fs) duals.push_back(dual_subdivision(f));
  std::vector<RefinementCell> out;
  std::vector<size_t> pick(fs.size(), 0);
  while (true) {
    std::vector<std::vector<size_t>> S;
    for (size_t i = 0; i < fs.size(); ++i) S.push_back(duals[i][pick[i]]);
    Polyhedron P = argmin_region(fs, S);
    if (!P.is_empty) {
      // Keep only exact cells: the argmin at a relative interior point
      // must equal S (otherwise this tuple describes a smaller stratum
      // that another tuple identifies exactly).
      QVec x = P.relint_point();
      bool exact = true;
      for (size_t i = 0; i < fs.size() && exact; ++i)
        exact = (fs[i].evaluate(x).second == S[i]);
      if (exact) out.push_back({S, std::move(P)});
    }
    // Advance the product counter.
    size_t i = 0;
    for (; i < fs.size(); ++i) {
      if (++pick[i] < duals[i].size()) break;
      pick[i] = 0;
    }
    if (i == fs.size()) break;
  }
  std::sort(out.begin(), out.end(),
            [](const RefinementCell& a, const RefinementCell& b) {
              return a.argmin < b.argmin;
            });
  return out;
}

// ---------------------------------------------------------------------------
// Stable intersection
// ---------------------------------------------------------------------------

// Dimension of sum_{i in I} conv{monomials in S_i}.
inline size_t minkowski_dim(const std::vector<TropicalPolynomial>& fs,
                            const std::vector<std::vector<size_t>>& S,
                            const std::vector<size_t>& I) {
  QMat dirs;
  for (size_t i : I) {
    const auto& ms = fs[i].monomials;
    size_t m0 = S[i][0];
    for (size_t j : S[i]) {
      if (j == m0) continue;
      QVec v(fs[i].d);
      for (size_t t = 0; t < fs[i].d; ++t)
        v[t] = Rat(ms[j][t] - ms[m0][t]);
      dirs.push_back(v);
    }
  }
  return rank(dirs);
}

// Criterion for a refinement cell to lie in the stable intersection:
// dim(sum_{i in I} F_i) >= |I| for every nonempty I.
inline bool stable_cell_criterion(const std::vector<TropicalPolynomial>& fs,
                                  const std::vector<std::vector<size_t>>& S) {
  size_t r = fs.size();
  for (size_t mask = 1; mask < (1u << r); ++mask) {
    std::vector<size_t> I;
    for (size_t i = 0; i < r; ++i)
      if (mask & (1u << i)) I.push_back(i);
    if (minkowski_dim(fs, S, I) < I.size()) return false;
  }
  return true;
}

// Closed support of the stable intersection, as the refinement cells that
// pass the dimension criterion plus every cell contained in a passing
// cell (the support is a union of closed cells).
inline std::vector<RefinementCell> stable_intersection_support(
    const std::vector<TropicalPolynomial>& fs) {
  auto cells = common_refinement(fs);
  std::vector<char> pass(cells.size(), 0);
  for (size_t c = 0; c < cells.size(); ++c)
    pass[c] = stable_cell_criterion(fs, cells[c].argmin);
  std::vector<RefinementCell> out;
  for (size_t c = 0; c < cells.size(); ++c) {
    bool keep = pass[c];
    for (size_t p = 0; p < cells.size() && !keep; ++p)
      keep = pass[p] && is_face_of(cells[c].poly, cells[p].poly);
    if (keep) out.push_back(cells[c]);
  }
  return out;
}

// Independent oracle: the limit of set-theoretic intersections of the
// hypersurfaces translated by eps * v_i for generic integer directions
// v_i.  First-order analysis in eps: a refinement cell with argmin tuple
// (T_1..T_r) survives iff there are an n_1 and pairs {p_i,q_i} in T_i
// tied and minimal for the perturbed first-order values
// c_m + <m, n_1> with c_m := -<m, v_i>.
inline std::vector<RefinementCell> perturbation_limit_support(
    const std::vector<TropicalPolynomial>& fs,
    const std::vector<ZVec>& translations) {
  size_t d = fs[0].d;
  auto cells = common_refinement(fs);
  auto cell_passes = [&](const std::vector<std::vector<size_t>>& T) {
    for (const auto& Ti : T)
      if (Ti.size() < 2) return false;
    // Enumerate pair choices per polynomial (product over i).
    std::vector<std::vector<std::pair<size_t, size_t>>> pairs(fs.size());
    for (size_t i = 0; i < fs.size(); ++i)
      for (size_t a = 0; a < T[i].size(); ++a)
        for (size_t b = a + 1; b < T[i].size(); ++b)
          pairs[i].push_back({T[i][a], T[i][b]});
    std::vector<size_t> pick(fs.size(), 0);
    while (true) {
      std::vector<std::pair<ZVec, Rat>> ineqs, eqs;
      for (size_t i = 0; i < fs.size(); ++i) {
        auto [p, q] = pairs[i][pick[i]];
        auto c_of = [&](size_t j) {
          return Rat(-dot(fs[i].monomials[j], translations[i]));
        };
        ZVec a(d);
        for (size_t t = 0; t < d; ++t)
          a[t] = fs[i].monomials[q][t] - fs[i].monomials[p][t];
        eqs.push_back({a, c_of(p) - c_of(q)});
        for (size_t j : T[i]) {
          if (j == p || j == q) continue;
          ZVec b(d);
          for (size_t t = 0; t < d; ++t)
            b[t] = fs[i].monomials[j][t] - fs[i].monomials[p][t];
          ineqs.push_back({b, c_of(p) - c_of(j)});
        }
      }
      if (!polyhedron_from_hrep(ineqs, eqs, d).is_empty) return true;
      size_t i = 0;
      for (; i < fs.size(); ++i) {
        if (++pick[i] < pairs[i].size()) break;
        pick[i] = 0;
      }
      if (i == fs.size()) break;
    }
    return false;
  };
  std::vector<char> pass(cells.size(), 0);
  for (size_t c = 0; c < cells.size(); ++c)
    pass[c] = cell_passes(cells[c].argmin);
  std::vector<RefinementCell> out;
  for (size_t c = 0; c < cells.size(); ++c) {
    bool keep = pass[c];
    for (size_t p = 0; p < cells.size() && !keep; ++p)
      keep = pass[p] && is_face_of(cells[c].poly, cells[p].poly);
    if (keep) out.push_back(cells[c]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// B-locus and the sigma-tilde decomposition
// ---------------------------------------------------------------------------

// The locus where the zero monomial attains the minimum of every f_i,
// as the refinement cells contained in it.  Errors when some f_i has no
// zero monomial.
inline std::vector<RefinementCell> b_locus(
    const std::vector<TropicalPolynomial>& fs) {
  std::vector<size_t> zero_idx;
  for (const auto& f : fs) {
    auto z = f.zero_monomial();
    if (!z)
      throw std::invalid_argument(
          "b_locus: a polynomial has no zero monomial");
    zero_idx.push_back(*z);
  }
  auto cells = common_refinement(fs);
  std::vector<RefinementCell> out;
  for (auto& c : cells) {
    bool in_b = true;
    for (size_t i = 0; i < fs.size(); ++i) {
      const auto& S = c.argmin[i];
      in_b &= std::find(S.begin(), S.end(), zero_idx[i]) != S.end();
    }
    if (in_b) out.push_back(std::move(c));
  }
  return out;
}

// For a refinement cell sigma, the face sigma-tilde on which every f_i
// additionally attains its minimum at the zero monomial, together with
// the index set I_sigma of polynomials whose argmin on sigma does not
// already contain the zero monomial.
struct TildeSigma {
  Polyhedron tilde;            // may be empty
  std::vector<size_t> I;       // I_sigma
};

inline TildeSigma tilde_sigma(const std::vector<TropicalPolynomial>& fs,
                              const RefinementCell& sigma) {
  TildeSigma out;
  std::vector<std::vector<size_t>> S = sigma.argmin;
  for (size_t i = 0; i < fs.size(); ++i) {
    auto z = fs[i].zero_monomial();
    if (!z)
      throw std::invalid_argument(
          "tilde_sigma: a polynomial has no zero monomial");
    if (std::find(S[i].begin(), S[i].end(), *z) == S[i].end()) {
      out.I.push_back(i);
      S[i].push_back(*z);
      std::sort(S[i].begin(), S[i].end());
    }
  }
  out.tilde = argmin_region(fs, S);
  return out;
}

}  // namespace tropcontract
