#pragma once

// Cellular coefficient systems and their (co)homology over Z: the integral
// multi-tangent cosheaf F_p on stratified tropical complexes, the
// monodromy-invariant coefficient system on the base of a local model, wave
// stalks, Cech cocycles for the eigenwave and radiance obstructions, and the
// pushforward comparison between the domain and base homology tables.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "iams.hpp"

namespace tropcontract {

// ---------------------------------------------------------------------------
// Generic cell systems and their chain complexes
// ---------------------------------------------------------------------------

// A finite cell complex with a finitely generated free coefficient group per
// cell and one extension map per codimension-one incidence.  The boundary
// operator is  d = sum over incidences of  [tau : sigma] e_{tau,sigma}.
struct CellSystem {
  std::vector<int> dim;                // intrinsic dimension per cell
  std::vector<char> compact;           // closure compact?
  std::vector<size_t> rank;            // rank of the coefficient group
  // [tau : sigma] for dim tau = dim sigma - 1; absent entries are zero.
  std::map<std::pair<size_t, size_t>, Int> incidence;
  // e_{tau,sigma}: coefficient map F(sigma) -> F(tau), rank(tau) x
  // rank(sigma).  Required whenever the incidence number is nonzero and both
  // ranks are positive.
  std::map<std::pair<size_t, size_t>, ZMat> emap;

  size_t size() const { return dim.size(); }
  int top_dim() const {
    int d = -1;
    for (int c : dim) d = std::max(d, c);
    return d;
  }
};

namespace homdetail {

// Cells of degree q in the chosen chain-group variant, with offsets.
struct Layer {
  std::vector<size_t> cells;
  std::vector<size_t> offset;
  size_t total = 0;
};

inline Layer layer(const CellSystem& S, int q, bool borel_moore) {
  Layer L;
  for (size_t i = 0; i < S.size(); ++i) {
    if (S.dim[i] != q) continue;
    if (!borel_moore && !S.compact[i]) continue;
    L.offset.push_back(L.total);
    L.cells.push_back(i);
    L.total += S.rank[i];
  }
  return L;
}

inline size_t position(const Layer& L, size_t cell) {
  for (size_t k = 0; k < L.cells.size(); ++k)
    if (L.cells[k] == cell) return L.offset[k];
  throw std::logic_error("cell system: incidence outside the chain layer");
}

}  // namespace homdetail

// The boundary matrix d_q: C_q -> C_{q-1} of the chosen variant.
inline ZMat boundary_matrix(const CellSystem& S, int q, bool borel_moore) {
  homdetail::Layer src = homdetail::layer(S, q, borel_moore);
  homdetail::Layer dst = homdetail::layer(S, q - 1, borel_moore);
  ZMat d = zmat(dst.total, src.total);
  for (const auto& [key, inc] : S.incidence) {
    auto [tau, sigma] = key;
    if (S.dim[sigma] != q || S.dim[tau] != q - 1) continue;
    if (inc == 0 || S.rank[tau] == 0 || S.rank[sigma] == 0) continue;
    bool src_in = borel_moore || S.compact[sigma];
    bool dst_in = borel_moore || S.compact[tau];
    if (!src_in) continue;
    if (!dst_in)
      throw std::logic_error(
          "cell system: compact cell has a non-compact facet");
    auto it = S.emap.find(key);
    if (it == S.emap.end())
      throw std::logic_error("cell system: missing extension map");
    const ZMat& e = it->second;
    if (rows(e) != S.rank[tau] || cols(e) != S.rank[sigma])
      throw std::logic_error("cell system: extension map shape mismatch");
    size_t r0 = homdetail::position(dst, tau);
    size_t c0 = homdetail::position(src, sigma);
    for (size_t i = 0; i < S.rank[tau]; ++i)
      for (size_t j = 0; j < S.rank[sigma]; ++j)
        d[r0 + i][c0 + j] += inc * e[i][j];
  }
  return d;
}

// Cellular homology H_q of the system, either Borel-Moore (all cells) or
// with compact supports (compact cells only).  Errors if the assembled
// boundary operators do not square to zero.
inline std::map<int, FgAbelianGroup> cellular_homology(const CellSystem& S,
                                                       bool borel_moore) {
  std::map<int, FgAbelianGroup> H;
  int top = S.top_dim();
  for (int q = 0; q <= top; ++q) {
    homdetail::Layer cur = homdetail::layer(S, q, borel_moore);
    if (cur.total == 0) {
      H[q] = FgAbelianGroup{};
      continue;
    }
    ZMat d_q = boundary_matrix(S, q, borel_moore);
    ZMat d_q1 = boundary_matrix(S, q + 1, borel_moore);
    if (cols(d_q) && cols(d_q1)) {
      ZMat prod = mul(d_q, d_q1);
      for (const auto& row : prod)
        for (const auto& x : row)
          if (x != 0)
            throw std::logic_error("cellular_homology: boundary does not "
                                   "square to zero");
    }
    H[q] = homology_of_pair(d_q1, d_q);
  }
  return H;
}

// Cohomology of the dual (transposed) complex.  Coefficient groups here are
// free, so the sheaf of sections is the Z-dual system with restriction maps
// the transposed extension maps; `compact_support` dualizes the
// compact-support chain groups.
inline std::map<int, FgAbelianGroup> cellular_sheaf_cohomology(
    const CellSystem& S, bool compact_support = false) {
  std::map<int, FgAbelianGroup> H;
  bool bm = !compact_support;
  int top = S.top_dim();
  for (int q = 0; q <= top; ++q) {
    homdetail::Layer cur = homdetail::layer(S, q, bm);
    if (cur.total == 0) {
      H[q] = FgAbelianGroup{};
      continue;
    }
    ZMat delta_prev = transpose(boundary_matrix(S, q, bm));      // C^{q-1}->C^q
    ZMat delta_cur = transpose(boundary_matrix(S, q + 1, bm));   // C^q->C^{q+1}
    H[q] = homology_of_pair(delta_prev, delta_cur);
  }
  return H;
}

// ---------------------------------------------------------------------------
// Chains and homology classes
// ---------------------------------------------------------------------------

// A q-chain: coefficient vector per cell (in the cell's coefficient basis).
using CellChain = std::map<size_t, ZVec>;

inline ZVec chain_vector(const CellSystem& S, const CellChain& z, int q,
                         bool borel_moore) {
  homdetail::Layer L = homdetail::layer(S, q, borel_moore);
  ZVec v(L.total, 0);
  for (const auto& [cell, coeff] : z) {
    if (S.dim[cell] != q)
      throw std::invalid_argument("chain_vector: mixed-degree chain");
    size_t at = homdetail::position(L, cell);
    if (coeff.size() != S.rank[cell])
      throw std::invalid_argument("chain_vector: coefficient size mismatch");
    for (size_t i = 0; i < coeff.size(); ++i) v[at + i] += coeff[i];
  }
  return v;
}

inline ZVec chain_boundary(const CellSystem& S, const CellChain& z, int q,
                           bool borel_moore) {
  return mul(boundary_matrix(S, q, borel_moore),
             chain_vector(S, z, q, borel_moore));
}

// Membership of a cycle in the image of d_{q+1} over Z.
inline bool bounds(const CellSystem& S, const ZVec& cycle, int q,
                   bool borel_moore) {
  ZMat d = boundary_matrix(S, q + 1, borel_moore);
  std::vector<ZVec> cols_of;
  for (size_t j = 0; j < cols(d); ++j) {
    ZVec c(rows(d));
    for (size_t i = 0; i < rows(d); ++i) c[i] = d[i][j];
    cols_of.push_back(c);
  }
  return in_sublattice(cols_of, cycle, rows(d));
}

// ---------------------------------------------------------------------------
// Orientations and incidence signs for geometric complexes
// ---------------------------------------------------------------------------

namespace homdetail {

// Coordinates of x in the column span of basis (must lie in the span).
inline QVec span_coords(const std::vector<ZVec>& basis, const QVec& x) {
  QMat B = qmat(x.size(), basis.size());
  for (size_t j = 0; j < basis.size(); ++j)
    for (size_t i = 0; i < x.size(); ++i) B[i][j] = Rat(basis[j][i]);
  auto c = solve_q(B, x);
  if (!c) throw std::logic_error("span_coords: vector outside the span");
  return *c;
}

// A point in the relative interior; the barycentroid of the vertices only
// works for bounded cells.
inline QVec interior_point(const Polyhedron& P) {
  return P.is_bounded() ? P.barycentroid() : P.relint_point();
}

// Incidence sign of a facet: each cell is oriented by its tangent-lattice
// basis (HNF order); the sign compares the facet's basis prefixed by an
// outward vector against the cell's basis.
inline int facet_sign(const std::vector<ZVec>& cell_basis,
                      const std::vector<ZVec>& facet_basis,
                      const QVec& outward) {
  size_t d = cell_basis.size();
  if (facet_basis.size() + 1 != d)
    throw std::logic_error("facet_sign: not a codimension-one pair");
  QMat A = qmat(d, d);
  QVec u = span_coords(cell_basis, outward);
  for (size_t i = 0; i < d; ++i) A[i][0] = u[i];
  for (size_t j = 0; j < facet_basis.size(); ++j) {
    QVec c = span_coords(cell_basis, to_qvec(facet_basis[j]));
    for (size_t i = 0; i < d; ++i) A[i][j + 1] = c[i];
  }
  int s = sgn(det_q(A));
  if (s == 0) throw std::logic_error("facet_sign: degenerate configuration");
  return s;
}

}  // namespace homdetail

// Incidence numbers [tau : sigma] for all codimension-one face pairs of a
// polyhedral complex, via the outward-normal-first convention.
inline std::map<std::pair<size_t, size_t>, Int> incidence_signs(
    const PolyComplex& K) {
  std::map<std::pair<size_t, size_t>, Int> out;
  for (size_t s = 0; s < K.cells.size(); ++s)
    for (size_t t = 0; t < K.cells.size(); ++t) {
      if (t == s || !K.is_face(t, s)) continue;
      if (K.cell_dim[t] + 1 != K.cell_dim[s]) continue;
      QVec u = homdetail::interior_point(K.cells[t]) -
               homdetail::interior_point(K.cells[s]);
      out[{t, s}] = homdetail::facet_sign(tangent_lattice(K.cells[s]),
                                          tangent_lattice(K.cells[t]), u);
    }
  return out;
}

// The constant-Z system on a polyhedral complex (classical cellular chains).
inline CellSystem constant_system(const PolyComplex& K) {
  CellSystem S;
  S.dim = K.cell_dim;
  S.compact.assign(K.cells.size(), 1);
  for (size_t i = 0; i < K.cells.size(); ++i)
    S.compact[i] = K.cells[i].is_bounded() ? 1 : 0;
  S.rank.assign(K.cells.size(), 1);
  S.incidence = incidence_signs(K);
  for (const auto& [key, v] : S.incidence) S.emap[key] = {{Int(1)}};
  return S;
}

// ---------------------------------------------------------------------------
// Stratified tropical complexes
// ---------------------------------------------------------------------------

// A cell complex inside a tropical toric variety X_Sigma(T): cells carry an
// orbit label and a polyhedron in the orbit's coordinates; the complex is
// closed under faces within each stratum and under passing to closure parts
// at deeper strata.
struct TropicalComplex {
  Fan fan;
  std::vector<StratifiedCell> cells;
  std::vector<int> dim;
  // face[a][b]: cell a is a face of cell b (within a stratum or at the
  // stratified boundary); reflexive.
  std::vector<std::vector<char>> face;
  std::vector<char> compact;
  // For cells at a deeper stratum: the unique minimal finite cell whose
  // closure contains them (condition cd of the finite-parent kind).
  std::vector<std::optional<size_t>> finite_parent;
  size_t zero_cone = 0;

  bool is_face(size_t a, size_t b) const { return face[a][b] != 0; }
};

namespace homdetail {

inline bool strat_cell_less(const StratifiedCell& a, const StratifiedCell& b) {
  int da = a.poly.dim(), db = b.poly.dim();
  if (da != db) return da < db;
  if (a.cone != b.cone) return a.cone < b.cone;
  return detail::cell_less(a.poly, b.poly);
}

// Does the recession cone of P (in the orbit of gamma) fit inside the image
// of a single cone of the star of gamma?  Sufficient test for compactness of
// the closure of P in X_Sigma(T).
inline bool recession_capped(const Fan& fan, size_t gamma,
                             const Polyhedron& P) {
  if (P.is_bounded()) return true;
  size_t D = fan.orbit_dim(gamma);
  ConeGens rec = recession_cone(P);
  for (size_t c = 0; c < fan.size(); ++c) {
    if (!is_face_of_cone(fan, gamma, c)) continue;
    std::vector<ZVec> img;
    for (const auto& r : fan.cones[c]) {
      ZVec v = mul(fan.orbit[gamma].projection, r);
      if (!is_zero(v)) img.push_back(v);
    }
    ConeIneqs H = cone_to_inequalities(img, {}, D);
    auto inside = [&](const ZVec& v) {
      for (const auto& a : H.ineqs)
        if (dot(a, v) < 0) return false;
      for (const auto& a : H.eqs)
        if (dot(a, v) != 0) return false;
      return true;
    };
    bool ok = true;
    for (const auto& r : rec.rays) ok &= inside(r);
    for (const auto& l : rec.lineality) {
      ok &= inside(l);
      ZVec m(l.size());
      for (size_t i = 0; i < l.size(); ++i) m[i] = -l[i];
      ok &= inside(m);
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace homdetail

// Builds a stratified complex from seed cells: closes under faces within
// each stratum and under closure parts at deeper strata, then computes the
// face relation, compactness, and finite parents.
inline TropicalComplex tropical_complex(
    const Fan& fan, const std::vector<StratifiedCell>& seeds) {
  TropicalComplex X;
  X.fan = fan;
  auto zero = fan.find_cone({});
  if (!zero) throw std::invalid_argument("tropical_complex: fan lacks 0");
  X.zero_cone = *zero;

  std::vector<StratifiedCell> work = seeds;
  auto seen = [&](const StratifiedCell& c) {
    for (const auto& o : X.cells)
      if (o.cone == c.cone && o.poly == c.poly) return true;
    return false;
  };
  while (!work.empty()) {
    StratifiedCell c = work.back();
    work.pop_back();
    if (c.poly.is_empty || seen(c)) continue;
    X.cells.push_back(c);
    for (const auto& f : face_lattice(c.poly))
      if (!(f.poly == c.poly)) work.push_back({c.cone, f.poly});
    StratifiedPolyhedron S = closure_in_toric(c.poly, fan, c.cone);
    for (const auto& [cone2, Q] : S.infinite_faces)
      work.push_back({cone2, Q});
  }
  std::sort(X.cells.begin(), X.cells.end(), homdetail::strat_cell_less);

  size_t m = X.cells.size();
  X.dim.resize(m);
  X.compact.resize(m);
  for (size_t i = 0; i < m; ++i) {
    X.dim[i] = X.cells[i].poly.dim();
    X.compact[i] = homdetail::recession_capped(fan, X.cells[i].cone,
                                               X.cells[i].poly)
                       ? 1
                       : 0;
  }
  // Closure parts per cell, for the cross-stratum face relation.
  std::vector<StratifiedPolyhedron> closures;
  for (const auto& c : X.cells)
    closures.push_back(closure_in_toric(c.poly, fan, c.cone));
  X.face.assign(m, std::vector<char>(m, 0));
  for (size_t a = 0; a < m; ++a)
    for (size_t b = 0; b < m; ++b) {
      if (X.cells[a].cone == X.cells[b].cone) {
        X.face[a][b] = is_face_of(X.cells[a].poly, X.cells[b].poly) ? 1 : 0;
        continue;
      }
      if (!is_face_of_cone(fan, X.cells[b].cone, X.cells[a].cone)) continue;
      for (const auto& [cone2, Q] : closures[b].infinite_faces)
        if (cone2 == X.cells[a].cone && is_face_of(X.cells[a].poly, Q))
          X.face[a][b] = 1;
    }
  X.finite_parent.assign(m, std::nullopt);
  for (size_t a = 0; a < m; ++a) {
    if (X.cells[a].cone == X.zero_cone) continue;
    std::optional<size_t> best;
    bool unique = true;
    for (size_t b = 0; b < m; ++b) {
      if (X.cells[b].cone != X.zero_cone || !X.face[a][b]) continue;
      if (!best || X.dim[b] < X.dim[*best]) {
        best = b;
        unique = true;
      } else if (X.dim[b] == X.dim[*best] && b != *best) {
        unique = false;
      }
    }
    if (!best || !unique)
      throw std::logic_error(
          "tropical_complex: infinite cell lacks a unique finite parent");
    X.finite_parent[a] = *best;
  }
  return X;
}

// A plain polyhedral complex viewed as a tropical complex over the trivial
// fan (single dense stratum).
inline TropicalComplex plain_tropical_complex(const PolyComplex& K) {
  Fan fan = fan_from_cones(K.ambient, {});
  std::vector<StratifiedCell> seeds;
  for (const auto& c : K.cells) seeds.push_back({0, c});
  return tropical_complex(fan, seeds);
}

// ---------------------------------------------------------------------------
// The integral multi-tangent cosheaf F_p
// ---------------------------------------------------------------------------

// A cell system together with the explicit sublattice basis per cell (in the
// lex-ordered wedge coordinates of the cell's orbit lattice).
struct CoefficientData {
  CellSystem sys;
  std::vector<std::vector<ZVec>> basis;
};

namespace homdetail {

// Same-stratum cofaces (including the cell itself).
inline std::vector<size_t> stratum_cofaces(const TropicalComplex& X,
                                           size_t i) {
  std::vector<size_t> out;
  for (size_t j = 0; j < X.cells.size(); ++j)
    if (X.cells[j].cone == X.cells[i].cone && X.is_face(i, j))
      out.push_back(j);
  return out;
}

// Integral coordinates of v in a saturated lattice basis.
inline ZVec lattice_coords(const std::vector<ZVec>& basis, const ZVec& v,
                           size_t d) {
  QVec c = span_coords(basis, to_qvec(v));
  ZVec out(c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i].get_den() != 1)
      throw std::logic_error("lattice_coords: non-integral coordinates");
    out[i] = c[i].get_num();
  }
  (void)d;
  return out;
}

// Outward direction (in the coordinates of the shallower stratum) toward the
// deeper stratum: the projected generator sum of the deeper cone.
inline QVec infinity_direction(const Fan& fan, size_t shallow_cone,
                               size_t deep_cone) {
  ZVec s(fan.d, 0);
  for (const auto& r : fan.cones[deep_cone])
    for (size_t i = 0; i < fan.d; ++i) s[i] += r[i];
  return to_qvec(mul(fan.orbit[shallow_cone].projection, s));
}

}  // namespace homdetail

// F_p^Z on a stratified tropical complex: at each cell, the saturation of
// the span of p-fold wedges of coface tangent lattices inside the wedge
// power of the orbit lattice; extension maps are inclusions within a stratum
// and induced by the orbit quotient across strata.  Incidence signs use the
// outward-normal-first convention (outward = toward infinity at the
// stratified boundary).
inline CoefficientData tangent_cosheaf(const TropicalComplex& X, size_t p) {
  CoefficientData out;
  size_t m = X.cells.size();
  out.sys.dim = X.dim;
  out.sys.compact = X.compact;
  out.sys.rank.resize(m);
  out.basis.resize(m);
  for (size_t i = 0; i < m; ++i) {
    size_t D = X.fan.orbit_dim(X.cells[i].cone);
    size_t wd = detail::binomial(D, p);
    if (wd == 0) continue;
    std::vector<ZVec> gens;
    for (size_t j : homdetail::stratum_cofaces(X, i)) {
      std::vector<ZVec> tl = tangent_lattice(X.cells[j].poly);
      for (const auto& sub : p_subsets(tl.size(), p)) {
        std::vector<ZVec> ws;
        for (size_t s : sub) ws.push_back(tl[s]);
        gens.push_back(wedge_vector(ws, D));
      }
    }
    out.basis[i] = saturate(gens, wd);
    out.sys.rank[i] = out.basis[i].size();
  }
  for (size_t t = 0; t < m; ++t)
    for (size_t s = 0; s < m; ++s) {
      if (t == s || !X.is_face(t, s) || X.dim[t] + 1 != X.dim[s]) continue;
      size_t ct = X.cells[t].cone, cs = X.cells[s].cone;
      // Incidence sign.
      std::vector<ZVec> Bs = tangent_lattice(X.cells[s].poly);
      std::vector<ZVec> Bt = tangent_lattice(X.cells[t].poly);
      Int sign;
      if (ct == cs) {
        QVec u = homdetail::interior_point(X.cells[t].poly) -
                 homdetail::interior_point(X.cells[s].poly);
        sign = homdetail::facet_sign(Bs, Bt, u);
      } else {
        QVec w = homdetail::infinity_direction(X.fan, cs, ct);
        ZMat L = mul(X.fan.orbit[cs].projection, X.fan.orbit[ct].section);
        std::vector<ZVec> lifted;
        for (const auto& b : Bt) lifted.push_back(mul(L, b));
        sign = homdetail::facet_sign(Bs, lifted, w);
      }
      out.sys.incidence[{t, s}] = sign;
      // Extension map.
      size_t rt = out.sys.rank[t], rs = out.sys.rank[s];
      ZMat e = zmat(rt, rs);
      if (rt && rs) {
        size_t Dt = X.fan.orbit_dim(ct);
        std::optional<ZMat> W;
        if (ct != cs) {
          ZMat Pi = mul(X.fan.orbit[ct].projection, X.fan.orbit[cs].section);
          W = wedge_power(Pi, p);
        }
        for (size_t j = 0; j < rs; ++j) {
          ZVec img = W ? mul(*W, out.basis[s][j]) : out.basis[s][j];
          ZVec c = homdetail::lattice_coords(out.basis[t], img,
                                             detail::binomial(Dt, p));
          for (size_t i = 0; i < rt; ++i) e[i][j] = c[i];
        }
      }
      out.sys.emap[{t, s}] = e;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Wave stalks
// ---------------------------------------------------------------------------

// W_p at a cell: the wedge power of the intersection of all same-stratum
// coface tangent spaces, intersected with the wedge lattice; infinite cells
// delegate to their finite parent.
inline std::vector<ZVec> wave_stalk(const TropicalComplex& X, size_t cell,
                                    size_t p) {
  if (X.cells[cell].cone != X.zero_cone)
    return wave_stalk(X, *X.finite_parent[cell], p);
  size_t D = X.fan.orbit_dim(X.cells[cell].cone);
  std::optional<std::vector<ZVec>> inter;
  for (size_t j : homdetail::stratum_cofaces(X, cell)) {
    std::vector<ZVec> tl = tangent_lattice(X.cells[j].poly);
    inter = inter ? lattice_intersection(*inter, tl, D) : tl;
  }
  if (!inter) throw std::logic_error("wave_stalk: cell has no cofaces");
  size_t wd = detail::binomial(D, p);
  if (wd == 0) return {};
  std::vector<ZVec> gens;
  for (const auto& sub : p_subsets(inter->size(), p)) {
    std::vector<ZVec> ws;
    for (size_t s : sub) ws.push_back((*inter)[s]);
    gens.push_back(wedge_vector(ws, D));
  }
  return saturate(gens, wd);
}

inline std::vector<ZVec> wave_stalk(const TropicalComplex& X,
                                    const StratifiedPoint& x, size_t p) {
  for (size_t i = 0; i < X.cells.size(); ++i)
    if (X.cells[i].cone == x.cone &&
        detail::relint_contains(X.cells[i].poly, x.coords))
      return wave_stalk(X, i, p);
  throw std::invalid_argument("wave_stalk: point is not in the complex");
}

inline std::vector<ZVec> wave_stalk(const TropicalComplex& X, const QVec& x,
                                    size_t p) {
  return wave_stalk(X, StratifiedPoint{X.zero_cone, x}, p);
}

// ---------------------------------------------------------------------------
// The monodromy-invariant coefficient system on a local-model base
// ---------------------------------------------------------------------------

// Coefficients on the fine (chain) structure of the closed star: at a cell
// with chain tau_0 < ... < tau_l, the quotient of F_p(theta(tau_l)) by the
// monodromy denominators, presented globally inside the wedge power of Z^n
// (the Z-dual of the monodromy-invariant cotangent sublattice).
struct IamsSystem {
  PolyComplex fine;                     // chain simplices of the closed star
  std::vector<size_t> chain;            // per fine cell: index into
                                        // star_chains of the model
  std::vector<std::vector<ZVec>> fnum;  // numerator lattice basis
  std::vector<ZMat> proj;               // quotient projection, in fnum coords
  std::vector<ZMat> sect;               // a section of proj
  CellSystem sys;
};

namespace homdetail {

// Numerator F_p(theta(tau_l)) and denominator sublattice of the stalk at a
// chain cell, inside wedge^p Z^n.
inline void iams_cell_lattices(const LocalModel& M, size_t tau0, size_t taul,
                               size_t p, std::vector<ZVec>& fnum,
                               std::vector<ZVec>& den) {
  size_t n = M.data.n;
  size_t wd = detail::binomial(n, p);
  size_t theta = M.theta[taul];
  const Polyhedron& theta_poly = M.b_cells[theta].poly;
  std::vector<size_t> above;
  for (size_t s = 0; s < M.x_cells.size(); ++s)
    if (is_face_of(theta_poly, M.x_cells[s].poly)) above.push_back(s);
  std::vector<ZVec> fgens, dgens;
  for (size_t s : above) {
    std::vector<ZVec> tl = tangent_lattice(M.x_cells[s].poly);
    for (const auto& sub : p_subsets(tl.size(), p)) {
      std::vector<ZVec> ws;
      for (size_t i : sub) ws.push_back(tl[i]);
      fgens.push_back(wedge_vector(ws, n));
    }
  }
  if (p > 0) {
    for (size_t s : above) {
      const auto& I = M.x_tilde[s].I;
      if (I.empty()) continue;
      std::vector<ZVec> dirs;
      for (size_t i : I)
        for (const auto& v : M.phi.at(tau0)[i].vertices)
          dirs.push_back(detail::lift_vertex(v, M.data.dp, i));
      for (size_t s2 : above) {
        if (!is_face_of(M.x_cells[s].poly, M.x_cells[s2].poly)) continue;
        std::vector<ZVec> tl = tangent_lattice(M.x_cells[s2].poly);
        for (const auto& sub : p_subsets(tl.size(), p - 1))
          for (const auto& dvec : dirs) {
            std::vector<ZVec> ws;
            for (size_t i : sub) ws.push_back(tl[i]);
            ws.push_back(dvec);
            dgens.push_back(wedge_vector(ws, n));
          }
      }
    }
  }
  fnum = saturate(fgens, wd);
  den = lattice_intersection(fnum, saturate(dgens, wd), wd);
}

}  // namespace homdetail

inline IamsSystem iams_system(const LocalModel& M, size_t p) {
  IamsSystem out;
  size_t n = M.data.n;
  size_t wd = detail::binomial(n, p);
  out.fine = make_complex(M.star_simplices, n);
  size_t m = out.fine.cells.size();
  // Identify each fine cell with its chain via the anchor vertex set.
  out.chain.resize(m);
  for (size_t c = 0; c < m; ++c) {
    std::vector<QVec> verts = out.fine.cells[c].vertices;
    std::sort(verts.begin(), verts.end());
    std::optional<size_t> hit;
    for (size_t ch = 0; ch < M.star_chains.size(); ++ch) {
      std::vector<QVec> pts;
      for (size_t t : M.star_chains[ch]) pts.push_back(M.anchor[t]);
      std::sort(pts.begin(), pts.end());
      if (pts == verts) {
        hit = ch;
        break;
      }
    }
    if (!hit)
      throw std::logic_error("iams_system: fine cell is not a chain simplex");
    out.chain[c] = *hit;
  }
  out.fnum.resize(m);
  out.proj.resize(m);
  out.sect.resize(m);
  out.sys.dim = out.fine.cell_dim;
  out.sys.compact.assign(m, 1);
  out.sys.rank.resize(m);
  for (size_t c = 0; c < m; ++c) {
    const auto& ch = M.star_chains[out.chain[c]];
    std::vector<ZVec> den;
    homdetail::iams_cell_lattices(M, ch.front(), ch.back(), p, out.fnum[c],
                                  den);
    size_t nf = out.fnum[c].size();
    std::vector<ZVec> den_coords;
    for (const auto& v : den)
      den_coords.push_back(homdetail::lattice_coords(out.fnum[c], v, wd));
    if (den_coords.empty()) {
      out.proj[c] = identity_z(nf);
      out.sect[c] = identity_z(nf);
    } else {
      QuotientWithSection Q = quotient_with_section(den_coords, nf);
      out.proj[c] = Q.projection;
      out.sect[c] = Q.section;
    }
    out.sys.rank[c] = rows(out.proj[c]);
  }
  out.sys.incidence = incidence_signs(out.fine);
  for (const auto& [key, sign] : out.sys.incidence) {
    auto [t, s] = key;
    size_t rt = out.sys.rank[t], rs = out.sys.rank[s];
    ZMat e = zmat(rt, rs);
    for (size_t j = 0; j < rs; ++j) {
      // Lift basis vector j of the quotient at s to wedge^p Z^n ...
      ZVec amb(wd, 0);
      for (size_t k = 0; k < out.fnum[s].size(); ++k)
        for (size_t i = 0; i < wd; ++i)
          amb[i] += out.sect[s][k][j] * out.fnum[s][k][i];
      // ... re-express in the numerator of t and project.
      ZVec c = homdetail::lattice_coords(out.fnum[t], amb, wd);
      ZVec img = mul(out.proj[t], c);
      for (size_t i = 0; i < rt; ++i) e[i][j] = img[i];
    }
    out.sys.emap[key] = e;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Focus-focus disks with branch cuts (explicit twisted systems)
// ---------------------------------------------------------------------------

// A singular point of an integral affine disk, with the counterclockwise
// monodromy T and a branch-cut segment from the point to the boundary (a
// union of edges of the complex).  Crossing the cut from the side where
// <normal, x - point> < 0 to the positive side applies T.
struct DiskSingularity {
  QVec point;       // a vertex of the complex
  ZMat T;           // monodromy in the base frame, det = 1
  Polyhedron cut;   // the branch-cut segment (point is one endpoint)
  ZVec normal;      // a normal of the cut's affine hull
};

namespace homdetail {

inline int cut_side(const DiskSingularity& s, const QVec& x) {
  return sgn(dot(s.normal, x) - dot(s.normal, s.point));
}

inline bool in_cut(const DiskSingularity& s, const Polyhedron& cell) {
  if (!cell.is_bounded()) return false;
  for (const auto& v : cell.vertices)
    if (!s.cut.contains(v)) return false;
  return true;
}

}  // namespace homdetail

// The cellular system of wedge^p of the twisted lattice sheaf on a 2-disk
// with focus-focus singularities: every nonsingular cell carries the full
// wedge lattice in the base frame (the frame of the negative side along each
// cut), singular vertices carry the coinvariant quotient, and extension maps
// apply the monodromy exactly where the incidence crosses a cut.
inline CellSystem twisted_disk_system(const PolyComplex& K,
                                      const std::vector<DiskSingularity>& sing,
                                      size_t p) {
  if (K.ambient != 2)
    throw std::invalid_argument("twisted_disk_system: ambient must be 2");
  size_t m = K.cells.size();
  size_t wd = detail::binomial(2, p);
  CellSystem S;
  S.dim = K.cell_dim;
  S.compact.assign(m, 1);
  S.rank.assign(m, wd);
  // Singular vertices and their quotient projections.
  std::vector<std::optional<size_t>> singular(m);
  std::vector<ZMat> proj(m);
  for (size_t i = 0; i < m; ++i) {
    if (K.cell_dim[i] != 0) continue;
    for (size_t s = 0; s < sing.size(); ++s)
      if (K.cells[i].vertices[0] == sing[s].point) singular[i] = s;
    if (!singular[i]) continue;
    ZMat W = wedge_power(sing[*singular[i]].T, p);
    std::vector<ZVec> im;
    for (size_t j = 0; j < wd; ++j) {
      ZVec v(wd);
      for (size_t i2 = 0; i2 < wd; ++i2)
        v[i2] = W[i2][j] - (i2 == j ? 1 : 0);
      if (!is_zero(v)) im.push_back(v);
    }
    std::vector<ZVec> ker = saturate(im, wd);
    if (ker.empty()) {
      proj[i] = identity_z(wd);
    } else {
      proj[i] = quotient_with_section(ker, wd).projection;
    }
    S.rank[i] = rows(proj[i]);
  }
  S.incidence = incidence_signs(K);
  for (const auto& [key, sign] : S.incidence) {
    auto [t, s] = key;
    ZMat e = identity_z(wd);
    for (const auto& sg : sing) {
      if (!homdetail::in_cut(sg, K.cells[t])) continue;
      if (homdetail::cut_side(sg, K.cells[s].barycentroid()) > 0)
        e = mul(wedge_power(sg.T, p), e);
    }
    if (singular[t]) e = mul(proj[t], e);
    S.emap[key] = e;
  }
  return S;
}

// The FF disk of the sheaf-vs-tropical-homology comparison: the rectangle
// [0,4] x [-1,1] with unit-square vertices, triangulated with lower-left to
// upper-right diagonals, and two focus-focus points at (1,0) and (3,0) with
// vertical branch cuts to the bottom edge.
inline PolyComplex ff_disk_complex() {
  std::vector<Polyhedron> tris;
  auto pt = [&](int x, int y) {
    return QVec{Rat(x), Rat(y)};
  };
  for (int x = 0; x < 4; ++x)
    for (int y = -1; y < 1; ++y) {
      tris.push_back(polytope_from_points(
          {pt(x, y), pt(x + 1, y), pt(x + 1, y + 1)}, 2));
      tris.push_back(polytope_from_points(
          {pt(x, y), pt(x + 1, y + 1), pt(x, y + 1)}, 2));
    }
  return make_complex(tris, 2);
}

// Shear fixing the primitive direction d: x -> x + <dcheck, x> d with dcheck
// the (counterclockwise) conormal of d.
inline ZMat shear_fixing(const ZVec& d) {
  ZVec dc{-d[1], d[0]};
  ZMat T = identity_z(2);
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 2; ++j) T[i][j] += d[i] * dc[j];
  return T;
}

inline std::vector<DiskSingularity> ff_disk_singularities(const ZVec& dir1,
                                                          const ZVec& dir2) {
  auto seg = [&](int x) {
    return polytope_from_points({QVec{Rat(x), Rat(0)}, QVec{Rat(x), Rat(-1)}},
                                2);
  };
  DiskSingularity s1{QVec{Rat(1), Rat(0)}, shear_fixing(dir1), seg(1),
                     ZVec{1, 0}};
  DiskSingularity s2{QVec{Rat(3), Rat(0)}, shear_fixing(dir2), seg(3),
                     ZVec{1, 0}};
  return {s1, s2};
}

// ---------------------------------------------------------------------------
// Abstract example systems
// ---------------------------------------------------------------------------

// The flat torus R^2/Z^2 with one vertex, two edges and one face and the
// constant wedge^p Z^2 coefficients; all incidence numbers vanish because
// opposite sides cancel.
inline CellSystem flat_torus_system(size_t p) {
  size_t wd = detail::binomial(2, p);
  CellSystem S;
  S.dim = {0, 1, 1, 2};
  S.compact.assign(4, 1);
  S.rank.assign(4, wd);
  for (auto [t, s] : {std::pair<size_t, size_t>{0, 1}, {0, 2}, {1, 3},
                      {2, 3}}) {
    S.incidence[{t, s}] = 0;
    S.emap[{t, s}] = identity_z(wd);
  }
  return S;
}

// ---------------------------------------------------------------------------
// Cech cocycles: eigenwave and radiance obstructions
// ---------------------------------------------------------------------------

// A degree-one Cech cochain on the cover by open stars of the vertices of a
// fine structure.  The value on the overlap (U_i, U_j) is stored in the
// frame of U_i; `linear[(i,j)]` is the linear part of the transition from
// frame j to frame i, computed on the reference simplex of the overlap.
struct CechCocycle {
  std::vector<size_t> vertices;                       // vertex cell indices
  std::vector<std::pair<size_t, size_t>> overlaps;    // pairs i < j
  std::vector<QVec> value;
  std::vector<QMat> linear;
  bool cocycle_ok = false;
};

namespace homdetail {

inline std::optional<size_t> common_cell(const PolyComplex& K,
                                         const std::vector<size_t>& verts) {
  std::optional<size_t> best;
  for (size_t c = 0; c < K.cells.size(); ++c) {
    bool all = true;
    for (size_t v : verts) all &= K.is_face(v, c);
    if (!all) continue;
    if (!best || K.cell_dim[c] < K.cell_dim[*best]) best = c;
  }
  return best;
}

// Verifies the twisted cocycle condition c_ik = c_ij + L_ij c_jk on every
// triple with pairwise overlaps sharing a common cell.
inline bool check_cocycle(const PolyComplex& K, CechCocycle& c) {
  auto find_pair = [&](size_t i, size_t j) -> std::optional<size_t> {
    for (size_t k = 0; k < c.overlaps.size(); ++k)
      if (c.overlaps[k] == std::make_pair(i, j)) return k;
    return std::nullopt;
  };
  for (size_t a = 0; a < c.vertices.size(); ++a)
    for (size_t b = a + 1; b < c.vertices.size(); ++b)
      for (size_t d = b + 1; d < c.vertices.size(); ++d) {
        if (!common_cell(K, {c.vertices[a], c.vertices[b], c.vertices[d]}))
          continue;
        auto ab = find_pair(a, b), bd = find_pair(b, d), ad = find_pair(a, d);
        if (!ab || !bd || !ad) return false;
        QVec lhs = c.value[*ad];
        QVec rhs = c.value[*ab] + mul(c.linear[*ab], c.value[*bd]);
        if (!(lhs == rhs)) return false;
      }
  return true;
}

}  // namespace homdetail

// Coboundary test: does there exist a flat section b_i per cover element
// with c_ij = b_i - L_ij b_j?  Optionally b_i is constrained to the span of
// `allowed[i]`.  (With s_i the position field relative to the base point,
// c = s_j - s_i gives exactly this sign convention.)
inline bool is_coboundary(const CechCocycle& c,
                          const std::vector<std::vector<QVec>>& allowed = {}) {
  if (c.value.empty()) return true;
  size_t d = c.value[0].size();
  size_t nv = c.vertices.size();
  std::vector<size_t> offset(nv), width(nv);
  size_t total = 0;
  for (size_t i = 0; i < nv; ++i) {
    width[i] = allowed.empty() ? d : allowed[i].size();
    offset[i] = total;
    total += width[i];
  }
  QMat A = qmat(c.overlaps.size() * d, total);
  QVec rhs(c.overlaps.size() * d, 0);
  for (size_t k = 0; k < c.overlaps.size(); ++k) {
    auto [i, j] = c.overlaps[k];
    for (size_t r = 0; r < d; ++r) rhs[k * d + r] = c.value[k][r];
    for (size_t w = 0; w < width[i]; ++w) {
      QVec col = allowed.empty()
                     ? [&] {
                         QVec e(d, 0);
                         e[w] = 1;
                         return e;
                       }()
                     : allowed[i][w];
      for (size_t r = 0; r < d; ++r) A[k * d + r][offset[i] + w] += col[r];
    }
    for (size_t w = 0; w < width[j]; ++w) {
      QVec e = allowed.empty() ? [&] {
        QVec v(d, 0);
        v[w] = 1;
        return v;
      }()
                               : allowed[j][w];
      QVec col = mul(c.linear[k], e);
      for (size_t r = 0; r < d; ++r) A[k * d + r][offset[j] + w] -= col[r];
    }
  }
  return solve_q(A, rhs).has_value();
}

// Are two cocycles on the same cover cohomologous?
inline bool cohomologous(const CechCocycle& a, const CechCocycle& b) {
  if (a.overlaps != b.overlaps)
    throw std::invalid_argument("cohomologous: covers differ");
  CechCocycle diff = a;
  for (size_t k = 0; k < a.value.size(); ++k)
    diff.value[k] = a.value[k] - b.value[k];
  return is_coboundary(diff);
}

// The eigenwave cocycle on a fine structure of a tropical space inside R^n:
// base points p_i in the minimal stratum of each star (default: the vertex
// itself), c_ij = (p_j - p_ij) - (p_i - p_ij) = p_j - p_i.  The ambient
// affine structure is global, so all transition frames are trivial.
inline CechCocycle eigenwave_cocycle(
    const PolyComplex& fine, const std::vector<QVec>& base_points = {}) {
  CechCocycle c;
  for (size_t i = 0; i < fine.cells.size(); ++i)
    if (fine.cell_dim[i] == 0) c.vertices.push_back(i);
  std::vector<QVec> pts;
  for (size_t k = 0; k < c.vertices.size(); ++k)
    pts.push_back(base_points.empty()
                      ? fine.cells[c.vertices[k]].vertices[0]
                      : base_points[k]);
  for (size_t a = 0; a < c.vertices.size(); ++a)
    for (size_t b = a + 1; b < c.vertices.size(); ++b) {
      if (!homdetail::common_cell(fine, {c.vertices[a], c.vertices[b]}))
        continue;
      c.overlaps.push_back({a, b});
      c.value.push_back(pts[b] - pts[a]);
      c.linear.push_back(identity_q(fine.ambient));
    }
  c.cocycle_ok = homdetail::check_cocycle(fine, c);
  return c;
}

namespace homdetail {

// Affine map x -> A x + t.
struct AffMap {
  QMat A;
  QVec t;
};

inline AffMap aff_compose(const AffMap& f, const AffMap& g) {
  return {mul(f.A, g.A), mul(f.A, g.t) + f.t};
}

inline QVec aff_apply(const AffMap& f, const QVec& x) {
  return mul(f.A, x) + f.t;
}

}  // namespace homdetail

// The radiance obstruction cocycle of a two-dimensional local-model base
// whose discriminant meets the star in at most the single point a_xi.  The
// affine atlas is the one underlying the monodromy computation: one chart
// pi_v per vertex v of xi (the vertex quotient projection), glued over the
// maximal cells they share.  Charts are developed per cover star from a
// reference top simplex, steering the development away from the branch cut
// [a_xi, a_sigma] along the first maximal cell so that the holonomy of the
// singular star sits on the cut; base points o_i default to the cover
// vertices (o = a_xi is forced at the singular star).
inline CechCocycle radiance_cocycle(const LocalModel& M,
                                    const std::vector<QVec>& base_points = {}) {
  size_t n = M.data.n, dp = M.data.dp;
  if (dp != 2)
    throw std::invalid_argument("radiance_cocycle: base must be 2-dimensional");
  QVec origin = M.anchor[M.xi_cell];
  std::vector<Polyhedron> disc = local_discriminant(M);
  bool singular = !disc.empty();
  if (singular &&
      (disc.size() != 1 || disc[0].dim() != 0 || !disc[0].contains(origin)))
    throw std::invalid_argument(
        "radiance_cocycle: discriminant in the star is not the single point "
        "a_xi");

  PolyComplex fine = make_complex(M.star_simplices, n);

  // Chain data per top simplex: the chain's vertex (chart label) and its
  // maximal cell (gluing locus).
  std::vector<size_t> tops;
  for (size_t c = 0; c < fine.cells.size(); ++c)
    if (fine.cell_dim[c] == (int)dp) tops.push_back(c);
  std::map<size_t, size_t> vfront, sback;
  for (size_t t : tops) {
    std::vector<QVec> verts = fine.cells[t].vertices;
    std::sort(verts.begin(), verts.end());
    std::optional<size_t> hit;
    for (size_t ch = 0; ch < M.star_chains.size(); ++ch) {
      std::vector<QVec> pts;
      for (size_t cc : M.star_chains[ch]) pts.push_back(M.anchor[cc]);
      std::sort(pts.begin(), pts.end());
      if (pts == verts) hit = ch;
    }
    if (!hit)
      throw std::logic_error("radiance_cocycle: top cell is not a chain "
                             "simplex");
    vfront[t] = M.star_chains[*hit].front();
    sback[t] = M.star_chains[*hit].back();
  }
  std::map<size_t, ZMat> proj;
  for (size_t t : tops)
    if (!proj.count(vfront[t]))
      proj[vfront[t]] = detail::vertex_quotient(M, vfront[t]).projection;

  // Branch cut: the chain simplex [a_xi, a_sigma] of the first maximal cell.
  std::optional<Polyhedron> cut;
  if (singular) {
    std::vector<size_t> base_maximal = M.P.maximal();
    std::sort(base_maximal.begin(), base_maximal.end());
    cut = polytope_from_points({origin, M.anchor[base_maximal.front()]}, n);
  }

  // A developed chart is an affine map R^n -> R^dp valid on its simplex.
  auto eval = [&](const homdetail::AffMap& F, const QVec& x) {
    return mul(F.A, x) + F.t;
  };
  auto vertex_chart = [&](size_t v) {
    return homdetail::AffMap{to_qmat(proj.at(v)), QVec(dp, 0)};
  };
  // Continuation of the chart F on `cur` to the adjacent simplex `nxt`:
  // same chain vertex means the same chart; otherwise re-express through
  // the next vertex's projection by matching on the shared maximal cell.
  auto step_chart = [&](const homdetail::AffMap& F, size_t cur, size_t nxt) {
    if (vfront[cur] == vfront[nxt]) return F;
    size_t sig = sback[cur];
    const ZMat& P2 = proj.at(vfront[nxt]);
    std::vector<ZVec> B = tangent_lattice(M.P.cells[sig]);
    QMat X = qmat(dp, dp), Y = qmat(dp, dp);
    for (size_t j = 0; j < dp; ++j) {
      ZVec xc = mul(P2, B[j]);
      QVec yc = mul(F.A, to_qvec(B[j]));
      for (size_t i = 0; i < dp; ++i) {
        X[i][j] = Rat(xc[i]);
        Y[i][j] = yc[i];
      }
    }
    QMat H = mul(Y, *inverse_q(X));
    QVec p = M.anchor[sig];
    QVec t2 = eval(F, p) - mul(H, mul(P2, p));
    return homdetail::AffMap{mul(H, to_qmat(P2)), t2};
  };
  auto develop = [&](const std::vector<size_t>& star_tops, bool use_cut)
      -> std::map<size_t, homdetail::AffMap> {
    // Only the star around the singular point needs the branch cut: its
    // development would otherwise wrap around a_xi and pick up holonomy.
    auto blocked = [&](const Polyhedron& facet) {
      return use_cut && cut && facet == *cut;
    };
    std::map<size_t, homdetail::AffMap> chart;
    std::vector<size_t> work = {star_tops.front()};
    chart[star_tops.front()] = vertex_chart(vfront[star_tops.front()]);
    while (!work.empty()) {
      size_t cur = work.back();
      work.pop_back();
      for (size_t nxt : star_tops) {
        if (chart.count(nxt)) continue;
        std::optional<size_t> shared;
        for (size_t f = 0; f < fine.cells.size(); ++f)
          if (fine.cell_dim[f] == (int)dp - 1 && fine.is_face(f, cur) &&
              fine.is_face(f, nxt) && !blocked(fine.cells[f]))
            shared = f;
        if (!shared) continue;
        chart[nxt] = step_chart(chart.at(cur), cur, nxt);
        work.push_back(nxt);
      }
    }
    if (chart.size() != star_tops.size())
      throw std::logic_error("radiance_cocycle: star development incomplete");
    return chart;
  };

  CechCocycle c;
  for (size_t i = 0; i < fine.cells.size(); ++i)
    if (fine.cell_dim[i] == 0) c.vertices.push_back(i);
  size_t nv = c.vertices.size();
  std::vector<std::vector<size_t>> star(nv);
  std::vector<std::map<size_t, homdetail::AffMap>> chart(nv);
  std::vector<QVec> o(nv);
  std::optional<size_t> singular_vertex;
  for (size_t k = 0; k < nv; ++k) {
    for (size_t t : tops)
      if (fine.is_face(c.vertices[k], t)) star[k].push_back(t);
    QVec vtx = fine.cells[c.vertices[k]].vertices[0];
    if (singular && vtx == origin) singular_vertex = k;
    chart[k] = develop(star[k], singular && vtx == origin);
    o[k] = base_points.empty() ? vtx : base_points[k];
  }
  if (singular && singular_vertex && !(o[*singular_vertex] == origin))
    throw std::invalid_argument(
        "radiance_cocycle: the base point of the singular star must be the "
        "singular point");
  // The developed base point of each star, evaluated in the chart of a star
  // simplex containing it.
  std::vector<QVec> odev(nv);
  for (size_t k = 0; k < nv; ++k) {
    std::optional<size_t> at;
    for (size_t t : star[k])
      if (fine.cells[t].contains(o[k])) at = t;
    if (!at)
      throw std::invalid_argument(
          "radiance_cocycle: base point outside its cover star");
    odev[k] = eval(chart[k].at(*at), o[k]);
  }

  for (size_t a = 0; a < nv; ++a)
    for (size_t b = a + 1; b < nv; ++b) {
      // Reference simplex: lowest-index top simplex containing both.
      std::optional<size_t> ref;
      for (size_t t : star[a])
        if (fine.is_face(c.vertices[b], t)) {
          ref = t;
          break;
        }
      if (!ref) continue;
      // g_ab = psi_a o psi_b^{-1}, matched on the reference simplex.
      const homdetail::AffMap& pa = chart[a].at(*ref);
      const homdetail::AffMap& pb = chart[b].at(*ref);
      std::vector<ZVec> B = tangent_lattice(fine.cells[*ref]);
      QMat X = qmat(dp, dp), Y = qmat(dp, dp);
      for (size_t j = 0; j < dp; ++j) {
        QVec xc = mul(pb.A, to_qvec(B[j]));
        QVec yc = mul(pa.A, to_qvec(B[j]));
        for (size_t i = 0; i < dp; ++i) {
          X[i][j] = xc[i];
          Y[i][j] = yc[i];
        }
      }
      QMat G = mul(Y, *inverse_q(X));
      QVec p = fine.cells[*ref].barycentroid();
      QVec gt = eval(pa, p) - mul(G, eval(pb, p));
      c.overlaps.push_back({a, b});
      // c_ab = psi_a(o_a) - g_ab(psi_b(o_b)).
      c.value.push_back(odev[a] - (mul(G, odev[b]) + gt));
      c.linear.push_back(G);
    }
  c.cocycle_ok = homdetail::check_cocycle(fine, c);
  return c;
}

// ---------------------------------------------------------------------------
// Pushforward comparison
// ---------------------------------------------------------------------------

struct PushforwardComparison {
  std::vector<StalkCheck> cell_checks;  // per fine base cell in the open star
  // (p, q) -> group, for both sides and both variants.
  std::map<std::pair<size_t, int>, FgAbelianGroup> domain_h, domain_hbm;
  std::map<std::pair<size_t, int>, FgAbelianGroup> base_h, base_hbm;
  bool stalks_ok = true;
  bool tables_equal = true;
};

// Builds the stratified complex of X' (finite cells of the domain complex
// plus all stratified closure parts).
inline TropicalComplex domain_tropical_complex(const LocalModel& M) {
  DomainComplex dom = domain_complex(M);
  std::vector<StratifiedCell> seeds;
  for (const auto& c : dom.cells.cells) seeds.push_back({0, c});
  for (const auto& sc : dom.infinite_cells) seeds.push_back(sc);
  return tropical_complex(M.c_fan, seeds);
}

// Compares the homology of F_p on X' with the homology of the
// monodromy-invariant system on the closed star, for p = 0..pmax, and runs
// the stalk isomorphism check at the barycentroid of every fine cell of the
// open star.
inline PushforwardComparison pushforward_compare(const LocalModel& M,
                                                 size_t pmax) {
  PushforwardComparison out;
  TropicalComplex X = domain_tropical_complex(M);
  for (size_t p = 0; p <= pmax; ++p) {
    CoefficientData F = tangent_cosheaf(X, p);
    IamsSystem B = iams_system(M, p);
    auto dh = cellular_homology(F.sys, false);
    auto dbm = cellular_homology(F.sys, true);
    auto bh = cellular_homology(B.sys, false);
    auto bbm = cellular_homology(B.sys, true);
    int top = std::max(F.sys.top_dim(), B.sys.top_dim());
    for (int q = 0; q <= top; ++q) {
      auto get = [&](std::map<int, FgAbelianGroup>& t) {
        return t.count(q) ? t[q] : FgAbelianGroup{};
      };
      out.domain_h[{p, q}] = get(dh);
      out.domain_hbm[{p, q}] = get(dbm);
      out.base_h[{p, q}] = get(bh);
      out.base_hbm[{p, q}] = get(bbm);
      out.tables_equal &= out.domain_h[{p, q}] == out.base_h[{p, q}];
      out.tables_equal &= out.domain_hbm[{p, q}] == out.base_hbm[{p, q}];
    }
    if (p == 1) {
      for (size_t c = 0; c < B.fine.cells.size(); ++c) {
        const auto& ch = M.star_chains[B.chain[c]];
        if (std::find(ch.begin(), ch.end(), M.xi_cell) == ch.end()) continue;
        StalkCheck sc = stalk_isomorphism_check(
            M, B.fine.cells[c].barycentroid(), p);
        out.stalks_ok &= sc.iso;
        out.cell_checks.push_back(sc);
      }
    }
  }
  return out;
}

}  // namespace tropcontract
