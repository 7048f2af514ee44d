#pragma once

// Local models of tropical contractions.  From the defining data
// (Delta_i, check_Delta_i, xi, P) this module derives the tropical
// polynomials f_i, the cone C and its face fan, the subdivision of the
// base complex by chain simplices, the covering pieces V_tau of the
// domain X', and the contraction map delta = t_tau . pi_{C_tau}.  It also
// classifies goodness, produces the cell complex of X' with its cell map
// onto the closed star of the distinguished cell, computes the two stalk
// presentations of the coefficient groups and checks that the projection
// away from the vertex directions identifies them, and provides the
// W-set families of the technical covering lemma together with an exact
// 2D union-equality checker used to verify that lemma.

#include <cassert>
#include <functional>
#include <map>
#include <string>

#include "toric.hpp"
#include "tropical.hpp"

namespace tropcontract {

// ---------------------------------------------------------------------------
// Finite polyhedral complexes
// ---------------------------------------------------------------------------

struct PolyComplex {
  size_t ambient = 0;
  std::vector<Polyhedron> cells;  // face-closed, sorted by (dim, V-rep)
  std::vector<int> cell_dim;
  // face_matrix[a][b]: cells[a] is contained in cells[b].  Within a valid
  // complex containment of cells coincides with the face relation.
  std::vector<std::vector<char>> face_matrix;

  bool is_face(size_t a, size_t b) const { return face_matrix[a][b] != 0; }

  int dim() const {
    int d = -1;
    for (int c : cell_dim) d = std::max(d, c);
    return d;
  }

  std::optional<size_t> find(const Polyhedron& P) const {
    for (size_t i = 0; i < cells.size(); ++i)
      if (cells[i] == P) return i;
    return std::nullopt;
  }

  std::vector<size_t> maximal() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < cells.size(); ++i) {
      bool top = true;
      for (size_t j = 0; j < cells.size() && top; ++j)
        if (j != i && is_face(i, j)) top = false;
      if (top) out.push_back(i);
    }
    return out;
  }
};

namespace detail {

inline size_t binomial(size_t n, size_t p) {
  if (p > n) return 0;
  size_t out = 1;
  for (size_t i = 0; i < p; ++i) out = out * (n - i) / (i + 1);
  return out;
}

inline bool cell_less(const Polyhedron& a, const Polyhedron& b) {
  int da = a.dim(), db = b.dim();
  if (da != db) return da < db;
  if (a.vertices != b.vertices) return a.vertices < b.vertices;
  if (a.rays != b.rays) return a.rays < b.rays;
  return a.lineality < b.lineality;
}

}  // namespace detail

inline PolyComplex make_complex(const std::vector<Polyhedron>& tops,
                                size_t ambient) {
  PolyComplex C;
  C.ambient = ambient;
  for (const auto& t : tops) {
    if (t.is_empty) continue;
    for (const auto& f : face_lattice(t))
      if (!C.find(f.poly)) C.cells.push_back(f.poly);
  }
  std::sort(C.cells.begin(), C.cells.end(), detail::cell_less);
  C.cells.erase(std::unique(C.cells.begin(), C.cells.end()), C.cells.end());
  size_t m = C.cells.size();
  C.cell_dim.resize(m);
  for (size_t i = 0; i < m; ++i) C.cell_dim[i] = C.cells[i].dim();
  C.face_matrix.assign(m, std::vector<char>(m, 0));
  for (size_t a = 0; a < m; ++a)
    for (size_t b = 0; b < m; ++b)
      C.face_matrix[a][b] = is_face_of(C.cells[a], C.cells[b]) ? 1 : 0;
  return C;
}

namespace detail {

inline bool relint_contains(const Polyhedron& P, const QVec& x) {
  if (P.is_empty) return false;
  for (const auto& h : P.facets)
    if (dot(h.a, x) <= h.b) return false;
  for (const auto& h : P.affine_equalities)
    if (dot(h.a, x) != h.b) return false;
  return true;
}

}  // namespace detail

// Geometric face test: F equals G, or F is cut out of G by a supporting
// functional (the sum of G's facet normals active on F).
inline bool geometric_face(const Polyhedron& F, const Polyhedron& G) {
  if (F.is_empty) return true;
  if (F == G) return true;
  if (!is_face_of(F, G)) return false;
  QVec x = F.relint_point();
  QVec w(G.ambient, 0);
  bool any = false;
  for (const auto& h : G.facets)
    if (dot(h.a, x) == h.b) {
      w = w + to_qvec(h.a);
      any = true;
    }
  if (!any) return false;
  return argmin_face(G, w) == F;
}

// A list of cells forms a complex when every pairwise intersection is a
// common face.  (make_complex only closes under faces; this validates.)
inline bool is_valid_complex(const PolyComplex& C) {
  for (size_t a = 0; a < C.cells.size(); ++a)
    for (size_t b = a + 1; b < C.cells.size(); ++b) {
      Polyhedron R = intersect(C.cells[a], C.cells[b]);
      if (R.is_empty) continue;
      if (!geometric_face(R, C.cells[a]) || !geometric_face(R, C.cells[b]))
        return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Exact equality of unions of bounded polyhedra in the plane
// ---------------------------------------------------------------------------
// Membership in a finite union of polytopes is constant on each open face
// of the arrangement of all their facet/equality lines, so comparing the
// two unions on one exact sample per arrangement face decides equality.

inline bool unions_equal_2d(const std::vector<Polyhedron>& A,
                            const std::vector<Polyhedron>& B) {
  std::vector<std::pair<ZVec, Rat>> lines;
  auto add_line = [&](const ZVec& a, const Rat& b) {
    ZVec p = primitive(a, true);
    if (is_zero(p)) return;
    Rat scale;
    if (p[0] != 0)
      scale = Rat(a[0]) / Rat(p[0]);
    else
      scale = Rat(a[1]) / Rat(p[1]);
    std::pair<ZVec, Rat> key{p, b / scale};
    if (std::find(lines.begin(), lines.end(), key) == lines.end())
      lines.push_back(key);
  };
  std::vector<QVec> points;
  auto add_point = [&](const QVec& q) {
    if (std::find(points.begin(), points.end(), q) == points.end())
      points.push_back(q);
  };
  size_t nonempty = 0;
  for (const auto* fam : {&A, &B})
    for (const auto& P : *fam) {
      if (P.is_empty) continue;
      ++nonempty;
      if (!P.is_bounded() || P.ambient != 2)
        throw std::invalid_argument(
            "unions_equal_2d: inputs must be bounded and planar");
      for (const auto& h : P.facets) add_line(h.a, h.b);
      for (const auto& h : P.affine_equalities) add_line(h.a, h.b);
      for (const auto& v : P.vertices) add_point(v);
    }
  if (nonempty == 0) return true;
  auto in_union = [](const std::vector<Polyhedron>& U, const QVec& x) {
    for (const auto& P : U)
      if (!P.is_empty && P.contains(x)) return true;
    return false;
  };
  // Pairwise line intersections.
  for (size_t i = 0; i < lines.size(); ++i)
    for (size_t j = i + 1; j < lines.size(); ++j) {
      const auto& [a1, b1] = lines[i];
      const auto& [a2, b2] = lines[j];
      Rat det = Rat(a1[0]) * Rat(a2[1]) - Rat(a1[1]) * Rat(a2[0]);
      if (det == 0) continue;
      add_point({(b1 * Rat(a2[1]) - Rat(a1[1]) * b2) / det,
                 (Rat(a1[0]) * b2 - b1 * Rat(a2[0])) / det});
    }
  std::vector<QVec> samples = points;
  std::vector<std::pair<QVec, ZVec>> on_line;  // sample with its line normal
  for (const auto& [a, b] : lines) {
    std::vector<QVec> on;
    for (const auto& p : points)
      if (dot(a, p) == b) on.push_back(p);
    QVec u = {Rat(-a[1]), Rat(a[0])};  // direction of the line
    if (on.empty()) {
      QVec base(2, 0);
      if (a[0] != 0)
        base[0] = b / Rat(a[0]);
      else
        base[1] = b / Rat(a[1]);
      on.push_back(base);
    }
    std::sort(on.begin(), on.end(), [&](const QVec& x, const QVec& y) {
      return dot(u, x) < dot(u, y);
    });
    std::vector<QVec> line_samples;
    for (size_t i = 0; i + 1 < on.size(); ++i)
      line_samples.push_back(Rat(1, 2) * (on[i] + on[i + 1]));
    line_samples.push_back(on.front() - u);
    line_samples.push_back(on.back() + u);
    for (const auto& s : line_samples) on_line.push_back({s, a});
  }
  for (const auto& [s, a] : on_line) samples.push_back(s);
  // Off-line samples on both sides of each 1-dimensional sample, stepping
  // less than half the distance to the nearest crossing line.
  for (const auto& [s, a] : on_line) {
    QVec aq = to_qvec(a);
    Rat eps(1);
    bool have = false;
    for (const auto& [c, d] : lines) {
      Rat ca = dot(c, aq);
      Rat cs = dot(c, s);
      if (ca == 0 || cs == d) continue;
      Rat t = (d - cs) / ca;
      if (t < 0) t = -t;
      if (!have || t < eps) eps = t;
      have = true;
    }
    eps = eps / 2;
    samples.push_back(s + eps * aq);
    samples.push_back(s - eps * aq);
  }
  for (const auto& s : samples)
    if (in_union(A, s) != in_union(B, s)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// W-set families of the technical covering lemma
// ---------------------------------------------------------------------------

struct WtFamily {
  PolyComplex faces;               // face complex of Delta
  std::vector<size_t> taus;        // indices of the faces of Delta0
  std::vector<std::vector<Polyhedron>> w;   // W_tau(F): chain simplices
  std::vector<Polyhedron> shift;            // sum_i phi_{Delta0,Delta_i}(tau)
  std::vector<std::vector<Polyhedron>> wt;  // t*W_tau(F) + shift
};

inline WtFamily w_sets(
    const Polyhedron& Delta, const Polyhedron& Delta0,
    const std::vector<Polyhedron>& summands, const Rat& t,
    const Polyhedron& F,
    const std::vector<std::pair<Polyhedron, QVec>>& anchor_overrides = {}) {
  if (t <= 0) throw std::invalid_argument("w_sets: t must be positive");
  WtFamily out;
  out.faces = make_complex({Delta}, Delta.ambient);
  const PolyComplex& PC = out.faces;
  auto d0 = PC.find(Delta0);
  auto fI = PC.find(F);
  if (!d0 || !fI)
    throw std::invalid_argument("w_sets: Delta0 and F must be faces of Delta");
  if (!PC.is_face(*d0, *fI))
    throw std::invalid_argument("w_sets: F must contain Delta0");
  std::vector<QVec> anchor(PC.cells.size());
  for (size_t i = 0; i < PC.cells.size(); ++i)
    anchor[i] = PC.cells[i].barycentroid();
  for (const auto& [cell, a] : anchor_overrides) {
    auto idx = PC.find(cell);
    if (!idx) throw std::invalid_argument("w_sets: anchor for a non-cell");
    if (!detail::relint_contains(PC.cells[*idx], a))
      throw std::invalid_argument("w_sets: anchor outside relative interior");
    anchor[*idx] = a;
  }
  for (size_t tau = 0; tau < PC.cells.size(); ++tau) {
    if (!PC.is_face(tau, *d0)) continue;
    out.taus.push_back(tau);
    // Chains tau < tau_1 < ... < tau_l with every element a face of F.
    std::vector<std::vector<size_t>> chains;
    std::vector<size_t> cur = {tau};
    std::function<void(size_t)> extend = [&](size_t last) {
      chains.push_back(cur);
      for (size_t nxt = 0; nxt < PC.cells.size(); ++nxt) {
        if (nxt == last || !PC.is_face(last, nxt) || !PC.is_face(nxt, *fI))
          continue;
        cur.push_back(nxt);
        extend(nxt);
        cur.pop_back();
      }
    };
    extend(tau);
    std::vector<Polyhedron> simplices;
    for (const auto& ch : chains) {
      std::vector<QVec> pts;
      for (size_t c : ch) pts.push_back(anchor[c]);
      simplices.push_back(polytope_from_points(pts, Delta.ambient));
    }
    Polyhedron shift = polytope_from_points({QVec(Delta.ambient, 0)},
                                            Delta.ambient);
    for (const auto& S : summands)
      shift = minkowski_sum(shift, face_map_phi(Delta0, S, PC.cells[tau]));
    std::vector<Polyhedron> wt;
    for (const auto& s : simplices)
      wt.push_back(minkowski_sum(dilate(s, t), shift));
    out.w.push_back(simplices);
    out.shift.push_back(shift);
    out.wt.push_back(wt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contraction data
// ---------------------------------------------------------------------------

enum class GoodnessClass { NotGood, Good, VeryGood };

struct ContractionData {
  size_t r = 0;   // number of summands
  size_t dp = 0;  // dim N' (= complex dimension d of the base)
  size_t n = 0;   // ambient dimension dp + r
  std::vector<Polyhedron> delta;            // Delta_i in M'_R
  std::vector<Polyhedron> check_delta;      // check_Delta_i in N'_R
  std::vector<Polyhedron> check_delta_emb;  // embedded in R^n
  std::vector<TropicalPolynomial> f;        // f_i on R^n, coefficients 0
  std::vector<ZVec> d_basis;                // lattice basis of D cap Z^n
  Polyhedron xi;                            // distinguished cell, in R^n
};

namespace detail {

inline Polyhedron embed_poly(const Polyhedron& P, size_t n) {
  auto pad_q = [&](const QVec& v) {
    QVec w(n, 0);
    for (size_t i = 0; i < v.size(); ++i) w[i] = v[i];
    return w;
  };
  auto pad_z = [&](const ZVec& v) {
    ZVec w(n, 0);
    for (size_t i = 0; i < v.size(); ++i) w[i] = v[i];
    return w;
  };
  std::vector<QVec> vs;
  std::vector<ZVec> rs, ls;
  for (const auto& v : P.vertices) vs.push_back(pad_q(v));
  for (const auto& r : P.rays) rs.push_back(pad_z(r));
  for (const auto& l : P.lineality) ls.push_back(pad_z(l));
  return polyhedron_from_vrep(vs, rs, ls, n);
}

// Generator (w, e_i) of cone(phi_i(tau) x {e_i}) for a vertex w of an
// embedded face of check_Delta_i.
inline ZVec lift_vertex(const QVec& w, size_t dp, size_t i) {
  ZVec g = clear_denominators(w);
  g[dp + i] += 1;
  return g;
}

}  // namespace detail

inline ContractionData contraction_data(
    const std::vector<Polyhedron>& deltas,
    const std::vector<Polyhedron>& check_deltas,
    const std::optional<Polyhedron>& xi_opt = std::nullopt) {
  ContractionData D;
  D.r = deltas.size();
  if (D.r == 0 || check_deltas.size() != D.r)
    throw std::invalid_argument(
        "contraction_data: need matching nonempty polytope families");
  D.dp = deltas[0].ambient;
  D.n = D.dp + D.r;
  for (const auto& P : deltas)
    if (P.ambient != D.dp || P.is_empty || !P.is_bounded() ||
        !P.is_lattice_polytope())
      throw std::invalid_argument(
          "contraction_data: each Delta_i must be a lattice polytope in M'");
  for (const auto& P : check_deltas)
    if (P.ambient != D.dp || P.is_empty || !P.is_bounded() ||
        !P.is_lattice_polytope())
      throw std::invalid_argument(
          "contraction_data: each check_Delta_i must be a lattice polytope "
          "in N'");
  // Pairing orthogonality: <m, n> = 0 for all m in Delta_i, n in
  // check_Delta_j.
  for (const auto& Dm : deltas)
    for (const auto& Dn : check_deltas)
      for (const auto& m : Dm.vertices)
        for (const auto& v : Dn.vertices)
          if (dot(m, v) != 0)
            throw std::invalid_argument(
                "contraction_data: pairing orthogonality <m,n>=0 violated");
  D.delta = deltas;
  D.check_delta = check_deltas;
  for (size_t i = 0; i < D.r; ++i)
    D.check_delta_emb.push_back(detail::embed_poly(check_deltas[i], D.n));
  // f_i = min over A_i = {0} cup (M cap (Delta_i x {-e_i*})).
  for (size_t i = 0; i < D.r; ++i) {
    TropicalPolynomial f;
    f.d = D.n;
    f.monomials.push_back(ZVec(D.n, 0));
    f.coeffs.push_back(Rat(0));
    for (const auto& m : lattice_points(deltas[i])) {
      ZVec mm(D.n, 0);
      for (size_t j = 0; j < D.dp; ++j) mm[j] = m[j];
      mm[D.dp + i] = -1;
      f.monomials.push_back(mm);
      f.coeffs.push_back(Rat(0));
    }
    D.f.push_back(f);
  }
  // D = {n : <m, n> = 0 for all nonzero m in every A_i}.
  ZMat rows;
  for (const auto& f : D.f)
    for (const auto& m : f.monomials)
      if (!is_zero(m)) rows.push_back(m);
  D.d_basis = integer_kernel(rows);
  // xi: default is the Minkowski sum of the check_Delta_i.
  if (xi_opt) {
    D.xi = *xi_opt;
    if (D.xi.ambient != D.n || D.xi.is_empty || !D.xi.is_bounded())
      throw std::invalid_argument(
          "contraction_data: xi must be a nonempty polytope in N_R");
    QMat dspan;
    for (const auto& b : D.d_basis) dspan.push_back(to_qvec(b));
    for (const auto& v : D.xi.vertices)
      if (!in_row_space(dspan, v))
        throw std::invalid_argument(
            "contraction_data: xi is not contained in the subspace D");
  } else {
    Polyhedron sum = polytope_from_points({QVec(D.n, 0)}, D.n);
    for (const auto& P : D.check_delta_emb) sum = minkowski_sum(sum, P);
    D.xi = sum;
  }
  // Condition (refinement): the normal fan of xi refines the normal fan
  // of every check_Delta_i, i.e. the face maps phi_{xi, check_Delta_i}
  // are defined on every face of xi.
  for (const auto& face : face_lattice(D.xi))
    for (size_t i = 0; i < D.r; ++i) {
      try {
        face_map_phi(D.xi, D.check_delta_emb[i], face.poly);
      } catch (const std::domain_error&) {
        throw std::invalid_argument(
            "contraction_data: condition (refinement) violated: the normal "
            "fan of xi does not refine that of a check_Delta_i");
      }
    }
  return D;
}

inline GoodnessClass classify_goodness(const ContractionData& D) {
  auto assess = [&](const std::vector<Polyhedron>& fam, bool& direct,
                    bool& lattice_direct) {
    std::vector<ZVec> all;
    size_t rank_sum = 0;
    for (const auto& P : fam) {
      auto t = tangent_lattice(P);
      rank_sum += t.size();
      all.insert(all.end(), t.begin(), t.end());
    }
    std::vector<ZVec> basis = lattice_basis(all, D.dp);
    direct = basis.size() == rank_sum;
    lattice_direct = direct && basis == saturate(all, D.dp);
  };
  bool d1, l1, d2, l2;
  assess(D.delta, d1, l1);
  assess(D.check_delta, d2, l2);
  if (l1 && l2) return GoodnessClass::VeryGood;
  if (d1 && d2) return GoodnessClass::Good;
  return GoodnessClass::NotGood;
}

// ---------------------------------------------------------------------------
// Local models
// ---------------------------------------------------------------------------

struct LocalModel {
  ContractionData data;
  PolyComplex P;        // the complex of Condition (local-contraction)
  size_t xi_cell = 0;   // index of xi in P
  std::vector<size_t> xi_faces;  // cells tau with tau a face of xi
  std::vector<QVec> anchor;      // a_tau per cell of P

  // theta: minimal cell of P_B containing each cell of P.
  std::vector<RefinementCell> b_cells;
  std::vector<size_t> theta;

  // Cells of P_{X(f_1..f_r)} with bounded-part data.
  std::vector<RefinementCell> x_cells;
  std::vector<TildeSigma> x_tilde;
  std::vector<size_t> x_maximal;

  // Per tau (a face of xi): the face maps, the cone C_tau as a face of C,
  // its quotient, and the chain simplices spanning W_tau.
  std::map<size_t, std::vector<Polyhedron>> phi;
  std::map<size_t, std::vector<ZVec>> ctau_rays;
  std::map<size_t, size_t> ctau_cone;  // index in c_fan
  std::map<size_t, QuotientWithSection> ctau_quot;
  std::map<size_t, std::vector<std::vector<size_t>>> w_chains;
  std::map<size_t, std::vector<Polyhedron>> w_simplices;

  // The closed star of a_xi in the chain subdivision: cells are chains in
  // P every element of which is comparable with xi.
  std::vector<std::vector<size_t>> star_chains;
  std::vector<Polyhedron> star_simplices;

  // Fan of the faces of C and the monomials m_i^sigma on maximal cells.
  Fan c_fan;
  size_t c_cone = 0;
  std::map<size_t, std::vector<ZVec>> m_sigma;  // per maximal cell of P

  // Covering pieces of X': (W_tau cap tilde sigma) + cone(phi_i(tau) x e_i).
  struct Piece {
    size_t tau = 0;    // cell index in P
    size_t sigma = 0;  // index into x_cells
    size_t chain = 0;  // index into w_chains[tau]
    Polyhedron poly;
  };
  std::vector<Piece> pieces;
};

namespace detail {

// All strictly ascending chains in the face order of a complex whose
// elements satisfy a predicate, starting from a given cell.
inline void ascending_chains(const PolyComplex& P, size_t start,
                             const std::function<bool(size_t)>& keep,
                             std::vector<std::vector<size_t>>& out) {
  std::vector<size_t> cur = {start};
  std::function<void(size_t)> extend = [&](size_t last) {
    out.push_back(cur);
    for (size_t nxt = 0; nxt < P.cells.size(); ++nxt) {
      if (nxt == last || !P.is_face(last, nxt) || !keep(nxt)) continue;
      cur.push_back(nxt);
      extend(nxt);
      cur.pop_back();
    }
  };
  extend(start);
}

}  // namespace detail

// The default complex for bare contraction data: the maximal cells of
// P_B cut to the strip xi + T(xi)^perp (so that xi is a common face) and
// a bounding box (so that the support is compact).
inline std::vector<Polyhedron> default_complex_tops(const ContractionData& D) {
  std::vector<RefinementCell> cr = common_refinement(D.f);
  std::vector<Polyhedron> b_tops;
  int bdim = -1;
  for (const auto& c : cr) {
    bool in_b = true;
    for (size_t i = 0; i < D.r; ++i) {
      const auto& S = c.argmin[i];
      bool has_zero =
          std::find(S.begin(), S.end(), *D.f[i].zero_monomial()) != S.end();
      in_b &= has_zero && S.size() >= 2;
    }
    if (!in_b) continue;
    b_tops.push_back(c.poly);
    bdim = std::max(bdim, c.poly.dim());
  }
  // Strip xi + T(xi)^perp.
  std::vector<ZVec> tangent = tangent_lattice(D.xi);
  std::vector<ZVec> orth;
  if (tangent.empty()) {
    for (size_t i = 0; i < D.n; ++i) {
      ZVec e(D.n, 0);
      e[i] = 1;
      orth.push_back(e);
    }
  } else {
    ZMat T;
    for (const auto& t : tangent) T.push_back(t);
    orth = integer_kernel(T);
  }
  Polyhedron strip = polyhedron_from_vrep(D.xi.vertices, {}, orth, D.n);
  // Bounding box.
  Rat w(1);
  auto widen = [&](const QVec& v) {
    for (const auto& c : v) {
      Rat a = c < 0 ? -c : c;
      if (a + 1 > w) w = a + 1;
    }
  };
  for (const auto& c : b_tops)
    for (const auto& v : c.vertices) widen(v);
  for (const auto& v : D.xi.vertices) widen(v);
  std::vector<std::pair<ZVec, Rat>> box;
  for (size_t i = 0; i < D.n; ++i) {
    ZVec e(D.n, 0);
    e[i] = 1;
    box.push_back({e, -w});
    ZVec me(D.n, 0);
    me[i] = -1;
    box.push_back({me, -w});
  }
  Polyhedron boxP = polyhedron_from_hrep(box, {}, D.n);
  std::vector<Polyhedron> tops;
  for (const auto& c : b_tops) {
    if (c.dim() != bdim) continue;
    Polyhedron piece = intersect(intersect(c, strip), boxP);
    if (!piece.is_empty && piece.dim() == bdim) tops.push_back(piece);
  }
  return tops;
}

inline LocalModel build_local_model(
    const ContractionData& D,
    const std::optional<PolyComplex>& complex_opt = std::nullopt,
    const std::vector<std::pair<Polyhedron, QVec>>& anchor_overrides = {}) {
  LocalModel M;
  M.data = D;
  size_t n = D.n;
  int d = (int)D.dp;
  M.P = complex_opt ? *complex_opt
                    : make_complex(default_complex_tops(D), n);
  const PolyComplex& P = M.P;
  size_t m = P.cells.size();
  if (m == 0)
    throw std::invalid_argument("build_local_model: empty complex");

  // ---- Condition (local-contraction) ----
  // Clause 1 (manifold support): pure dimension and no ridge shared by
  // three or more maximal cells.
  std::vector<size_t> maximal = P.maximal();
  for (size_t c : maximal)
    if (P.cell_dim[c] != d)
      throw std::invalid_argument(
          "build_local_model: condition (local-contraction 1) violated: "
          "support is not pure of dimension d");
  auto max_cofaces = [&](size_t rho) {
    size_t count = 0;
    for (size_t c : maximal)
      if (P.is_face(rho, c)) ++count;
    return count;
  };
  for (size_t rho = 0; rho < m; ++rho)
    if (P.cell_dim[rho] == d - 1 && max_cofaces(rho) > 2)
      throw std::invalid_argument(
          "build_local_model: condition (local-contraction 1) violated: "
          "a ridge lies in more than two maximal cells");
  // Clause 2: xi is a cell of P.
  auto xi_idx = P.find(D.xi);
  if (!xi_idx)
    throw std::invalid_argument(
        "build_local_model: condition (local-contraction 2) violated: xi "
        "is not a cell of the complex");
  M.xi_cell = *xi_idx;
  // Clause 3: every cell shares a coface with xi.
  for (size_t tau = 0; tau < m; ++tau) {
    bool ok = false;
    for (size_t c : maximal)
      if (P.is_face(M.xi_cell, c) && P.is_face(tau, c)) ok = true;
    if (!ok)
      throw std::invalid_argument(
          "build_local_model: condition (local-contraction 3) violated: a "
          "cell has no common coface with xi");
  }
  // Clause 4: cells above xi are interior (their ridges are shared by
  // exactly two maximal cells).
  for (size_t tau = 0; tau < m; ++tau) {
    if (!P.is_face(M.xi_cell, tau) || P.cell_dim[tau] == d) continue;
    for (size_t rho = 0; rho < m; ++rho)
      if (P.cell_dim[rho] == d - 1 && P.is_face(tau, rho) &&
          max_cofaces(rho) != 2)
        throw std::invalid_argument(
            "build_local_model: condition (local-contraction 4) violated: "
            "a cell above xi touches the boundary of the support");
  }

  // ---- Condition (local-contraction'): theta into P_B ----
  for (const auto& c : common_refinement(D.f)) {
    bool in_b = true;
    for (size_t i = 0; i < D.r; ++i) {
      const auto& S = c.argmin[i];
      bool has_zero =
          std::find(S.begin(), S.end(), *D.f[i].zero_monomial()) != S.end();
      in_b &= has_zero && S.size() >= 2;
    }
    if (in_b) M.b_cells.push_back(c);
  }
  M.theta.resize(m);
  for (size_t tau = 0; tau < m; ++tau) {
    std::optional<size_t> best;
    for (size_t b = 0; b < M.b_cells.size(); ++b) {
      if (!is_face_of(P.cells[tau], M.b_cells[b].poly)) continue;
      if (!best || M.b_cells[b].poly.dim() < M.b_cells[*best].poly.dim())
        best = b;
    }
    if (!best)
      throw std::invalid_argument(
          "build_local_model: condition (local-contraction') violated: a "
          "cell of the complex does not lie in the bend locus B");
    M.theta[tau] = *best;
  }

  // ---- Anchors ----
  M.anchor.resize(m);
  for (size_t tau = 0; tau < m; ++tau)
    M.anchor[tau] = P.cells[tau].barycentroid();
  for (const auto& [cell, a] : anchor_overrides) {
    auto idx = P.find(cell);
    if (!idx)
      throw std::invalid_argument("build_local_model: anchor for a non-cell");
    if (!detail::relint_contains(P.cells[*idx], a))
      throw std::invalid_argument(
          "build_local_model: anchor outside the relative interior");
    M.anchor[*idx] = a;
  }

  // ---- Faces of xi: face maps, cones C_tau, quotients ----
  std::vector<ZVec> c_gens;
  for (size_t i = 0; i < D.r; ++i) {
    auto g = lifted_cone_gens(D.check_delta[i], i, D.r);
    c_gens.insert(c_gens.end(), g.begin(), g.end());
  }
  M.c_fan = fan_from_cones(n, {c_gens});
  M.c_cone = *M.c_fan.find_cone(detail::pointed_cone_rays(c_gens, n));
  for (size_t tau = 0; tau < m; ++tau) {
    if (!P.is_face(tau, M.xi_cell)) continue;
    M.xi_faces.push_back(tau);
    std::vector<Polyhedron> ph;
    std::vector<ZVec> gens;
    for (size_t i = 0; i < D.r; ++i) {
      Polyhedron face = face_map_phi(D.xi, D.check_delta_emb[i],
                                     P.cells[tau]);
      ph.push_back(face);
      for (const auto& v : face.vertices)
        gens.push_back(detail::lift_vertex(v, D.dp, i));
    }
    M.phi[tau] = ph;
    std::vector<ZVec> rays = detail::pointed_cone_rays(gens, n);
    auto cone = M.c_fan.find_cone(rays);
    if (!cone)
      throw std::logic_error(
          "build_local_model: C_tau is not a face of C");
    M.ctau_rays[tau] = rays;
    M.ctau_cone[tau] = *cone;
    M.ctau_quot[tau] = quotient_with_section(saturate(gens, n), n);
  }

  // ---- Condition (toric): charts at the vertices of xi are immersive
  // and pairwise integrally compatible on shared maximal cells. ----
  std::vector<size_t> xi_vertices;
  for (size_t tau : M.xi_faces)
    if (P.cell_dim[tau] == 0) xi_vertices.push_back(tau);
  for (size_t v : xi_vertices) {
    const ZMat& proj = M.ctau_quot[v].projection;
    for (size_t c : maximal) {
      if (!P.is_face(v, c)) continue;
      std::vector<ZVec> tl = tangent_lattice(P.cells[c]);
      QMat img;
      for (const auto& t : tl) img.push_back(to_qvec(mul(proj, t)));
      if (rank(img) != tl.size())
        throw std::invalid_argument(
            "build_local_model: condition (toric) violated: a chart "
            "projection is not injective on a maximal cell");
    }
  }
  for (size_t a = 0; a < xi_vertices.size(); ++a)
    for (size_t b = a + 1; b < xi_vertices.size(); ++b) {
      size_t va = xi_vertices[a], vb = xi_vertices[b];
      for (size_t c : maximal) {
        if (!P.is_face(va, c) || !P.is_face(vb, c)) continue;
        std::vector<ZVec> tl = tangent_lattice(P.cells[c]);
        auto check_dir = [&](size_t v1, size_t v2) {
          const ZMat& p1 = M.ctau_quot[v1].projection;
          const ZMat& p2 = M.ctau_quot[v2].projection;
          std::vector<ZVec> img1;
          for (const auto& t : tl) img1.push_back(mul(p1, t));
          QMat A;  // columns: images of the tangent basis under p1
          A = qmat(rows(p1), tl.size());
          for (size_t j = 0; j < tl.size(); ++j)
            for (size_t i = 0; i < rows(p1); ++i) A[i][j] = Rat(img1[j][i]);
          for (const auto& l : saturate(img1, rows(p1))) {
            auto coeff = solve_q(A, to_qvec(l));
            if (!coeff)
              throw std::logic_error("build_local_model: chart solve failed");
            QVec lift(D.n, 0);
            for (size_t j = 0; j < tl.size(); ++j)
              lift = lift + (*coeff)[j] * to_qvec(tl[j]);
            QVec img2 = mul(p2, lift);
            for (const auto& x : img2)
              if (x.get_den() != 1)
                throw std::invalid_argument(
                    "build_local_model: condition (toric) violated: chart "
                    "transition is not integral");
          }
        };
        check_dir(va, vb);
        check_dir(vb, va);
      }
    }

  // ---- Chain subdivision: W_tau simplices and the closed star of a_xi ----
  auto comparable_with_xi = [&](size_t c) {
    return P.is_face(c, M.xi_cell) || P.is_face(M.xi_cell, c);
  };
  for (size_t tau : M.xi_faces) {
    std::vector<std::vector<size_t>> chains;
    detail::ascending_chains(P, tau, comparable_with_xi, chains);
    std::vector<std::vector<size_t>> keep;
    for (const auto& ch : chains)
      if (std::find(ch.begin(), ch.end(), M.xi_cell) != ch.end())
        keep.push_back(ch);
    std::vector<Polyhedron> simplices;
    for (const auto& ch : keep) {
      std::vector<QVec> pts;
      for (size_t c : ch) pts.push_back(M.anchor[c]);
      simplices.push_back(polytope_from_points(pts, n));
    }
    M.w_chains[tau] = keep;
    M.w_simplices[tau] = simplices;
  }
  for (size_t start = 0; start < m; ++start) {
    if (!comparable_with_xi(start)) continue;
    bool minimal_start = true;  // avoid duplicating subchains
    std::vector<std::vector<size_t>> chains;
    detail::ascending_chains(P, start, comparable_with_xi, chains);
    for (const auto& ch : chains) {
      if (std::find(M.star_chains.begin(), M.star_chains.end(), ch) ==
          M.star_chains.end()) {
        M.star_chains.push_back(ch);
        std::vector<QVec> pts;
        for (size_t c : ch) pts.push_back(M.anchor[c]);
        M.star_simplices.push_back(polytope_from_points(pts, n));
      }
    }
    (void)minimal_start;
  }

  // ---- Cells of P_X and the covering pieces ----
  M.x_cells = stable_intersection_support(D.f);
  for (const auto& c : M.x_cells) M.x_tilde.push_back(tilde_sigma(D.f, c));
  for (size_t i = 0; i < M.x_cells.size(); ++i) {
    bool top = true;
    for (size_t j = 0; j < M.x_cells.size() && top; ++j) {
      if (i == j) continue;
      if (M.x_cells[i].poly == M.x_cells[j].poly) {
        top = j > i;  // dedupe identical cells
        continue;
      }
      if (is_face_of(M.x_cells[i].poly, M.x_cells[j].poly)) top = false;
    }
    if (top) M.x_maximal.push_back(i);
  }
  // m_i^sigma on the maximal cells of P.
  for (size_t c : maximal) {
    std::vector<ZVec> ms;
    for (size_t i = 0; i < D.r; ++i) {
      auto arg = D.f[i].evaluate(M.anchor[c]).second;
      std::vector<ZVec> nz;
      for (size_t j : arg)
        if (!is_zero(D.f[i].monomials[j])) nz.push_back(D.f[i].monomials[j]);
      if (nz.empty())
        throw std::logic_error(
            "build_local_model: no dual monomial on a maximal cell");
      // The dual cell is a segment from 0: take its far endpoint.
      ZVec best = nz[0];
      ZVec dir = primitive(best);
      for (const auto& cand : nz) {
        if (primitive(cand) != dir)
          throw std::logic_error(
              "build_local_model: dual cell of a maximal cell is not a "
              "segment through 0");
        // Compare multiples along dir.
        size_t k = 0;
        while (dir[k] == 0) ++k;
        if (cand[k] * dir[k] > best[k] * dir[k]) best = cand;
      }
      ms.push_back(best);
    }
    M.m_sigma[c] = ms;
  }
  // Pieces (W_tau cap tilde sigma) + cone_T(U phi_i(tau) x e_i).
  for (size_t tau : M.xi_faces) {
    for (size_t sc = 0; sc < M.x_maximal.size(); ++sc) {
      size_t sigma = M.x_maximal[sc];
      const TildeSigma& ts = M.x_tilde[sigma];
      if (ts.tilde.is_empty) continue;
      std::vector<ZVec> cone_gens;
      for (size_t i : ts.I)
        for (const auto& v : M.phi[tau][i].vertices)
          cone_gens.push_back(detail::lift_vertex(v, D.dp, i));
      for (size_t ch = 0; ch < M.w_simplices[tau].size(); ++ch) {
        Polyhedron Q = intersect(M.w_simplices[tau][ch], ts.tilde);
        if (Q.is_empty) continue;
        std::vector<ZVec> rays = Q.rays;
        rays.insert(rays.end(), cone_gens.begin(), cone_gens.end());
        Polyhedron piece =
            polyhedron_from_vrep(Q.vertices, rays, Q.lineality, n);
        bool dup = false;
        for (const auto& pr : M.pieces)
          if (pr.tau == tau && pr.poly == piece) dup = true;
        if (!dup) M.pieces.push_back({tau, sigma, ch, piece});
      }
    }
  }
  return M;
}

// ---------------------------------------------------------------------------
// The contraction map
// ---------------------------------------------------------------------------

// The unique point of W_tau over y (Lemma inj): solved cell by cell as
// the fiber of the projection over each chain simplex.
inline QVec t_tau_section(const LocalModel& M, size_t tau, const QVec& y) {
  auto it = M.w_simplices.find(tau);
  if (it == M.w_simplices.end())
    throw std::invalid_argument("t_tau_section: tau is not a face of xi");
  const ZMat& proj = M.ctau_quot.at(tau).projection;
  for (const auto& s : it->second) {
    std::vector<std::pair<ZVec, Rat>> in, eq;
    for (const auto& h : s.facets) in.push_back({h.a, h.b});
    for (const auto& h : s.affine_equalities) eq.push_back({h.a, h.b});
    for (size_t i = 0; i < rows(proj); ++i) eq.push_back({proj[i], y[i]});
    Polyhedron fib = polyhedron_from_hrep(in, eq, M.data.n);
    if (fib.is_empty) continue;
    if (fib.dim() != 0)
      throw std::logic_error(
          "t_tau_section: fiber is not a single point (injectivity "
          "violated)");
    return fib.vertices[0];
  }
  throw std::invalid_argument(
      "t_tau_section: point outside the projected image of W_tau");
}

// delta'(x) for a finite point of X' (the union of the closed pieces).
inline QVec contract_point(const LocalModel& M, const QVec& x) {
  for (const auto& pc : M.pieces) {
    if (!pc.poly.contains(x)) continue;
    const ZMat& proj = M.ctau_quot.at(pc.tau).projection;
    return t_tau_section(M, pc.tau, mul(proj, x));
  }
  throw std::invalid_argument("contract_point: point is not in the domain");
}

// delta'(x) for a stratified point of the partial compactification.
inline QVec contract_point(const LocalModel& M, const StratifiedPoint& x) {
  if (x.cone == 0) return contract_point(M, x.coords);
  for (const auto& pc : M.pieces) {
    if (!closure_meets_orbit(M.c_fan, 0, pc.poly, x.cone)) continue;
    Polyhedron img = project_polyhedron(M.c_fan, 0, pc.poly, x.cone);
    if (!img.contains(x.coords)) continue;
    if (!is_face_of_cone(M.c_fan, x.cone, M.ctau_cone.at(pc.tau)))
      throw std::logic_error(
          "contract_point: stratum is not a face of C_tau");
    QVec lift = mul(M.c_fan.orbit[x.cone].section, x.coords);
    const ZMat& proj = M.ctau_quot.at(pc.tau).projection;
    return t_tau_section(M, pc.tau, mul(proj, lift));
  }
  throw std::invalid_argument("contract_point: point is not in the domain");
}

// Minimal cell of the chain subdivision of the closed star containing a
// point (the unique one whose relative interior contains it).
inline std::optional<size_t> star_cell_of(const LocalModel& M, const QVec& x) {
  std::optional<size_t> best;
  for (size_t i = 0; i < M.star_simplices.size(); ++i) {
    if (!M.star_simplices[i].contains(x)) continue;
    if (!best ||
        M.star_simplices[i].dim() < M.star_simplices[*best].dim())
      best = i;
  }
  return best;
}

// X = delta'^{-1}(U_xi): membership in the open star of a_xi after
// contraction.
inline bool in_domain_x(const LocalModel& M, const QVec& x) {
  QVec y;
  try {
    y = contract_point(M, x);
  } catch (const std::invalid_argument&) {
    return false;
  }
  auto cell = star_cell_of(M, y);
  if (!cell) return false;
  const auto& ch = M.star_chains[*cell];
  return std::find(ch.begin(), ch.end(), M.xi_cell) != ch.end();
}

// ---------------------------------------------------------------------------
// The cell complex of X' and its map to the closed star
// ---------------------------------------------------------------------------

struct DomainComplex {
  PolyComplex cells;               // finite cells of X'
  std::vector<size_t> image_cell;  // per cell: index into star_chains
  std::vector<StratifiedCell> infinite_cells;  // closures at the boundary
};

inline DomainComplex domain_complex(const LocalModel& M) {
  DomainComplex out;
  std::vector<Polyhedron> tops;
  for (const auto& pc : M.pieces) tops.push_back(pc.poly);
  out.cells = make_complex(tops, M.data.n);
  for (size_t c = 0; c < out.cells.cells.size(); ++c) {
    const Polyhedron& cell = out.cells.cells[c];
    std::vector<QVec> img;
    for (const auto& v : cell.vertices) img.push_back(contract_point(M, v));
    Polyhedron imgP = polytope_from_points(img, M.data.n);
    std::optional<size_t> target;
    for (size_t s = 0; s < M.star_simplices.size(); ++s) {
      bool ok = true;
      for (const auto& v : imgP.vertices)
        ok &= M.star_simplices[s].contains(v);
      if (!ok) continue;
      if (!target ||
          M.star_simplices[s].dim() < M.star_simplices[*target].dim())
        target = s;
    }
    if (!target)
      throw std::logic_error(
          "domain_complex: image of a cell escapes the closed star");
    out.image_cell.push_back(*target);
  }
  for (const auto& cell : out.cells.cells) {
    StratifiedPolyhedron S = closure_in_toric(cell, M.c_fan);
    for (const auto& [cone, poly] : S.infinite_faces) {
      bool dup = false;
      for (const auto& sc : out.infinite_cells)
        dup |= (sc.cone == cone && sc.poly == poly);
      if (!dup) out.infinite_cells.push_back({cone, poly});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stalk presentations of the coefficient groups
// ---------------------------------------------------------------------------

struct StalkCheck {
  FgAbelianGroup lhs;  // quotient presentation in wedge^p N''
  FgAbelianGroup rhs;  // quotient of F_p(theta(tau_l)) in wedge^p N
  bool iso = false;
};

inline StalkCheck stalk_isomorphism_check(const LocalModel& M, const QVec& x,
                                          size_t p) {
  const ContractionData& D = M.data;
  size_t n = D.n, r = D.r;
  auto cell = star_cell_of(M, x);
  if (!cell)
    throw std::invalid_argument(
        "stalk_isomorphism_check: point outside the closed star");
  const auto& chain = M.star_chains[*cell];
  if (std::find(chain.begin(), chain.end(), M.xi_cell) == chain.end())
    throw std::invalid_argument(
        "stalk_isomorphism_check: point is not in the open star U_xi");
  size_t tau0 = chain.front(), taul = chain.back();
  StalkCheck out;
  if (p == 0) {
    out.lhs = {1, {}};
    out.rhs = {1, {}};
    out.iso = true;
    return out;
  }
  size_t nq = n - r;
  size_t dim_lhs = detail::binomial(nq, p);
  size_t dim_rhs = detail::binomial(n, p);
  // v0: the first vertex of tau0; N'' = N / sum Z (phi_i(v0) + e_i).
  std::optional<size_t> v0;
  for (size_t c = 0; c < M.P.cells.size(); ++c)
    if (M.P.cell_dim[c] == 0 && M.P.is_face(c, tau0)) {
      if (!v0 || M.P.cells[c].vertices < M.P.cells[*v0].vertices) v0 = c;
    }
  std::vector<ZVec> v0_dirs;
  for (size_t i = 0; i < r; ++i)
    v0_dirs.push_back(
        detail::lift_vertex(M.phi.at(*v0)[i].vertices[0], D.dp, i));
  QuotientWithSection Q = quotient_with_section(saturate(v0_dirs, n), n);
  const ZMat& proj = Q.projection;  // nq x n

  // ---- LHS: wedge^p N'' modulo the monodromy denominators ----
  std::vector<ZVec> den_lhs;
  if (dim_lhs > 0) {
    for (size_t rho = 0; rho < M.P.cells.size(); ++rho) {
      if (M.P.cell_dim[rho] != (int)D.dp - 1 || !M.P.is_face(taul, rho))
        continue;
      std::vector<size_t> cofaces;
      for (size_t c : M.P.maximal())
        if (M.P.is_face(rho, c)) cofaces.push_back(c);
      if (cofaces.size() != 2) continue;
      std::vector<size_t> I;
      for (size_t i = 0; i < r; ++i)
        if (M.m_sigma.at(cofaces[0])[i] != M.m_sigma.at(cofaces[1])[i])
          I.push_back(i);
      if (I.empty()) continue;
      std::vector<ZVec> lam;
      for (const auto& t : tangent_lattice(M.P.cells[rho]))
        lam.push_back(mul(proj, t));
      lam = saturate(lam, nq);
      std::vector<ZVec> dirs;
      for (size_t i : I)
        for (const auto& t : tangent_lattice(M.phi.at(tau0)[i]))
          dirs.push_back(mul(proj, t));
      for (const auto& sub : p_subsets(lam.size(), p - 1))
        for (const auto& t : dirs) {
          std::vector<ZVec> ws;
          for (size_t s : sub) ws.push_back(lam[s]);
          ws.push_back(t);
          den_lhs.push_back(wedge_vector(ws, nq));
        }
    }
    den_lhs = saturate(den_lhs, dim_lhs);
  }
  {
    ZMat A = zmat(dim_lhs, den_lhs.size());
    for (size_t j = 0; j < den_lhs.size(); ++j)
      for (size_t i = 0; i < dim_lhs; ++i) A[i][j] = den_lhs[j][i];
    out.lhs = cokernel(A);
  }

  // ---- RHS: F_p(theta(tau_l)) modulo the toric denominators ----
  size_t theta = M.theta[taul];
  const Polyhedron& theta_poly = M.b_cells[theta].poly;
  std::vector<size_t> above;  // cells of P_X containing theta(tau_l)
  for (size_t s = 0; s < M.x_cells.size(); ++s)
    if (is_face_of(theta_poly, M.x_cells[s].poly)) above.push_back(s);
  std::vector<ZVec> fnum_gens, den_rhs;
  if (dim_rhs > 0) {
    for (size_t s : above) {
      std::vector<ZVec> tl = tangent_lattice(M.x_cells[s].poly);
      for (const auto& sub : p_subsets(tl.size(), p)) {
        std::vector<ZVec> ws;
        for (size_t i : sub) ws.push_back(tl[i]);
        fnum_gens.push_back(wedge_vector(ws, n));
      }
    }
    for (size_t s : above) {
      const auto& I = M.x_tilde[s].I;
      if (I.empty()) continue;
      std::vector<ZVec> dirs;
      for (size_t i : I)
        for (const auto& v : M.phi.at(tau0)[i].vertices)
          dirs.push_back(detail::lift_vertex(v, D.dp, i));
      for (size_t s2 : above) {
        if (!is_face_of(M.x_cells[s].poly, M.x_cells[s2].poly)) continue;
        std::vector<ZVec> tl = tangent_lattice(M.x_cells[s2].poly);
        for (const auto& sub : p_subsets(tl.size(), p - 1))
          for (const auto& dvec : dirs) {
            std::vector<ZVec> ws;
            for (size_t i : sub) ws.push_back(tl[i]);
            ws.push_back(dvec);
            den_rhs.push_back(wedge_vector(ws, n));
          }
      }
    }
  }
  std::vector<ZVec> fnum = saturate(fnum_gens, dim_rhs);
  den_rhs = saturate(den_rhs, dim_rhs);
  std::vector<ZVec> K = lattice_intersection(fnum, den_rhs, dim_rhs);
  // Coordinates of the intersection in the basis of F_p.
  QMat FB = qmat(dim_rhs, fnum.size());
  for (size_t j = 0; j < fnum.size(); ++j)
    for (size_t i = 0; i < dim_rhs; ++i) FB[i][j] = Rat(fnum[j][i]);
  ZMat rel = zmat(fnum.size(), K.size());
  for (size_t j = 0; j < K.size(); ++j) {
    auto coeff = solve_q(FB, to_qvec(K[j]));
    if (!coeff)
      throw std::logic_error("stalk_isomorphism_check: inconsistent lattice");
    for (size_t i = 0; i < fnum.size(); ++i) {
      assert((*coeff)[i].get_den() == 1);
      rel[i][j] = (*coeff)[i].get_num();
    }
  }
  out.rhs = cokernel(rel);

  // ---- The projection pi_{v0} identifies the two presentations ----
  bool iso = (out.lhs.rank == out.rhs.rank &&
              out.lhs.invariant_factors == out.rhs.invariant_factors);
  if (iso && dim_rhs > 0) {
    ZMat Pp = wedge_power(proj, p);  // dim_lhs x dim_rhs
    // Surjectivity onto the LHS quotient.
    std::vector<ZVec> span = den_lhs;
    for (const auto& fvec : fnum) span.push_back(mul(Pp, fvec));
    std::vector<ZVec> unit;
    for (size_t i = 0; i < dim_lhs; ++i) {
      ZVec e(dim_lhs, 0);
      e[i] = 1;
      unit.push_back(e);
    }
    iso &= same_sublattice(span, unit, dim_lhs);
    // The kernel over F_p is exactly the RHS denominator.
    QuotientWithSection QL =
        den_lhs.empty() ? QuotientWithSection{identity_z(dim_lhs),
                                              identity_z(dim_lhs)}
                        : quotient_with_section(den_lhs, dim_lhs);
    ZMat A = zmat(rows(QL.projection), fnum.size());
    for (size_t j = 0; j < fnum.size(); ++j) {
      ZVec img = mul(QL.projection, mul(Pp, fnum[j]));
      for (size_t i = 0; i < img.size(); ++i) A[i][j] = img[i];
    }
    std::vector<ZVec> ker = integer_kernel(A);
    std::vector<ZVec> rel_cols;
    for (size_t j = 0; j < K.size(); ++j) {
      ZVec col(fnum.size());
      for (size_t i = 0; i < fnum.size(); ++i) col[i] = rel[i][j];
      rel_cols.push_back(col);
    }
    iso &= same_sublattice(ker, rel_cols, fnum.size());
  }
  out.iso = iso;
  return out;
}

// ---------------------------------------------------------------------------
// Built-in example models
// ---------------------------------------------------------------------------

namespace detail {

inline Polyhedron poly_from_int_points(
    const std::vector<std::vector<int>>& pts, size_t d) {
  std::vector<QVec> qs;
  for (const auto& p : pts) {
    QVec q(d);
    for (size_t i = 0; i < d; ++i) q[i] = Rat(p[i]);
    qs.push_back(q);
  }
  return polytope_from_points(qs, d);
}

}  // namespace detail

// Focus-focus local model: Delta_1 = conv{0, k d1*}, check_Delta_1 =
// conv{0, l d2}, xi = conv{0, d2}, P = {sigma_1, sigma_2} and faces with
// sigma_1 = conv(xi cup {-d1 - k e1}) and sigma_2 = conv(xi cup {d1}).
inline LocalModel focus_focus_model(int k, int l) {
  Polyhedron delta = detail::poly_from_int_points({{0, 0}, {k, 0}}, 2);
  Polyhedron check = detail::poly_from_int_points({{0, 0}, {0, l}}, 2);
  Polyhedron xi =
      detail::poly_from_int_points({{0, 0, 0}, {0, 1, 0}}, 3);
  ContractionData data = contraction_data({delta}, {check}, xi);
  Polyhedron sigma1 = detail::poly_from_int_points(
      {{0, 0, 0}, {0, 1, 0}, {-1, 0, -k}}, 3);
  Polyhedron sigma2 =
      detail::poly_from_int_points({{0, 0, 0}, {0, 1, 0}, {1, 0, 0}}, 3);
  return build_local_model(data, make_complex({sigma1, sigma2}, 3));
}

inline LocalModel positive_vertex_model() {
  Polyhedron delta =
      detail::poly_from_int_points({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, 3);
  Polyhedron check =
      detail::poly_from_int_points({{0, 0, 0}, {0, 0, 1}}, 3);
  return build_local_model(contraction_data({delta}, {check}));
}

inline LocalModel negative_vertex_model() {
  Polyhedron delta = detail::poly_from_int_points({{0, 0, 0}, {1, 0, 0}}, 3);
  Polyhedron check =
      detail::poly_from_int_points({{0, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3);
  return build_local_model(contraction_data({delta}, {check}));
}

inline LocalModel positive_node_model() {
  Polyhedron delta = detail::poly_from_int_points(
      {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}, 3);
  Polyhedron check =
      detail::poly_from_int_points({{0, 0, 0}, {0, 0, 1}}, 3);
  return build_local_model(contraction_data({delta}, {check}));
}

inline LocalModel negative_node_model() {
  Polyhedron delta = detail::poly_from_int_points({{0, 0, 0}, {1, 0, 0}}, 3);
  Polyhedron check = detail::poly_from_int_points(
      {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 1, 1}}, 3);
  return build_local_model(contraction_data({delta}, {check}));
}

// Tropical modification: check_Delta_1 = {0}, so C = R_{>=0} e_1 and the
// contraction is the projection of the graph of f_1'.
inline LocalModel modification_model(const Polyhedron& delta1) {
  Polyhedron check =
      polytope_from_points({QVec(delta1.ambient, 0)}, delta1.ambient);
  return build_local_model(contraction_data({delta1}, {check}));
}

// A tropical curve with a 4-valent vertex (r = 2): contracts both
// unbounded fiber edges to the origin; not good since T(Delta_1) =
// T(Delta_2).
inline LocalModel valence4_model() {
  Polyhedron delta = detail::poly_from_int_points({{0}, {1}}, 1);
  Polyhedron check = detail::poly_from_int_points({{0}}, 1);
  return build_local_model(contraction_data({delta, delta}, {check, check}));
}

}  // namespace tropcontract
