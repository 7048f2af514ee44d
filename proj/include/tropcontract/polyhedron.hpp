#pragma once

// Exact rational polyhedra: double-description conversion between
// generator and inequality representations, face lattices keyed by active
// facet sets, normal fans, face maps between normal fans, Minkowski sums,
// and support functions.  All pivoting is exact (GMP rationals).

#include <set>

#include "lattice.hpp"

namespace tropcontract {

// ---------------------------------------------------------------------------
// Cones
// ---------------------------------------------------------------------------

struct ConeGens {
  std::vector<ZVec> rays;       // extreme rays, primitive
  std::vector<ZVec> lineality;  // basis of the lineality space
};

struct ConeIneqs {
  std::vector<ZVec> ineqs;  // <a,x> >= 0
  std::vector<ZVec> eqs;    // <a,x> = 0
};

namespace detail {

inline bool zvec_less(const ZVec& a, const ZVec& b) { return a < b; }

inline void sort_unique(std::vector<ZVec>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Double description on a pointed, full-dimensional-dual situation:
// cone {z in R^k : <c,z> >= 0 for all c in cs} where the cs span R^k.
// Returns the extreme rays (primitive).
inline std::vector<ZVec> dd_pointed(const std::vector<ZVec>& cs, size_t k) {
  if (k == 0) return {};
  // Initial simplicial subcone from k independent inequalities.
  std::vector<size_t> base;
  QMat M;
  for (size_t i = 0; i < cs.size() && base.size() < k; ++i) {
    M.push_back(to_qvec(cs[i]));
    if (rank(M) == M.size())
      base.push_back(i);
    else
      M.pop_back();
  }
  assert(base.size() == k);
  QMat Minv = *inverse_q(M);
  std::vector<ZVec> rays;
  for (size_t j = 0; j < k; ++j) {
    QVec col(k);
    for (size_t i = 0; i < k; ++i) col[i] = Minv[i][j];
    rays.push_back(primitive(col));
  }
  std::vector<size_t> processed = base;
  auto active_rank = [&](const ZVec& r1, const ZVec& r2) {
    QMat act;
    for (size_t i : processed) {
      if (dot(cs[i], r1) == 0 && dot(cs[i], r2) == 0)
        act.push_back(to_qvec(cs[i]));
    }
    return rank(act);
  };
  for (size_t i = 0; i < cs.size(); ++i) {
    if (std::find(base.begin(), base.end(), i) != base.end()) continue;
    const ZVec& c = cs[i];
    std::vector<ZVec> pos, zero, neg;
    for (const auto& r : rays) {
      Int s = dot(c, r);
      (s > 0 ? pos : s == 0 ? zero : neg).push_back(r);
    }
    if (neg.empty()) {
      processed.push_back(i);
      continue;
    }
    std::vector<ZVec> next = pos;
    for (const auto& z : zero) next.push_back(z);
    for (const auto& p : pos)
      for (const auto& n : neg) {
        // Adjacency: the rays lie on a common 2-face.
        if (k >= 2 && active_rank(p, n) + 2 < k) continue;
        ZVec comb(k);
        Int cp = dot(c, p), cn = -dot(c, n);
        for (size_t t = 0; t < k; ++t) comb[t] = cn * p[t] + cp * n[t];
        next.push_back(primitive(comb));
      }
    processed.push_back(i);
    sort_unique(next);
    rays = next;
  }
  sort_unique(rays);
  return rays;
}

}  // namespace detail

// Extreme rays + lineality of {x in R^d : <a,x> >= 0 (ineqs), = 0 (eqs)}.
inline ConeGens cone_from_inequalities(const std::vector<ZVec>& ineqs,
                                       const std::vector<ZVec>& eqs,
                                       size_t d) {
  // Restrict to the equality subspace.
  std::vector<ZVec> sub;
  if (eqs.empty()) {
    for (size_t i = 0; i < d; ++i) {
      ZVec e(d, 0);
      e[i] = 1;
      sub.push_back(e);
    }
  } else {
    ZMat E = zmat(eqs.size(), d);
    for (size_t i = 0; i < eqs.size(); ++i) E[i] = eqs[i];
    sub = integer_kernel(E);
  }
  size_t s = sub.size();
  if (s == 0) return {};  // the equalities cut out the origin only
  ZMat B = zmat(s, d);
  for (size_t i = 0; i < s; ++i) B[i] = sub[i];
  // Inequalities in subspace coordinates y (x = B^T y): a' = B a.
  std::vector<ZVec> ineq_y;
  for (const auto& a : ineqs) {
    ZVec ay = mul(B, a);
    if (!is_zero(ay)) ineq_y.push_back(ay);
  }
  // Lineality inside the subspace: common kernel of the inequalities.
  std::vector<ZVec> lin_y;
  if (ineq_y.empty()) {
    for (size_t i = 0; i < s; ++i) {
      ZVec e(s, 0);
      e[i] = 1;
      lin_y.push_back(e);
    }
  } else {
    ZMat A = zmat(ineq_y.size(), s);
    for (size_t i = 0; i < ineq_y.size(); ++i) A[i] = ineq_y[i];
    lin_y = integer_kernel(A);
  }
  ConeGens out;
  ZMat Bt = transpose(B);
  for (const auto& l : lin_y) out.lineality.push_back(primitive(mul(Bt, l)));
  if (!ineq_y.empty()) {
    // Quotient by the lineality, where the cone is pointed.
    QuotientWithSection q =
        lin_y.empty()
            ? QuotientWithSection{identity_z(s), identity_z(s)}
            : quotient_with_section(lin_y, s);
    size_t k = rows(q.projection);
    std::vector<ZVec> cs;
    ZMat sect_t = transpose(q.section);
    for (const auto& a : ineq_y) {
      ZVec az = mul(sect_t, a);
      if (!is_zero(az)) cs.push_back(primitive(az));
    }
    detail::sort_unique(cs);
    std::vector<ZVec> rays_z = detail::dd_pointed(cs, k);
    ZMat lift = transpose(q.projection);  // z -> y via projection^T? no:
    // section: z-coords -> y-coords.
    for (const auto& rz : rays_z) {
      ZVec ry = mul(q.section, rz);
      out.rays.push_back(primitive(mul(Bt, ry)));
    }
  }
  detail::sort_unique(out.rays);
  return out;
}

// Facet normals (inward) + equalities of the cone generated by rays and
// lineality: duality reduces to the previous routine.
inline ConeIneqs cone_to_inequalities(const std::vector<ZVec>& rays,
                                      const std::vector<ZVec>& lineality,
                                      size_t d) {
  ConeGens dual = cone_from_inequalities(rays, lineality, d);
  ConeIneqs out;
  out.ineqs = dual.rays;
  for (const auto& l : dual.lineality) out.eqs.push_back(l);
  return out;
}

// ---------------------------------------------------------------------------
// Polyhedra
// ---------------------------------------------------------------------------

struct Halfspace {
  ZVec a;  // primitive inward normal
  Rat b;   // <a,x> >= b
  bool operator==(const Halfspace& o) const { return a == o.a && b == o.b; }
  bool operator<(const Halfspace& o) const {
    if (a != o.a) return a < o.a;
    return b < o.b;
  }
};

struct Polyhedron {
  size_t ambient = 0;
  bool is_empty = true;
  std::vector<QVec> vertices;               // sorted
  std::vector<ZVec> rays;                   // primitive, sorted
  std::vector<ZVec> lineality;              // lattice basis
  std::vector<Halfspace> facets;            // irredundant, sorted
  std::vector<Halfspace> affine_equalities; // affine hull description

  int dim() const {
    if (is_empty) return -1;
    QMat dirs;
    for (size_t i = 1; i < vertices.size(); ++i)
      dirs.push_back(vertices[i] - vertices[0]);
    for (const auto& r : rays) dirs.push_back(to_qvec(r));
    for (const auto& l : lineality) dirs.push_back(to_qvec(l));
    return (int)rank(dirs);
  }

  bool contains(const QVec& x) const {
    if (is_empty) return false;
    for (const auto& h : facets)
      if (dot(h.a, x) < h.b) return false;
    for (const auto& h : affine_equalities)
      if (dot(h.a, x) != h.b) return false;
    return true;
  }

  bool is_bounded() const { return rays.empty() && lineality.empty(); }

  bool is_lattice_polytope() const {
    for (const auto& v : vertices)
      for (const auto& c : v)
        if (c.get_den() != 1) return false;
    return true;
  }

  // A point in the relative interior (average of vertices plus all rays).
  QVec relint_point() const {
    assert(!is_empty);
    QVec p(ambient, 0);
    for (const auto& v : vertices) p = p + v;
    p = Rat(1, (unsigned long)vertices.size()) * p;
    for (const auto& r : rays) p = p + to_qvec(r);
    return p;
  }

  // Rational vertex barycentroid (default cell anchor a_tau).
  QVec barycentroid() const {
    assert(!vertices.empty());
    QVec p(ambient, 0);
    for (const auto& v : vertices) p = p + v;
    return Rat(1, (unsigned long)vertices.size()) * p;
  }

  bool operator==(const Polyhedron& o) const {
    return ambient == o.ambient && is_empty == o.is_empty &&
           vertices == o.vertices && rays == o.rays &&
           lineality == o.lineality;
  }
};

namespace detail {

// Canonicalize a V-representation by a homogenization round trip.
inline void canonicalize_vrep(Polyhedron& P) {
  std::sort(P.vertices.begin(), P.vertices.end());
  P.vertices.erase(std::unique(P.vertices.begin(), P.vertices.end()),
                   P.vertices.end());
  sort_unique(P.rays);
  P.lineality = lattice_basis(P.lineality, P.ambient);
}

}  // namespace detail

// Build from generators.  Homogenize at coordinate 0: vertex v -> (1,v),
// ray r -> (0,r).
inline Polyhedron polyhedron_from_vrep(const std::vector<QVec>& vertices,
                                       const std::vector<ZVec>& rays,
                                       const std::vector<ZVec>& lineality,
                                       size_t d) {
  Polyhedron P;
  P.ambient = d;
  if (vertices.empty()) return P;  // empty (rays alone define no polyhedron)
  P.is_empty = false;
  std::vector<ZVec> gens, lin;
  for (const auto& v : vertices) {
    QVec h(d + 1);
    h[0] = 1;
    for (size_t i = 0; i < d; ++i) h[i + 1] = v[i];
    gens.push_back(clear_denominators(h));
  }
  for (const auto& r : rays) {
    ZVec h(d + 1, 0);
    for (size_t i = 0; i < d; ++i) h[i + 1] = r[i];
    if (!is_zero(h)) gens.push_back(primitive(h));
  }
  for (const auto& l : lineality) {
    ZVec h(d + 1, 0);
    for (size_t i = 0; i < d; ++i) h[i + 1] = l[i];
    if (!is_zero(h)) lin.push_back(h);
  }
  ConeIneqs H = cone_to_inequalities(gens, lin, d + 1);
  // Convert homogeneous inequalities (b0, a): b0*x0 + <a,x> >= 0 into
  // halfspaces <a,x> >= -b0, and recompute the exact V-rep for
  // canonical generators (prunes non-extreme input points).
  std::vector<ZVec> hom_ineqs = H.ineqs, hom_eqs = H.eqs;
  // x0 >= 0 holds on the cone; include it for the reverse conversion.
  {
    ZVec e0(d + 1, 0);
    e0[0] = 1;
    hom_ineqs.push_back(e0);
  }
  ConeGens G = cone_from_inequalities(hom_ineqs, hom_eqs, d + 1);
  for (const auto& g : G.rays) {
    if (g[0] > 0) {
      QVec v(d);
      for (size_t i = 0; i < d; ++i) v[i] = Rat(g[i + 1]) / Rat(g[0]);
      P.vertices.push_back(v);
    } else {
      assert(g[0] == 0);
      P.rays.push_back(ZVec(g.begin() + 1, g.end()));
    }
  }
  for (const auto& l : G.lineality) {
    if (l[0] == 0) {
      ZVec v(l.begin() + 1, l.end());
      if (!is_zero(v)) P.lineality.push_back(v);
    } else {
      // Lineality with x0-component: split into +/- rays (cannot happen
      // for a cone containing x0>=0 unless degenerate); handled by adding
      // both directions as rays after normalizing x0 sign.
      assert(false && "unexpected homogenization lineality");
    }
  }
  detail::canonicalize_vrep(P);
  for (const auto& a : H.ineqs) {
    ZVec n(a.begin() + 1, a.end());
    if (is_zero(n)) continue;  // the trivial x0 >= 0 row
    ZVec np = primitive(n);
    // primitive() divides by the gcd g of n; scale b accordingly so the
    // halfspace is unchanged: <n,x> >= -a0  ->  <np,x> >= -a0/g.
    Int g = 0;
    for (const auto& x : n) g = gcd(g, x);
    P.facets.push_back({np, Rat(-a[0]) / Rat(g)});
  }
  std::sort(P.facets.begin(), P.facets.end());
  P.facets.erase(std::unique(P.facets.begin(), P.facets.end()),
                 P.facets.end());
  for (const auto& a : H.eqs) {
    ZVec n(a.begin() + 1, a.end());
    if (is_zero(n)) continue;
    ZVec np = primitive(n, true);
    Int g = 0;
    for (const auto& x : n) g = gcd(g, x);
    Rat b = Rat(-a[0]) / Rat(g);
    // Sign-normalize (primitive() with positive first nonzero may have
    // flipped the direction; recompute b against np directly).
    if (!P.vertices.empty()) b = dot(np, P.vertices[0]);
    P.affine_equalities.push_back({np, b});
  }
  std::sort(P.affine_equalities.begin(), P.affine_equalities.end());
  return P;
}

// Build from inequalities <a,x> >= b and equalities <a,x> = b.
inline Polyhedron polyhedron_from_hrep(
    const std::vector<std::pair<ZVec, Rat>>& ineqs,
    const std::vector<std::pair<ZVec, Rat>>& eqs, size_t d) {
  std::vector<ZVec> hom_ineqs, hom_eqs;
  auto homog = [&](const std::pair<ZVec, Rat>& h) {
    // <a,x> >= b  ->  -b*x0 + <a,x> >= 0, cleared to integers.
    QVec v(d + 1);
    v[0] = -h.second;
    for (size_t i = 0; i < d; ++i) v[i + 1] = Rat(h.first[i]);
    return clear_denominators(v);
  };
  for (const auto& h : ineqs) hom_ineqs.push_back(homog(h));
  for (const auto& h : eqs) hom_eqs.push_back(homog(h));
  {
    ZVec e0(d + 1, 0);
    e0[0] = 1;
    hom_ineqs.push_back(e0);
  }
  ConeGens G = cone_from_inequalities(hom_ineqs, hom_eqs, d + 1);
  std::vector<QVec> vertices;
  std::vector<ZVec> rays, lin;
  for (const auto& g : G.rays) {
    if (g[0] > 0) {
      QVec v(d);
      for (size_t i = 0; i < d; ++i) v[i] = Rat(g[i + 1]) / Rat(g[0]);
      vertices.push_back(v);
    } else if (g[0] == 0) {
      rays.push_back(ZVec(g.begin() + 1, g.end()));
    }
  }
  for (const auto& l : G.lineality) {
    assert(l[0] == 0);
    ZVec v(l.begin() + 1, l.end());
    if (!is_zero(v)) lin.push_back(v);
  }
  if (vertices.empty()) {
    Polyhedron P;
    P.ambient = d;
    return P;  // empty
  }
  return polyhedron_from_vrep(vertices, rays, lin, d);
}

inline Polyhedron polytope_from_points(const std::vector<QVec>& pts,
                                       size_t d) {
  return polyhedron_from_vrep(pts, {}, {}, d);
}

inline Polyhedron polytope_from_lattice_points(const std::vector<ZVec>& pts,
                                               size_t d) {
  std::vector<QVec> q;
  for (const auto& p : pts) q.push_back(to_qvec(p));
  return polyhedron_from_vrep(q, {}, {}, d);
}

// ---------------------------------------------------------------------------
// Faces
// ---------------------------------------------------------------------------

struct Face {
  std::vector<size_t> active;  // sorted indices into parent facets
  Polyhedron poly;
  int dim = -1;
};

// All nonempty faces of P (including P itself), sorted by (dim, active
// set).  Face identity inside one polyhedron = the sorted active facet
// set; across polyhedra, compare the canonical V-representations.
inline std::vector<Face> face_lattice(const Polyhedron& P) {
  std::vector<Face> out;
  if (P.is_empty) return out;
  // Active facet set of each generator.
  size_t nf = P.facets.size();
  auto active_of_point = [&](const QVec& v) {
    std::vector<bool> act(nf);
    for (size_t i = 0; i < nf; ++i)
      act[i] = (dot(P.facets[i].a, v) == P.facets[i].b);
    return act;
  };
  auto active_of_ray = [&](const ZVec& r) {
    std::vector<bool> act(nf);
    for (size_t i = 0; i < nf; ++i) act[i] = (dot(P.facets[i].a, to_qvec(r)) == 0);
    return act;
  };
  std::vector<std::vector<bool>> vact, ract;
  for (const auto& v : P.vertices) vact.push_back(active_of_point(v));
  for (const auto& r : P.rays) ract.push_back(active_of_ray(r));
  // A face is determined by the subset of facets containing it; breadth
  // first closure under intersection with facets.
  std::set<std::pair<std::vector<size_t>, std::vector<size_t>>> seen;
  std::vector<std::pair<std::vector<size_t>, std::vector<size_t>>> queue;
  auto gens_given_tight = [&](const std::vector<size_t>& tight) {
    std::vector<size_t> vs, rs;
    for (size_t i = 0; i < P.vertices.size(); ++i) {
      bool all = true;
      for (size_t t : tight) all &= vact[i][t];
      if (all) vs.push_back(i);
    }
    for (size_t i = 0; i < P.rays.size(); ++i) {
      bool all = true;
      for (size_t t : tight) all &= ract[i][t];
      if (all) rs.push_back(i);
    }
    return std::make_pair(vs, rs);
  };
  auto push = [&](const std::vector<size_t>& tight) {
    auto g = gens_given_tight(tight);
    if (g.first.empty()) return;  // faces always contain a vertex
    if (seen.insert(g).second) queue.push_back(g);
  };
  push({});
  for (size_t i = 0; i < nf; ++i) push({i});
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    auto cur = queue[qi];
    // Tight set of this face.
    std::vector<size_t> tight;
    for (size_t t = 0; t < nf; ++t) {
      bool all = true;
      for (size_t v : cur.first) all &= vact[v][t];
      for (size_t r : cur.second) all &= ract[r][t];
      if (all) tight.push_back(t);
    }
    for (size_t t = 0; t < nf; ++t) {
      if (std::find(tight.begin(), tight.end(), t) != tight.end()) continue;
      std::vector<size_t> nt = tight;
      nt.push_back(t);
      push(nt);
    }
  }
  for (const auto& [vs, rs] : seen) {
    Face f;
    std::vector<QVec> verts;
    std::vector<ZVec> rays;
    for (size_t i : vs) verts.push_back(P.vertices[i]);
    for (size_t i : rs) rays.push_back(P.rays[i]);
    f.poly = polyhedron_from_vrep(verts, rays, P.lineality, P.ambient);
    f.dim = f.poly.dim();
    for (size_t t = 0; t < nf; ++t) {
      bool all = true;
      for (size_t v : vs) all &= vact[v][t];
      for (size_t r : rs) all &= ract[r][t];
      if (all) f.active.push_back(t);
    }
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) {
    return a.dim != b.dim ? a.dim < b.dim : a.active < b.active;
  });
  return out;
}

// Is F a face of (contained in the closure poset of) G?  Both must come
// from the same canonical construction; containment of generators works.
inline bool is_face_of(const Polyhedron& F, const Polyhedron& G) {
  for (const auto& v : F.vertices)
    if (!G.contains(v)) return false;
  for (const auto& r : F.rays) {
    bool ok = false;
    for (const auto& gr : G.rays) ok |= (gr == r);
    // Rays of a face are rays of the parent (or lineality combos); fall
    // back to a recession-cone membership test.
    if (!ok) {
      // r must satisfy all facet inequalities of G homogeneously.
      QVec rq = to_qvec(r);
      ok = true;
      for (const auto& h : G.facets) ok &= (dot(h.a, rq) >= 0);
      for (const auto& h : G.affine_equalities) ok &= (dot(h.a, rq) == 0);
    }
    if (!ok) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Derived constructions
// ---------------------------------------------------------------------------

// The face of P on which the linear functional w is minimized.  Errors if
// unbounded below on P.
inline Polyhedron argmin_face(const Polyhedron& P, const QVec& w) {
  assert(!P.is_empty);
  for (const auto& l : P.lineality)
    if (dot(l, w) != 0)
      throw std::domain_error("argmin_face: unbounded (lineality)");
  for (const auto& r : P.rays)
    if (dot(r, w) < 0) throw std::domain_error("argmin_face: unbounded (ray)");
  Rat best;
  bool first = true;
  for (const auto& v : P.vertices) {
    Rat val = dot(w, v);
    if (first || val < best) best = val, first = false;
  }
  std::vector<QVec> vs;
  std::vector<ZVec> rs;
  for (const auto& v : P.vertices)
    if (dot(w, v) == best) vs.push_back(v);
  for (const auto& r : P.rays)
    if (dot(r, w) == 0) rs.push_back(r);
  return polyhedron_from_vrep(vs, rs, P.lineality, P.ambient);
}

// Support function of a polyhedron in the paper's convention
//   h(m) = -inf_{n in P} <m, n>.
// Errors when the infimum is -infinity.
inline Rat support_value(const Polyhedron& P, const QVec& m) {
  Polyhedron f = argmin_face(P, m);
  return -dot(m, f.vertices[0]);
}

// Minkowski sum.
inline Polyhedron minkowski_sum(const Polyhedron& A, const Polyhedron& B) {
  assert(A.ambient == B.ambient);
  if (A.is_empty || B.is_empty) {
    Polyhedron P;
    P.ambient = A.ambient;
    return P;
  }
  std::vector<QVec> vs;
  for (const auto& a : A.vertices)
    for (const auto& b : B.vertices) vs.push_back(a + b);
  std::vector<ZVec> rs = A.rays, lin = A.lineality;
  rs.insert(rs.end(), B.rays.begin(), B.rays.end());
  lin.insert(lin.end(), B.lineality.begin(), B.lineality.end());
  return polyhedron_from_vrep(vs, rs, lin, A.ambient);
}

inline Polyhedron translate(const Polyhedron& P, const QVec& t) {
  std::vector<QVec> vs;
  for (const auto& v : P.vertices) vs.push_back(v + t);
  if (P.is_empty) return P;
  return polyhedron_from_vrep(vs, P.rays, P.lineality, P.ambient);
}

inline Polyhedron intersect(const Polyhedron& A, const Polyhedron& B) {
  assert(A.ambient == B.ambient);
  std::vector<std::pair<ZVec, Rat>> in, eq;
  for (const auto& h : A.facets) in.push_back({h.a, h.b});
  for (const auto& h : B.facets) in.push_back({h.a, h.b});
  for (const auto& h : A.affine_equalities) eq.push_back({h.a, h.b});
  for (const auto& h : B.affine_equalities) eq.push_back({h.a, h.b});
  if (A.is_empty || B.is_empty) {
    Polyhedron P;
    P.ambient = A.ambient;
    return P;
  }
  return polyhedron_from_hrep(in, eq, A.ambient);
}

// Recession cone of P as generators.
inline ConeGens recession_cone(const Polyhedron& P) {
  return {P.rays, P.lineality};
}

// Tangent lattice T(S) cap Z^d: the saturated lattice of directions of
// the affine hull.
inline std::vector<ZVec> tangent_lattice(const Polyhedron& P) {
  std::vector<ZVec> gens;
  for (size_t i = 1; i < P.vertices.size(); ++i)
    gens.push_back(clear_denominators(P.vertices[i] - P.vertices[0]));
  for (const auto& r : P.rays) gens.push_back(r);
  for (const auto& l : P.lineality) gens.push_back(l);
  return saturate(gens, P.ambient);
}

// ---------------------------------------------------------------------------
// Normal fans and face maps
// ---------------------------------------------------------------------------

struct FanCone {
  std::vector<ZVec> rays;       // primitive generators
  std::vector<ZVec> lineality;  // shared by all cones of the fan
  size_t face_index;            // index into the face lattice of the source
};

struct NormalFan {
  size_t ambient;
  std::vector<Face> faces;      // face lattice of the source polytope
  std::vector<FanCone> cones;   // cones[i] is the normal cone of faces[i]
};

// Inner-normal fan with the min convention: the cone of a face F consists
// of the w whose minimum over P is attained exactly on F.  delta_P is the
// bijection faces -> cones given by matching indices.
inline NormalFan normal_fan(const Polyhedron& P) {
  NormalFan fan;
  fan.ambient = P.ambient;
  fan.faces = face_lattice(P);
  // Lineality of every cone: normals of the affine hull.
  std::vector<ZVec> lin;
  for (const auto& h : P.affine_equalities) lin.push_back(h.a);
  lin = lattice_basis(lin, P.ambient);
  for (size_t fi = 0; fi < fan.faces.size(); ++fi) {
    const Face& f = fan.faces[fi];
    std::vector<ZVec> gens;
    for (size_t t : f.active) gens.push_back(P.facets[t].a);
    // Canonical extreme rays.
    ConeIneqs H = cone_to_inequalities(gens, lin, P.ambient);
    ConeGens G = cone_from_inequalities(H.ineqs, H.eqs, P.ambient);
    fan.cones.push_back({G.rays, G.lineality, fi});
  }
  return fan;
}

// A point in the relative interior of a cone.
inline QVec cone_relint_point(const FanCone& c, size_t d) {
  QVec p(d, 0);
  for (const auto& r : c.rays) p = p + to_qvec(r);
  return p;
}

// Face map phi_{P',P}: faces of P' -> faces of P, defined when the normal
// fan of P' refines the normal fan of P.  phi(sigma) is the face of P
// minimizing any functional in the relative interior of sigma's normal
// cone; the refinement precondition is verified on every generator.
inline Polyhedron face_map_phi(const Polyhedron& Pprime,
                               const Polyhedron& P,
                               const Polyhedron& sigma) {
  // Normal cone of sigma in P': facet normals of P' active on sigma.
  std::vector<ZVec> gens;
  QVec x = sigma.relint_point();
  for (const auto& h : Pprime.facets)
    if (dot(h.a, x) == h.b) gens.push_back(h.a);
  std::vector<ZVec> lin;
  for (const auto& h : Pprime.affine_equalities) lin.push_back(h.a);
  QVec w(P.ambient, 0);
  for (const auto& g : gens) w = w + to_qvec(g);
  Polyhedron target = argmin_face(P, w);
  // Refinement check: every generator of the cone must minimize on a face
  // of P containing `target`.
  for (const auto& g : gens) {
    Polyhedron fg = argmin_face(P, to_qvec(g));
    if (!is_face_of(target, fg))
      throw std::domain_error(
          "face_map_phi: normal fan of the source does not refine the "
          "normal fan of the target");
  }
  for (const auto& l : lin) {
    for (int s : {1, -1}) {
      QVec lw(P.ambient);
      for (size_t i = 0; i < P.ambient; ++i) lw[i] = Rat(s * l[i]);
      Polyhedron fl = argmin_face(P, lw);
      if (!is_face_of(target, fl))
        throw std::domain_error(
            "face_map_phi: normal fan of the source does not refine the "
            "normal fan of the target");
    }
  }
  return target;
}

// All lattice points of a bounded polyhedron, enumerated from the vertex
// bounding box and filtered by membership.
inline std::vector<ZVec> lattice_points(const Polyhedron& P) {
  if (P.is_empty) return {};
  if (!P.is_bounded())
    throw std::invalid_argument("lattice_points: polyhedron is unbounded");
  size_t d = P.ambient;
  std::vector<Int> lo(d), hi(d);
  for (size_t i = 0; i < d; ++i) {
    lo[i] = floor_rat(P.vertices[0][i]);
    hi[i] = ceil_rat(P.vertices[0][i]);
    for (const auto& v : P.vertices) {
      lo[i] = std::min(lo[i], floor_rat(v[i]));
      hi[i] = std::max(hi[i], ceil_rat(v[i]));
    }
  }
  std::vector<ZVec> out;
  ZVec cur = lo;
  while (true) {
    QVec q(d);
    for (size_t i = 0; i < d; ++i) q[i] = Rat(cur[i]);
    if (P.contains(q)) out.push_back(cur);
    size_t i = 0;
    while (i < d && cur[i] == hi[i]) {
      cur[i] = lo[i];
      ++i;
    }
    if (i == d) break;
    cur[i] += 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Dilation t*P for t > 0 (vertices scale, recession directions do not).
inline Polyhedron dilate(const Polyhedron& P, const Rat& t) {
  if (P.is_empty) return P;
  std::vector<QVec> vs;
  for (const auto& v : P.vertices) vs.push_back(t * v);
  return polyhedron_from_vrep(vs, P.rays, P.lineality, P.ambient);
}

// Unique decomposition of a face tau of a Minkowski sum P = sum P_i as
// tau = sum phi_{P,P_i}(tau) (Minkowski-sum face decomposition lemma).
inline std::vector<Polyhedron> minkowski_face_decomposition(
    const std::vector<Polyhedron>& summands, const Polyhedron& sum,
    const Polyhedron& tau) {
  std::vector<Polyhedron> parts;
  QVec x = tau.relint_point();
  std::vector<ZVec> gens;
  for (const auto& h : sum.facets)
    if (dot(h.a, x) == h.b) gens.push_back(h.a);
  QVec w(sum.ambient, 0);
  for (const auto& g : gens) w = w + to_qvec(g);
  for (const auto& Pi : summands) parts.push_back(argmin_face(Pi, w));
  return parts;
}

}  // namespace tropcontract
