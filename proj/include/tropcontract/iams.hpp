#pragma once

// Integral affine manifolds with singularities (IAMS) built from local
// models of tropical contractions: the chain subdivision with its
// discriminant locus, monodromy transformations computed in closed form
// from the defining polytopes, positivity and quasi-/very-simplicity
// classification via monodromy polytopes, and reconstruction of the
// defining contraction data from a quasi-simple model.

#include "contraction.hpp"

namespace tropcontract {

// ---------------------------------------------------------------------------
// Chain subdivision and discriminant
// ---------------------------------------------------------------------------

struct IamsSubdivision {
  std::vector<std::vector<size_t>> chains;  // ascending chains in P
  std::vector<Polyhedron> simplices;        // conv of the chain anchors
  std::vector<size_t> gamma;  // chains with dim tau_0 >= 1, dim tau_l <= d-1
};

inline IamsSubdivision subdivide(const PolyComplex& P,
                                 const std::vector<QVec>& anchors) {
  if (anchors.size() != P.cells.size())
    throw std::invalid_argument("subdivide: one anchor per cell required");
  for (size_t i = 0; i < P.cells.size(); ++i)
    if (!detail::relint_contains(P.cells[i], anchors[i]))
      throw std::invalid_argument(
          "subdivide: anchor outside the relative interior of its cell");
  IamsSubdivision out;
  auto all = [](size_t) { return true; };
  for (size_t start = 0; start < P.cells.size(); ++start)
    detail::ascending_chains(P, start, all, out.chains);
  int d = P.dim();
  for (size_t c = 0; c < out.chains.size(); ++c) {
    const auto& ch = out.chains[c];
    std::vector<QVec> pts;
    for (size_t i : ch) pts.push_back(anchors[i]);
    out.simplices.push_back(polytope_from_points(pts, P.ambient));
    if (P.cell_dim[ch.front()] >= 1 && P.cell_dim[ch.back()] <= d - 1)
      out.gamma.push_back(c);
  }
  return out;
}

// The discriminant of a local model: the part of the discriminant locus
// meeting the open star of a_xi, i.e. the Gamma-chains containing xi.
inline std::vector<Polyhedron> local_discriminant(const LocalModel& M) {
  IamsSubdivision sub = subdivide(M.P, M.anchor);
  std::vector<Polyhedron> out;
  for (size_t c : sub.gamma) {
    const auto& ch = sub.chains[c];
    if (std::find(ch.begin(), ch.end(), M.xi_cell) != ch.end())
      out.push_back(sub.simplices[c]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monodromy
// ---------------------------------------------------------------------------

struct LoopSpec {
  size_t v1 = 0;      // vertex of xi (cell index)
  size_t sigma1 = 0;  // maximal cell
  size_t v2 = 0;      // vertex of xi
  size_t sigma2 = 0;  // maximal cell
};

struct MonodromyData {
  LoopSpec loop;
  ZMat T;           // matrix on N'' in the basis fixed at v1
  ZVec d_omega;     // primitive tangent of [v1,v2] in N'' (zero if v1 == v2)
  ZVec dcheck_rho;  // primitive conormal of the shared ridge, positive on
                    // sigma1 (zero if the sigmas share no ridge)
  Int kappa = 0;    // T = I + kappa d_omega dcheck_rho^T when both defined
};

namespace detail {

// Projection/section for N'' = N / sum Z (phi_i(v) + e_i).  When every
// killed generator is a unit vector the quotient is the complementary
// coordinate projection, which keeps bases reproducible across models.
inline QuotientWithSection vertex_quotient(const LocalModel& M, size_t v) {
  size_t n = M.data.n, r = M.data.r, dp = M.data.dp;
  std::vector<ZVec> gens;
  for (size_t i = 0; i < r; ++i)
    gens.push_back(lift_vertex(M.phi.at(v)[i].vertices[0], dp, i));
  bool units = true;
  for (const auto& g : gens) {
    size_t nz = 0;
    for (const auto& x : g)
      if (x != 0) ++nz;
    units &= nz == 1;
  }
  if (units) {
    QuotientWithSection Q;
    Q.projection = zmat(n - r, n);
    Q.section = zmat(n, n - r);
    for (size_t i = 0; i < n - r; ++i) {
      Q.projection[i][i] = 1;
      Q.section[i][i] = 1;
    }
    return Q;
  }
  return quotient_with_section(saturate(gens, n), n);
}

// The outer-product part of eq:tgamma in N'' coordinates.
inline ZMat tgamma_deviation(const LocalModel& M,
                             const QuotientWithSection& Q, size_t v1,
                             size_t v2, size_t s1, size_t s2) {
  size_t n = M.data.n, r = M.data.r;
  size_t nq = rows(Q.projection);
  ZMat E = zmat(nq, nq);
  for (size_t i = 0; i < r; ++i) {
    QVec w = M.phi.at(v2)[i].vertices[0] - M.phi.at(v1)[i].vertices[0];
    ZVec wz = clear_denominators(w);  // integral: both are lattice points
    ZVec wq = mul(Q.projection, wz);
    ZVec md(n);
    for (size_t j = 0; j < n; ++j)
      md[j] = M.m_sigma.at(s2)[i][j] - M.m_sigma.at(s1)[i][j];
    // Covector on N'' via the section: m'' = m . section.
    ZVec mq(nq, 0);
    for (size_t j = 0; j < nq; ++j)
      for (size_t k = 0; k < n; ++k) mq[j] += md[k] * Q.section[k][j];
    for (size_t a = 0; a < nq; ++a)
      for (size_t b = 0; b < nq; ++b) E[a][b] += wq[a] * mq[b];
  }
  return E;
}

// For a primitive integer vector v, some u with <v, u> = 1 (iterated
// extended gcd).
inline ZVec unit_pairing_vector(const ZVec& v) {
  ZVec u(v.size(), 0);
  Int g = 0;
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0) continue;
    if (g == 0) {
      g = abs(v[k]);
      u[k] = v[k] > 0 ? 1 : -1;
      continue;
    }
    Int gg, s, t;
    mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(),
               v[k].get_mpz_t());
    for (size_t j = 0; j < k; ++j) u[j] *= s;
    u[k] = t;
    g = gg;
  }
  if (g != 1)
    throw std::invalid_argument("unit_pairing_vector: vector not primitive");
  return u;
}

// The ridge shared by two maximal cells, if any.
inline std::optional<size_t> shared_ridge(const PolyComplex& P, size_t s1,
                                          size_t s2) {
  int d = P.dim();
  for (size_t rho = 0; rho < P.cells.size(); ++rho)
    if (P.cell_dim[rho] == d - 1 && P.is_face(rho, s1) && P.is_face(rho, s2))
      return rho;
  return std::nullopt;
}

// Primitive conormal of a ridge in N'' coordinates, evaluating sigma1
// positively.
inline ZVec ridge_conormal(const LocalModel& M, const QuotientWithSection& Q,
                           size_t rho, size_t s1) {
  size_t nq = rows(Q.projection);
  ZMat rows_t;
  for (const auto& t : tangent_lattice(M.P.cells[rho]))
    rows_t.push_back(mul(Q.projection, t));
  std::vector<ZVec> ker = integer_kernel(rows_t);
  if (ker.size() != 1)
    throw std::logic_error("ridge_conormal: ridge is not of codimension 1");
  ZVec dc = primitive(ker[0]);
  QVec diff = mul(Q.projection,
                  M.anchor[s1] - M.P.cells[rho].barycentroid());
  Rat val = dot(dc, diff);
  if (val == 0)
    throw std::logic_error("ridge_conormal: sign test degenerate");
  if (val < 0)
    for (auto& x : dc) x = -x;
  return dc;
}

}  // namespace detail

inline MonodromyData monodromy(const LocalModel& M, size_t v1, size_t s1,
                               size_t v2, size_t s2) {
  const PolyComplex& P = M.P;
  auto is_xi_vertex = [&](size_t v) {
    return P.cell_dim[v] == 0 && P.is_face(v, M.xi_cell);
  };
  if (!is_xi_vertex(v1) || !is_xi_vertex(v2))
    throw std::invalid_argument("monodromy: v1, v2 must be vertices of xi");
  if (!M.m_sigma.count(s1) || !M.m_sigma.count(s2))
    throw std::invalid_argument("monodromy: sigma1, sigma2 must be maximal");
  // Unique-minimizer precondition.
  for (size_t s : {s1, s2})
    for (size_t i = 0; i < M.data.r; ++i) {
      auto arg = M.data.f[i].evaluate(M.anchor[s]).second;
      size_t nz = 0;
      for (size_t j : arg)
        if (!is_zero(M.data.f[i].monomials[j])) ++nz;
      if (nz != 1)
        throw std::invalid_argument(
            "monodromy: f_i has a non-unique minimizer on a maximal cell");
    }
  MonodromyData out;
  out.loop = {v1, s1, v2, s2};
  QuotientWithSection Q = detail::vertex_quotient(M, v1);
  size_t nq = rows(Q.projection);
  ZMat E = detail::tgamma_deviation(M, Q, v1, v2, s1, s2);
  out.T = identity_z(nq);
  for (size_t a = 0; a < nq; ++a)
    for (size_t b = 0; b < nq; ++b) out.T[a][b] += E[a][b];
  if (det_z(out.T) != 1)
    throw std::logic_error("monodromy: transformation is not unimodular");
  out.d_omega = ZVec(nq, 0);
  out.dcheck_rho = ZVec(nq, 0);
  if (v1 != v2) {
    QVec diff = P.cells[v2].vertices[0] - P.cells[v1].vertices[0];
    out.d_omega = primitive(mul(Q.projection, clear_denominators(diff)));
  }
  auto rho = detail::shared_ridge(P, s1, s2);
  if (rho && s1 != s2)
    out.dcheck_rho = detail::ridge_conormal(M, Q, *rho, s1);
  // kappa when the loop is of (omega, rho) type: [v1, v2] an edge of xi
  // and the sigmas adjacent across a ridge.
  bool edge_loop = v1 != v2 && rho && s1 != s2;
  if (edge_loop) {
    Polyhedron seg = polytope_from_points(
        {P.cells[v1].vertices[0], P.cells[v2].vertices[0]}, M.data.n);
    edge_loop = P.find(seg).has_value();
  }
  if (edge_loop && !is_zero(out.d_omega)) {
    // E must equal kappa * d_omega * dcheck^T; contract with pairing
    // vectors on both sides to extract kappa exactly.
    ZVec u = detail::unit_pairing_vector(out.d_omega);
    ZVec w = detail::unit_pairing_vector(out.dcheck_rho);
    Int kappa = 0;
    for (size_t a = 0; a < nq; ++a)
      for (size_t b = 0; b < nq; ++b) kappa += u[a] * E[a][b] * w[b];
    for (size_t a = 0; a < nq; ++a)
      for (size_t b = 0; b < nq; ++b)
        if (E[a][b] != kappa * out.d_omega[a] * out.dcheck_rho[b])
          throw std::logic_error(
              "monodromy: deviation is not a rank-one shear along the edge");
    out.kappa = kappa;
  }
  return out;
}

// One loop per (vertex pair of xi, ridge above xi), in cell-id order.
inline std::vector<LoopSpec> generating_loops(const LocalModel& M) {
  const PolyComplex& P = M.P;
  int d = (int)M.data.dp;
  std::vector<size_t> verts;
  for (size_t c : M.xi_faces)
    if (P.cell_dim[c] == 0) verts.push_back(c);
  std::sort(verts.begin(), verts.end());
  std::vector<LoopSpec> out;
  for (size_t a = 0; a < verts.size(); ++a)
    for (size_t b = a + 1; b < verts.size(); ++b)
      for (size_t rho = 0; rho < P.cells.size(); ++rho) {
        if (P.cell_dim[rho] != d - 1 || !P.is_face(M.xi_cell, rho)) continue;
        std::vector<size_t> cof;
        for (size_t s = 0; s < P.cells.size(); ++s)
          if (P.cell_dim[s] == d && P.is_face(rho, s)) cof.push_back(s);
        if (cof.size() != 2) continue;
        // Orient the chamber pair geometrically (lex order of the
        // primitive direction from the ridge into each chamber) so that
        // loop orientations agree across models with the same local
        // combinatorics.
        QVec brho = P.cells[rho].barycentroid();
        ZVec d0 = primitive(clear_denominators(M.anchor[cof[0]] - brho));
        ZVec d1 = primitive(clear_denominators(M.anchor[cof[1]] - brho));
        if (d1 < d0) std::swap(cof[0], cof[1]);
        out.push_back({verts[a], cof[0], verts[b], cof[1]});
      }
  return out;
}

// ---------------------------------------------------------------------------
// Simplicity classification
// ---------------------------------------------------------------------------

struct SimplicityReport {
  bool positive = false;
  bool quasi_simple = false;
  bool very_simple = false;
  std::vector<std::vector<size_t>> omega_classes;  // edges of xi, cell ids
  std::vector<std::vector<size_t>> rho_classes;    // ridges above xi
  std::vector<Int> kappa;                          // per class
  // Monodromy polytopes per class: Delta_i(xi) as covectors in M (Z^n
  // coordinates), check_Delta_i(xi) in the N''-basis at v0; both anchored
  // so that the sigma_0-/v0-vertex is the origin.
  std::vector<Polyhedron> delta_polytopes;
  std::vector<Polyhedron> check_delta_polytopes;
};

namespace detail {

inline bool is_standard_simplex(const std::vector<ZVec>& verts, size_t d) {
  if (verts.empty()) return true;
  std::vector<ZVec> edges;
  for (size_t i = 1; i < verts.size(); ++i) {
    ZVec e(d);
    for (size_t j = 0; j < d; ++j) e[j] = verts[i][j] - verts[0][j];
    edges.push_back(e);
  }
  std::vector<ZVec> basis = lattice_basis(edges, d);
  if (basis.size() != edges.size()) return false;  // not a simplex
  return basis == saturate(edges, d);
}

inline Polyhedron zpoints_hull(const std::vector<ZVec>& pts, size_t d) {
  std::vector<QVec> qs;
  for (const auto& p : pts) qs.push_back(to_qvec(p));
  return polytope_from_points(qs, d);
}

// Translate a lattice-vertex polytope so its lexicographically smallest
// vertex is the origin (canonical form for comparison up to translation).
inline Polyhedron anchor_at_min(const Polyhedron& P) {
  QVec m = P.vertices[0];
  for (const auto& v : P.vertices)
    if (v < m) m = v;
  QVec shift(m.size());
  for (size_t i = 0; i < m.size(); ++i) shift[i] = -m[i];
  return translate(P, shift);
}

}  // namespace detail

inline SimplicityReport classify_simplicity(const LocalModel& M) {
  const PolyComplex& P = M.P;
  int d = (int)M.data.dp;
  size_t n = M.data.n;
  SimplicityReport out;
  // Cells of the classification: edges of xi, ridges and maximal cells
  // above xi.
  std::vector<size_t> verts, edges, rhos, sigmas;
  for (size_t c : M.xi_faces) {
    if (P.cell_dim[c] == 0) verts.push_back(c);
    if (P.cell_dim[c] == 1) edges.push_back(c);
  }
  std::sort(verts.begin(), verts.end());
  std::sort(edges.begin(), edges.end());
  for (size_t c = 0; c < P.cells.size(); ++c) {
    if (!P.is_face(M.xi_cell, c)) continue;
    if (P.cell_dim[c] == d - 1) {
      std::vector<size_t> cof;
      for (size_t s = 0; s < P.cells.size(); ++s)
        if (P.cell_dim[s] == d && P.is_face(c, s)) cof.push_back(s);
      if (cof.size() == 2) rhos.push_back(c);
    }
    if (P.cell_dim[c] == d) sigmas.push_back(c);
  }
  std::sort(rhos.begin(), rhos.end());
  std::sort(sigmas.begin(), sigmas.end());
  if (verts.empty()) throw std::logic_error("classify_simplicity: no vertex");
  size_t v0 = verts.front();
  auto endpoints = [&](size_t e) {
    std::vector<size_t> vs;
    for (size_t v : verts)
      if (P.is_face(v, e)) vs.push_back(v);
    if (vs.size() != 2)
      throw std::logic_error("classify_simplicity: edge without 2 vertices");
    return std::pair<size_t, size_t>{vs[0], vs[1]};
  };
  auto cofaces = [&](size_t rho) {
    std::vector<size_t> cof;
    for (size_t s : sigmas)
      if (P.is_face(rho, s)) cof.push_back(s);
    return std::pair<size_t, size_t>{cof[0], cof[1]};
  };
  // kappa table.
  std::map<std::pair<size_t, size_t>, Int> kap;
  out.positive = true;
  for (size_t e : edges)
    for (size_t rho : rhos) {
      auto [va, vb] = endpoints(e);
      auto [sa, sb] = cofaces(rho);
      MonodromyData md = monodromy(M, va, sa, vb, sb);
      kap[{e, rho}] = md.kappa;
      if (md.kappa < 0) out.positive = false;
    }
  // Degenerate local models (xi a vertex, or a smooth model) have no
  // monodromy at all and are trivially very simple.
  bool any_nonzero = false;
  for (const auto& [k, v] : kap) any_nonzero |= v != 0;
  if (!any_nonzero) {
    out.quasi_simple = out.positive;
    out.very_simple = out.positive;
    return out;
  }
  if (!out.positive) return out;
  // Classes: connected components of the bipartite graph on edges and
  // ridges joined by nonzero kappa.
  std::map<size_t, size_t> comp_e, comp_r;
  size_t ncomp = 0;
  for (size_t e : edges) {
    if (comp_e.count(e)) continue;
    bool has = false;
    for (size_t rho : rhos) has |= kap[{e, rho}] != 0;
    if (!has) continue;
    size_t id = ncomp++;
    std::vector<size_t> qe = {e};
    comp_e[e] = id;
    while (!qe.empty()) {
      size_t cur = qe.back();
      qe.pop_back();
      for (size_t rho : rhos) {
        if (kap[{cur, rho}] == 0 || comp_r.count(rho)) continue;
        comp_r[rho] = id;
        for (size_t e2 : edges)
          if (kap[{e2, rho}] != 0 && !comp_e.count(e2)) {
            comp_e[e2] = id;
            qe.push_back(e2);
          }
      }
    }
  }
  out.omega_classes.assign(ncomp, {});
  out.rho_classes.assign(ncomp, {});
  for (const auto& [e, id] : comp_e) out.omega_classes[id].push_back(e);
  for (const auto& [rho, id] : comp_r) out.rho_classes[id].push_back(rho);
  for (auto& c : out.omega_classes) std::sort(c.begin(), c.end());
  for (auto& c : out.rho_classes) std::sort(c.begin(), c.end());
  // Per-class data: constant kappa and translation-invariant monodromy
  // polytopes.
  out.quasi_simple = true;
  QuotientWithSection Q0 = detail::vertex_quotient(M, v0);
  size_t nq = rows(Q0.projection);
  size_t sigma0 = sigmas.front();
  for (size_t i = 0; i < ncomp; ++i) {
    // kappa constant on the class.
    std::optional<Int> ki;
    for (size_t e : out.omega_classes[i])
      for (size_t rho : out.rho_classes[i]) {
        Int k = kap[{e, rho}];
        if (!ki)
          ki = k;
        else if (*ki != k)
          out.quasi_simple = false;
      }
    out.kappa.push_back(ki ? *ki : Int(0));
    // check_Delta_rho(xi) = conv{n^rho_{v0,v}} per rho, in N'' at v0.
    std::optional<Polyhedron> cd;
    for (size_t rho : out.rho_classes[i]) {
      auto [sa, sb] = cofaces(rho);
      ZVec dc = detail::ridge_conormal(M, Q0, rho, sa);
      ZVec uc = detail::unit_pairing_vector(dc);
      std::vector<ZVec> pts;
      bool ok = true;
      for (size_t v : verts) {
        ZMat E = detail::tgamma_deviation(M, Q0, v0, v, sa, sb);
        ZVec nvec(nq, 0);
        for (size_t a = 0; a < nq; ++a)
          for (size_t b = 0; b < nq; ++b) nvec[a] += E[a][b] * uc[b];
        for (size_t a = 0; a < nq; ++a)
          for (size_t b = 0; b < nq; ++b)
            ok &= E[a][b] == nvec[a] * dc[b];
        pts.push_back(nvec);
      }
      if (!ok) {
        out.quasi_simple = false;
        continue;
      }
      Polyhedron hull = detail::zpoints_hull(pts, nq);
      if (!cd)
        cd = hull;
      else if (!(detail::anchor_at_min(*cd) == detail::anchor_at_min(hull)))
        out.quasi_simple = false;
    }
    out.check_delta_polytopes.push_back(
        cd ? *cd : polytope_from_points({QVec(nq, 0)}, nq));
    // Delta_omega(xi) = conv{m_omega^{sigma0, sigma}} per omega, as
    // covectors in M (lifted through the basis at the edge's endpoint).
    std::optional<Polyhedron> dd;
    for (size_t e : out.omega_classes[i]) {
      auto [va, vb] = endpoints(e);
      QuotientWithSection Qv = detail::vertex_quotient(M, va);
      size_t nqv = rows(Qv.projection);
      QVec diff = P.cells[vb].vertices[0] - P.cells[va].vertices[0];
      ZVec dw = primitive(mul(Qv.projection, clear_denominators(diff)));
      ZVec uw = detail::unit_pairing_vector(dw);
      std::vector<ZVec> pts;
      bool ok = true;
      for (size_t s : sigmas) {
        ZMat E = detail::tgamma_deviation(M, Qv, va, vb, sigma0, s);
        ZVec mq(nqv, 0);
        for (size_t b = 0; b < nqv; ++b)
          for (size_t a = 0; a < nqv; ++a) mq[b] += uw[a] * E[a][b];
        for (size_t a = 0; a < nqv; ++a)
          for (size_t b = 0; b < nqv; ++b)
            ok &= E[a][b] == dw[a] * mq[b];
        // Lift the covector to M: m = m'' . projection.
        ZVec m(n, 0);
        for (size_t k = 0; k < n; ++k)
          for (size_t b = 0; b < nqv; ++b)
            m[k] += mq[b] * Qv.projection[b][k];
        pts.push_back(m);
      }
      if (!ok) {
        out.quasi_simple = false;
        continue;
      }
      Polyhedron hull = detail::zpoints_hull(pts, n);
      if (!dd)
        dd = hull;
      else if (!(detail::anchor_at_min(*dd) == detail::anchor_at_min(hull)))
        out.quasi_simple = false;
    }
    out.delta_polytopes.push_back(
        dd ? *dd : polytope_from_points({QVec(n, 0)}, n));
  }
  // Disjointness and clause 1 (kappa = 0 across classes) hold by the
  // component construction.  Very simple: the stacked polytopes are
  // standard simplices.
  if (!out.quasi_simple) return out;
  std::vector<ZVec> dstack, cstack;
  for (size_t i = 0; i < ncomp; ++i) {
    for (const auto& v : out.delta_polytopes[i].vertices) {
      ZVec p(n + ncomp, 0);
      ZVec vz = clear_denominators(v);
      for (size_t k = 0; k < n; ++k) p[k] = vz[k];
      p[n + i] = 1;
      dstack.push_back(p);
    }
    for (const auto& v : out.check_delta_polytopes[i].vertices) {
      ZVec p(nq + ncomp, 0);
      ZVec vz = clear_denominators(v);
      for (size_t k = 0; k < nq; ++k) p[k] = vz[k];
      p[nq + i] = 1;
      cstack.push_back(p);
    }
  }
  out.very_simple = detail::is_standard_simplex(dstack, n + ncomp) &&
                    detail::is_standard_simplex(cstack, nq + ncomp);
  return out;
}

// ---------------------------------------------------------------------------
// Reconstruction of contraction data (quasi-simple case)
// ---------------------------------------------------------------------------

inline ContractionData reconstruct_contraction_data(
    const LocalModel& M, const std::vector<Int>& alpha,
    const std::vector<Int>& beta) {
  SimplicityReport rep = classify_simplicity(M);
  if (!rep.quasi_simple)
    throw std::invalid_argument(
        "reconstruct_contraction_data: model is not quasi-simple");
  size_t r = rep.kappa.size();
  if (alpha.size() != r || beta.size() != r)
    throw std::invalid_argument(
        "reconstruct_contraction_data: need one factor pair per class");
  for (size_t i = 0; i < r; ++i)
    if (alpha[i] <= 0 || beta[i] <= 0 || alpha[i] * beta[i] != rep.kappa[i])
      throw std::invalid_argument(
          "reconstruct_contraction_data: invalid factorization of kappa");
  if (r == 0)
    throw std::invalid_argument(
        "reconstruct_contraction_data: model has trivial monodromy");
  // Base lattice of the new data: N'' at v0 (coordinates of the
  // classification polytopes).
  const PolyComplex& P = M.P;
  std::vector<size_t> verts;
  for (size_t c : M.xi_faces)
    if (P.cell_dim[c] == 0) verts.push_back(c);
  std::sort(verts.begin(), verts.end());
  QuotientWithSection Q0 = detail::vertex_quotient(M, verts.front());
  size_t nq = rows(Q0.projection);
  std::vector<Polyhedron> deltas, check_deltas;
  auto scaled = [&](const Polyhedron& hull, const Int& div, size_t amb) {
    std::vector<QVec> vs;
    for (const auto& v : hull.vertices) {
      QVec w(amb);
      for (size_t k = 0; k < amb; ++k) w[k] = v[k] / Rat(div);
      vs.push_back(w);
    }
    Polyhedron out = polytope_from_points(vs, amb);
    if (!out.is_lattice_polytope())
      throw std::invalid_argument(
          "reconstruct_contraction_data: factorization does not divide the "
          "monodromy polytope");
    return out;
  };
  for (size_t i = 0; i < r; ++i) {
    // Delta_i(xi) lives in M as covectors; express in the dual basis of
    // N'' at v0: m'' = m . section.
    std::vector<QVec> mv;
    for (const auto& v : rep.delta_polytopes[i].vertices) {
      ZVec vz = clear_denominators(v);
      QVec w(nq, 0);
      for (size_t b = 0; b < nq; ++b)
        for (size_t k = 0; k < vz.size(); ++k)
          w[b] += Rat(vz[k] * Q0.section[k][b]);
      mv.push_back(w);
    }
    deltas.push_back(
        scaled(polytope_from_points(mv, nq), beta[i], nq));
    check_deltas.push_back(scaled(rep.check_delta_polytopes[i], alpha[i], nq));
  }
  return contraction_data(deltas, check_deltas);
}

}  // namespace tropcontract
