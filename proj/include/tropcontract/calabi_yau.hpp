#pragma once

// Reflexive polytopes and nef-partitions, the dual intersection complex
// B^h_nabla of the associated toric degeneration of Calabi-Yau complete
// intersections, the tropical Calabi-Yau variety X(f_1..f_r) cut out by
// the induced tropical polynomials, per-cell local contraction models,
// and the glued global tropical contraction X(f_1..f_r) -> B^h_nabla.

#include "iams.hpp"

namespace tropcontract {

// ---------------------------------------------------------------------------
// Polar duality
// ---------------------------------------------------------------------------

struct PolarDual {
  Polyhedron polar;
  bool reflexive = false;
};

// P* = {y : <x, y> >= -1 for all x in P}.  Requires 0 in the interior of
// P (so that the polar is again a polytope); P is reflexive iff both P
// and P* are lattice polytopes.
inline PolarDual polar_dual(const Polyhedron& P) {
  if (P.is_empty || !P.is_bounded() || P.dim() != (int)P.ambient)
    throw std::invalid_argument(
        "polar_dual: need a nonempty full-dimensional polytope");
  for (const auto& h : P.facets)
    if (!(h.b < 0))
      throw std::invalid_argument(
          "polar_dual: 0 is not an interior point");
  std::vector<std::pair<ZVec, Rat>> ineqs;
  for (const auto& v : P.vertices) {
    // <v, y> >= -1, scaled by the common denominator of v.
    Int L = 1;
    for (const auto& c : v) L = lcm(L, Int(c.get_den()));
    ZVec a(P.ambient);
    for (size_t i = 0; i < P.ambient; ++i)
      a[i] = Int(v[i].get_num()) * (L / Int(v[i].get_den()));
    ineqs.push_back({a, Rat(-L)});
  }
  PolarDual out;
  out.polar = polyhedron_from_hrep(ineqs, {}, P.ambient);
  out.reflexive =
      P.is_lattice_polytope() && out.polar.is_lattice_polytope();
  return out;
}

// ---------------------------------------------------------------------------
// Nef-partitions
// ---------------------------------------------------------------------------

struct NefPartitionData {
  size_t n = 0;  // rank of M (= dim of the ambient torus)
  size_t r = 0;  // number of parts
  Polyhedron delta;                     // Delta = Delta_1 + .. + Delta_r
  std::vector<Polyhedron> delta_parts;  // Delta_i
  Polyhedron delta_polar;               // Delta*
  std::vector<Polyhedron> nabla_parts;  // nabla_i
  Polyhedron nabla;                     // nabla = sum_i nabla_i
  Polyhedron nabla_polar;               // nabla*

  // phi_i(x) = -min_{m in Delta_i} <m, x>: the piecewise linear function
  // on the normal fan of Delta induced by Delta_i; phi = sum_i phi_i.
  Rat phi_part(size_t i, const QVec& x) const {
    return -min_pairing(delta_parts[i], x);
  }
  Rat phi(const QVec& x) const {
    Rat s(0);
    for (size_t i = 0; i < r; ++i) s += phi_part(i, x);
    return s;
  }
  // check_phi_i(m) = -min_{y in nabla_i} <m, y> on the normal fan of
  // nabla; check_phi = sum_i check_phi_i.
  Rat check_phi_part(size_t i, const QVec& m) const {
    return -min_pairing(nabla_parts[i], m);
  }
  Rat check_phi(const QVec& m) const {
    Rat s(0);
    for (size_t i = 0; i < r; ++i) s += check_phi_part(i, m);
    return s;
  }

  static Rat min_pairing(const Polyhedron& P, const QVec& x) {
    Rat best;
    bool first = true;
    for (const auto& v : P.vertices) {
      Rat d = dot(v, x);
      if (first || d < best) {
        best = d;
        first = false;
      }
    }
    return best;
  }
};

namespace detail {

inline std::vector<ZVec> sorted_lattice_points_without_zero(
    const Polyhedron& P) {
  std::vector<ZVec> pts = lattice_points(P);
  std::vector<ZVec> out;
  for (auto& p : pts)
    if (!is_zero(p)) out.push_back(std::move(p));
  sort_unique(out);
  return out;
}

}  // namespace detail

// Validates a nef-partition Delta = Delta_1 + .. + Delta_r of a reflexive
// polytope and builds the dual data nabla_i, nabla, and the polars.
inline NefPartitionData build_nef_partition(
    const Polyhedron& delta, const std::vector<Polyhedron>& parts) {
  NefPartitionData D;
  D.n = delta.ambient;
  D.r = parts.size();
  if (D.r == 0)
    throw std::invalid_argument("build_nef_partition: no parts given");
  QVec zero(D.n, 0);
  for (const auto& P : parts)
    if (P.ambient != D.n || P.is_empty || !P.is_bounded() ||
        !P.is_lattice_polytope())
      throw std::invalid_argument(
          "build_nef_partition: each Delta_i must be a lattice polytope");
  Polyhedron sum = polytope_from_points({zero}, D.n);
  for (const auto& P : parts) sum = minkowski_sum(sum, P);
  if (!(sum == delta))
    throw std::invalid_argument(
        "build_nef_partition: the parts do not sum to Delta");
  PolarDual pd = polar_dual(delta);
  if (!pd.reflexive)
    throw std::invalid_argument("build_nef_partition: Delta is not reflexive");
  D.delta = delta;
  D.delta_parts = parts;
  D.delta_polar = pd.polar;
  // Nef condition: phi_i takes values in {0, 1} on the primitive ray
  // generators of the normal fan of Delta (the vertices of Delta*), and
  // the values sum to phi = 1 there.
  for (const auto& g : D.delta_polar.vertices) {
    Rat total(0);
    for (size_t i = 0; i < D.r; ++i) {
      Rat v = D.phi_part(i, g);
      if (v != 0 && v != 1)
        throw std::invalid_argument(
            "build_nef_partition: nef condition violated: phi_i(e_j) is "
            "not in {0, 1}");
      total += v;
    }
    if (total != 1)
      throw std::invalid_argument(
          "build_nef_partition: nef condition violated: sum_i phi_i(e_j) "
          "!= 1 on a ray generator");
  }
  for (const auto& P : parts)
    if (!P.contains(zero))
      throw std::invalid_argument(
          "build_nef_partition: nef condition violated: 0 is not a "
          "lattice point of Delta_i");
  // nabla_i = {y : <Delta_j, y> >= -delta_{ij} for all j}.
  for (size_t i = 0; i < D.r; ++i) {
    std::vector<std::pair<ZVec, Rat>> ineqs;
    for (size_t j = 0; j < D.r; ++j)
      for (const auto& m : parts[j].vertices)
        ineqs.push_back({clear_denominators(m), Rat(i == j ? -1 : 0)});
    Polyhedron nb = polyhedron_from_hrep(ineqs, {}, D.n);
    if (nb.is_empty || !nb.is_bounded() || !nb.is_lattice_polytope())
      throw std::invalid_argument(
          "build_nef_partition: nef condition violated: nabla_i is not a "
          "lattice polytope");
    // Cross-check against the generator description nabla_i =
    // conv({0} cup {e_j : phi_i(e_j) = 1}).
    std::vector<QVec> gens = {zero};
    for (const auto& g : D.delta_polar.vertices)
      if (D.phi_part(i, g) == 1) gens.push_back(g);
    if (!(nb == polytope_from_points(gens, D.n)))
      throw std::invalid_argument(
          "build_nef_partition: nef condition violated: nabla_i does not "
          "match its ray-generator description");
    D.nabla_parts.push_back(nb);
  }
  D.nabla = polytope_from_points({zero}, D.n);
  for (const auto& nb : D.nabla_parts) D.nabla = minkowski_sum(D.nabla, nb);
  PolarDual nd = polar_dual(D.nabla);
  if (!nd.reflexive)
    throw std::invalid_argument(
        "build_nef_partition: nef condition violated: nabla is not "
        "reflexive");
  D.nabla_polar = nd.polar;
  // Delta* = conv(nabla_1 cup .. cup nabla_r) and nabla* = conv(Delta_1
  // cup .. cup Delta_r).
  std::vector<QVec> nabla_gens, delta_gens;
  for (const auto& nb : D.nabla_parts)
    nabla_gens.insert(nabla_gens.end(), nb.vertices.begin(),
                      nb.vertices.end());
  for (const auto& P : D.delta_parts)
    delta_gens.insert(delta_gens.end(), P.vertices.begin(), P.vertices.end());
  if (!(D.delta_polar == polytope_from_points(nabla_gens, D.n)))
    throw std::invalid_argument(
        "build_nef_partition: nef condition violated: Delta* != "
        "conv(nabla_1, .., nabla_r)");
  if (!(D.nabla_polar == polytope_from_points(delta_gens, D.n)))
    throw std::invalid_argument(
        "build_nef_partition: nef condition violated: nabla* != "
        "conv(Delta_1, .., Delta_r)");
  // Lattice point partitions: the boundary lattice points of Delta*
  // (resp. nabla*) are the disjoint union of the nonzero lattice points
  // of the nabla_i (resp. Delta_i).
  auto check_partition = [&](const Polyhedron& polar,
                             const std::vector<Polyhedron>& fam,
                             const char* what) {
    std::vector<ZVec> boundary =
        detail::sorted_lattice_points_without_zero(polar);
    std::vector<ZVec> pieces;
    for (const auto& P : fam) {
      auto pts = detail::sorted_lattice_points_without_zero(P);
      pieces.insert(pieces.end(), pts.begin(), pts.end());
    }
    std::sort(pieces.begin(), pieces.end());
    bool disjoint =
        std::adjacent_find(pieces.begin(), pieces.end()) == pieces.end();
    if (!disjoint || pieces != boundary)
      throw std::invalid_argument(
          std::string("build_nef_partition: nef condition violated: "
                      "lattice point partition fails for ") +
          what);
  };
  check_partition(D.delta_polar, D.nabla_parts, "Delta*");
  check_partition(D.nabla_polar, D.delta_parts, "nabla*");
  return D;
}

// ---------------------------------------------------------------------------
// The dual intersection complex B^h_nabla
// ---------------------------------------------------------------------------

// A relevant pair (mu, nu) and the corresponding cell of B: mu is a cell
// of the induced subdivision of the boundary of Delta*, nu a cell of the
// subdivision of nabla^{h'}, beta_star[i] = mu cap nabla_i, and cell =
// sum_i beta_star[i] + nu.
struct CyPair {
  Polyhedron mu;
  Polyhedron nu;
  std::vector<Polyhedron> beta_star;
  Polyhedron cell;
};

struct DualIntersectionComplex {
  NefPartitionData data;
  std::vector<ZVec> check_rays;  // ray generators of the check fan
  std::vector<Rat> h;            // h on check_rays (integral values)
  Polyhedron nabla_h;            // nabla^h = {y : <g,y> >= -h(g)}
  Polyhedron nabla_hp;           // nabla^{h'}, h' = h - check_phi
  Fan sigma_tilde;               // the fan Sigma-tilde' in N_R + R
  std::vector<CyPair> pairs;     // one per cell, aligned with `complex`
  PolyComplex complex;           // the cells of B^h_nabla
  std::vector<size_t> cell_pair;
  // Fan structure at each vertex v: the projection N -> N / span(
  // beta*_1(mu_v), .., beta*_r(mu_v)) with a section.
  std::map<size_t, QuotientWithSection> vertex_chart;

  // h extends to M_R as the support-type function of nabla^h.
  Rat h_value(const QVec& m) const {
    return -NefPartitionData::min_pairing(nabla_h, m);
  }
  Rat hp_value(const QVec& m) const {
    return -NefPartitionData::min_pairing(nabla_hp, m);
  }
};

namespace detail {

// Lift a polytope vertex v to the integral ray generator (L v, L c) of
// cone(P x {c}) in N_R + R.
inline ZVec lift_ray(const QVec& v, const Int& c) {
  Int L = 1;
  for (const auto& x : v) L = lcm(L, Int(x.get_den()));
  ZVec g;
  for (const auto& x : v) g.push_back(Int(x.get_num()) * (L / Int(x.get_den())));
  g.push_back(L * c);
  return g;
}

}  // namespace detail

// Builds the dual intersection complex for a nef-partition and an
// integral piecewise linear function h given by its values on the ray
// generators of the check fan (the vertices of nabla*, in their sorted
// order).  Defaults: h = check_phi (all ones) and Sigma-tilde' =
// Sigma-tilde; a user refinement may be supplied as explicit cone
// generator lists in N + Z and is validated against the two conditions
// for a good subdivision.
inline DualIntersectionComplex dual_intersection_complex(
    const NefPartitionData& data,
    const std::optional<std::vector<Rat>>& h_opt = std::nullopt,
    const std::optional<std::vector<std::vector<ZVec>>>& refinement =
        std::nullopt) {
  DualIntersectionComplex D;
  D.data = data;
  size_t n = data.n;
  for (const auto& v : data.nabla_polar.vertices)
    D.check_rays.push_back(clear_denominators(v));
  if (h_opt) {
    D.h = *h_opt;
    if (D.h.size() != D.check_rays.size())
      throw std::invalid_argument(
          "dual_intersection_complex: h must give one value per ray "
          "generator of the check fan");
    for (const auto& v : D.h)
      if (v.get_den() != 1)
        throw std::invalid_argument(
            "dual_intersection_complex: h must be integral");
  } else {
    for (const auto& g : D.check_rays) D.h.push_back(data.check_phi(to_qvec(g)));
  }

  // Convexity checks cone by cone.  The maximal cones of the check fan
  // are the cones over the facets of nabla*; on each, a linear extension
  // of h is solved from the ray values and compared with h on the
  // remaining rays (strict convexity of h, plain convexity of
  // h' = h - check_phi).
  std::vector<Polyhedron> polar_facets;
  for (const auto& f : face_lattice(data.nabla_polar))
    if (f.poly.dim() == (int)n - 1) polar_facets.push_back(f.poly);
  for (size_t fi = 0; fi < polar_facets.size(); ++fi) {
    std::vector<size_t> in_cone;
    for (size_t j = 0; j < D.check_rays.size(); ++j)
      if (polar_facets[fi].contains(to_qvec(D.check_rays[j])))
        in_cone.push_back(j);
    QMat A;
    QVec b, bp;
    for (size_t j : in_cone) {
      A.push_back(to_qvec(D.check_rays[j]));
      b.push_back(-D.h[j]);
      bp.push_back(data.check_phi(to_qvec(D.check_rays[j])) - D.h[j]);
    }
    auto nf = solve_q(A, b);
    if (!nf)
      throw std::invalid_argument(
          "dual_intersection_complex: h is not linear on maximal cone " +
          std::to_string(fi) + " of the check fan");
    auto nfp = solve_q(A, bp);
    if (!nfp)
      throw std::invalid_argument(
          "dual_intersection_complex: h - check_phi is not linear on "
          "maximal cone " +
          std::to_string(fi) + " of the check fan");
    for (size_t j = 0; j < D.check_rays.size(); ++j) {
      if (std::find(in_cone.begin(), in_cone.end(), j) != in_cone.end())
        continue;
      QVec g = to_qvec(D.check_rays[j]);
      if (!(-dot(g, *nf) < D.h[j]))
        throw std::invalid_argument(
            "dual_intersection_complex: h is not strictly convex "
            "(witness: cone " +
            std::to_string(fi) + ", ray " + std::to_string(j) + ")");
      if (!(-dot(g, *nfp) <= D.h[j] - data.check_phi(g)))
        throw std::invalid_argument(
            "dual_intersection_complex: h - check_phi is not convex "
            "(witness: cone " +
            std::to_string(fi) + ", ray " + std::to_string(j) + ")");
    }
  }

  // The Newton polytopes nabla^h and nabla^{h'}.
  std::vector<std::pair<ZVec, Rat>> ineqs_h, ineqs_hp;
  for (size_t j = 0; j < D.check_rays.size(); ++j) {
    ineqs_h.push_back({D.check_rays[j], -D.h[j]});
    ineqs_hp.push_back(
        {D.check_rays[j],
         data.check_phi(to_qvec(D.check_rays[j])) - D.h[j]});
  }
  D.nabla_h = polyhedron_from_hrep(ineqs_h, {}, n);
  D.nabla_hp = polyhedron_from_hrep(ineqs_hp, {}, n);

  // Sigma-tilde has three cone families: cones over proper faces of
  // Delta* at height 0; cones cone(F1) x {0} + cone(F2 x {1}) where
  // F1 + F2 is the canonical Minkowski decomposition of a proper face of
  // Delta* + nabla^{h'}; and the cone over nabla^{h'} at height 1.
  std::vector<Polyhedron> polar_faces;  // proper nonempty faces of Delta*
  for (const auto& f : face_lattice(data.delta_polar))
    if (f.poly.dim() < (int)n) polar_faces.push_back(f.poly);
  Polyhedron big = minkowski_sum(data.delta_polar, D.nabla_hp);
  std::vector<std::vector<ZVec>> gens;
  for (const auto& F1 : polar_faces) {
    std::vector<ZVec> g;
    for (const auto& v : F1.vertices) g.push_back(detail::lift_ray(v, 0));
    gens.push_back(g);
  }
  for (const auto& f : face_lattice(big)) {
    if (f.poly.dim() == (int)n) continue;
    auto parts = minkowski_face_decomposition({data.delta_polar, D.nabla_hp},
                                              big, f.poly);
    std::vector<ZVec> g;
    for (const auto& v : parts[0].vertices) g.push_back(detail::lift_ray(v, 0));
    for (const auto& w : parts[1].vertices) g.push_back(detail::lift_ray(w, 1));
    gens.push_back(g);
  }
  {
    std::vector<ZVec> g;
    for (const auto& w : D.nabla_hp.vertices)
      g.push_back(detail::lift_ray(w, 1));
    gens.push_back(g);
  }
  Fan base = fan_from_cones(n + 1, gens);

  if (refinement) {
    Fan fine = fan_from_cones(n + 1, *refinement);
    // Refinement: every cone must be contained in a cone of Sigma-tilde.
    for (size_t c = 0; c < fine.cones.size(); ++c) {
      bool inside = false;
      for (size_t b2 = 0; b2 < base.cones.size() && !inside; ++b2) {
        bool all = true;
        for (const auto& r : fine.cones[c])
          all &= base.cone_contains(b2, r);
        inside = all;
      }
      if (!inside)
        throw std::invalid_argument(
            "dual_intersection_complex: refinement cone " +
            std::to_string(c) + " is not contained in Sigma-tilde");
    }
    // Good subdivision, condition 1: the slice at N_R x {0} is the fan
    // over the faces of Delta*.
    std::vector<std::vector<ZVec>> sigma_gens;
    for (const auto& F1 : polar_faces) {
      std::vector<ZVec> g;
      for (const auto& v : F1.vertices) g.push_back(clear_denominators(v));
      sigma_gens.push_back(g);
    }
    Fan sigma = fan_from_cones(n, sigma_gens);
    std::vector<std::vector<ZVec>> slices;
    for (size_t c = 0; c < fine.cones.size(); ++c) {
      std::vector<ZVec> s;
      for (const auto& r : fine.cones[c])
        if (r[n] == 0) s.push_back(ZVec(r.begin(), r.begin() + n));
      detail::sort_unique(s);
      if (!sigma.find_cone(s))
        throw std::invalid_argument(
            "dual_intersection_complex: refinement violates good "
            "subdivision condition 1 (slice of cone " +
            std::to_string(c) + " is not a cone of Sigma')");
      slices.push_back(s);
    }
    for (size_t c = 0; c < sigma.cones.size(); ++c)
      if (std::find(slices.begin(), slices.end(), sigma.cones[c]) ==
          slices.end())
        throw std::invalid_argument(
            "dual_intersection_complex: refinement violates good "
            "subdivision condition 1 (a cone of Sigma' is missing from "
            "the slice)");
    // Condition 2: off-slice rays have the form (y, 1) with y a lattice
    // point of nabla^{h'}.
    for (size_t c = 0; c < fine.cones.size(); ++c)
      for (const auto& r : fine.cones[c]) {
        if (r[n] == 0) continue;
        QVec y(r.begin(), r.begin() + n);
        if (r[n] != 1 || !D.nabla_hp.contains(y))
          throw std::invalid_argument(
              "dual_intersection_complex: refinement violates good "
              "subdivision condition 2 (ray not of the form (y,1), y in "
              "nabla^{h'})");
      }
    D.sigma_tilde = fine;
  } else {
    D.sigma_tilde = base;
  }

  // Relevant cones and the cells beta(mu) + nu of P(Sigma-tilde').
  for (size_t c = 0; c < D.sigma_tilde.cones.size(); ++c) {
    std::vector<QVec> mu_pts, nu_pts;
    for (const auto& r : D.sigma_tilde.cones[c]) {
      if (r[n] == 0) {
        mu_pts.push_back(to_qvec(ZVec(r.begin(), r.begin() + n)));
      } else {
        QVec w(n);
        for (size_t i = 0; i < n; ++i) w[i] = Rat(r[i]) / Rat(r[n]);
        nu_pts.push_back(w);
      }
    }
    if (mu_pts.empty() || nu_pts.empty()) continue;
    CyPair pr;
    pr.mu = polytope_from_points(mu_pts, n);
    pr.nu = polytope_from_points(nu_pts, n);
    bool relevant = true;
    for (size_t i = 0; i < data.r && relevant; ++i) {
      Polyhedron bi = intersect(pr.mu, data.nabla_parts[i]);
      relevant = !bi.is_empty;
      pr.beta_star.push_back(bi);
    }
    if (!relevant) continue;
    pr.cell = pr.nu;
    for (const auto& bi : pr.beta_star)
      pr.cell = minkowski_sum(pr.cell, bi);
    bool dup = false;
    for (const auto& q : D.pairs)
      if (q.cell == pr.cell) {
        if (!(q.mu == pr.mu && q.nu == pr.nu))
          throw std::logic_error(
              "dual_intersection_complex: distinct relevant pairs yield "
              "the same cell");
        dup = true;
      }
    if (!dup) D.pairs.push_back(std::move(pr));
  }
  if (D.pairs.empty())
    throw std::logic_error("dual_intersection_complex: no relevant cells");

  std::vector<Polyhedron> cell_polys;
  for (const auto& pr : D.pairs) cell_polys.push_back(pr.cell);
  D.complex = make_complex(cell_polys, n);
  for (size_t c = 0; c < D.complex.cells.size(); ++c) {
    std::optional<size_t> match;
    for (size_t p = 0; p < D.pairs.size(); ++p)
      if (D.pairs[p].cell == D.complex.cells[c]) match = p;
    if (!match)
      throw std::logic_error(
          "dual_intersection_complex: a face of B is not a cell of "
          "P(Sigma-tilde')");
    D.cell_pair.push_back(*match);
  }

  // Fan structure at the vertices (eq. gfanstr): quotient by the span of
  // the r points beta*_i(mu_v), which form a primitive sublattice.
  for (size_t c = 0; c < D.complex.cells.size(); ++c) {
    if (D.complex.cell_dim[c] != 0) continue;
    const CyPair& pr = D.pairs[D.cell_pair[c]];
    std::vector<ZVec> span;
    for (const auto& bi : pr.beta_star) {
      if (bi.vertices.size() != 1)
        throw std::logic_error(
            "dual_intersection_complex: beta*_i at a vertex is not a "
            "single point");
      span.push_back(clear_denominators(bi.vertices[0]));
    }
    std::vector<ZVec> sat = saturate(span, n);
    if (sat.size() != data.r)
      throw std::logic_error(
          "dual_intersection_complex: the beta*_i at a vertex do not "
          "span a primitive rank-r sublattice");
    D.vertex_chart[c] = quotient_with_section(sat, n);
  }
  return D;
}

// The discriminant locus of (B, P(Sigma-tilde')): simplices of the
// anchor subdivision spanned by chains avoiding both the vertices and
// the maximal cells.
inline std::vector<Polyhedron> cy_discriminant(
    const DualIntersectionComplex& D) {
  std::vector<QVec> anchors;
  for (const auto& c : D.complex.cells) anchors.push_back(c.barycentroid());
  IamsSubdivision sub = subdivide(D.complex, anchors);
  std::vector<Polyhedron> out;
  for (size_t c : sub.gamma) out.push_back(sub.simplices[c]);
  return out;
}

// ---------------------------------------------------------------------------
// The tropical Calabi-Yau variety
// ---------------------------------------------------------------------------

struct CyTropicalVariety {
  std::vector<TropicalPolynomial> f;     // f_i(y) = min {h(m) + <m, y>}
  std::vector<RefinementCell> x_cells;   // stable intersection support
  std::vector<RefinementCell> xc_cells;  // the compact part X^c
  Fan fan;                               // Sigma' in N_R
};

// The stable intersection X(f_1..f_r) of the tropical hypersurfaces of
// the induced polynomials, and its compact part X^c (the locus where the
// zero monomial attains the minimum of every f_i together with a nonzero
// monomial).  X^c is checked to coincide with the cells of B.
inline CyTropicalVariety cy_tropical_variety(
    const DualIntersectionComplex& D) {
  CyTropicalVariety out;
  size_t n = D.data.n;
  for (size_t i = 0; i < D.data.r; ++i) {
    TropicalPolynomial f;
    f.d = n;
    for (const auto& m : lattice_points(D.data.delta_parts[i])) {
      f.monomials.push_back(m);
      f.coeffs.push_back(D.h_value(to_qvec(m)));
    }
    out.f.push_back(std::move(f));
  }
  out.x_cells = stable_intersection_support(out.f);
  for (const auto& c : out.x_cells) {
    bool compact = true;
    for (size_t i = 0; i < out.f.size() && compact; ++i) {
      const auto& S = c.argmin[i];
      size_t z = *out.f[i].zero_monomial();
      compact = S.size() >= 2 &&
                std::find(S.begin(), S.end(), z) != S.end();
    }
    if (compact) out.xc_cells.push_back(c);
  }
  // Proposition cpart: the cells of X^c are exactly the cells of B.
  auto cell_set = [](std::vector<Polyhedron> v) {
    std::sort(v.begin(), v.end(), detail::cell_less);
    return v;
  };
  std::vector<Polyhedron> xc_polys, b_polys;
  for (const auto& c : out.xc_cells) xc_polys.push_back(c.poly);
  b_polys = D.complex.cells;
  if (cell_set(xc_polys) != cell_set(b_polys))
    throw std::logic_error(
        "cy_tropical_variety: X^c does not match the cells of B");
  // Sigma': the fan over the proper faces of Delta*.
  std::vector<std::vector<ZVec>> gens;
  for (const auto& f : face_lattice(D.data.delta_polar))
    if (f.poly.dim() < (int)n) {
      std::vector<ZVec> g;
      for (const auto& v : f.poly.vertices)
        g.push_back(clear_denominators(v));
      gens.push_back(g);
    }
  out.fan = fan_from_cones(n, gens);
  return out;
}

// ---------------------------------------------------------------------------
// Per-cell local models
// ---------------------------------------------------------------------------

namespace detail {

// M_i(G) = {m in (Delta_i cap M) - {0} : h(m) + <m, y> = 0 on G}: the
// nonzero monomials of f_i attaining the minimum 0 on a cell G of B.
inline std::vector<ZVec> cy_min_monomials(const DualIntersectionComplex& D,
                                          size_t i, const Polyhedron& G) {
  std::vector<ZVec> out;
  for (const auto& m : lattice_points(D.data.delta_parts[i])) {
    if (is_zero(m)) continue;
    bool ok = true;
    for (const auto& v : G.vertices)
      ok &= (D.h_value(to_qvec(m)) + dot(m, v) == 0);
    if (ok) out.push_back(m);
  }
  sort_unique(out);
  return out;
}

}  // namespace detail

struct CellLocalModel {
  size_t cell = 0;              // cell index in the complex
  size_t v0 = 0, sigma0 = 0;    // anchor vertex and maximal cell
  std::vector<ZVec> e;          // e_i = beta*_i(mu_{v0})
  std::vector<ZVec> e_star;     // e_i* = -M_i(theta(sigma0))
  std::vector<Polyhedron> delta_tau;        // Delta_{tau,i} in M'_R
  std::vector<Polyhedron> check_delta_tau;  // check_Delta_{tau,i} in N'_R
  ZMat nprime_basis;            // rows: lattice basis of N'
  ContractionData data;         // in split coordinates Z^{d} + Z^r
  QVec n0;                      // translation: h(m) = <m, n0> on delta_h(tau)
};

// The local model of the tropical contraction around a cell tau of B:
// the polytopes Delta_{tau,i} = conv(M_i(tau)) + e_i* and
// check_Delta_{tau,i} = beta*_i(mu_tau) - e_i, expressed in coordinates
// splitting M = M' + <e_i*> and N = N' + <e_i>, together with the
// translation n0 carrying the local model onto a neighbourhood of tau.
inline CellLocalModel local_model_at_cell(
    const DualIntersectionComplex& D, size_t cell,
    std::optional<size_t> v0_opt = std::nullopt,
    std::optional<size_t> sigma0_opt = std::nullopt) {
  size_t n = D.data.n, r = D.data.r;
  if (cell >= D.complex.cells.size())
    throw std::invalid_argument("local_model_at_cell: no such cell");
  CellLocalModel M;
  M.cell = cell;
  // Anchors: the minimal-id vertex below and maximal cell above.
  std::optional<size_t> v0, s0;
  std::vector<size_t> tops = D.complex.maximal();
  for (size_t c = 0; c < D.complex.cells.size() && !v0; ++c)
    if (D.complex.cell_dim[c] == 0 && D.complex.is_face(c, cell)) v0 = c;
  for (size_t t : tops) {
    if (D.complex.is_face(cell, t)) {
      s0 = t;
      break;
    }
  }
  if (v0_opt) v0 = *v0_opt;
  if (sigma0_opt) s0 = *sigma0_opt;
  if (!v0 || !s0 || D.complex.cell_dim[*v0] != 0 ||
      !D.complex.is_face(*v0, cell) || !D.complex.is_face(cell, *s0))
    throw std::invalid_argument("local_model_at_cell: invalid anchors");
  M.v0 = *v0;
  M.sigma0 = *s0;
  // e_i and e_i*.
  const CyPair& pv = D.pairs[D.cell_pair[M.v0]];
  for (size_t i = 0; i < r; ++i) {
    if (pv.beta_star[i].vertices.size() != 1)
      throw std::logic_error(
          "local_model_at_cell: beta*_i(mu_{v0}) is not a single point");
    M.e.push_back(clear_denominators(pv.beta_star[i].vertices[0]));
    auto mi = detail::cy_min_monomials(D, i, D.complex.cells[M.sigma0]);
    if (mi.size() != 1)
      throw std::logic_error(
          "local_model_at_cell: M_i(theta(sigma0)) is not a single point");
    ZVec es(n);
    for (size_t j = 0; j < n; ++j) es[j] = -mi[0][j];
    M.e_star.push_back(es);
  }
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j)
      if (dot(M.e_star[i], to_qvec(M.e[j])) != Rat(i == j ? 1 : 0))
        throw std::logic_error(
            "local_model_at_cell: <e_i*, e_j> != delta_{ij}");
  // Delta_{tau,i} and check_Delta_{tau,i} in the full ambient space.
  const CyPair& pt = D.pairs[D.cell_pair[cell]];
  for (size_t i = 0; i < r; ++i) {
    auto mi = detail::cy_min_monomials(D, i, D.complex.cells[cell]);
    if (mi.empty())
      throw std::logic_error("local_model_at_cell: M_i(theta(tau)) empty");
    std::vector<QVec> pts;
    for (const auto& m : mi) pts.push_back(to_qvec(m) + to_qvec(M.e_star[i]));
    M.delta_tau.push_back(polytope_from_points(pts, n));
    M.check_delta_tau.push_back(
        translate(pt.beta_star[i], Rat(-1) * to_qvec(M.e[i])));
  }
  // Coordinates: N' = cap_i ker(e_i*), with the pairing-dual coordinates
  // on M' = cap_i ker(e_i).
  ZMat estar_rows;
  for (const auto& es : M.e_star) estar_rows.push_back(es);
  M.nprime_basis = integer_kernel(estar_rows);
  size_t dp = M.nprime_basis.size();
  if (dp + r != n)
    throw std::logic_error("local_model_at_cell: rank of N' is not d");
  QMat basis_cols(n, QVec(dp));
  for (size_t j = 0; j < dp; ++j)
    for (size_t k = 0; k < n; ++k) basis_cols[k][j] = Rat(M.nprime_basis[j][k]);
  auto m_coords = [&](const QVec& m) {
    QVec out(dp);
    for (size_t j = 0; j < dp; ++j) out[j] = dot(m, to_qvec(M.nprime_basis[j]));
    return out;
  };
  auto n_coords = [&](const QVec& y) {
    auto sol = solve_q(basis_cols, y);
    if (!sol)
      throw std::logic_error(
          "local_model_at_cell: check_Delta_{tau,i} is not contained in N'");
    return *sol;
  };
  auto convert = [&](const Polyhedron& P, bool is_m) {
    std::vector<QVec> pts;
    for (const auto& v : P.vertices)
      pts.push_back(is_m ? m_coords(v) : n_coords(v));
    return polytope_from_points(pts, dp);
  };
  std::vector<Polyhedron> deltas, check_deltas;
  for (size_t i = 0; i < r; ++i) {
    deltas.push_back(convert(M.delta_tau[i], true));
    check_deltas.push_back(convert(M.check_delta_tau[i], false));
  }
  M.data = contraction_data(deltas, check_deltas);
  // Translation n0 with h(m) = <m, n0> on the dual cone of tau.
  QMat A;
  QVec b;
  for (size_t i = 0; i < r; ++i)
    for (const auto& m : detail::cy_min_monomials(D, i,
                                                  D.complex.cells[cell])) {
      A.push_back(to_qvec(m));
      b.push_back(D.h_value(to_qvec(m)));
    }
  auto n0 = solve_q(A, b);
  if (!n0)
    throw std::logic_error(
        "local_model_at_cell: h is not linear on the dual cone of tau");
  M.n0 = *n0;
  return M;
}

// ---------------------------------------------------------------------------
// The glued global contraction
// ---------------------------------------------------------------------------

namespace detail {

// delta(x) for a lifted point x with prescribed directions at infinity:
// find a cell tau and a point w of W_tau with x in w + cone(beta*_i) +
// span(infinite directions); by Lemma restriction2 the answer does not
// depend on the choice of tau, which is asserted.
inline QVec cy_contract_lifted(const DualIntersectionComplex& D,
                               const QVec& x,
                               const std::vector<ZVec>& infinite_dirs) {
  size_t n = D.data.n;
  std::vector<QVec> anchors;
  for (const auto& c : D.complex.cells) anchors.push_back(c.barycentroid());
  std::optional<QVec> result;
  auto all = [](size_t) { return true; };
  for (size_t tau = 0; tau < D.complex.cells.size(); ++tau) {
    const CyPair& pr = D.pairs[D.cell_pair[tau]];
    std::vector<ZVec> mu_rays;
    for (const auto& v : pr.mu.vertices)
      mu_rays.push_back(clear_denominators(v));
    // The directions at infinity must lie in cone(mu_tau).
    Polyhedron cmu = polyhedron_from_vrep({QVec(n, 0)}, mu_rays, {}, n);
    bool ok = true;
    for (const auto& d : infinite_dirs) ok &= cmu.contains(to_qvec(d));
    if (!ok) continue;
    std::vector<ZVec> down_rays;
    for (const auto& bi : pr.beta_star)
      for (const auto& v : bi.vertices) {
        ZVec g = clear_denominators(v);
        for (auto& c : g) c = -c;
        down_rays.push_back(g);
      }
    sort_unique(down_rays);
    Polyhedron down =
        polyhedron_from_vrep({x}, down_rays, infinite_dirs, n);
    std::vector<std::vector<size_t>> chains;
    ascending_chains(D.complex, tau, all, chains);
    for (const auto& ch : chains) {
      std::vector<QVec> pts;
      for (size_t i : ch) pts.push_back(anchors[i]);
      Polyhedron R = intersect(polytope_from_points(pts, n), down);
      if (R.is_empty) continue;
      for (const auto& w : R.vertices) {
        if (result && !(*result == w))
          throw std::logic_error(
              "global_contract: contraction value disagrees across "
              "covering pieces");
        result = w;
      }
    }
  }
  if (!result)
    throw std::invalid_argument(
        "global_contract: no covering piece contains the point (is it in "
        "the tropical variety?)");
  return *result;
}

}  // namespace detail

// delta: X(f_1..f_r) -> B^h_nabla for a finite point of the variety.
inline QVec global_contract(const DualIntersectionComplex& D, const QVec& x) {
  if (x.size() != D.data.n)
    throw std::invalid_argument("global_contract: wrong ambient dimension");
  return detail::cy_contract_lifted(D, x, {});
}

// delta for a point on a deep stratum of the tropical toric variety
// X_{Sigma'}(T), given by its orbit coordinates with respect to `fan`.
inline QVec global_contract(const DualIntersectionComplex& D, const Fan& fan,
                            const StratifiedPoint& x) {
  QVec lift = mul(fan.orbit[x.cone].section, x.coords);
  return detail::cy_contract_lifted(D, lift, fan.cones[x.cone]);
}

// ---------------------------------------------------------------------------
// Goodness of the glued contraction
// ---------------------------------------------------------------------------

struct CyGoodness {
  std::vector<GoodnessClass> cell_class;  // one per cell of B
  GoodnessClass overall = GoodnessClass::VeryGood;
};

inline CyGoodness cy_goodness(const DualIntersectionComplex& D) {
  CyGoodness out;
  for (size_t c = 0; c < D.complex.cells.size(); ++c) {
    GoodnessClass g = classify_goodness(local_model_at_cell(D, c).data);
    out.cell_class.push_back(g);
    if ((int)g < (int)out.overall) out.overall = g;
  }
  return out;
}

}  // namespace tropcontract
