#pragma once

// Tropical toric spaces as stratified objects: a fan of pointed rational
// cones, torsion-free orbit lattices with projection/section maps, closures
// of polyhedra across strata, the finite-parent condition for complexes
// with cells at infinity, and the face decomposition of cones of the form
// cone(U Delta_i x {e_i}).  Points at infinity are always carried as
// (cone label, quotient coordinates); no infinite coordinates appear.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "tropcontract/polyhedron.hpp"

namespace tropcontract {

// ---------------------------------------------------------------------------
// Fans of pointed cones
// ---------------------------------------------------------------------------

struct Fan {
  size_t d = 0;
  // Per cone: sorted primitive extreme rays (cone 0 is the zero cone),
  // irredundant inequalities, and the orbit quotient N -> N/span(cone).
  std::vector<std::vector<ZVec>> cones;
  std::vector<ConeIneqs> halfspaces;
  std::vector<QuotientWithSection> orbit;
  std::vector<size_t> cone_dim;

  size_t size() const { return cones.size(); }
  size_t orbit_dim(size_t c) const { return d - cone_dim[c]; }

  bool cone_contains(size_t c, const ZVec& v) const {
    for (const auto& a : halfspaces[c].ineqs)
      if (dot(a, v) < 0) return false;
    for (const auto& a : halfspaces[c].eqs)
      if (dot(a, v) != 0) return false;
    return true;
  }

  bool cone_contains(size_t c, const QVec& v) const {
    return cone_contains(c, clear_denominators(v));
  }

  // Strict version: v in the relative interior of cone c.
  bool relint_contains(size_t c, const ZVec& v) const {
    for (const auto& a : halfspaces[c].ineqs)
      if (dot(a, v) <= 0) return false;
    for (const auto& a : halfspaces[c].eqs)
      if (dot(a, v) != 0) return false;
    return true;
  }

  std::optional<size_t> find_cone(std::vector<ZVec> rays) const {
    detail::sort_unique(rays);
    for (size_t c = 0; c < cones.size(); ++c)
      if (cones[c] == rays) return c;
    return std::nullopt;
  }

  // The unique cone whose relative interior contains v (exists iff v is in
  // the support of the fan).
  std::optional<size_t> cone_of(const ZVec& v) const {
    for (size_t c = 0; c < cones.size(); ++c)
      if (is_zero(v) ? cone_dim[c] == 0 : relint_contains(c, v)) return c;
    return std::nullopt;
  }
};

namespace detail {

// Canonical extreme rays of the cone generated by `gens`; throws if the
// cone is not pointed.
inline std::vector<ZVec> pointed_cone_rays(const std::vector<ZVec>& gens,
                                           size_t d) {
  ConeIneqs H = cone_to_inequalities(gens, {}, d);
  ConeGens G = cone_from_inequalities(H.ineqs, H.eqs, d);
  if (!G.lineality.empty())
    throw std::invalid_argument("fan: cone is not pointed");
  detail::sort_unique(G.rays);
  return G.rays;
}

}  // namespace detail

// Builds a fan from generator sets: closes under faces, deduplicates, and
// always includes the zero cone.  Cones are sorted by (dim, rays).
inline Fan fan_from_cones(size_t d,
                          const std::vector<std::vector<ZVec>>& generators) {
  std::vector<std::vector<ZVec>> cones = {{}};
  for (const auto& g : generators) {
    auto rays = detail::pointed_cone_rays(g, d);
    if (std::find(cones.begin(), cones.end(), rays) == cones.end())
      cones.push_back(rays);
  }
  // Close under facets (hence under all faces).
  for (size_t qi = 0; qi < cones.size(); ++qi) {
    std::vector<ZVec> rays = cones[qi];
    if (rays.empty()) continue;
    ConeIneqs H = cone_to_inequalities(rays, {}, d);
    for (const auto& a : H.ineqs) {
      std::vector<ZVec> sub;
      for (const auto& r : rays)
        if (dot(a, r) == 0) sub.push_back(r);
      std::vector<ZVec> face =
          sub.empty() ? std::vector<ZVec>{} : detail::pointed_cone_rays(sub, d);
      if (std::find(cones.begin(), cones.end(), face) == cones.end())
        cones.push_back(face);
    }
  }
  std::sort(cones.begin(), cones.end(),
            [](const std::vector<ZVec>& a, const std::vector<ZVec>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  Fan fan;
  fan.d = d;
  fan.cones = cones;
  for (const auto& rays : cones) {
    fan.halfspaces.push_back(cone_to_inequalities(rays, {}, d));
    std::vector<ZVec> span = saturate(rays, d);
    fan.cone_dim.push_back(span.size());
    fan.orbit.push_back(quotient_with_section(span, d));
  }
  return fan;
}

// Is cone a a face of cone b?  Decided by the supporting-functional test:
// sum the facet normals of b that vanish on a, and compare the cut.
inline bool is_face_of_cone(const Fan& fan, size_t a, size_t b) {
  if (a == b) return true;
  for (const auto& r : fan.cones[a])
    if (!fan.cone_contains(b, r)) return false;
  ZVec m(fan.d, 0);
  bool any = false;
  for (const auto& h : fan.halfspaces[b].ineqs) {
    bool active = true;
    for (const auto& r : fan.cones[a]) active &= (dot(h, r) == 0);
    if (active) {
      for (size_t i = 0; i < fan.d; ++i) m[i] += h[i];
      any = true;
    }
  }
  if (!any && fan.cone_dim[a] < fan.cone_dim[b]) return false;
  std::vector<ZVec> cut;
  for (const auto& r : fan.cones[b])
    if (dot(m, r) == 0) cut.push_back(r);
  std::vector<ZVec> face =
      cut.empty() ? std::vector<ZVec>{} : detail::pointed_cone_rays(cut, fan.d);
  return face == fan.cones[a];
}

// ---------------------------------------------------------------------------
// Stratified points and polyhedra
// ---------------------------------------------------------------------------

struct StratifiedPoint {
  size_t cone = 0;  // orbit label
  QVec coords;      // coordinates in N_R / span(cone), exact rationals
};

// pi_C: X_C(T) -> O_C(T) restricted to the orbit of a face C' of C.
inline StratifiedPoint orbit_projection(const Fan& fan,
                                        const StratifiedPoint& x,
                                        size_t c_to) {
  if (!is_face_of_cone(fan, x.cone, c_to))
    throw std::invalid_argument(
        "orbit_projection: source stratum is not a face of the target cone");
  // Lift through the section of the source orbit, then project.
  QVec lift = mul(fan.orbit[x.cone].section, x.coords);
  return {c_to, mul(fan.orbit[c_to].projection, lift)};
}

// Image of a polyhedron living in the orbit of c_from under the projection
// to the orbit of c_to (c_from must be a face of c_to).
inline Polyhedron project_polyhedron(const Fan& fan, size_t c_from,
                                     const Polyhedron& P, size_t c_to) {
  if (!is_face_of_cone(fan, c_from, c_to))
    throw std::invalid_argument(
        "project_polyhedron: source stratum is not a face of the target cone");
  const ZMat& sect = fan.orbit[c_from].section;
  const ZMat& proj = fan.orbit[c_to].projection;
  ZMat map = mul(proj, sect);
  std::vector<QVec> vertices;
  for (const auto& v : P.vertices) vertices.push_back(mul(map, v));
  std::vector<ZVec> rays, lin;
  for (const auto& r : P.rays) {
    ZVec img = mul(map, r);
    if (!is_zero(img)) rays.push_back(primitive(img));
  }
  for (const auto& l : P.lineality) {
    ZVec img = mul(map, l);
    if (!is_zero(img)) lin.push_back(primitive(img));
  }
  return polyhedron_from_vrep(vertices, rays, lin, fan.orbit_dim(c_to));
}

struct StratifiedPolyhedron {
  size_t cone = 0;
  Polyhedron finite_part;
  // Nonempty intersections of the closure with deeper orbits.
  std::vector<std::pair<size_t, Polyhedron>> infinite_faces;
};

// Does the closure of P (living in the orbit of c_from) meet the orbit of
// c?  Yes iff the recession cone of P meets the relative interior of
// c/span(c_from).
inline bool closure_meets_orbit(const Fan& fan, size_t c_from,
                                const Polyhedron& P, size_t c) {
  if (c == c_from) return !P.is_empty;
  if (!is_face_of_cone(fan, c_from, c)) return false;
  size_t dim = fan.orbit_dim(c_from);
  // Image of cone c in the orbit of c_from.
  std::vector<ZVec> cone_img;
  for (const auto& r : fan.cones[c]) {
    ZVec img = mul(fan.orbit[c_from].projection, r);
    if (!is_zero(img)) cone_img.push_back(img);
  }
  ConeIneqs CH = cone_to_inequalities(cone_img, {}, dim);
  ConeGens rec = recession_cone(P);
  ConeIneqs RH = cone_to_inequalities(rec.rays, rec.lineality, dim);
  std::vector<ZVec> ineqs = CH.ineqs, eqs = CH.eqs;
  ineqs.insert(ineqs.end(), RH.ineqs.begin(), RH.ineqs.end());
  eqs.insert(eqs.end(), RH.eqs.begin(), RH.eqs.end());
  ConeGens K = cone_from_inequalities(ineqs, eqs, dim);
  if (K.rays.empty() && K.lineality.empty()) return false;
  // K is contained in the pointed cone c-image, so K is pointed and its
  // relative interior point is the ray sum; K meets relint(c-image) iff
  // that point does.
  ZVec s(dim, 0);
  for (const auto& r : K.rays)
    for (size_t i = 0; i < dim; ++i) s[i] += r[i];
  for (const auto& a : CH.ineqs)
    if (dot(a, s) <= 0) return false;
  for (const auto& a : CH.eqs)
    if (dot(a, s) != 0) return false;
  return true;
}

// Closure of a polyhedron (in the orbit of c_from, default the dense
// stratum) inside X_Sigma(T), as the finite part plus its infinite faces.
inline StratifiedPolyhedron closure_in_toric(const Polyhedron& P,
                                             const Fan& fan,
                                             size_t c_from = 0) {
  StratifiedPolyhedron out;
  out.cone = c_from;
  out.finite_part = P;
  for (size_t c = 0; c < fan.size(); ++c) {
    if (c == c_from || !is_face_of_cone(fan, c_from, c)) continue;
    if (closure_meets_orbit(fan, c_from, P, c))
      out.infinite_faces.push_back({c, project_polyhedron(fan, c_from, P, c)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stratified complexes and the finite-parent condition
// ---------------------------------------------------------------------------

struct StratifiedCell {
  size_t cone = 0;   // orbit label; 0 = finite
  Polyhedron poly;   // cell inside the orbit
};

struct ParentCheck {
  bool ok = true;
  std::optional<size_t> witness;  // index of a violating infinite cell
  std::string reason;
};

// Checks the finite-parent condition on a stratified complex: every
// infinite cell tau must (1) arise as the infinite face of a unique finite
// cell tau~, and (2) have the same set of finite cells above it as tau~.
inline ParentCheck check_parent_condition(
    const Fan& fan, const std::vector<StratifiedCell>& cells) {
  // "sigma > tau" for finite sigma and infinite tau at stratum c: tau is a
  // face of the closure of sigma at that stratum.
  auto above = [&](const StratifiedCell& sigma, const StratifiedCell& tau,
                   bool exact) {
    if (!closure_meets_orbit(fan, 0, sigma.poly, tau.cone)) return false;
    Polyhedron img = project_polyhedron(fan, 0, sigma.poly, tau.cone);
    return exact ? img == tau.poly : is_face_of(tau.poly, img);
  };
  for (size_t t = 0; t < cells.size(); ++t) {
    if (cells[t].cone == 0) continue;
    std::vector<size_t> parents;
    for (size_t s = 0; s < cells.size(); ++s)
      if (cells[s].cone == 0 && above(cells[s], cells[t], true))
        parents.push_back(s);
    if (parents.size() != 1) {
      return {false, t,
              parents.empty() ? "infinite cell has no finite parent"
                              : "infinite cell has multiple finite parents"};
    }
    const StratifiedCell& parent = cells[parents[0]];
    for (size_t s = 0; s < cells.size(); ++s) {
      if (cells[s].cone != 0) continue;
      bool over_tau = above(cells[s], cells[t], false);
      bool over_parent = is_face_of(parent.poly, cells[s].poly);
      if (over_tau != over_parent)
        return {false, t, "star of infinite cell differs from parent star"};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Face decomposition of C = cone(U check_Delta_i x {e_i})
// ---------------------------------------------------------------------------

// Generators (v, e_i) of cone(check_Delta_i x {e_i}) inside R^{d'+r}.
inline std::vector<ZVec> lifted_cone_gens(const Polyhedron& check_delta,
                                          size_t i, size_t r) {
  size_t dp = check_delta.ambient;
  std::vector<ZVec> gens;
  for (const auto& v : check_delta.vertices) {
    QVec lift(dp + r, 0);
    for (size_t j = 0; j < dp; ++j) lift[j] = v[j];
    lift[dp + i] = 1;
    gens.push_back(clear_denominators(lift));
  }
  for (const auto& ray : check_delta.rays) {
    ZVec lift(dp + r, 0);
    for (size_t j = 0; j < dp; ++j) lift[j] = ray[j];
    gens.push_back(lift);
  }
  return gens;
}

// Decomposes a face C' of C = cone(U check_Delta_i x {e_i}) as a sum of
// faces C_i of the summand cones; returns the ray sets of the C_i.
inline std::vector<std::vector<ZVec>> cone_face_decomposition(
    const std::vector<Polyhedron>& check_deltas,
    const std::vector<ZVec>& cprime_rays) {
  size_t r = check_deltas.size();
  if (r == 0) throw std::invalid_argument("cone_face_decomposition: r = 0");
  size_t dp = check_deltas[0].ambient, d = dp + r;
  std::vector<std::vector<ZVec>> summand_gens;
  std::vector<ZVec> all_gens;
  for (size_t i = 0; i < r; ++i) {
    summand_gens.push_back(lifted_cone_gens(check_deltas[i], i, r));
    all_gens.insert(all_gens.end(), summand_gens.back().begin(),
                    summand_gens.back().end());
  }
  ConeIneqs CH = cone_to_inequalities(all_gens, {}, d);
  // Verify C' is a face of C via the supporting functional.
  for (const auto& ray : cprime_rays) {
    for (const auto& a : CH.ineqs)
      if (dot(a, ray) < 0)
        throw std::invalid_argument(
            "cone_face_decomposition: input is not contained in C");
    for (const auto& a : CH.eqs)
      if (dot(a, ray) != 0)
        throw std::invalid_argument(
            "cone_face_decomposition: input is not contained in C");
  }
  ZVec m(d, 0);
  for (const auto& a : CH.ineqs) {
    bool active = true;
    for (const auto& ray : cprime_rays) active &= (dot(a, ray) == 0);
    if (active)
      for (size_t j = 0; j < d; ++j) m[j] += a[j];
  }
  std::vector<ZVec> cprime = cprime_rays.empty()
                                 ? std::vector<ZVec>{}
                                 : detail::pointed_cone_rays(cprime_rays, d);
  {
    std::vector<ZVec> cut;
    for (const auto& g : all_gens)
      if (dot(m, g) == 0) cut.push_back(g);
    std::vector<ZVec> face =
        cut.empty() ? std::vector<ZVec>{} : detail::pointed_cone_rays(cut, d);
    if (face != cprime)
      throw std::invalid_argument(
          "cone_face_decomposition: input is not a face of C");
  }
  // C_i = cone(check_Delta_i x {e_i}) cap C' = the generators of the
  // summand killed by the supporting functional.
  std::vector<std::vector<ZVec>> parts;
  std::vector<ZVec> resum;
  for (size_t i = 0; i < r; ++i) {
    std::vector<ZVec> cut;
    for (const auto& g : summand_gens[i])
      if (dot(m, g) == 0) cut.push_back(g);
    parts.push_back(cut.empty() ? std::vector<ZVec>{}
                                : detail::pointed_cone_rays(cut, d));
    resum.insert(resum.end(), parts.back().begin(), parts.back().end());
  }
  std::vector<ZVec> check =
      resum.empty() ? std::vector<ZVec>{} : detail::pointed_cone_rays(resum, d);
  if (check != cprime)
    throw std::logic_error("cone_face_decomposition: parts do not re-sum");
  return parts;
}

}  // namespace tropcontract
