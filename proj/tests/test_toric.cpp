// Toric-module tests: fan face closure, orbit projections, closures of
// polyhedra across strata, the finite-parent condition (including the
// two-line counterexample), and the cone face decomposition.

#include <catch2/catch_amalgamated.hpp>

#include "tropcontract/toric.hpp"

using namespace tropcontract;

namespace {

QVec qv(std::initializer_list<int> xs) {
  QVec v;
  for (int x : xs) v.push_back(Rat(x));
  return v;
}

ZVec zv(std::initializer_list<int> xs) {
  ZVec v;
  for (int x : xs) v.push_back(Int(x));
  return v;
}

// The fan of T^2 = [-inf, inf)^2: strata are reached along -e directions.
Fan t2_fan() { return fan_from_cones(2, {{zv({-1, 0}), zv({0, -1})}}); }

}  // namespace

TEST_CASE("fan: quadrant fan closes under faces") {
  Fan fan = t2_fan();
  REQUIRE(fan.size() == 4);  // 0, two rays, the quadrant
  REQUIRE(fan.cone_dim[0] == 0);
  REQUIRE(fan.cone_dim[3] == 2);
  REQUIRE(fan.orbit_dim(0) == 2);
  REQUIRE(fan.orbit_dim(3) == 0);
  // Face relations.
  for (size_t c = 0; c < 4; ++c) {
    REQUIRE(is_face_of_cone(fan, 0, c));
    REQUIRE(is_face_of_cone(fan, c, c));
  }
  REQUIRE(is_face_of_cone(fan, 1, 3));
  REQUIRE(is_face_of_cone(fan, 2, 3));
  REQUIRE_FALSE(is_face_of_cone(fan, 1, 2));
  REQUIRE_FALSE(is_face_of_cone(fan, 3, 1));
  REQUIRE(fan.cone_of(zv({-2, -3})) == 3);
  REQUIRE(fan.cone_of(zv({0, 0})) == 0);
  REQUIRE_FALSE(fan.cone_of(zv({1, 1})).has_value());
}

TEST_CASE("orbit projection: identity, quotient, functoriality") {
  Fan fan = fan_from_cones(2, {{zv({1, 0})}});
  size_t ray = *fan.find_cone({zv({1, 0})});
  StratifiedPoint x{0, qv({3, 5})};
  // Identity on the dense stratum.
  StratifiedPoint same = orbit_projection(fan, x, 0);
  REQUIRE(same.coords == x.coords);
  // Projection to N/Ze1 kills the first coordinate: the image of (3,5)
  // is 5 times the image of (0,1).
  StratifiedPoint y = orbit_projection(fan, x, ray);
  StratifiedPoint e2 = orbit_projection(fan, {0, qv({0, 1})}, ray);
  REQUIRE(y.coords.size() == 1);
  REQUIRE(y.coords[0] == Rat(5) * e2.coords[0]);
  // (1,0) maps to zero.
  StratifiedPoint e1 = orbit_projection(fan, {0, qv({1, 0})}, ray);
  REQUIRE(e1.coords[0] == 0);
  // Error when the source stratum is not a face of the target.
  REQUIRE_THROWS_AS(orbit_projection(fan, {ray, qv({7})}, 0),
                    std::invalid_argument);
}

TEST_CASE("closure_in_toric: bounded polyhedra stay finite") {
  Fan fan = t2_fan();
  Polyhedron P = polytope_from_points({qv({0, 0}), qv({1, 0}), qv({0, 1})}, 2);
  StratifiedPolyhedron S = closure_in_toric(P, fan);
  REQUIRE(S.infinite_faces.empty());
  REQUIRE(S.finite_part == P);
}

TEST_CASE("closure_in_toric: diagonal line closes at the deep stratum") {
  Fan fan = t2_fan();
  // The full line R(1,1) recedes along (-1,-1) into the deep stratum only.
  Polyhedron L = polyhedron_from_vrep({qv({0, 0})}, {}, {zv({1, 1})}, 2);
  StratifiedPolyhedron S = closure_in_toric(L, fan);
  REQUIRE(S.infinite_faces.size() == 1);
  size_t deep = *fan.find_cone({zv({-1, 0}), zv({0, -1})});
  REQUIRE(S.infinite_faces[0].first == deep);
  REQUIRE(S.infinite_faces[0].second.dim() == 0);
  // A ray receding along -e1 only hits the -e1 stratum (not the deep one,
  // whose relative interior it misses).
  Polyhedron R = polyhedron_from_vrep({qv({0, 2})}, {zv({-1, 0})}, {}, 2);
  StratifiedPolyhedron SR = closure_in_toric(R, fan);
  REQUIRE(SR.infinite_faces.size() == 1);
  REQUIRE(SR.infinite_faces[0].first ==
          *fan.find_cone({zv({-1, 0})}));
  REQUIRE(SR.infinite_faces[0].second.vertices ==
          std::vector<QVec>{orbit_projection(fan, {0, qv({0, 2})},
                                             SR.infinite_faces[0].first)
                                .coords});
}

TEST_CASE("parent condition: single diagonal line passes") {
  Fan fan = t2_fan();
  size_t deep = *fan.find_cone({zv({-1, 0}), zv({0, -1})});
  Polyhedron L = polyhedron_from_vrep({qv({0, 0})}, {}, {zv({1, 1})}, 2);
  std::vector<StratifiedCell> cells = {
      {0, L}, {deep, project_polyhedron(fan, 0, L, deep)}};
  ParentCheck pc = check_parent_condition(fan, cells);
  REQUIRE(pc.ok);
}

TEST_CASE("parent condition: two parallel diagonal lines fail") {
  Fan fan = t2_fan();
  size_t deep = *fan.find_cone({zv({-1, 0}), zv({0, -1})});
  Polyhedron L1 = polyhedron_from_vrep({qv({0, 0})}, {}, {zv({1, 1})}, 2);
  Polyhedron L2 = polyhedron_from_vrep({qv({0, 1})}, {}, {zv({1, 1})}, 2);
  // Both lines close up at the same point of the deep stratum: the shared
  // infinite cell has two finite parents.
  Polyhedron pt = project_polyhedron(fan, 0, L1, deep);
  REQUIRE(pt == project_polyhedron(fan, 0, L2, deep));
  std::vector<StratifiedCell> cells = {{0, L1}, {0, L2}, {deep, pt}};
  ParentCheck pc = check_parent_condition(fan, cells);
  REQUIRE_FALSE(pc.ok);
  REQUIRE(pc.witness == 2);
}

TEST_CASE("parent condition: closed quadrant complex passes") {
  Fan fan = fan_from_cones(2, {{zv({1, 0}), zv({0, 1})}});
  size_t rx = *fan.find_cone({zv({1, 0})});
  size_t ry = *fan.find_cone({zv({0, 1})});
  size_t deep = *fan.find_cone({zv({1, 0}), zv({0, 1})});
  Polyhedron quad = polyhedron_from_hrep(
      {{zv({1, 0}), Rat(0)}, {zv({0, 1}), Rat(0)}}, {}, 2);
  Polyhedron ex = polyhedron_from_vrep({qv({0, 0})}, {zv({1, 0})}, {}, 2);
  Polyhedron ey = polyhedron_from_vrep({qv({0, 0})}, {zv({0, 1})}, {}, 2);
  Polyhedron origin = polytope_from_points({qv({0, 0})}, 2);
  std::vector<StratifiedCell> cells = {
      {0, quad},
      {0, ex},
      {0, ey},
      {0, origin},
      {rx, project_polyhedron(fan, 0, quad, rx)},
      {ry, project_polyhedron(fan, 0, quad, ry)},
      {rx, project_polyhedron(fan, 0, ex, rx)},
      {ry, project_polyhedron(fan, 0, ey, ry)},
      {deep, project_polyhedron(fan, 0, quad, deep)}};
  // Deduplicate: the edge at the rx stratum from quad is 1-dim, from ex it
  // is the 0-dim endpoint; both are genuine cells.
  ParentCheck pc = check_parent_condition(fan, cells);
  REQUIRE(pc.ok);
  // Forgetting the finite quadrant breaks uniqueness of nothing but leaves
  // the 1-dim stratum cells orphaned.
  std::vector<StratifiedCell> broken(cells.begin() + 1, cells.end());
  ParentCheck pb = check_parent_condition(fan, broken);
  REQUIRE_FALSE(pb.ok);
}

TEST_CASE("cone face decomposition: segment summand (r = 1)") {
  // check_Delta_1 = conv{0, l*d2} in N' = Z^2; C = cone{(0,0,1),(0,l,1)}.
  int l = 3;
  Polyhedron dv = polytope_from_points({qv({0, 0}), qv({0, l})}, 2);
  std::vector<ZVec> full = {zv({0, 0, 1}), zv({0, 3, 1})};
  // Whole cone decomposes as itself.
  auto parts = cone_face_decomposition({dv}, full);
  REQUIRE(parts.size() == 1);
  REQUIRE(parts[0].size() == 2);
  // The apex ray {e} is a face with C_1 = that ray.
  auto apex = cone_face_decomposition({dv}, {zv({0, 0, 1})});
  REQUIRE(apex[0] == std::vector<ZVec>{zv({0, 0, 1})});
  // The zero face.
  auto zero = cone_face_decomposition({dv}, {});
  REQUIRE(zero[0].empty());
  // A non-face errors.
  REQUIRE_THROWS_AS(cone_face_decomposition({dv}, {zv({0, 1, 2})}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(cone_face_decomposition({dv}, {zv({0, -1, 0})}),
                    std::invalid_argument);
}

TEST_CASE("cone face decomposition: two summands re-sum on all faces") {
  // check_Delta_1 = conv{0, d1}, check_Delta_2 = conv{0, d2} in Z^2.
  Polyhedron d1 = polytope_from_points({qv({0, 0}), qv({1, 0})}, 2);
  Polyhedron d2 = polytope_from_points({qv({0, 0}), qv({0, 1})}, 2);
  std::vector<ZVec> gens;
  auto g1 = lifted_cone_gens(d1, 0, 2), g2 = lifted_cone_gens(d2, 1, 2);
  gens.insert(gens.end(), g1.begin(), g1.end());
  gens.insert(gens.end(), g2.begin(), g2.end());
  Fan fan = fan_from_cones(4, {gens});
  for (size_t c = 0; c < fan.size(); ++c) {
    auto parts = cone_face_decomposition({d1, d2}, fan.cones[c]);
    std::vector<ZVec> resum;
    for (const auto& p : parts)
      resum.insert(resum.end(), p.begin(), p.end());
    std::vector<ZVec> expect = fan.cones[c];
    std::vector<ZVec> got =
        resum.empty() ? std::vector<ZVec>{}
                      : detail::pointed_cone_rays(resum, 4);
    REQUIRE(got == expect);
  }
}
