// Tropical-module tests: evaluation/argmin, dual subdivisions against
// hand-computed lower hulls, classical stable-intersection facts for
// tropical lines, and agreement between the dimension-criterion support
// and the independent first-order perturbation oracle.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "tropcontract/tropical.hpp"

using namespace tropcontract;

namespace {

std::mt19937 rng(4242);

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

// The standard tropical line min(0, x, y).
TropicalPolynomial tropical_line() {
  return {2, {zv({0, 0}), zv({1, 0}), zv({0, 1})}, {Rat(0), Rat(0), Rat(0)}};
}

std::string poly_key(const Polyhedron& P) {
  std::string s;
  for (const auto& v : P.vertices) s += to_string(v);
  s += "|";
  for (const auto& r : P.rays) s += to_string(r);
  s += "|";
  for (const auto& l : P.lineality) s += to_string(l);
  return s;
}

std::vector<std::string> support_keys(const std::vector<RefinementCell>& cs) {
  std::vector<std::string> keys;
  for (const auto& c : cs) keys.push_back(poly_key(c.poly));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

TropicalPolynomial random_poly(size_t d, size_t nterms) {
  std::uniform_int_distribution<int> me(-2, 2), ce(0, 3);
  TropicalPolynomial f;
  f.d = d;
  std::set<ZVec> seen;
  while (f.monomials.size() < nterms) {
    ZVec m(d);
    for (size_t i = 0; i < d; ++i) m[i] = me(rng);
    if (!seen.insert(m).second) continue;
    f.monomials.push_back(m);
    f.coeffs.push_back(Rat(ce(rng)));
  }
  return f;
}

}  // namespace

TEST_CASE("evaluate: values and argmin sets") {
  TropicalPolynomial f = tropical_line();
  auto [v0, a0] = f.evaluate(qv({0, 0}));
  REQUIRE(v0 == 0);
  REQUIRE(a0 == std::vector<size_t>{0, 1, 2});
  auto [v1, a1] = f.evaluate(qv({3, 5}));
  REQUIRE(v1 == 0);
  REQUIRE(a1 == std::vector<size_t>{0});
  auto [v2, a2] = f.evaluate(qv({-2, -2}));
  REQUIRE(v2 == -2);
  REQUIRE(a2 == std::vector<size_t>{1, 2});
}

TEST_CASE("dual subdivision: segment with a genuine break") {
  // d=1, monomials 0,1,2 with lift 0,0,1: lower hull keeps the break at
  // m=1 out?  Lift (0,0),(1,0),(2,1): lower faces are {0,1} and {1,2}.
  TropicalPolynomial f{1, {zv({0}), zv({1}), zv({2})}, {Rat(0), Rat(0), Rat(1)}};
  auto cells = dual_subdivision(f);
  std::vector<std::vector<size_t>> expect = {{0}, {0, 1}, {1}, {1, 2}, {2}};
  REQUIRE(cells == expect);
  // Flat lift: a single top cell containing the middle point.
  TropicalPolynomial g{1, {zv({0}), zv({1}), zv({2})}, {Rat(0), Rat(0), Rat(0)}};
  auto gcells = dual_subdivision(g);
  std::vector<std::vector<size_t>> gexpect = {{0}, {0, 1, 2}, {2}};
  REQUIRE(gcells == gexpect);
}

TEST_CASE("dual subdivision: tropical line triangle") {
  auto cells = dual_subdivision(tropical_line());
  REQUIRE(cells.size() == 7);  // 3 vertices, 3 edges, 1 triangle
  REQUIRE(std::count_if(cells.begin(), cells.end(),
                        [](const auto& c) { return c.size() == 3; }) == 1);
}

TEST_CASE("common refinement: tropical line decomposes the plane") {
  auto cells = common_refinement({tropical_line()});
  // 3 maximal sectors, 3 rays, 1 vertex.
  REQUIRE(cells.size() == 7);
  size_t verts = 0, edges = 0, top = 0;
  for (const auto& c : cells) {
    int dim = c.poly.dim();
    if (dim == 0) ++verts;
    if (dim == 1) ++edges;
    if (dim == 2) ++top;
  }
  REQUIRE(verts == 1);
  REQUIRE(edges == 3);
  REQUIRE(top == 3);
}

TEST_CASE("stable intersection: two generic tropical lines meet in a point") {
  TropicalPolynomial f = tropical_line();
  // Second line translated by (2,1): coefficients a_m = -<m,(2,1)>.
  TropicalPolynomial g{2,
                       {zv({0, 0}), zv({1, 0}), zv({0, 1})},
                       {Rat(0), Rat(-2), Rat(-1)}};
  auto supp = stable_intersection_support({f, g});
  // All cells in the support are faces of the single point {(2,1)}? The
  // two lines meet at the vertexless crossing of the horizontal leg of
  // one with a vertical leg of the other: compute and check it is one
  // point.
  REQUIRE_FALSE(supp.empty());
  std::set<std::string> pts;
  for (const auto& c : supp) {
    REQUIRE(c.poly.dim() == 0);
    pts.insert(poly_key(c.poly));
  }
  REQUIRE(pts.size() == 1);
}

TEST_CASE("stable self-intersection of a tropical line is its vertex") {
  TropicalPolynomial f = tropical_line();
  auto supp = stable_intersection_support({f, f});
  REQUIRE(supp.size() == 1);
  REQUIRE(supp[0].poly.vertices == std::vector<QVec>{qv({0, 0})});
  REQUIRE(supp[0].poly.dim() == 0);
}

TEST_CASE("stable intersection equals perturbation oracle on random input") {
  std::uniform_int_distribution<int> dd(1, 3), rr(1, 2), nt(2, 4), tv(-9, 9);
  for (int trial = 0; trial < 12; ++trial) {
    size_t d = dd(rng);
    size_t r = std::min<size_t>(rr(rng), d);
    std::vector<TropicalPolynomial> fs;
    for (size_t i = 0; i < r; ++i) fs.push_back(random_poly(d, nt(rng)));
    std::vector<ZVec> trans;
    for (size_t i = 0; i < r; ++i) {
      ZVec v(d);
      for (size_t j = 0; j < d; ++j) v[j] = tv(rng);
      trans.push_back(v);
    }
    auto a = support_keys(stable_intersection_support(fs));
    auto b = support_keys(perturbation_limit_support(fs, trans));
    REQUIRE(a == b);
  }
}

TEST_CASE("b_locus: zero-monomial region of the tropical line") {
  auto B = b_locus({tropical_line()});
  // Cells where the zero monomial is among the minimizers: the closed
  // positive quadrant, subdivided.  The union must contain (1,2) and the
  // origin but not (-1,0).
  bool has_pos = false, has_origin = false, has_neg = false;
  for (const auto& c : B) {
    has_pos |= c.poly.contains(qv({1, 2}));
    has_origin |= c.poly.contains(qv({0, 0}));
    has_neg |= c.poly.contains(qv({-1, 0}));
  }
  REQUIRE(has_pos);
  REQUIRE(has_origin);
  REQUIRE_FALSE(has_neg);
  // Missing zero monomial errors.
  TropicalPolynomial h{1, {zv({1}), zv({2})}, {Rat(0), Rat(0)}};
  REQUIRE_THROWS_AS(b_locus({h}), std::invalid_argument);
}

TEST_CASE("tilde_sigma: face where the zero monomial joins the argmin") {
  TropicalPolynomial f = tropical_line();
  auto cells = common_refinement({f});
  for (const auto& c : cells) {
    TildeSigma ts = tilde_sigma({f}, c);
    const auto& S = c.argmin[0];
    bool has_zero = std::find(S.begin(), S.end(), size_t(0)) != S.end();
    if (has_zero) {
      REQUIRE(ts.I.empty());
      REQUIRE(ts.tilde == c.poly);
    } else {
      REQUIRE(ts.I == std::vector<size_t>{0});
      if (!ts.tilde.is_empty) {
        // The tilde face is a face of the cell on which f also attains
        // the minimum at the zero monomial.
        QVec x = ts.tilde.relint_point();
        auto arg = f.evaluate(x).second;
        REQUIRE(std::find(arg.begin(), arg.end(), size_t(0)) != arg.end());
        REQUIRE(c.poly.contains(x));
      }
    }
  }
}
