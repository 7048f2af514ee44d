#include <tropcontract/calabi_yau.hpp>
#include <iostream>
using namespace tropcontract;

int main() {
  // Square case: Delta = conv{(+-1,+-1)}, r = 1.
  std::vector<QVec> vs = {{Rat(1),Rat(1)},{Rat(1),Rat(-1)},{Rat(-1),Rat(1)},{Rat(-1),Rat(-1)}};
  Polyhedron delta = polytope_from_points(vs, 2);
  auto pd = polar_dual(delta);
  std::cout << "reflexive=" << pd.reflexive << " polar verts=" << pd.polar.vertices.size() << "\n";
  NefPartitionData D = build_nef_partition(delta, {delta});
  std::cout << "nabla verts=" << D.nabla.vertices.size() << "\n";
  auto C = dual_intersection_complex(D);
  std::cout << "B cells=" << C.complex.cells.size() << " pairs=" << C.pairs.size()
            << " charts=" << C.vertex_chart.size() << "\n";
  auto X = cy_tropical_variety(C);
  std::cout << "x cells=" << X.x_cells.size() << " xc=" << X.xc_cells.size() << "\n";
  auto G = cy_goodness(C);
  std::cout << "overall goodness=" << (int)G.overall << "\n";
  auto disc = cy_discriminant(C);
  std::cout << "disc simplices=" << disc.size() << "\n";
  // Contract a point on B: must be identity.
  QVec p = {Rat(1), Rat(0)};  // vertex of nabla? nabla = polar of... try boundary pt
  for (const auto& c : C.complex.cells) {
    QVec q = c.barycentroid();
    QVec w = global_contract(C, q);
    if (!(w == q)) { std::cout << "IDENTITY FAIL\n"; return 1; }
  }
  std::cout << "identity on B ok\n";
  return 0;
}
