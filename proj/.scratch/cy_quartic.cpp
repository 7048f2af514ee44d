#include <tropcontract/calabi_yau.hpp>
#include <iostream>
#include <chrono>
using namespace tropcontract;

int main() {
  auto t0 = std::chrono::steady_clock::now();
  auto el = [&]{ return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now()-t0).count(); };
  std::vector<QVec> vs = {{Rat(3),Rat(-1),Rat(-1)},{Rat(-1),Rat(3),Rat(-1)},
                          {Rat(-1),Rat(-1),Rat(3)},{Rat(-1),Rat(-1),Rat(-1)}};
  Polyhedron delta = polytope_from_points(vs, 3);
  NefPartitionData D = build_nef_partition(delta, {delta});
  std::cout << el() << "ms nef ok; Delta* verts=" << D.delta_polar.vertices.size()
            << " nabla verts=" << D.nabla.vertices.size() << "\n";
  auto C = dual_intersection_complex(D);
  std::cout << el() << "ms complex: cells=" << C.complex.cells.size()
            << " charts=" << C.vertex_chart.size() << "\n";
  int d0=0,d1=0,d2=0;
  for (int dd : C.complex.cell_dim) (dd==0?d0:dd==1?d1:d2)++;
  std::cout << "dims: " << d0 << "/" << d1 << "/" << d2 << "\n";
  auto X = cy_tropical_variety(C);
  std::cout << el() << "ms variety: x=" << X.x_cells.size() << " xc=" << X.xc_cells.size() << "\n";
  auto G = cy_goodness(C);
  std::cout << el() << "ms goodness=" << (int)G.overall << "\n";
  auto disc = cy_discriminant(C);
  std::cout << el() << "ms disc pieces=" << disc.size() << "\n";
  for (auto& s : disc) {
    for (auto& v : s.vertices) { std::cout << "("; for (auto& c : v) std::cout << c << ","; std::cout << ") "; }
    std::cout << "\n";
  }
  // Identity of delta on B cell anchors.
  for (const auto& c : C.complex.cells) {
    QVec q = c.barycentroid();
    if (!(global_contract(C, q) == q)) { std::cout << "IDENTITY FAIL\n"; return 1; }
  }
  std::cout << el() << "ms identity ok\n";
  // A leg point: pick an unbounded x cell, take relint point, contract.
  for (const auto& c : X.x_cells) {
    if (c.poly.is_bounded()) continue;
    QVec q = c.poly.relint_point();
    QVec w = global_contract(C, q);
    std::cout << "leg ("; for (auto& x : q) std::cout << x << ","; std::cout << ") -> (";
    for (auto& x : w) std::cout << x << ","; std::cout << ")\n";
    break;
  }
  std::cout << el() << "ms done\n";
  return 0;
}
