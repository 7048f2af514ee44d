#include <tropcontract/calabi_yau.hpp>
#include <iostream>
using namespace tropcontract;
int main() {
  std::vector<QVec> vs = {{Rat(1),Rat(1)},{Rat(1),Rat(-1)},{Rat(-1),Rat(1)},{Rat(-1),Rat(-1)}};
  NefPartitionData D = build_nef_partition(polytope_from_points(vs,2), {polytope_from_points(vs,2)});
  std::vector<Rat> h(4, Rat(2));
  try { dual_intersection_complex(D, h); } catch (std::exception& e) { std::cout << "ERR " << e.what() << "\n"; }
  return 0;
}
