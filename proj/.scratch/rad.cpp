#include "tropcontract/homology.hpp"
#include <iostream>
using namespace tropcontract;
int main() {
  LocalModel M = focus_focus_model(1, 1);
  std::cerr << "model built\n";
  CechCocycle c = radiance_cocycle(M);
  std::cerr << "cocycle_ok=" << c.cocycle_ok << " overlaps=" << c.overlaps.size() << "\n";
}
