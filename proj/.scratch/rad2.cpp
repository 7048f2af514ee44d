#include "tropcontract/contraction.hpp"
#include <iostream>
using namespace tropcontract;
int main() {
  LocalModel M = focus_focus_model(1, 1);
  std::cerr << "n=" << M.data.n << " dp=" << M.data.dp << " r=" << M.data.r << "\n";
  std::cerr << "d_basis size=" << M.data.d_basis.size() << "\n";
  for (auto& b : M.data.d_basis) std::cerr << "  len=" << b.size() << " " << to_string(b) << "\n";
}
