#include <iostream>
#include "tropcontract/lattice.hpp"
using namespace tropcontract;
int main(){
  ZMat A={{-1,5,1,-4,5},{0,-4,1,-3,-1},{-4,-4,2,0,5},{0,-1,5,0,2},{-2,0,-4,0,2}};
  smith_normal_form(A);
  std::cerr<<"ok\n";
  return 0;}
