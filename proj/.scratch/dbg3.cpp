#include <iostream>
#include <random>
#include "tropcontract/lattice.hpp"
using namespace tropcontract;
std::mt19937 rng(12345);
ZMat random_zmat(size_t m, size_t n, int lo=-5,int hi=5){std::uniform_int_distribution<int> d(lo,hi);ZMat A=zmat(m,n);for(size_t i=0;i<m;++i)for(size_t j=0;j<n;++j)A[i][j]=d(rng);return A;}
void dump(const ZMat&A){for(auto&r:A){for(auto&x:r)std::cerr<<x.get_str()<<" ";std::cerr<<"\n";}}
int main(){
  for(int t=0;t<40;++t){ZMat A=random_zmat(3+t%3,2+t%4);hermite_normal_form(A);}
  for(int t=0;t<15;++t){ZMat A=random_zmat(2+t%4,2+(t/2)%4);smith_normal_form(A);}
  ZMat A=random_zmat(2+15%4,2+(15/2)%4);
  std::cerr<<"matrix "<<rows(A)<<"x"<<cols(A)<<":\n";dump(A);
  return 0;}
