#include <iostream>
#include <random>
#include "tropcontract/lattice.hpp"
using namespace tropcontract;
std::mt19937 rng(12345);
ZMat random_zmat(size_t m, size_t n, int lo=-5,int hi=5){std::uniform_int_distribution<int> d(lo,hi);ZMat A=zmat(m,n);for(size_t i=0;i<m;++i)for(size_t j=0;j<n;++j)A[i][j]=d(rng);return A;}
int main(){
  for(int t=0;t<40;++t){std::cerr<<"hnf "<<t<<" "<<std::flush;ZMat A=random_zmat(3+t%3,2+t%4);auto h=hermite_normal_form(A);if(mul(A,h.U)!=h.H){std::cerr<<"HNF identity FAIL\n";return 1;}}
  for(int t=0;t<40;++t){std::cerr<<"snf "<<t<<" "<<std::flush;ZMat A=random_zmat(2+t%4,2+(t/2)%4);auto s=smith_normal_form(A);if(mul(mul(s.U,A),s.V)!=s.S){std::cerr<<"SNF FAIL\n";return 1;}}
  std::cerr<<"kernels\n";
  for(int t=0;t<30;++t){ZMat A=random_zmat(2+t%3,4);auto k=integer_kernel(A);(void)k;}
  std::cerr<<"saturate\n";
  for(int t=0;t<30;++t){ZMat A=random_zmat(4,2+t%3);std::vector<ZVec> g;for(size_t j=0;j<cols(A);++j){ZVec v(4);for(size_t i=0;i<4;++i)v[i]=A[i][j]*2;g.push_back(v);}auto s=saturate(g,4);(void)s;}
  std::cerr<<"done\n";return 0;}
