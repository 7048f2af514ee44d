#include <iostream>
#include <random>
#include "tropcontract/polyhedron.hpp"
using namespace tropcontract;
std::mt19937 rng(987);
QVec random_qpoint(size_t d,int lo=-6,int hi=6){std::uniform_int_distribution<int> dist(lo,hi);QVec p(d);for(size_t i=0;i<d;++i)p[i]=Rat(dist(rng));return p;}
int main(){
  std::uniform_int_distribution<int> npts(3,10);
  for(int t=0;t<30;++t){
    std::vector<QVec> pts;int n=npts(rng);
    for(int i=0;i<n;++i)pts.push_back(random_qpoint(2));
    std::cerr<<"trial "<<t<<" n="<<n<<":";for(auto&p:pts)std::cerr<<" "<<to_string(p);std::cerr<<"\n";
    Polyhedron P=polytope_from_points(pts,2);
    std::cerr<<"  dim="<<P.dim()<<" nv="<<P.vertices.size()<<"\n";
  }
  return 0;}
