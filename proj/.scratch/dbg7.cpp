#include <iostream>
#include <random>
#include "tropcontract/polyhedron.hpp"
using namespace tropcontract;
std::mt19937 rng(987);
QVec random_qpoint(size_t d,int lo=-6,int hi=6){std::uniform_int_distribution<int> dist(lo,hi);QVec p(d);for(size_t i=0;i<d;++i)p[i]=Rat(dist(rng));return p;}
std::vector<QVec> hull2d_oracle(std::vector<QVec> pts){
  std::sort(pts.begin(),pts.end());
  pts.erase(std::unique(pts.begin(),pts.end()),pts.end());
  if(pts.size()<=2)return pts;
  auto cross=[](const QVec&o,const QVec&a,const QVec&b){return (a[0]-o[0])*(b[1]-o[1])-(a[1]-o[1])*(b[0]-o[0]);};
  std::vector<QVec> h;
  for(const auto&p:pts){while(h.size()>=2&&cross(h[h.size()-2],h.back(),p)<=0)h.pop_back();h.push_back(p);}
  size_t lower=h.size()+1;
  for(auto it=pts.rbegin();it!=pts.rend();++it){while(h.size()>=lower&&cross(h[h.size()-2],h.back(),*it)<=0)h.pop_back();h.push_back(*it);}
  h.pop_back();
  std::sort(h.begin(),h.end());
  return h;
}
int main(){
  std::uniform_int_distribution<int> npts(3,10);
  for(int t=0;t<30;++t){
    std::vector<QVec> pts;int n=npts(rng);
    for(int i=0;i<n;++i)pts.push_back(random_qpoint(2));
    Polyhedron P=polytope_from_points(pts,2);
    auto o=hull2d_oracle(pts);
    if(P.dim()==2&&P.vertices!=o){std::cerr<<"MISMATCH trial "<<t<<"\n dd:";for(auto&v:P.vertices)std::cerr<<to_string(v);std::cerr<<"\n or:";for(auto&v:o)std::cerr<<to_string(v);std::cerr<<"\n";}
  }
  std::cerr<<"done\n";
  return 0;}
