#include <iostream>
#include "tropcontract/lattice.hpp"
using namespace tropcontract;
// Instrumented copy of smith_normal_form's skeleton to find the loop.
int main(){
  ZMat A={{-1,5,1,-4,5},{0,-4,1,-3,-1},{-4,-4,2,0,5},{0,-1,5,0,2},{-2,0,-4,0,2}};
  size_t m=rows(A),n=cols(A);
  ZMat S=A,U=identity_z(m),V=identity_z(n);
  auto row_combine=[&](size_t t,size_t i,const Int&x,const Int&y,const Int&a,const Int&b){
    for(size_t j=0;j<n;++j){Int rt=x*S[t][j]+y*S[i][j];Int ri=-b*S[t][j]+a*S[i][j];S[t][j]=rt;S[i][j]=ri;}
    for(size_t j=0;j<m;++j){Int rt=x*U[t][j]+y*U[i][j];Int ri=-b*U[t][j]+a*U[i][j];U[t][j]=rt;U[i][j]=ri;}};
  auto col_combine=[&](size_t t,size_t j,const Int&x,const Int&y,const Int&a,const Int&b){
    for(size_t i=0;i<m;++i){Int ct=x*S[i][t]+y*S[i][j];Int cj=-b*S[i][t]+a*S[i][j];S[i][t]=ct;S[i][j]=cj;}
    for(size_t i=0;i<n;++i){Int ct=x*V[i][t]+y*V[i][j];Int cj=-b*V[i][t]+a*V[i][j];V[i][t]=ct;V[i][j]=cj;}};
  long guard=0;
  auto diagonalize=[&](){
    size_t t=0;
    while(t<m&&t<n){
      size_t pi=m,pj=n;
      for(size_t i=t;i<m&&pi==m;++i)for(size_t j=t;j<n;++j)if(S[i][j]!=0){pi=i;pj=j;break;}
      if(pi==m)break;
      if(pi!=t){std::swap(S[pi],S[t]);std::swap(U[pi],U[t]);}
      if(pj!=t){for(size_t i=0;i<m;++i)std::swap(S[i][pj],S[i][t]);for(size_t i=0;i<n;++i)std::swap(V[i][pj],V[i][t]);}
      bool dirty=true;
      while(dirty){
        dirty=false;
        if(++guard>200){std::cerr<<"LOOP in diagonalize t="<<t<<" S=\n";for(auto&r:S){for(auto&x:r)std::cerr<<x.get_str()<<" ";std::cerr<<"\n";}return;}
        for(size_t i=t+1;i<m;++i){if(S[i][t]==0)continue;Int x,y;Int g=gcdext(S[t][t],S[i][t],x,y);row_combine(t,i,x,y,S[t][t]/g,S[i][t]/g);dirty=true;}
        for(size_t j=t+1;j<n;++j){if(S[t][j]==0)continue;Int x,y;Int g=gcdext(S[t][t],S[t][j],x,y);col_combine(t,j,x,y,S[t][t]/g,S[t][j]/g);dirty=true;}
      }
      ++t;
    }
  };
  diagonalize();
  std::cerr<<"after diag, guard="<<guard<<" S=\n";for(auto&r:S){for(auto&x:r)std::cerr<<x.get_str()<<" ";std::cerr<<"\n";}
  return 0;}
