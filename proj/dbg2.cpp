#include <tropcontract/calabi_yau.hpp>
#include <iostream>
using namespace tropcontract;
std::string pv(const Polyhedron& P){ std::string s; for(auto&v:P.vertices){s+="(";for(auto&c:v)s+=c.get_str()+",";s+=")";} return s; }
int main() {
  std::vector<QVec> vs = {{Rat(1),Rat(1)},{Rat(1),Rat(-1)},{Rat(-1),Rat(1)},{Rat(-1),Rat(-1)}};
  NefPartitionData D = build_nef_partition(polytope_from_points(vs,2), {polytope_from_points(vs,2)});
  // replicate the pair extraction with h=2
  DualIntersectionComplex C;
  // hack: copy minimal needed; instead just recompute sigma_tilde by calling with a patched dedupe
  // simpler: inline the fan build
  size_t n = 2;
  std::vector<Rat> h(4, Rat(2));
  // nabla_h etc. via public pieces
  std::vector<ZVec> check_rays; for (auto& v : D.nabla_polar.vertices) check_rays.push_back(clear_denominators(v));
  std::vector<std::pair<ZVec,Rat>> ih, ihp;
  for (size_t j=0;j<check_rays.size();++j){ ih.push_back({check_rays[j], -h[j]}); ihp.push_back({check_rays[j], D.check_phi(to_qvec(check_rays[j]))-h[j]}); }
  Polyhedron nh = polyhedron_from_hrep(ih, {}, n), nhp = polyhedron_from_hrep(ihp, {}, n);
  std::cout << "nabla_hp verts: " << pv(nhp) << "\n";
  std::vector<Polyhedron> pf, hf;
  for (auto& f : face_lattice(D.delta_polar)) if (f.poly.dim() < (int)n) pf.push_back(f.poly);
  for (auto& f : face_lattice(nhp)) hf.push_back(f.poly);
  Polyhedron big = minkowski_sum(D.delta_polar, nhp);
  std::vector<std::vector<ZVec>> gens;
  for (auto& F1 : pf) for (auto& F2 : hf) {
    if (!is_face_of(minkowski_sum(F1,F2), big)) continue;
    std::vector<ZVec> g;
    for (auto& v : F1.vertices) g.push_back(detail::lift_ray(v,0));
    for (auto& w : F2.vertices) g.push_back(detail::lift_ray(w,1));
    gens.push_back(g);
  }
  { std::vector<ZVec> g; for (auto& w : nhp.vertices) g.push_back(detail::lift_ray(w,1)); gens.push_back(g); }
  Fan fan = fan_from_cones(n+1, gens);
  for (size_t c=0;c<fan.cones.size();++c){
    std::vector<QVec> mu, nu;
    for (auto& r : fan.cones[c]) {
      if (r[n]==0) mu.push_back(to_qvec(ZVec(r.begin(),r.begin()+n)));
      else { QVec w(n); for (size_t i=0;i<n;++i) w[i]=Rat(r[i])/Rat(r[n]); nu.push_back(w); }
    }
    if (mu.empty()||nu.empty()) continue;
    Polyhedron M = polytope_from_points(mu,n), N = polytope_from_points(nu,n);
    Polyhedron cell = minkowski_sum(intersect(M, D.nabla_parts[0]), N);
    std::cout << "cone" << c << " mu=" << pv(M) << " nu=" << pv(N) << " cell=" << pv(cell) << "\n";
  }
  return 0;
}
