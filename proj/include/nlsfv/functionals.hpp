// Mesh-weighted norms and the conserved/decaying functionals.
//   ||y||_{L2}^2   = sum_K |y_K|^2 m(K)
//   ||y||_{L2p}^2p = sum_K |y_K|^{2p} m(K)
//   ||y||_{H1}^2   = sum_{all faces} tau_sigma |D_sigma y|^2
//   E0 = 1/2 ||y||_{L2}^2
//   E1 = 1/2 ||y||_{H1}^2 + 1/(2p) ||y||_{L2p}^2p
// All reductions use deterministic pairwise summation.
#ifndef NLSFV_FUNCTIONALS_HPP
#define NLSFV_FUNCTIONALS_HPP

#include <cstdint>

#include "nlsfv/mesh.hpp"
#include "nlsfv/numeric.hpp"

namespace nlsfv {

struct ComplexField {
  std::vector<cdouble> values;
  std::uint64_t mesh_uid = 0;

  static ComplexField zeros(const Mesh& mesh);
};

// Throws when the field was sampled on a different mesh.
void require_same_mesh(const ComplexField& f, const Mesh& mesh);

// Jump across a face, oriented by the stored (cell_k, cell_l) pair;
// boundary faces use the homogeneous Dirichlet ghost value 0.
cdouble d_sigma(const ComplexField& f, const Mesh& mesh, const Face& face);

double discrete_l2_norm(const ComplexField& f, const Mesh& mesh);
double discrete_h1_norm(const ComplexField& f, const Mesh& mesh);
// ||y||_{L2p}; p >= 1 is the exponent p in |y|^{2p}.
double discrete_l2p_norm(const ComplexField& f, const Mesh& mesh, double p);
double mass_E0(const ComplexField& f, const Mesh& mesh);
double energy_E1(const ComplexField& f, const Mesh& mesh, double p);
double linf_norm(const ComplexField& f);

struct FunctionalSample {
  long long step = 0;
  double t = 0.0;
  double E0 = 0.0;
  double E1 = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
  double l2p = 0.0;
  double linf = 0.0;
  int picard_iters = 0;
  int krylov_iters = 0;
};

}  // namespace nlsfv

#endif
