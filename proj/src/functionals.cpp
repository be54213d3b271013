#include "nlsfv/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace nlsfv {

ComplexField ComplexField::zeros(const Mesh& mesh) {
  ComplexField f;
  f.values.assign(mesh.cells.size(), cdouble{0.0, 0.0});
  f.mesh_uid = mesh.uid;
  return f;
}

void require_same_mesh(const ComplexField& f, const Mesh& mesh) {
  if (f.values.size() != mesh.cells.size() ||
      (f.mesh_uid != 0 && mesh.uid != 0 && f.mesh_uid != mesh.uid))
    throw std::invalid_argument("field does not belong to this mesh");
}

cdouble d_sigma(const ComplexField& f, const Mesh& mesh, const Face& face) {
  (void)mesh;  // orientation is carried by the face itself
  if (face.kind == FaceKind::Interior)
    return f.values[face.cell_l] - f.values[face.cell_k];
  return -f.values[face.cell_k];
}

double discrete_l2_norm(const ComplexField& f, const Mesh& mesh) {
  require_same_mesh(f, mesh);
  std::vector<double> terms(mesh.cells.size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    terms[i] = std::norm(f.values[i]) * mesh.cells[i].area;
  return std::sqrt(pairwise_sum(terms));
}

double discrete_h1_norm(const ComplexField& f, const Mesh& mesh) {
  require_same_mesh(f, mesh);
  std::vector<double> terms(mesh.faces.size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    terms[i] = mesh.faces[i].tau * std::norm(d_sigma(f, mesh, mesh.faces[i]));
  return std::sqrt(pairwise_sum(terms));
}

double discrete_l2p_norm(const ComplexField& f, const Mesh& mesh, double p) {
  require_same_mesh(f, mesh);
  if (!(p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
  std::vector<double> terms(mesh.cells.size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    terms[i] = std::pow(std::norm(f.values[i]), p) * mesh.cells[i].area;
  return std::pow(pairwise_sum(terms), 1.0 / (2.0 * p));
}

double mass_E0(const ComplexField& f, const Mesh& mesh) {
  const double l2 = discrete_l2_norm(f, mesh);
  return 0.5 * l2 * l2;
}

double energy_E1(const ComplexField& f, const Mesh& mesh, double p) {
  require_same_mesh(f, mesh);
  if (!(p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
  std::vector<double> grad(mesh.faces.size());
  for (std::size_t i = 0; i < grad.size(); ++i)
    grad[i] = mesh.faces[i].tau * std::norm(d_sigma(f, mesh, mesh.faces[i]));
  std::vector<double> pot(mesh.cells.size());
  for (std::size_t i = 0; i < pot.size(); ++i)
    pot[i] = std::pow(std::norm(f.values[i]), p) * mesh.cells[i].area;
  return 0.5 * pairwise_sum(grad) + pairwise_sum(pot) / (2.0 * p);
}

double linf_norm(const ComplexField& f) {
  double m = 0.0;
  for (const cdouble& z : f.values) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace nlsfv
