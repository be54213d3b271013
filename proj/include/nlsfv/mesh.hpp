// Admissible polygonal meshes built as Lloyd-relaxed Voronoi tessellations.
// Interior faces are bisector segments between generator pairs, hence exactly
// orthogonal to the segment joining the two cell points; boundary faces are
// tangent chords of the curved domain wall.  Transmissibilities:
//   interior:  tau = measure / |x_K - x_L|
//   boundary:  tau = measure / dist(x_K, face segment)
#ifndef NLSFV_MESH_HPP
#define NLSFV_MESH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nlsfv/domain.hpp"
#include "nlsfv/geometry.hpp"

namespace nlsfv {

enum class FaceKind { Interior, Boundary };

struct Cell {
  int id = -1;
  Vec2 point;  // Voronoi generator, not the centroid
  double area = 0.0;
  double diameter = 0.0;
  std::vector<int> face_ids;
};

struct Face {
  int id = -1;
  FaceKind kind = FaceKind::Interior;
  int cell_k = -1;
  int cell_l = -1;  // interior only; orientation of jumps is (k -> l)
  double measure = 0.0;
  double tau = 0.0;
  Vec2 midpoint;
  // Segment endpoints.  Exact for generated meshes; for meshes read back
  // from disk they are reconstructed (see load_mesh) and only the derived
  // quantities measure/tau/midpoint are authoritative.
  Vec2 p0, p1;
};

struct Mesh {
  DomainSpec domain;
  std::vector<Cell> cells;
  std::vector<Face> faces;
  double h = 0.0;  // max cell diameter
  std::uint64_t uid = 0;
  bool endpoints_reconstructed = false;

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  double total_area() const;
};

// Diagnostics from generate_mesh, mostly for tests.
struct MeshBuildStats {
  std::vector<double> lloyd_moves;  // max generator->centroid move per sweep
  int iterations = 0;
  bool converged = false;  // hit lloyd_tol before the iteration budget
};

// Lloyd-relaxed Voronoi mesh.  lloyd_tol <= 0 selects the default
// 1e-3 * diameter(domain) / sqrt(n_cells).  Deterministic in all arguments.
Mesh generate_mesh(const DomainSpec& domain, int n_cells, std::uint64_t seed,
                   int lloyd_max_iters = 200, double lloyd_tol = -1.0,
                   MeshBuildStats* stats = nullptr);

struct AdmissibilityReport {
  double orthogonality_max = 0.0;  // |t_hat . (x_L - x_K)| / |x_L - x_K|
  double area_defect = 0.0;        // |sum m(K) - analytic area| / analytic
  double min_cell_area = 0.0;
  double min_face_measure = 0.0;
  bool admissible = false;
  std::string detail;
};

AdmissibilityReport validate_admissibility(const Mesh& mesh, double tol);

// Fills Face::tau from the stored geometry.  Throws if two adjacent cell
// points coincide or a boundary distance degenerates.
void compute_transmissibilities(Mesh& mesh);

// JSON round trip, schema_version 1.  save_mesh writes every numeric field
// as a 64-bit float that parses back bit-identically.
void save_mesh(const Mesh& mesh, const std::string& path);
Mesh load_mesh(const std::string& path);

std::uint64_t next_mesh_uid();

}  // namespace nlsfv

#endif
