#include "nlsfv/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

#include "nlsfv/numeric.hpp"

namespace nlsfv {

namespace {

// Uniform bucket grid over the inflated bounding box, used to enumerate
// Voronoi clip candidates in (approximately) increasing distance.
struct SiteGrid {
  Vec2 lo;
  double bucket = 1.0;
  int nx = 1, ny = 1;
  std::vector<std::vector<int>> buckets;

  SiteGrid(Vec2 blo, Vec2 bhi, double bucket_size, const std::vector<Vec2>& sites)
      : lo(blo), bucket(bucket_size) {
    nx = std::max(1, static_cast<int>(std::ceil((bhi.x - blo.x) / bucket)));
    ny = std::max(1, static_cast<int>(std::ceil((bhi.y - blo.y) / bucket)));
    nx = std::min(nx, 2048);
    ny = std::min(ny, 2048);
    buckets.resize(static_cast<std::size_t>(nx) * ny);
    for (int s = 0; s < static_cast<int>(sites.size()); ++s)
      buckets[index_of(sites[s])].push_back(s);
  }

  int clampi(int v, int hi) const { return std::min(std::max(v, 0), hi - 1); }

  std::size_t index_of(Vec2 p) const {
    const int ix = clampi(static_cast<int>((p.x - lo.x) / bucket), nx);
    const int iy = clampi(static_cast<int>((p.y - lo.y) / bucket), ny);
    return static_cast<std::size_t>(iy) * nx + ix;
  }

  // Visits all buckets at Chebyshev ring k around the home bucket of p.
  template <class F>
  void visit_ring(Vec2 p, int k, F&& f) const {
    const int cx = clampi(static_cast<int>((p.x - lo.x) / bucket), nx);
    const int cy = clampi(static_cast<int>((p.y - lo.y) / bucket), ny);
    if (k == 0) {
      f(buckets[static_cast<std::size_t>(cy) * nx + cx]);
      return;
    }
    for (int ix = cx - k; ix <= cx + k; ++ix) {
      for (int iy = cy - k; iy <= cy + k; ++iy) {
        if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != k) continue;
        if (ix < 0 || ix >= nx || iy < 0 || iy >= ny) continue;
        f(buckets[static_cast<std::size_t>(iy) * nx + ix]);
      }
    }
  }

  int max_ring() const { return std::max(nx, ny); }
};

struct BuildParams {
  DomainSpec domain;
  Vec2 blo, bhi;       // inflated bounding box
  double merge_eps;    // vertex merge tolerance
  double btol;         // allowed boundary overshoot of cell vertices
  double coincident_eps;
};

// Voronoi cell of site i within the augmented site set, clipped to the
// bounding box.  Candidates are processed nearest-first and the loop stops
// once no remaining site can reach the shrinking cell (security radius).
TaggedPolygon build_cell(int i, const std::vector<Vec2>& sites, int n_real,
                         const SiteGrid& grid, const BuildParams& P) {
  const Vec2 g = sites[i];
  TaggedPolygon poly = TaggedPolygon::rectangle(P.blo, P.bhi);
  double maxvd = poly.max_vertex_distance(g);

  using Cand = std::pair<double, int>;  // (distance^2, site index)
  std::priority_queue<Cand, std::vector<Cand>, std::greater<Cand>> heap;
  int next_ring = 0;
  const int last_ring = grid.max_ring();

  while (true) {
    // Ring k holds no site closer than (k-1)*bucket, so rings load lazily:
    // only while that lower bound could still beat the heap top (preserving
    // nearest-first pops) and could still reach the cell.  Without the
    // laziness the opening rectangle's huge radius would pull every site
    // into the heap for every cell.
    while (next_ring <= last_ring) {
      const double lb = std::max(0, next_ring - 1) * grid.bucket;
      if (lb > 2.0 * maxvd) break;
      if (!heap.empty() && lb * lb > heap.top().first) break;
      grid.visit_ring(g, next_ring, [&](const std::vector<int>& b) {
        for (int j : b)
          if (j != i) heap.emplace(norm2(sites[j] - g), j);
      });
      ++next_ring;
    }
    if (heap.empty()) break;
    const auto [d2, j] = heap.top();
    const double d = std::sqrt(d2);
    if (d > 2.0 * maxvd) break;
    heap.pop();
    if (d < P.coincident_eps)
      throw std::runtime_error("degenerate geometry: coincident cell points");
    EdgeTag tag;
    tag.kind = j < n_real ? EdgeTag::Kind::Neighbor : EdgeTag::Kind::Boundary;
    tag.neighbor = j;
    if (!poly.clip(bisector_halfplane(g, sites[j]), tag, P.merge_eps))
      throw std::runtime_error("degenerate geometry: empty Voronoi cell");
    maxvd = poly.max_vertex_distance(g);
  }
  return poly;
}

// Index of the vertex sticking furthest outside the domain, or -1 when all
// vertices are within btol of the wall.
int worst_outside_vertex(const TaggedPolygon& poly, const BuildParams& P) {
  int worst = -1;
  double worst_sd = P.btol;
  for (int k = 0; k < static_cast<int>(poly.v.size()); ++k) {
    const double sd = P.domain.signed_distance(poly.v[k]);
    if (sd > worst_sd) {
      worst_sd = sd;
      worst = k;
    }
  }
  return worst;
}

struct VoronoiResult {
  std::vector<TaggedPolygon> polys;
  int n_sites = 0;
};

// Voronoi cells of the real generators within generators + ghost mirrors.
// Ghosts come from (a) mirroring near-wall generators across the nearest
// boundary point, and (b) coverage sweeps that mirror a cell's generator
// across the tangent line nearest to any vertex still poking outside.
VoronoiResult build_voronoi(const std::vector<Vec2>& gens, double band,
                            const BuildParams& P) {
  const int n = static_cast<int>(gens.size());
  std::vector<Vec2> sites = gens;

  for (int i = 0; i < n; ++i) {
    const double sd = P.domain.signed_distance(gens[i]);
    if (-sd > band) continue;
    Vec2 bp, nb;
    P.domain.nearest_boundary(gens[i], bp, nb);
    const Vec2 ghost = gens[i] - 2.0 * sd * nb;
    const double gsd = P.domain.signed_distance(ghost);
    // Mirror must land outside at (about) the mirrored distance, otherwise
    // the reflection is not a local mirror and would corrupt the diagram.
    if (gsd > 0.0 && std::abs(gsd + sd) <= 0.1 * (-sd) + P.merge_eps)
      sites.push_back(ghost);
  }

  VoronoiResult out;
  const double spacing =
      std::sqrt(P.domain.area() / std::max(1, n));
  for (int sweep = 0; sweep < 40; ++sweep) {
    SiteGrid grid(P.blo, P.bhi, std::max(spacing, 1e-9), sites);
    out.polys.clear();
    out.polys.reserve(n);
    for (int i = 0; i < n; ++i)
      out.polys.push_back(build_cell(i, sites, n, grid, P));

    std::vector<Vec2> extra;
    for (int i = 0; i < n; ++i) {
      const int k = worst_outside_vertex(out.polys[i], P);
      if (k < 0) continue;
      Vec2 bp, nb;
      P.domain.nearest_boundary(out.polys[i].v[k], bp, nb);
      // Mirror of the generator across the tangent line at bp; its bisector
      // with the generator is exactly that tangent line.
      const double dist_to_line = dot(nb, gens[i] - bp);  // negative inside
      const Vec2 ghost = gens[i] - 2.0 * dist_to_line * nb;
      if (P.domain.signed_distance(ghost) <= 0.5 * P.btol)
        throw std::runtime_error(
            "degenerate geometry: cell wraps the obstacle; increase n_cells");
      extra.push_back(ghost);
    }
    if (extra.empty()) {
      out.n_sites = static_cast<int>(sites.size());
      return out;
    }
    sites.insert(sites.end(), extra.begin(), extra.end());
  }
  throw std::runtime_error(
      "mesh generation failed to confine cells to the domain");
}

}  // namespace

std::uint64_t next_mesh_uid() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

double Mesh::total_area() const {
  std::vector<double> a;
  a.reserve(cells.size());
  for (const Cell& c : cells) a.push_back(c.area);
  return pairwise_sum(a);
}

Mesh generate_mesh(const DomainSpec& domain, int n_cells, std::uint64_t seed,
                   int lloyd_max_iters, double lloyd_tol, MeshBuildStats* stats) {
  if (n_cells < 1) throw std::invalid_argument("n_cells must be >= 1");
  if (lloyd_max_iters < 0) throw std::invalid_argument("negative Lloyd budget");

  const double diam = domain.diameter();
  const double r_min = domain.kind == DomainKind::Disk
                           ? domain.radius
                           : std::min(domain.inner_radius,
                                      domain.outer_radius - domain.inner_radius);
  const double ell = 1.2 * std::sqrt(domain.area() / n_cells);
  const double band = 1.5 * std::sqrt(domain.area() / n_cells);

  BuildParams P;
  P.domain = domain;
  domain.bounding_box(P.blo, P.bhi);
  const double pad = 0.08 * 0.5 * diam;
  P.blo = P.blo - Vec2{pad, pad};
  P.bhi = P.bhi + Vec2{pad, pad};
  P.merge_eps = 1e-12 * diam;
  P.btol = std::min(ell * ell / (4.0 * r_min), 0.05 * r_min);
  P.coincident_eps = 1e-12 * diam;

  if (lloyd_tol <= 0.0) lloyd_tol = 1e-3 * diam / std::sqrt(double(n_cells));

  // Rejection-sampled interior seed points.
  std::mt19937_64 rng(seed);
  std::vector<Vec2> gens;
  gens.reserve(n_cells);
  const double margin = 1e-9 * diam;
  std::uint64_t attempts = 0;
  const std::uint64_t attempt_cap =
      10000ull * static_cast<std::uint64_t>(n_cells) + 10000ull;
  while (static_cast<int>(gens.size()) < n_cells) {
    if (++attempts > attempt_cap)
      throw std::runtime_error("seeding failed: domain rejection sampling stalled");
    const Vec2 p{P.blo.x + (P.bhi.x - P.blo.x) * rand01(rng),
                 P.blo.y + (P.bhi.y - P.blo.y) * rand01(rng)};
    if (domain.signed_distance(p) < -margin) gens.push_back(p);
  }

  MeshBuildStats local_stats;
  MeshBuildStats& st = stats ? *stats : local_stats;
  st = MeshBuildStats{};

  VoronoiResult vr = build_voronoi(gens, band, P);
  for (int it = 0; it < lloyd_max_iters; ++it) {
    double move = 0.0;
    std::vector<Vec2> next(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
      Vec2 c = vr.polys[i].centroid();
      move = std::max(move, norm(c - gens[i]));
      // Keep generators strictly interior; a centroid may graze the wall
      // when a cell hugs the boundary.
      const double sd = domain.signed_distance(c);
      const double pull = 0.02 * ell;
      if (sd > -pull) {
        Vec2 bp, nb;
        domain.nearest_boundary(c, bp, nb);
        c = c - (sd + pull) * nb;
      }
      next[i] = c;
    }
    st.lloyd_moves.push_back(move);
    st.iterations = it + 1;
    if (move <= lloyd_tol) {
      st.converged = true;
      break;
    }
    gens = std::move(next);
    vr = build_voronoi(gens, band, P);
  }

  // Assemble cells and faces.  Interior faces are emitted once per
  // unordered generator pair with geometry taken from the lower-indexed
  // side; both sides lie on the same bisector line.
  Mesh mesh;
  mesh.domain = domain;
  mesh.uid = next_mesh_uid();
  mesh.cells.resize(gens.size());
  const double min_area = 1e-12 * domain.area() / n_cells;

  std::vector<std::vector<int>> pair_face(gens.size());
  auto find_pair = [&](int a, int b) -> int* {
    auto& row = pair_face[a];
    for (std::size_t k = 0; k + 1 < row.size(); k += 2)
      if (row[k] == b) return &row[k + 1];
    return nullptr;
  };

  for (std::size_t i = 0; i < gens.size(); ++i) {
    Cell& cell = mesh.cells[i];
    cell.id = static_cast<int>(i);
    cell.point = gens[i];
    cell.area = vr.polys[i].area();
    cell.diameter = vr.polys[i].diameter();
    if (!(cell.area > min_area))
      throw std::runtime_error("degenerate geometry: vanishing cell area");
    if (!vr.polys[i].contains_strict(gens[i], 0.0))
      throw std::runtime_error("degenerate geometry: generator left its cell");

    const TaggedPolygon& poly = vr.polys[i];
    const std::size_t k = poly.v.size();
    for (std::size_t e = 0; e < k; ++e) {
      const Vec2 a = poly.v[e];
      const Vec2 b = poly.v[(e + 1) % k];
      const EdgeTag tag = poly.tags[e];
      const bool interior =
          tag.kind == EdgeTag::Kind::Neighbor && tag.neighbor < static_cast<int>(gens.size());
      if (interior) {
        const int lo = std::min<int>(i, tag.neighbor);
        const int hi = std::max<int>(i, tag.neighbor);
        if (find_pair(lo, hi)) continue;  // twin already emitted the face
        Face f;
        f.id = static_cast<int>(mesh.faces.size());
        f.kind = FaceKind::Interior;
        f.cell_k = lo;
        f.cell_l = hi;
        f.p0 = a;
        f.p1 = b;
        f.measure = norm(b - a);
        f.midpoint = 0.5 * (a + b);
        pair_face[lo].push_back(hi);
        pair_face[lo].push_back(f.id);
        mesh.faces.push_back(f);
      } else {
        Face f;
        f.id = static_cast<int>(mesh.faces.size());
        f.kind = FaceKind::Boundary;
        f.cell_k = static_cast<int>(i);
        f.p0 = a;
        f.p1 = b;
        f.measure = norm(b - a);
        f.midpoint = 0.5 * (a + b);
        mesh.faces.push_back(f);
      }
    }
  }

  for (const Face& f : mesh.faces) {
    mesh.cells[f.cell_k].face_ids.push_back(f.id);
    if (f.kind == FaceKind::Interior) mesh.cells[f.cell_l].face_ids.push_back(f.id);
  }

  if (mesh.domain.kind == DomainKind::Annulus) {
    // Vertex confinement cannot see a hole swallowed whole: a cell covering
    // the obstacle keeps every vertex near the outer wall.  A valid annulus
    // mesh always carries boundary faces on the inner wall, so their absence
    // is the wrap signature.
    const double split =
        0.5 * (mesh.domain.inner_radius + mesh.domain.outer_radius);
    bool has_inner = false;
    for (const Face& f : mesh.faces)
      if (f.kind == FaceKind::Boundary && norm(f.midpoint) < split) {
        has_inner = true;
        break;
      }
    if (!has_inner)
      throw std::runtime_error(
          "degenerate geometry: cell wraps the obstacle; increase n_cells");
  }

  mesh.h = 0.0;
  for (const Cell& c : mesh.cells) mesh.h = std::max(mesh.h, c.diameter);

  compute_transmissibilities(mesh);
  return mesh;
}

void compute_transmissibilities(Mesh& mesh) {
  const double tiny = 1e-14 * std::max(mesh.domain.diameter(), 1e-300);
  for (Face& f : mesh.faces) {
    if (f.kind == FaceKind::Interior) {
      const double d = norm(mesh.cells[f.cell_l].point - mesh.cells[f.cell_k].point);
      if (d <= tiny)
        throw std::runtime_error("transmissibility: coincident cell points");
      f.tau = f.measure / d;
    } else {
      const double d =
          point_segment_distance(mesh.cells[f.cell_k].point, f.p0, f.p1);
      if (d <= tiny)
        throw std::runtime_error("transmissibility: cell point on boundary face");
      f.tau = f.measure / d;
    }
  }
}

AdmissibilityReport validate_admissibility(const Mesh& mesh, double tol) {
  AdmissibilityReport rep;
  rep.min_cell_area = mesh.cells.empty() ? 0.0 : mesh.cells.front().area;
  for (const Cell& c : mesh.cells)
    rep.min_cell_area = std::min(rep.min_cell_area, c.area);
  rep.min_face_measure = mesh.faces.empty() ? 0.0 : mesh.faces.front().measure;

  for (const Face& f : mesh.faces) {
    rep.min_face_measure = std::min(rep.min_face_measure, f.measure);
    if (f.kind != FaceKind::Interior || f.measure <= 0.0) continue;
    const Vec2 t = f.p1 - f.p0;
    const Vec2 d = mesh.cells[f.cell_l].point - mesh.cells[f.cell_k].point;
    const double dn = norm(d);
    const double tn = norm(t);
    if (dn == 0.0 || tn == 0.0) {
      rep.detail = "degenerate face or coincident points";
      return rep;
    }
    rep.orthogonality_max =
        std::max(rep.orthogonality_max, std::abs(dot(t, d)) / (tn * dn));
  }

  const double analytic = mesh.domain.area();
  rep.area_defect = std::abs(mesh.total_area() - analytic) / analytic;

  rep.admissible = rep.orthogonality_max <= tol && rep.min_cell_area > 0.0 &&
                   rep.min_face_measure >= 0.0;
  if (!rep.admissible && rep.detail.empty())
    rep.detail = "orthogonality defect above tolerance";
  return rep;
}

}  // namespace nlsfv
