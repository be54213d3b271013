// Small 2-D vector type and convex polygon clipping primitives used by the
// Voronoi mesh generator.  Polygons are stored counter-clockwise with one
// source tag per edge so that face adjacency can be recovered after clipping.
#ifndef NLSFV_GEOMETRY_HPP
#define NLSFV_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace nlsfv {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

// Half-plane {p : dot(n, p) <= c} with unit normal n.
struct HalfPlane {
  Vec2 n;
  double c = 0.0;
};

// Provenance of a polygon edge; interior faces are recovered from Neighbor
// tags, everything else becomes a boundary face.
struct EdgeTag {
  enum class Kind : std::uint8_t { Box, Neighbor, Boundary };
  Kind kind = Kind::Box;
  int neighbor = -1;
};

// Convex polygon, CCW; tags[i] belongs to edge (v[i], v[i+1 mod n]).
struct TaggedPolygon {
  std::vector<Vec2> v;
  std::vector<EdgeTag> tags;

  static TaggedPolygon rectangle(Vec2 lo, Vec2 hi);

  // Keeps the part inside hp.  merge_eps collapses vertices closer than
  // that distance so degenerate slivers cannot survive.  Returns false if
  // the polygon was clipped away entirely.
  bool clip(const HalfPlane& hp, EdgeTag tag, double merge_eps);

  double area() const;
  Vec2 centroid() const;
  double diameter() const;
  double max_vertex_distance(Vec2 from) const;
  bool contains_strict(Vec2 p, double margin) const;
};

// Bisector half-plane keeping the side of `own`; normalized so that the
// pair (own, other) and the reversed pair produce exactly negated planes.
HalfPlane bisector_halfplane(Vec2 own, Vec2 other);

}  // namespace nlsfv

#endif
