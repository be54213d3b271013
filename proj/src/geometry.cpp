#include "nlsfv/geometry.hpp"

#include <algorithm>
#include <limits>

namespace nlsfv {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double l2 = norm2(d);
  if (l2 == 0.0) return norm(p - a);
  double t = dot(p - a, d) / l2;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * d));
}

TaggedPolygon TaggedPolygon::rectangle(Vec2 lo, Vec2 hi) {
  TaggedPolygon poly;
  poly.v = {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
  poly.tags.assign(4, EdgeTag{EdgeTag::Kind::Box, -1});
  return poly;
}

bool TaggedPolygon::clip(const HalfPlane& hp, EdgeTag tag, double merge_eps) {
  const std::size_t k = v.size();
  if (k < 3) return false;

  std::vector<Vec2> nv;
  std::vector<EdgeTag> nt;
  nv.reserve(k + 2);
  nt.reserve(k + 2);

  // Signed distances; |d| within a whisker of zero counts as inside so a
  // vertex sitting on the clip line does not spawn a duplicate.
  std::vector<double> dist(k);
  for (std::size_t i = 0; i < k; ++i) dist[i] = dot(hp.n, v[i]) - hp.c;

  const double on_eps = 0.25 * merge_eps;
  bool all_inside = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (dist[i] > on_eps) {
      all_inside = false;
      break;
    }
  }
  if (all_inside) return true;

  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = (i + 1) % k;
    const Vec2 s = v[i];
    const Vec2 e = v[j];
    const bool s_in = dist[i] <= on_eps;
    const bool e_in = dist[j] <= on_eps;
    if (s_in) {
      nv.push_back(s);
      nt.push_back(tags[i]);
      if (!e_in) {
        const double t = dist[i] / (dist[i] - dist[j]);
        nv.push_back(s + t * (e - s));
        nt.push_back(tag);  // new edge runs along the clip line
      }
    } else if (e_in) {
      const double t = dist[i] / (dist[i] - dist[j]);
      nv.push_back(s + t * (e - s));
      nt.push_back(tags[i]);  // surviving tail of the original edge
    }
  }

  // Drop degenerate edges: when v[i] ~ v[i+1], entry i vanishes and the
  // predecessor connects straight to v[i+1] keeping its own tag.
  std::vector<Vec2> mv;
  std::vector<EdgeTag> mt;
  mv.reserve(nv.size());
  mt.reserve(nv.size());
  const std::size_t m = nv.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 next = nv[(i + 1) % m];
    if (norm(next - nv[i]) <= merge_eps) continue;
    mv.push_back(nv[i]);
    mt.push_back(nt[i]);
  }

  v = std::move(mv);
  tags = std::move(mt);
  return v.size() >= 3;
}

double TaggedPolygon::area() const {
  double a = 0.0;
  const std::size_t k = v.size();
  for (std::size_t i = 0; i < k; ++i) a += cross(v[i], v[(i + 1) % k]);
  return 0.5 * a;
}

Vec2 TaggedPolygon::centroid() const {
  double a = 0.0;
  Vec2 c{0.0, 0.0};
  const std::size_t k = v.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vec2 p = v[i];
    const Vec2 q = v[(i + 1) % k];
    const double w = cross(p, q);
    a += w;
    c.x += w * (p.x + q.x);
    c.y += w * (p.y + q.y);
  }
  if (a == 0.0) return v.empty() ? Vec2{} : v[0];
  return {c.x / (3.0 * a), c.y / (3.0 * a)};
}

double TaggedPolygon::diameter() const {
  double d2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      d2 = std::max(d2, norm2(v[j] - v[i]));
  return std::sqrt(d2);
}

double TaggedPolygon::max_vertex_distance(Vec2 from) const {
  double d2 = 0.0;
  for (const Vec2& p : v) d2 = std::max(d2, norm2(p - from));
  return std::sqrt(d2);
}

bool TaggedPolygon::contains_strict(Vec2 p, double margin) const {
  const std::size_t k = v.size();
  if (k < 3) return false;
  for (std::size_t i = 0; i < k; ++i) {
    const Vec2 a = v[i];
    const Vec2 b = v[(i + 1) % k];
    // CCW polygon: p must be strictly left of every edge.
    if (cross(b - a, p - a) <= margin * norm(b - a)) return false;
  }
  return true;
}

HalfPlane bisector_halfplane(Vec2 own, Vec2 other) {
  const Vec2 d = other - own;
  const double len = norm(d);
  const Vec2 n{d.x / len, d.y / len};
  const Vec2 mid = 0.5 * (own + other);
  return {n, dot(n, mid)};
}

}  // namespace nlsfv
