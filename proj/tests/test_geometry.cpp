#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "nlsfv/geometry.hpp"
#include "nlsfv/numeric.hpp"

using namespace nlsfv;

TEST_CASE("vector algebra basics") {
  const Vec2 a{3.0, 4.0};
  CHECK(norm(a) == doctest::Approx(5.0));
  CHECK(dot(a, Vec2{1.0, 0.0}) == 3.0);
  CHECK(cross(Vec2{1, 0}, Vec2{0, 1}) == 1.0);
  const Vec2 r = rot90(Vec2{1.0, 0.0});
  CHECK(r.x == 0.0);
  CHECK(r.y == 1.0);
}

TEST_CASE("point to segment distance clamps to endpoints") {
  const Vec2 a{0, 0}, b{1, 0};
  CHECK(point_segment_distance(Vec2{0.5, 2.0}, a, b) == doctest::Approx(2.0));
  CHECK(point_segment_distance(Vec2{-3.0, 4.0}, a, b) == doctest::Approx(5.0));
  CHECK(point_segment_distance(Vec2{2.0, 0.0}, a, b) == doctest::Approx(1.0));
  // Degenerate segment behaves like a point.
  CHECK(point_segment_distance(Vec2{1, 1}, a, a) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("rectangle polygon: area, centroid, diameter") {
  const TaggedPolygon box = TaggedPolygon::rectangle(Vec2{0, 0}, Vec2{2, 1});
  CHECK(box.area() == doctest::Approx(2.0));
  const Vec2 c = box.centroid();
  CHECK(c.x == doctest::Approx(1.0));
  CHECK(c.y == doctest::Approx(0.5));
  CHECK(box.diameter() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("half-plane clipping keeps the correct side and tags the cut") {
  TaggedPolygon poly = TaggedPolygon::rectangle(Vec2{0, 0}, Vec2{1, 1});
  // Keep x <= 0.25.
  HalfPlane hp{Vec2{1.0, 0.0}, 0.25};
  EdgeTag tag;
  tag.kind = EdgeTag::Kind::Neighbor;
  tag.neighbor = 7;
  REQUIRE(poly.clip(hp, tag, 1e-12));
  CHECK(poly.area() == doctest::Approx(0.25));
  int tagged = 0;
  for (const EdgeTag& t : poly.tags) {
    if (t.kind == EdgeTag::Kind::Neighbor) {
      ++tagged;
      CHECK(t.neighbor == 7);
    }
  }
  CHECK(tagged == 1);

  // Clipping the polygon away entirely reports emptiness.
  HalfPlane gone{Vec2{1.0, 0.0}, -1.0};
  CHECK_FALSE(poly.clip(gone, tag, 1e-12));
}

TEST_CASE("clip through a vertex does not create degenerate edges") {
  TaggedPolygon poly = TaggedPolygon::rectangle(Vec2{0, 0}, Vec2{1, 1});
  // Diagonal through (0,0) and (1,1).
  const Vec2 n{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
  EdgeTag tag;
  tag.kind = EdgeTag::Kind::Neighbor;
  tag.neighbor = 1;
  REQUIRE(poly.clip(HalfPlane{n, 0.0}, tag, 1e-12));
  CHECK(poly.v.size() == 3);
  CHECK(poly.area() == doctest::Approx(0.5));
  for (std::size_t i = 0; i < poly.v.size(); ++i) {
    const Vec2 d = poly.v[(i + 1) % poly.v.size()] - poly.v[i];
    CHECK(norm(d) > 1e-9);
  }
}

TEST_CASE("bisector half-plane separates the two generators symmetrically") {
  const Vec2 a{0.2, -0.4}, b{1.7, 2.2};
  const HalfPlane hab = bisector_halfplane(a, b);
  const HalfPlane hba = bisector_halfplane(b, a);
  // Own generator strictly inside, other strictly outside.
  CHECK(dot(hab.n, a) < hab.c);
  CHECK(dot(hab.n, b) > hab.c);
  // The reversed pair is the exact negation, so twin faces share one line.
  CHECK(hba.n.x == -hab.n.x);
  CHECK(hba.n.y == -hab.n.y);
  CHECK(hba.c == -hab.c);
  // Points on the half-plane boundary are equidistant from a and b.
  const Vec2 mid = (a + b) * 0.5;
  CHECK(dot(hab.n, mid) == doctest::Approx(hab.c));
}

TEST_CASE("strict containment respects the margin") {
  const TaggedPolygon box = TaggedPolygon::rectangle(Vec2{0, 0}, Vec2{1, 1});
  CHECK(box.contains_strict(Vec2{0.5, 0.5}, 0.1));
  CHECK_FALSE(box.contains_strict(Vec2{0.05, 0.5}, 0.1));
  CHECK_FALSE(box.contains_strict(Vec2{1.5, 0.5}, 0.0));
}

TEST_CASE("pairwise summation matches high-precision accumulation") {
  std::mt19937_64 rng(123);
  std::vector<double> v(1537);
  long double exact = 0.0L;
  for (double& x : v) {
    x = rand01(rng) * 2.0 - 1.0;
    exact += static_cast<long double>(x);
  }
  const double s = pairwise_sum(v);
  CHECK(std::abs(s - static_cast<double>(exact)) <=
        1e-14 * std::max(1.0, std::abs(static_cast<double>(exact))) + 1e-15);

  std::vector<double> ones(1000, 1.0);
  CHECK(pairwise_sum(ones) == 1000.0);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}
