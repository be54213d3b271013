// Computational domains: disk(R) and annulus(RI, RO), described by exact
// signed distance functions (negative inside).  The annulus hole is treated
// as an obstacle: its wall is reported as a separate boundary component.
#ifndef NLSFV_DOMAIN_HPP
#define NLSFV_DOMAIN_HPP

#include <string>
#include <vector>

#include "nlsfv/geometry.hpp"

namespace nlsfv {

enum class DomainKind { Disk, Annulus };

struct DomainSpec {
  DomainKind kind = DomainKind::Disk;
  double radius = 1.0;        // disk
  double inner_radius = 0.0;  // annulus
  double outer_radius = 1.0;  // annulus

  static DomainSpec disk(double r);
  static DomainSpec annulus(double ri, double ro);
  // Accepts "disk:R" or "annulus:RI,RO".
  static DomainSpec parse(const std::string& text);

  double signed_distance(Vec2 p) const;
  // Closest point on the zero level set and the outward unit normal there.
  void nearest_boundary(Vec2 p, Vec2& point, Vec2& normal) const;
  double area() const;
  double diameter() const;
  void bounding_box(Vec2& lo, Vec2& hi) const;
  std::string to_string() const;
};

struct BoundarySample {
  Vec2 point;
  Vec2 outward_normal;
  bool on_obstacle = false;  // annulus inner wall
};

// n samples per boundary component, uniform in arc length.
std::vector<BoundarySample> sample_boundary(const DomainSpec& d, int n);

}  // namespace nlsfv

#endif
