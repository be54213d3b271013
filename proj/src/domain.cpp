#include "nlsfv/domain.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace nlsfv {

DomainSpec DomainSpec::disk(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("disk radius must be positive");
  DomainSpec d;
  d.kind = DomainKind::Disk;
  d.radius = r;
  return d;
}

DomainSpec DomainSpec::annulus(double ri, double ro) {
  if (!(ri > 0.0) || !(ro > ri))
    throw std::invalid_argument("annulus radii must satisfy 0 < RI < RO");
  DomainSpec d;
  d.kind = DomainKind::Annulus;
  d.inner_radius = ri;
  d.outer_radius = ro;
  return d;
}

DomainSpec DomainSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("domain must look like disk:R or annulus:RI,RO");
  const std::string head = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  try {
    if (head == "disk") return disk(std::stod(args));
    if (head == "annulus") {
      const auto comma = args.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("annulus needs two radii");
      return annulus(std::stod(args.substr(0, comma)),
                     std::stod(args.substr(comma + 1)));
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number in domain spec: " + text);
  }
  throw std::invalid_argument("unknown domain kind: " + head);
}

double DomainSpec::signed_distance(Vec2 p) const {
  const double r = norm(p);
  if (kind == DomainKind::Disk) return r - radius;
  return std::max(inner_radius - r, r - outer_radius);
}

void DomainSpec::nearest_boundary(Vec2 p, Vec2& point, Vec2& normal) const {
  const double r = norm(p);
  Vec2 dir = r > 1e-300 ? (1.0 / r) * p : Vec2{1.0, 0.0};
  if (kind == DomainKind::Disk) {
    point = radius * dir;
    normal = dir;
    return;
  }
  // Active branch of the max(): nearest of the two circles.
  if (inner_radius - r >= r - outer_radius) {
    point = inner_radius * dir;
    normal = {-dir.x, -dir.y};
  } else {
    point = outer_radius * dir;
    normal = dir;
  }
}

double DomainSpec::area() const {
  if (kind == DomainKind::Disk) return std::numbers::pi * radius * radius;
  return std::numbers::pi *
         (outer_radius * outer_radius - inner_radius * inner_radius);
}

double DomainSpec::diameter() const {
  return 2.0 * (kind == DomainKind::Disk ? radius : outer_radius);
}

void DomainSpec::bounding_box(Vec2& lo, Vec2& hi) const {
  const double r = kind == DomainKind::Disk ? radius : outer_radius;
  lo = {-r, -r};
  hi = {r, r};
}

std::string DomainSpec::to_string() const {
  char buf[96];
  if (kind == DomainKind::Disk)
    std::snprintf(buf, sizeof buf, "disk:%.17g", radius);
  else
    std::snprintf(buf, sizeof buf, "annulus:%.17g,%.17g", inner_radius,
                  outer_radius);
  return buf;
}

std::vector<BoundarySample> sample_boundary(const DomainSpec& d, int n) {
  if (n < 1) throw std::invalid_argument("need at least one boundary sample");
  std::vector<BoundarySample> out;
  auto circle = [&](double r, bool obstacle) {
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * std::numbers::pi * i / n;
      const Vec2 dir{std::cos(th), std::sin(th)};
      BoundarySample s;
      s.point = r * dir;
      s.outward_normal = obstacle ? Vec2{-dir.x, -dir.y} : dir;
      s.on_obstacle = obstacle;
      out.push_back(s);
    }
  };
  if (d.kind == DomainKind::Disk) {
    circle(d.radius, false);
  } else {
    circle(d.outer_radius, false);
    circle(d.inner_radius, true);
  }
  return out;
}

}  // namespace nlsfv
