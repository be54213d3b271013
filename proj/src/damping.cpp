#include "nlsfv/damping.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <stdexcept>

namespace nlsfv {

namespace {

constexpr double kPi = std::numbers::pi;

double radial_window_sq(double r, double lo, double hi) {
  if (r < lo || r > hi) return 0.0;
  const double d = r - lo;
  return d * d;
}

// Distance from a support point to the zero set {a = 0}, measured within
// the radial/angular parametrization.  Used for the collar exclusion.
double margin_to_zero_set(const DampingPreset& p, Vec2 x) {
  const double r = norm(x);
  switch (p.kind) {
    case DampingKind::Example1:
    case DampingKind::Example2:
      return r - 8.0;
    case DampingKind::Example3:
      return r - 17.0;
    case DampingKind::RadialQuadratic:
      return r - p.r0;
    case DampingKind::Example4: {
      const double alpha = std::atan2(x.y, x.x);
      const double ang = std::min(-alpha, alpha + kPi);  // distance to the cut
      return std::min(r - 17.0, r * ang);
    }
    default:
      return -1.0;
  }
}

}  // namespace

DampingPreset DampingPreset::zero() { return DampingPreset{}; }

DampingPreset DampingPreset::example(int which) {
  DampingPreset p;
  switch (which) {
    case 1: p.kind = DampingKind::Example1; break;
    case 2: p.kind = DampingKind::Example2; break;
    case 3: p.kind = DampingKind::Example3; break;
    case 4: p.kind = DampingKind::Example4; break;
    default: throw std::invalid_argument("damping example index must be 1..4");
  }
  return p;
}

DampingPreset DampingPreset::radial_quadratic(double r0) {
  if (!(r0 >= 0.0)) throw std::invalid_argument("radial_quadratic needs r0 >= 0");
  DampingPreset p;
  p.kind = DampingKind::RadialQuadratic;
  p.r0 = r0;
  return p;
}

DampingPreset DampingPreset::custom(std::map<int, double> table) {
  for (const auto& [id, v] : table)
    if (v < 0.0) throw std::invalid_argument("custom damping values must be >= 0");
  DampingPreset p;
  p.kind = DampingKind::Custom;
  p.cell_table = std::move(table);
  return p;
}

DampingPreset DampingPreset::parse(const std::string& text) {
  if (text == "zero") return zero();
  if (text.rfind("example", 0) == 0 && text.size() == 8)
    return example(text[7] - '0');
  const std::string rq = "radial_quadratic:";
  if (text.rfind(rq, 0) == 0) return radial_quadratic(std::stod(text.substr(rq.size())));
  const std::string cu = "custom:";
  if (text.rfind(cu, 0) == 0) {
    const std::string path = text.substr(cu.size());
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open damping table: " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument(std::string("damping table parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("damping table must be a JSON object");
    std::map<int, double> table;
    for (const auto& [key, val] : j.items()) table[std::stoi(key)] = val.get<double>();
    return custom(std::move(table));
  }
  throw std::invalid_argument("unknown damping preset: " + text);
}

std::string DampingPreset::name() const {
  switch (kind) {
    case DampingKind::Zero: return "zero";
    case DampingKind::Example1: return "example1";
    case DampingKind::Example2: return "example2";
    case DampingKind::Example3: return "example3";
    case DampingKind::Example4: return "example4";
    case DampingKind::RadialQuadratic: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "radial_quadratic:%.17g", r0);
      return buf;
    }
    case DampingKind::Custom: return "custom";
  }
  return "?";
}

double evaluate_damping(const DampingPreset& preset, Vec2 p) {
  const double r = norm(p);
  switch (preset.kind) {
    case DampingKind::Zero:
      return 0.0;
    case DampingKind::Example1:
      return radial_window_sq(r, 8.0, 10.0);
    case DampingKind::Example2: {
      if (r < 8.0 || r > 10.0) return 0.0;
      const double e = std::expm1(r - 8.0);
      return e * e;
    }
    case DampingKind::Example3:
      return r >= 17.0 ? (r - 17.0) * (r - 17.0) : 0.0;
    case DampingKind::Example4: {
      if (r < 17.0) return 0.0;
      const double alpha = std::atan2(p.y, p.x);
      if (!(alpha > -kPi && alpha < 0.0)) return 0.0;
      return (r - 17.0) * (r - 17.0);
    }
    case DampingKind::RadialQuadratic:
      return r >= preset.r0 ? (r - preset.r0) * (r - preset.r0) : 0.0;
    case DampingKind::Custom:
      throw std::invalid_argument(
          "custom damping is tabulated per cell and has no pointwise value");
  }
  return 0.0;
}

DampingField sample_damping(const DampingPreset& preset, const Mesh& mesh) {
  DampingField f;
  f.mesh_uid = mesh.uid;
  f.values.resize(mesh.cells.size(), 0.0);
  for (const Cell& c : mesh.cells) {
    double v;
    if (preset.kind == DampingKind::Custom) {
      auto it = preset.cell_table.find(c.id);
      v = it == preset.cell_table.end() ? 0.0 : it->second;
    } else {
      v = evaluate_damping(preset, c.point);
    }
    if (!(v >= 0.0)) throw std::runtime_error("damping produced a negative value");
    f.values[c.id] = v;
    if (v > 0.0) f.omega_cells.push_back(c.id);
  }
  return f;
}

DampingRatioReport damping_ratio_bound(const DampingPreset& preset,
                                       const DomainSpec& domain,
                                       double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (preset.kind == DampingKind::Custom)
    throw std::invalid_argument("gradient ratio needs a pointwise damping profile");

  DampingRatioReport rep;
  rep.resolution = resolution;
  switch (preset.kind) {
    case DampingKind::Zero:
      rep.analytic_sup = 0.0;
      rep.has_analytic = true;
      return rep;
    case DampingKind::Example1:
    case DampingKind::Example3:
    case DampingKind::RadialQuadratic:
      // |grad (r-r0)^2|^2 = 4 (r-r0)^2, ratio 4 on the whole support.
      rep.analytic_sup = 4.0;
      rep.has_analytic = true;
      break;
    case DampingKind::Example2:
      // ratio 4 e^{2(r-8)}, supremum at the outer wall r = 10.
      rep.analytic_sup = 4.0 * std::exp(4.0);
      rep.has_analytic = true;
      break;
    case DampingKind::Example4:
      rep.has_analytic = false;  // angular cut: the ratio is unbounded there
      break;
    default:
      break;
  }

  // Radial extent of the support, clipped to the domain.
  double r_lo = 0.0;
  const double r_hi = domain.kind == DomainKind::Disk ? domain.radius
                                                      : domain.outer_radius;
  switch (preset.kind) {
    case DampingKind::Example1:
    case DampingKind::Example2: r_lo = 8.0; break;
    case DampingKind::Example3:
    case DampingKind::Example4: r_lo = 17.0; break;
    case DampingKind::RadialQuadratic: r_lo = preset.r0; break;
    default: break;
  }
  if (r_lo >= r_hi) return rep;  // empty support inside this domain

  const double collar = 1e-6 * (r_hi - r_lo);
  const double hs = resolution;
  double sup = 0.0;
  long long used = 0;

  const long long jy0 = static_cast<long long>(std::floor(-r_hi / hs));
  const long long jy1 = static_cast<long long>(std::ceil(r_hi / hs));
  for (long long jy = jy0; jy <= jy1; ++jy) {
    const double y = jy * hs;
    const double rr = r_hi * r_hi - y * y;
    if (rr <= 0.0) continue;
    const double xmax = std::sqrt(rr);
    const double xin2 = r_lo * r_lo - y * y;
    const double xin = xin2 > 0.0 ? std::sqrt(xin2) : 0.0;
    for (int side = 0; side < 2; ++side) {
      // Row segments covering { r_lo <= r <= r_hi } on both sides of x = 0.
      const long long ja = static_cast<long long>(std::floor((side ? -xmax : xin) / hs));
      const long long jb = static_cast<long long>(std::ceil((side ? -xin : xmax) / hs));
      for (long long jx = ja; jx <= jb; ++jx) {
        const Vec2 p{jx * hs, y};
        if (domain.signed_distance(p) >= 0.0) continue;
        const double a0 = evaluate_damping(preset, p);
        if (!(a0 > 0.0)) continue;
        if (margin_to_zero_set(preset, p) <= collar) continue;
        const double axp = evaluate_damping(preset, {p.x + hs, p.y});
        const double axm = evaluate_damping(preset, {p.x - hs, p.y});
        const double ayp = evaluate_damping(preset, {p.x, p.y + hs});
        const double aym = evaluate_damping(preset, {p.x, p.y - hs});
        if (axp <= 0.0 || axm <= 0.0 || ayp <= 0.0 || aym <= 0.0) continue;
        const double gx = (axp - axm) / (2.0 * hs);
        const double gy = (ayp - aym) / (2.0 * hs);
        sup = std::max(sup, (gx * gx + gy * gy) / a0);
        ++used;
      }
    }
  }
  rep.fd_sup = sup;
  rep.n_samples = used;
  return rep;
}

GeometricConditionReport check_geometric_condition(const DomainSpec& domain,
                                                   const DampingPreset& preset,
                                                   Vec2 observer,
                                                   int n_samples) {
  if (preset.kind == DampingKind::Custom)
    throw std::invalid_argument(
        "geometric condition needs a pointwise damping profile");
  GeometricConditionReport rep;
  const double tol = 1e-12 * domain.diameter();
  for (const BoundarySample& s : sample_boundary(domain, n_samples)) {
    ++rep.n_checked;
    const double flux = dot(s.point - observer, s.outward_normal);
    bool bad = false;
    if (s.on_obstacle) {
      if (flux > tol) {
        ++rep.n_obstacle_violations;
        bad = true;
      }
    } else if (flux > tol &&
               !(evaluate_damping(preset, s.point - tol * s.outward_normal) >
                 0.0)) {
      // The profile is probed a hair inside the wall: boundary points sit on
      // the closure of the domain, and a profile whose support runs right up
      // to the wall still controls the adjacent escape rays.
      ++rep.n_uncontrolled;
      bad = true;
    }
    if (bad && !rep.has_violation) {
      rep.has_violation = true;
      rep.first_violation = s.point;
    }
  }
  rep.covered = rep.n_uncontrolled == 0 && rep.n_obstacle_violations == 0;
  return rep;
}

}  // namespace nlsfv
