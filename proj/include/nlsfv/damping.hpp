// Locally distributed damping coefficients a(x) >= 0 and the two checks the
// theory rests on: the gradient-ratio bound sup |grad a|^2 / a and the
// geometric control condition on the boundary.
#ifndef NLSFV_DAMPING_HPP
#define NLSFV_DAMPING_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nlsfv/domain.hpp"
#include "nlsfv/mesh.hpp"

namespace nlsfv {

enum class DampingKind {
  Zero,
  Example1,         // (r-8)^2   on 8 <= r <= 10
  Example2,         // (e^{r-8}-1)^2 on 8 <= r <= 10
  Example3,         // (r-17)^2  on r >= 17
  Example4,         // (r-17)^2  on r >= 17 and angle in (-pi, 0)
  RadialQuadratic,  // (r-r0)^2  on r >= r0
  Custom,           // tabulated per-cell values
};

struct DampingPreset {
  DampingKind kind = DampingKind::Zero;
  double r0 = 0.0;                   // RadialQuadratic
  std::map<int, double> cell_table;  // Custom; missing ids mean 0

  static DampingPreset zero();
  static DampingPreset example(int which);  // 1..4
  static DampingPreset radial_quadratic(double r0);
  static DampingPreset custom(std::map<int, double> table);
  // "zero" | "example1".."example4" | "radial_quadratic:R0" | "custom:PATH"
  // (PATH: JSON object {"cell_id": value, ...})
  static DampingPreset parse(const std::string& text);

  std::string name() const;
};

// Pointwise evaluation; throws for Custom which is only defined per cell.
double evaluate_damping(const DampingPreset& preset, Vec2 p);

struct DampingField {
  std::vector<double> values;  // one per cell, sampled at the cell point
  std::vector<int> omega_cells;  // ids with strictly positive damping
  std::uint64_t mesh_uid = 0;
};

DampingField sample_damping(const DampingPreset& preset, const Mesh& mesh);

struct DampingRatioReport {
  double fd_sup = 0.0;       // sup of |grad a|^2 / a via central differences
  double analytic_sup = 0.0;
  bool has_analytic = false;
  long long n_samples = 0;
  double resolution = 0.0;
};

// Samples the support of a inside the domain on a grid of the given
// spacing, excluding points whose 5-point stencil leaves the support and a
// thin collar along {a = 0}.
DampingRatioReport damping_ratio_bound(const DampingPreset& preset,
                                       const DomainSpec& domain,
                                       double resolution);

struct GeometricConditionReport {
  bool covered = false;
  int n_checked = 0;
  int n_uncontrolled = 0;       // m . nu > 0 but a == 0
  int n_obstacle_violations = 0;  // obstacle wall with m . nu > 0
  Vec2 first_violation;
  bool has_violation = false;
};

// Multiplier condition with observer x0: every outflow part of the outer
// boundary (m = x - x0 with m . nu > 0) must be damped, and the obstacle
// wall must satisfy m . nu <= 0.
GeometricConditionReport check_geometric_condition(const DomainSpec& domain,
                                                   const DampingPreset& preset,
                                                   Vec2 observer,
                                                   int n_samples = 720);

}  // namespace nlsfv

#endif
