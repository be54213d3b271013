// Hand-built meshes with exactly known geometry for unit tests.
#ifndef NLSFV_TESTS_FIXTURES_HPP
#define NLSFV_TESTS_FIXTURES_HPP

#include <cmath>

#include "nlsfv/functionals.hpp"
#include "nlsfv/mesh.hpp"

namespace fixtures {

// One unit-square cell [0,1]^2 with the point at the center.  Four boundary
// faces, each of measure 1 at distance 1/2 from the point, so tau = 2.
inline nlsfv::Mesh unit_square() {
  using namespace nlsfv;
  Mesh m;
  m.domain = DomainSpec::disk(std::sqrt(1.0 / M_PI));  // analytic area 1
  Cell c;
  c.id = 0;
  c.point = Vec2{0.5, 0.5};
  c.area = 1.0;
  c.diameter = std::sqrt(2.0);
  c.face_ids = {0, 1, 2, 3};
  m.cells.push_back(c);

  auto bface = [](int id, Vec2 p0, Vec2 p1) {
    Face f;
    f.id = id;
    f.kind = FaceKind::Boundary;
    f.cell_k = 0;
    f.measure = 1.0;
    f.tau = 2.0;
    f.p0 = p0;
    f.p1 = p1;
    f.midpoint = Vec2{0.5 * (p0.x + p1.x), 0.5 * (p0.y + p1.y)};
    return f;
  };
  m.faces.push_back(bface(0, Vec2{0, 0}, Vec2{1, 0}));
  m.faces.push_back(bface(1, Vec2{1, 0}, Vec2{1, 1}));
  m.faces.push_back(bface(2, Vec2{1, 1}, Vec2{0, 1}));
  m.faces.push_back(bface(3, Vec2{0, 1}, Vec2{0, 0}));
  m.h = c.diameter;
  m.uid = next_mesh_uid();
  return m;
}

// Two unit squares side by side: [0,1]^2 and [1,2]x[0,1].  One interior
// face on x = 1 with tau = 1; six boundary faces with tau = 2.
inline nlsfv::Mesh two_squares() {
  using namespace nlsfv;
  Mesh m;
  m.domain = DomainSpec::disk(std::sqrt(2.0 / M_PI));  // analytic area 2
  for (int i = 0; i < 2; ++i) {
    Cell c;
    c.id = i;
    c.point = Vec2{0.5 + i, 0.5};
    c.area = 1.0;
    c.diameter = std::sqrt(2.0);
    m.cells.push_back(c);
  }

  Face in;
  in.id = 0;
  in.kind = FaceKind::Interior;
  in.cell_k = 0;
  in.cell_l = 1;
  in.measure = 1.0;
  in.tau = 1.0;
  in.p0 = Vec2{1, 0};
  in.p1 = Vec2{1, 1};
  in.midpoint = Vec2{1, 0.5};
  m.faces.push_back(in);

  auto bface = [](int id, int cell, Vec2 p0, Vec2 p1) {
    Face f;
    f.id = id;
    f.kind = FaceKind::Boundary;
    f.cell_k = cell;
    f.measure = 1.0;
    f.tau = 2.0;
    f.p0 = p0;
    f.p1 = p1;
    f.midpoint = Vec2{0.5 * (p0.x + p1.x), 0.5 * (p0.y + p1.y)};
    return f;
  };
  m.faces.push_back(bface(1, 0, Vec2{0, 1}, Vec2{0, 0}));  // left
  m.faces.push_back(bface(2, 0, Vec2{0, 0}, Vec2{1, 0}));  // bottom 0
  m.faces.push_back(bface(3, 0, Vec2{1, 1}, Vec2{0, 1}));  // top 0
  m.faces.push_back(bface(4, 1, Vec2{2, 0}, Vec2{2, 1}));  // right
  m.faces.push_back(bface(5, 1, Vec2{1, 0}, Vec2{2, 0}));  // bottom 1
  m.faces.push_back(bface(6, 1, Vec2{2, 1}, Vec2{1, 1}));  // top 1
  m.cells[0].face_ids = {0, 1, 2, 3};
  m.cells[1].face_ids = {0, 4, 5, 6};
  m.h = std::sqrt(2.0);
  m.uid = next_mesh_uid();
  return m;
}

inline nlsfv::ComplexField field_on(const nlsfv::Mesh& m,
                                    std::vector<nlsfv::cdouble> values) {
  nlsfv::ComplexField f;
  f.values = std::move(values);
  f.mesh_uid = m.uid;
  return f;
}

}  // namespace fixtures

#endif
