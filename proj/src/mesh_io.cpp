// Mesh persistence.  Schema version 1:
//   { schema_version, domain:{kind,params}, h,
//     cells:[{id,point,area,face_ids}],
//     faces:[{id,kind,cell_k,cell_l?,measure,tau,midpoint}] }
// Doubles are written shortest-round-trip, so a save/load cycle reproduces
// every stored field bit-exactly.  Face segment endpoints are not part of
// the schema; load_mesh reconstructs them from cell points, measure and tau
// so that the cell-point-to-segment distance reproduces measure/tau (both
// when the nearest point is the perpendicular foot and when it is an
// endpoint), or centred on the midpoint when tau is absent.
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "nlsfv/mesh.hpp"

namespace nlsfv {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

[[noreturn]] void io_fail(const std::string& msg) {
  throw std::runtime_error("mesh file: " + msg);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) io_fail(where + ": missing field '" + key + "'");
  return *it;
}

double require_number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) io_fail(where + ": field '" + key + "' is not a number");
  return v.get<double>();
}

Vec2 require_point(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    io_fail(where + ": field '" + key + "' is not an [x, y] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

void save_mesh(const Mesh& mesh, const std::string& path) {
  ordered j;
  j["schema_version"] = 1;
  ordered dom;
  if (mesh.domain.kind == DomainKind::Disk) {
    dom["kind"] = "disk";
    dom["params"] = {mesh.domain.radius};
  } else {
    dom["kind"] = "annulus";
    dom["params"] = {mesh.domain.inner_radius, mesh.domain.outer_radius};
  }
  j["domain"] = dom;
  j["h"] = mesh.h;

  ordered cells = ordered::array();
  for (const Cell& c : mesh.cells) {
    ordered jc;
    jc["id"] = c.id;
    jc["point"] = {c.point.x, c.point.y};
    jc["area"] = c.area;
    jc["face_ids"] = c.face_ids;
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);

  ordered faces = ordered::array();
  for (const Face& f : mesh.faces) {
    ordered jf;
    jf["id"] = f.id;
    jf["kind"] = f.kind == FaceKind::Interior ? "interior" : "boundary";
    jf["cell_k"] = f.cell_k;
    if (f.kind == FaceKind::Interior) jf["cell_l"] = f.cell_l;
    jf["measure"] = f.measure;
    jf["tau"] = f.tau;
    jf["midpoint"] = {f.midpoint.x, f.midpoint.y};
    faces.push_back(std::move(jf));
  }
  j["faces"] = std::move(faces);

  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail("cannot open '" + path + "' for writing");
  out << j.dump(1, '\t') << '\n';
  if (!out) io_fail("write to '" + path + "' failed");
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    io_fail(std::string("parse error: ") + e.what());
  }

  const json& ver = require(j, "schema_version", "top level");
  if (!ver.is_number_integer() || ver.get<int>() != 1)
    io_fail("unsupported schema_version (expected 1)");

  Mesh mesh;
  const json& dom = require(j, "domain", "top level");
  const json& kind = require(dom, "kind", "domain");
  const json& params = require(dom, "params", "domain");
  if (!params.is_array()) io_fail("domain: params must be an array");
  if (kind == "disk") {
    if (params.size() != 1) io_fail("domain: disk takes one radius");
    mesh.domain = DomainSpec::disk(params[0].get<double>());
  } else if (kind == "annulus") {
    if (params.size() != 2) io_fail("domain: annulus takes two radii");
    mesh.domain =
        DomainSpec::annulus(params[0].get<double>(), params[1].get<double>());
  } else {
    io_fail("domain: unknown kind");
  }
  mesh.h = require_number(j, "h", "top level");

  const json& cells = require(j, "cells", "top level");
  if (!cells.is_array() || cells.empty()) io_fail("cells must be a non-empty array");
  mesh.cells.resize(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string where = "cells[" + std::to_string(i) + "]";
    const json& jc = cells[i];
    Cell& c = mesh.cells[i];
    c.id = static_cast<int>(require_number(jc, "id", where));
    if (c.id != static_cast<int>(i)) io_fail(where + ": ids must be 0..n-1 in order");
    c.point = require_point(jc, "point", where);
    c.area = require_number(jc, "area", where);
    const json& fids = require(jc, "face_ids", where);
    if (!fids.is_array()) io_fail(where + ": face_ids must be an array");
    for (const json& v : fids) c.face_ids.push_back(v.get<int>());
  }

  const json& faces = require(j, "faces", "top level");
  if (!faces.is_array()) io_fail("faces must be an array");
  mesh.faces.resize(faces.size());
  const int n = static_cast<int>(mesh.cells.size());
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const std::string where = "faces[" + std::to_string(i) + "]";
    const json& jf = faces[i];
    Face& f = mesh.faces[i];
    f.id = static_cast<int>(require_number(jf, "id", where));
    if (f.id != static_cast<int>(i)) io_fail(where + ": ids must be 0..n-1 in order");
    const json& k = require(jf, "kind", where);
    if (k == "interior")
      f.kind = FaceKind::Interior;
    else if (k == "boundary")
      f.kind = FaceKind::Boundary;
    else
      io_fail(where + ": kind must be interior or boundary");
    f.cell_k = static_cast<int>(require_number(jf, "cell_k", where));
    if (f.cell_k < 0 || f.cell_k >= n) io_fail(where + ": cell_k out of range");
    if (f.kind == FaceKind::Interior) {
      f.cell_l = static_cast<int>(require_number(jf, "cell_l", where));
      if (f.cell_l < 0 || f.cell_l >= n) io_fail(where + ": cell_l out of range");
      if (f.cell_l == f.cell_k) io_fail(where + ": cell_l equals cell_k");
    }
    f.measure = require_number(jf, "measure", where);
    if (!(f.measure >= 0.0) || !std::isfinite(f.measure))
      io_fail(where + ": bad measure");
    f.midpoint = require_point(jf, "midpoint", where);
    f.tau = jf.contains("tau") ? require_number(jf, "tau", where) : 0.0;

    // Segment reconstruction (schema stores no endpoints).
    if (f.kind == FaceKind::Interior) {
      const Vec2 d = mesh.cells[f.cell_l].point - mesh.cells[f.cell_k].point;
      const double dn = norm(d);
      if (dn == 0.0) io_fail(where + ": coincident cell points");
      const Vec2 t = rot90({d.x / dn, d.y / dn});
      f.p0 = f.midpoint - (0.5 * f.measure) * t;
      f.p1 = f.midpoint + (0.5 * f.measure) * t;
    } else {
      const Vec2 u = f.midpoint - mesh.cells[f.cell_k].point;
      const double L = norm(u);
      if (L == 0.0) io_fail(where + ": boundary face midpoint on cell point");
      const Vec2 uh{u.x / L, u.y / L};
      double cphi = 1.0;  // tau absent: assume the perpendicular foot at the midpoint
      double sphi = 0.0;
      if (f.tau > 0.0) {
        const double dist = f.measure / f.tau;
        cphi = std::min(1.0, std::max(-1.0, dist / L));
        sphi = std::sqrt(std::max(0.0, 1.0 - cphi * cphi));
        if (L * sphi > 0.5 * f.measure) {
          // The perpendicular foot would fall beyond the segment end, so the
          // stored distance must be to the nearer endpoint.  Tilt the segment
          // until that endpoint sits at the stored distance exactly.
          sphi = std::min(1.0, std::max(0.0, (L * L + 0.25 * f.measure * f.measure -
                                              dist * dist) /
                                                 (f.measure * L)));
          cphi = std::sqrt(std::max(0.0, 1.0 - sphi * sphi));
        }
      }
      const Vec2 nh = cphi * uh + sphi * rot90(uh);
      const Vec2 t = rot90(nh);
      f.p0 = f.midpoint - (0.5 * f.measure) * t;
      f.p1 = f.midpoint + (0.5 * f.measure) * t;
    }
  }

  for (const Cell& c : mesh.cells)
    for (int fid : c.face_ids)
      if (fid < 0 || fid >= static_cast<int>(mesh.faces.size()))
        io_fail("cells[" + std::to_string(c.id) + "]: face id out of range");

  mesh.endpoints_reconstructed = true;
  mesh.uid = next_mesh_uid();
  return mesh;
}

}  // namespace nlsfv
