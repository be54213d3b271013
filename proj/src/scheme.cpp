#include "nlsfv/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlsfv {

double nonlinear_coefficient(cdouble z_new, cdouble z_old, double p,
                             double ratio_epsilon) {
  if (!(p > 0.0)) throw std::invalid_argument("nonlinearity exponent must be > 0");
  if (!(ratio_epsilon > 0.0)) throw std::invalid_argument("ratio_epsilon must be > 0");
  if (p == 1.0) return 1.0;
  const double s1 = std::norm(z_new);
  const double s0 = std::norm(z_old);
  const double floor = std::numeric_limits<double>::min();
  if (std::abs(s1 - s0) > ratio_epsilon * std::max({s1, s0, floor}))
    return (std::pow(s1, p) - std::pow(s0, p)) / (s1 - s0);
  const double s = 0.5 * (s1 + s0);
  // Zero field: the coefficient multiplies (u_K + v_K) = 0, so any finite
  // value closes the scheme; 0 keeps p < 1 out of trouble.
  if (s == 0.0) return 0.0;
  return p * std::pow(s, p - 1.0);
}

StepWorkspace::StepWorkspace(const Mesh& mesh) {
  const int n = mesh.n_cells();
  A.n = n;
  diag_pos.assign(n, -1);
  tau_cell_sum.assign(n, 0.0);
  face_pos.assign(mesh.faces.size(), {-1, -1});

  // Column sets: diagonal plus one neighbor per interior face.
  std::vector<std::vector<std::pair<int, int>>> cols(n);  // (col, face id)
  for (int i = 0; i < n; ++i) cols[i].push_back({i, -1});
  for (const Face& f : mesh.faces) {
    tau_cell_sum[f.cell_k] += f.tau;
    if (f.kind == FaceKind::Interior) {
      tau_cell_sum[f.cell_l] += f.tau;
      cols[f.cell_k].push_back({f.cell_l, f.id});
      cols[f.cell_l].push_back({f.cell_k, f.id});
    }
  }

  A.row_ptr.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    std::sort(cols[i].begin(), cols[i].end());
    A.row_ptr[i + 1] = A.row_ptr[i] + static_cast<int>(cols[i].size());
  }
  A.col.resize(A.row_ptr[n]);
  A.val.assign(A.row_ptr[n], cdouble{});
  for (int i = 0; i < n; ++i) {
    int pos = A.row_ptr[i];
    for (const auto& [c, fid] : cols[i]) {
      A.col[pos] = c;
      if (c == i) {
        diag_pos[i] = pos;
      } else if (fid >= 0) {
        auto& fp = face_pos[fid];
        (i == mesh.faces[fid].cell_k ? fp.first : fp.second) = pos;
      }
      ++pos;
    }
  }

  b.assign(n, cdouble{});
  scratch.assign(n, cdouble{});
  q.assign(n, 0.0);
}

namespace {

// Fills A for frozen coefficients q and the RHS b = (2i M / dt) v - A v.
void assemble_system(const Mesh& mesh, const DampingField& damping,
                     const std::vector<cdouble>& v, double dt, double p,
                     StepWorkspace& ws) {
  const cdouble iu{0.0, 1.0};
  const int n = mesh.n_cells();
  for (int i = 0; i < n; ++i) {
    const double m = mesh.cells[i].area;
    ws.A.val[ws.diag_pos[i]] = iu * (m / dt) - 0.5 * ws.tau_cell_sum[i] -
                               (m / (2.0 * p)) * ws.q[i] +
                               iu * (0.5 * m * damping.values[i]);
  }
  for (const Face& f : mesh.faces) {
    if (f.kind != FaceKind::Interior) continue;
    const auto& [pk, pl] = ws.face_pos[f.id];
    ws.A.val[pk] = 0.5 * f.tau;
    ws.A.val[pl] = 0.5 * f.tau;
  }
  ws.A.multiply(v, ws.scratch);
  for (int i = 0; i < n; ++i) {
    const double m = mesh.cells[i].area;
    ws.b[i] = iu * (2.0 * m / dt) * v[i] - ws.scratch[i];
  }
}

double l2_diff(const Mesh& mesh, const std::vector<cdouble>& a,
               const std::vector<cdouble>& b) {
  std::vector<double> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    t[i] = std::norm(a[i] - b[i]) * mesh.cells[i].area;
  return std::sqrt(pairwise_sum(t));
}

double l2_of(const Mesh& mesh, const std::vector<cdouble>& a) {
  std::vector<double> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    t[i] = std::norm(a[i]) * mesh.cells[i].area;
  return std::sqrt(pairwise_sum(t));
}

}  // namespace

StepResult picard_step(const Mesh& mesh, const DampingField& damping,
                       const ComplexField& y_n, const SchemeConfig& config,
                       StepWorkspace& ws, double dt_step) {
  require_same_mesh(y_n, mesh);
  if (damping.values.size() != y_n.values.size())
    throw std::invalid_argument("damping field does not match the mesh");
  const double dt = dt_step > 0.0 ? dt_step : config.dt;
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(config.p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");

  GmresOptions gopts;
  gopts.tol = config.krylov_tol;
  gopts.restart = config.krylov_restart;
  gopts.max_iters = config.krylov_max_iters;
  gopts.jacobi = config.jacobi;

  const std::vector<cdouble>& v = y_n.values;
  std::vector<cdouble> iter = v;  // y^{(0)} = y^n
  const int n = mesh.n_cells();

  StepResult out;
  out.y.mesh_uid = mesh.uid;

  for (int k = 1; k <= config.picard_max_iters; ++k) {
    if (config.nonlinearity) {
      for (int i = 0; i < n; ++i)
        ws.q[i] = nonlinear_coefficient(iter[i], v[i], config.p,
                                        config.ratio_epsilon);
    } else {
      std::fill(ws.q.begin(), ws.q.end(), 0.0);
    }
    assemble_system(mesh, damping, v, dt, config.p, ws);
    GmresResult g = gmres_solve(ws.A, ws.b, iter, gopts);
    out.krylov_iters += g.iterations;
    if (!g.converged)
      throw SolverError("linear solve stalled at relative residual " +
                            std::to_string(g.residual),
                        g.residual, g.iterations);
    const double diff = l2_diff(mesh, g.x, iter);
    const double ref = l2_of(mesh, g.x);
    iter = std::move(g.x);
    out.picard_iters = k;
    out.picard_residual = ref > 0.0 ? diff / ref : diff;
    if (diff <= config.picard_tol * ref || (ref == 0.0 && diff == 0.0)) {
      out.y.values = std::move(iter);
      return out;
    }
  }
  throw SolverError("nonlinear iteration did not converge (last change " +
                        std::to_string(out.picard_residual) + ")",
                    out.picard_residual, out.picard_iters);
}

ComplexField sample_wave_packet(const Mesh& mesh, double amplitude, Vec2 center,
                                double k) {
  ComplexField f = ComplexField::zeros(mesh);
  for (const Cell& c : mesh.cells) {
    const double dx = c.point.x - center.x;
    const double dy = c.point.y - center.y;
    const double mag = amplitude * std::exp(-(dx * dx + dy * dy));
    f.values[c.id] = mag * std::polar(1.0, -k * dx);
  }
  return f;
}

SimulationResult run_simulation(const Mesh& mesh, const DampingField& damping,
                                const ComplexField& y0, const SchemeConfig& config,
                                double T, long long record_every,
                                long long snapshot_every) {
  require_same_mesh(y0, mesh);
  if (!(T > 0.0)) throw std::invalid_argument("final time must be positive");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  if (snapshot_every < 0) throw std::invalid_argument("snapshot_every must be >= 0");

  StepWorkspace ws(mesh);
  SimulationResult out;

  ComplexField y = y0;
  auto record = [&](long long step, double t, const StepResult* sr) {
    FunctionalSample s;
    s.step = step;
    s.t = t;
    s.E0 = mass_E0(y, mesh);
    s.E1 = energy_E1(y, mesh, config.p);
    s.l2 = discrete_l2_norm(y, mesh);
    s.h1 = discrete_h1_norm(y, mesh);
    s.l2p = discrete_l2p_norm(y, mesh, config.p);
    s.linf = linf_norm(y);
    if (sr) {
      s.picard_iters = sr->picard_iters;
      s.krylov_iters = sr->krylov_iters;
    }
    out.series.push_back(s);
  };

  record(0, 0.0, nullptr);
  if (snapshot_every > 0) out.snapshots.push_back({0, y});

  double t = 0.0;
  long long step = 0;
  const double t_eps = 1e-12 * T;
  while (t < T - t_eps) {
    const double remaining = T - t;
    const double dt_step = std::min(config.dt, remaining);
    StepResult sr = picard_step(mesh, damping, y, config, ws, dt_step);
    y = std::move(sr.y);
    ++step;
    t = remaining <= config.dt ? T : t + dt_step;
    const bool last = t >= T - t_eps;
    if (step % record_every == 0 || last) record(step, t, &sr);
    if (snapshot_every > 0 && (step % snapshot_every == 0 || last))
      out.snapshots.push_back({step, y});
  }
  out.final_field = std::move(y);
  out.steps = step;
  return out;
}

}  // namespace nlsfv
