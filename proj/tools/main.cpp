// Command-line front end: simulate / mesh / converge / validate.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nlsfv/experiments.hpp"

namespace {

using namespace nlsfv;

bool parse_pair(const std::string& text, double& a, double& b) {
  return std::sscanf(text.c_str(), "%lf,%lf", &a, &b) == 2;
}

void print_sample(const char* label, const FunctionalSample& s) {
  std::printf("%s t=%-10.6g E0=%.10g E1=%.10g linf=%.6g\n", label, s.t, s.E0,
              s.E1, s.linf);
}

int cmd_simulate(ExperimentConfig cfg, const std::string& fit_window) {
  if (!fit_window.empty()) {
    double a = 0.0, b = 0.0;
    if (!parse_pair(fit_window, a, b) || !(a < b)) {
      std::fprintf(stderr, "error: --fit-window expects 'a,b' with a < b\n");
      return 2;
    }
    cfg.fit_t_a = a;
    cfg.fit_t_b = b;
  }
  if (cfg.out_dir.empty()) {
    cfg.out_dir = "out_example_" + example_name(cfg.example);
  }
  std::printf("example %s: domain %s, %d cells (seed %llu), dt=%g, T=%g, p=%g, damping %s\n",
              example_name(cfg.example).c_str(), cfg.domain.to_string().c_str(),
              cfg.n_cells, static_cast<unsigned long long>(cfg.seed),
              cfg.scheme.dt, cfg.T, cfg.scheme.p, cfg.damping.name().c_str());
  const ExperimentResult res = run_example(cfg);
  std::printf("mesh: %d cells, h = %.6g\n", res.mesh.n_cells(), res.mesh.h);
  print_sample("initial:", res.sim.series.front());
  print_sample("final:  ", res.sim.series.back());
  if (res.fit) {
    std::printf("decay fit on [%g, %g]: gamma = %.6g, C = %.6g, r^2 = %.6g (%d points)\n",
                res.fit->t_a, res.fit->t_b, res.fit->gamma, res.fit->C,
                res.fit->r_squared, res.fit->n_points);
  } else {
    std::printf("decay fit unavailable: %s\n", res.fit_error.c_str());
  }
  std::printf("reports written to %s\n", res.out_dir.c_str());
  return 0;
}

int cmd_mesh(const std::string& domain_text, int cells, std::uint64_t seed,
             const std::string& out, int lloyd_iters, double lloyd_tol) {
  const DomainSpec domain = DomainSpec::parse(domain_text);
  MeshBuildStats stats;
  const Mesh mesh =
      generate_mesh(domain, cells, seed, lloyd_iters, lloyd_tol, &stats);
  save_mesh(mesh, out);
  const AdmissibilityReport rep = validate_admissibility(mesh, 1e-9);
  std::printf("mesh: %d cells, %d faces, h = %.6g (Lloyd %s after %d sweeps)\n",
              mesh.n_cells(), mesh.n_faces(), mesh.h,
              stats.converged ? "converged" : "stopped", stats.iterations);
  std::printf("admissibility: orthogonality_max = %.3g, area_defect = %.3g -> %s\n",
              rep.orthogonality_max, rep.area_defect,
              rep.admissible ? "pass" : "FAIL");
  std::printf("written to %s\n", out.c_str());
  return rep.admissible ? 0 : 1;
}

int cmd_converge(ExperimentConfig base, const std::string& levels_text,
                 double T_study, int probe_n, const std::string& out_dir) {
  const std::vector<ConvergenceLevel> levels = parse_levels(levels_text);
  std::printf("convergence study: %zu levels + reference, T = %g, %s nonlinearity\n",
              levels.size() - 1, T_study,
              base.scheme.nonlinearity ? "with" : "without");
  const std::vector<ConvergenceRow> rows =
      convergence_study(base, levels, T_study, probe_n);
  std::printf("%8s %12s %10s %14s %9s %14s %11s\n", "cells", "dt", "h",
              "err_E0", "order", "err_field", "order");
  std::string csv = "n_cells,dt,h,err_e0,order_e0,err_field,order_field\n";
  char line[256];
  for (const ConvergenceRow& r : rows) {
    std::printf("%8d %12.6g %10.4g %14.6e %9.3f %14.6e %11.3f\n", r.n_cells,
                r.dt, r.h, r.err_e0, r.order_e0, r.err_field, r.order_field);
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.n_cells, r.dt, r.h, r.err_e0, r.order_e0, r.err_field,
                  r.order_field);
    csv += line;
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const std::string path =
        (std::filesystem::path(out_dir) / "convergence.csv").string();
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
      return 2;
    }
    f << csv;
    std::printf("written to %s\n", path.c_str());
  }
  return 0;
}

int cmd_validate(const std::string& damping_text, const std::string& domain_text,
                 double resolution, const std::string& observer_text,
                 int n_samples) {
  const DampingPreset preset = DampingPreset::parse(damping_text);
  const DomainSpec domain = DomainSpec::parse(domain_text);
  Vec2 observer{0.0, 0.0};
  if (!observer_text.empty() &&
      !parse_pair(observer_text, observer.x, observer.y)) {
    std::fprintf(stderr, "error: --observer expects 'x,y'\n");
    return 2;
  }

  std::printf("damping %s on %s\n", preset.name().c_str(),
              domain.to_string().c_str());
  int status = 0;
  try {
    const DampingRatioReport coarse = damping_ratio_bound(preset, domain, resolution);
    const DampingRatioReport fine =
        damping_ratio_bound(preset, domain, resolution / 2.0);
    std::printf("gradient-ratio bound sup |grad a|^2/a:\n");
    std::printf("  finite differences: %.8g (spacing %g, %lld samples)\n",
                coarse.fd_sup, coarse.resolution, coarse.n_samples);
    std::printf("                      %.8g (spacing %g, %lld samples)\n",
                fine.fd_sup, fine.resolution, fine.n_samples);
    if (fine.has_analytic) {
      std::printf("  analytic:           %.8g\n", fine.analytic_sup);
    } else {
      std::printf("  analytic:           n/a for this preset\n");
    }
  } catch (const std::exception& ex) {
    std::printf("gradient-ratio bound: %s\n", ex.what());
  }

  const GeometricConditionReport geo =
      check_geometric_condition(domain, preset, observer, n_samples);
  std::printf("geometric control (observer %g,%g): %d boundary samples\n",
              observer.x, observer.y, geo.n_checked);
  if (geo.covered) {
    std::printf("  every outflow point is damped: pass\n");
  } else {
    status = 1;
    std::printf("  UNCONTROLLED outflow points: %d (first at %g,%g)\n",
                geo.n_uncontrolled, geo.first_violation.x, geo.first_violation.y);
  }
  if (geo.n_obstacle_violations > 0) {
    status = 1;
    std::printf("  obstacle wall outflow violations: %d\n",
                geo.n_obstacle_violations);
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume simulator for the damped defocusing Schrodinger equation"};
  app.require_subcommand(1);

  // simulate ---------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "Run an experiment preset and write reports");
  std::string s_example = "I";
  int s_cells = 0;
  double s_dt = 0.0, s_T = 0.0, s_p = 0.0, s_picard = 0.0, s_krylov = 0.0;
  std::uint64_t s_seed = 0;
  std::string s_damping, s_fit_window, s_out, s_mesh_file, s_save_mesh;
  long long s_record = 0, s_snapshot = 0;
  bool s_no_nl = false, s_reduced = false;
  sim->add_option("--example", s_example, "Experiment preset: I, II, III or IV");
  sim->add_option("--cells", s_cells, "Number of mesh cells");
  sim->add_option("--dt", s_dt, "Time step");
  sim->add_option("--T", s_T, "Final time");
  sim->add_option("--p", s_p, "Nonlinearity exponent p (|y|^{2p-2} y)");
  sim->add_option("--seed", s_seed, "Mesh generator seed");
  sim->add_option("--damping", s_damping,
                  "zero|example1..example4|radial_quadratic:R0|custom:PATH");
  sim->add_option("--picard-tol", s_picard, "Outer fixed-point tolerance");
  sim->add_option("--krylov-tol", s_krylov, "GMRES relative tolerance");
  sim->add_option("--record-every", s_record, "Record every Nth step (default 1)");
  sim->add_option("--snapshot-every", s_snapshot, "Write field snapshots every Nth step");
  sim->add_option("--fit-window", s_fit_window, "Decay-fit window 'a,b' (default 0.1T,T)");
  sim->add_option("--out", s_out, "Report directory (default out_example_<E>)");
  sim->add_option("--mesh-file", s_mesh_file, "Load this mesh instead of generating");
  sim->add_option("--save-mesh", s_save_mesh, "Write the mesh to this path");
  sim->add_flag("--no-nonlinearity", s_no_nl, "Drop the |y|^{2p-2} y term (linear run)");
  sim->add_flag("--reduced", s_reduced, "Desk-scale variant (fewer cells, shorter T)");

  // mesh ---------------------------------------------------------------------
  auto* msh = app.add_subcommand("mesh", "Generate a mesh and write it as JSON");
  std::string m_domain = "disk:10";
  int m_cells = 500;
  std::uint64_t m_seed = 1;
  std::string m_out = "mesh.json";
  int m_iters = 200;
  double m_tol = -1.0;
  msh->add_option("--domain", m_domain, "disk:R or annulus:RI,RO")->required();
  msh->add_option("--cells", m_cells, "Number of cells")->required();
  msh->add_option("--seed", m_seed, "Generator seed");
  msh->add_option("--out", m_out, "Output path")->required();
  msh->add_option("--lloyd-iters", m_iters, "Relaxation sweep budget");
  msh->add_option("--lloyd-tol", m_tol, "Relaxation stop tolerance (<=0: default)");

  // converge ------------------------------------------------------------------
  auto* cvg = app.add_subcommand("converge", "Refinement study against the finest level");
  std::string c_example = "I";
  std::string c_levels;
  double c_T = 2.0;
  int c_probe = 200;
  std::string c_out;
  std::uint64_t c_seed = 0;
  bool c_no_nl = false;
  double c_p = 0.0, c_picard = 0.0, c_krylov = 0.0;
  cvg->add_option("--example", c_example, "Base preset for domain/damping/initial state");
  cvg->add_option("--levels", c_levels, "\"(cells,dt);(cells,dt);...\" last = reference")
      ->required();
  cvg->add_option("--T", c_T, "Study horizon (default 2)");
  cvg->add_option("--probe", c_probe, "Probe grid resolution per axis (default 200)");
  cvg->add_option("--out", c_out, "Directory for convergence.csv");
  cvg->add_option("--seed", c_seed, "Mesh generator seed");
  cvg->add_option("--p", c_p, "Nonlinearity exponent");
  cvg->add_option("--picard-tol", c_picard, "Outer fixed-point tolerance");
  cvg->add_option("--krylov-tol", c_krylov, "GMRES relative tolerance");
  cvg->add_flag("--no-nonlinearity", c_no_nl, "Linear runs");

  // validate ------------------------------------------------------------------
  auto* val = app.add_subcommand("validate", "Check damping assumptions on a domain");
  std::string v_damping = "example1", v_domain = "disk:10", v_observer;
  double v_res = 1.0 / 128.0;
  int v_samples = 2048;
  val->add_option("--damping", v_damping, "Preset name")->required();
  val->add_option("--domain", v_domain, "disk:R or annulus:RI,RO")->required();
  val->add_option("--resolution", v_res, "FD grid spacing (also run at half)");
  val->add_option("--observer", v_observer, "Observer point 'x,y' (default 0,0)");
  val->add_option("--samples", v_samples, "Boundary samples per component");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      ExperimentConfig cfg = ExperimentConfig::defaults(parse_example(s_example));
      if (s_reduced) cfg.apply_reduced_scale();
      if (sim->count("--cells")) cfg.n_cells = s_cells;
      if (sim->count("--dt")) cfg.scheme.dt = s_dt;
      if (sim->count("--T")) cfg.T = s_T;
      if (sim->count("--p")) cfg.scheme.p = s_p;
      if (sim->count("--seed")) cfg.seed = s_seed;
      if (sim->count("--damping")) cfg.damping = DampingPreset::parse(s_damping);
      if (sim->count("--picard-tol")) cfg.scheme.picard_tol = s_picard;
      if (sim->count("--krylov-tol")) cfg.scheme.krylov_tol = s_krylov;
      if (sim->count("--record-every")) cfg.record_every = s_record;
      if (sim->count("--snapshot-every")) cfg.snapshot_every = s_snapshot;
      if (sim->count("--out")) cfg.out_dir = s_out;
      if (sim->count("--mesh-file")) cfg.mesh_file = s_mesh_file;
      if (sim->count("--save-mesh")) cfg.save_mesh = s_save_mesh;
      if (s_no_nl) cfg.scheme.nonlinearity = false;
      return cmd_simulate(cfg, s_fit_window);
    }
    if (msh->parsed()) {
      return cmd_mesh(m_domain, m_cells, m_seed, m_out, m_iters, m_tol);
    }
    if (cvg->parsed()) {
      ExperimentConfig base = ExperimentConfig::defaults(parse_example(c_example));
      if (cvg->count("--seed")) base.seed = c_seed;
      if (cvg->count("--p")) base.scheme.p = c_p;
      if (cvg->count("--picard-tol")) base.scheme.picard_tol = c_picard;
      if (cvg->count("--krylov-tol")) base.scheme.krylov_tol = c_krylov;
      if (c_no_nl) base.scheme.nonlinearity = false;
      return cmd_converge(base, c_levels, c_T, c_probe, c_out);
    }
    if (val->parsed()) {
      return cmd_validate(v_damping, v_domain, v_res, v_observer, v_samples);
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  return 0;
}
