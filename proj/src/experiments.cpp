#include "nlsfv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "nlsfv/numeric.hpp"

namespace nlsfv {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << body;
  if (!out) throw std::runtime_error("failed while writing: " + path);
}

std::string snapshot_name(long long step) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "step_%06lld.csv", step);
  return buf;
}

}  // namespace

Example parse_example(const std::string& text) {
  if (text == "I" || text == "1") return Example::I;
  if (text == "II" || text == "2") return Example::II;
  if (text == "III" || text == "3") return Example::III;
  if (text == "IV" || text == "4") return Example::IV;
  throw std::invalid_argument("unknown example '" + text + "' (expected I..IV)");
}

std::string example_name(Example e) {
  switch (e) {
    case Example::I: return "I";
    case Example::II: return "II";
    case Example::III: return "III";
    case Example::IV: return "IV";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::defaults(Example e) {
  ExperimentConfig c;
  c.example = e;
  c.scheme.p = 2.0;
  switch (e) {
    case Example::I:
    case Example::II:
      c.domain = DomainSpec::disk(10.0);
      c.n_cells = 2000;
      c.scheme.dt = 1.0 / 256.0;
      c.T = 500.0;
      c.damping = (e == Example::I) ? DampingPreset::example(1)
                                    : DampingPreset::example(2);
      c.ic_amplitude = 0.5;
      c.ic_center = Vec2{1.0, 1.0};
      c.ic_wavenumber = 0.5;
      break;
    case Example::III:
      c.domain = DomainSpec::annulus(5.0, 20.0);
      c.n_cells = 5000;
      c.scheme.dt = 1.0 / 64.0;
      c.T = 500.0;
      c.damping = DampingPreset::example(3);
      c.ic_amplitude = 1.0;
      c.ic_center = Vec2{0.0, 10.0};
      c.ic_wavenumber = 0.5;
      break;
    case Example::IV:
      c.domain = DomainSpec::annulus(7.0, 20.0);
      c.n_cells = 5000;
      c.scheme.dt = 1.0 / 32.0;
      c.T = 10000.0;
      c.damping = DampingPreset::example(4);
      c.ic_amplitude = 1.0;
      c.ic_center = Vec2{0.0, 10.0};
      c.ic_wavenumber = 0.5;
      break;
  }
  return c;
}

void ExperimentConfig::apply_reduced_scale() {
  switch (example) {
    case Example::I:
    case Example::II:
      n_cells = 500;
      T = 100.0;
      break;
    case Example::III:
    case Example::IV:
      n_cells = 1000;
      T = 200.0;
      break;
  }
  fit_t_a = -1.0;
  fit_t_b = -1.0;
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& e0_series,
                        double t_a, double t_b) {
  std::vector<double> ts, ys;
  double e0_first = 0.0;
  for (const auto& [t, e0] : e0_series) {
    if (t < t_a || t > t_b) continue;
    if (!(e0 > 0.0)) {
      throw std::domain_error("decay fit: nonpositive mass at t = " + g17(t));
    }
    if (ts.empty()) e0_first = e0;
    ts.push_back(t - t_a);
    ys.push_back(std::log(e0));
  }
  const int n = static_cast<int>(ts.size());
  if (n < 3) {
    throw std::invalid_argument(
        "decay fit: need at least 3 samples inside the window, got " +
        std::to_string(n));
  }
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += ts[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = ts[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) {
    throw std::invalid_argument("decay fit: window has no time spread");
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (intercept + slope * ts[i]);
    ss_res += r * r;
  }
  DecayFit fit;
  fit.gamma = -slope;
  fit.C = std::exp(intercept) / e0_first;
  fit.r_squared = (syy > 0.0) ? std::max(0.0, 1.0 - ss_res / syy) : 0.0;
  fit.t_a = t_a;
  fit.t_b = t_b;
  fit.n_points = n;
  return fit;
}

cdouble probe_field(const Mesh& mesh, const ComplexField& f, Vec2 p) {
  require_same_mesh(f, mesh);
  if (mesh.cells.empty()) throw std::invalid_argument("probe_field: empty mesh");
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Cell& c : mesh.cells) {
    const double d = norm2(c.point - p);
    if (d < best_d) {
      best_d = d;
      best = c.id;
    }
  }
  return f.values[static_cast<std::size_t>(best)];
}

void emit_report(const std::string& out_dir, const ExperimentConfig& config,
                 const Mesh& mesh, const DampingField& damping,
                 const SimulationResult& sim, const std::optional<DecayFit>& fit,
                 const std::string& fit_error) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  // series.csv ---------------------------------------------------------
  {
    std::string body = "step,t,E0,E1,l2,h1,l2p,linf,picard_iters,krylov_iters\n";
    for (const FunctionalSample& s : sim.series) {
      body += std::to_string(s.step);
      body += ',';
      body += g17(s.t);
      body += ',';
      body += g17(s.E0);
      body += ',';
      body += g17(s.E1);
      body += ',';
      body += g17(s.l2);
      body += ',';
      body += g17(s.h1);
      body += ',';
      body += g17(s.l2p);
      body += ',';
      body += g17(s.linf);
      body += ',';
      body += std::to_string(s.picard_iters);
      body += ',';
      body += std::to_string(s.krylov_iters);
      body += '\n';
    }
    write_text_file((fs::path(out_dir) / "series.csv").string(), body);
  }

  // fit.txt --------------------------------------------------------------
  {
    std::string body;
    if (fit) {
      body += "gamma = " + g17(fit->gamma) + "\n";
      body += "C = " + g17(fit->C) + "\n";
      body += "r_squared = " + g17(fit->r_squared) + "\n";
      body += "window = [" + g17(fit->t_a) + ", " + g17(fit->t_b) + "]\n";
      body += "n_points = " + std::to_string(fit->n_points) + "\n";
    } else {
      body = "fit failed: " + (fit_error.empty() ? "unknown" : fit_error) + "\n";
    }
    write_text_file((fs::path(out_dir) / "fit.txt").string(), body);
  }

  // omega.csv: cells where the damping coefficient is active --------------
  {
    std::string body = "cell_id,x,y,a\n";
    for (int id : damping.omega_cells) {
      const Cell& c = mesh.cells[static_cast<std::size_t>(id)];
      body += std::to_string(id);
      body += ',';
      body += g17(c.point.x);
      body += ',';
      body += g17(c.point.y);
      body += ',';
      body += g17(damping.values[static_cast<std::size_t>(id)]);
      body += '\n';
    }
    write_text_file((fs::path(out_dir) / "omega.csv").string(), body);
  }

  // snapshots/step_NNNNNN.csv ---------------------------------------------
  if (!sim.snapshots.empty()) {
    const fs::path snap_dir = fs::path(out_dir) / "snapshots";
    fs::create_directories(snap_dir);
    for (const auto& [step, field] : sim.snapshots) {
      std::string body = "cell_id,x,y,re,im\n";
      for (const Cell& c : mesh.cells) {
        const cdouble z = field.values[static_cast<std::size_t>(c.id)];
        body += std::to_string(c.id);
        body += ',';
        body += g17(c.point.x);
        body += ',';
        body += g17(c.point.y);
        body += ',';
        body += g17(z.real());
        body += ',';
        body += g17(z.imag());
        body += '\n';
      }
      write_text_file((snap_dir / snapshot_name(step)).string(), body);
    }
  }

  // summary.json -----------------------------------------------------------
  {
    using json = nlohmann::ordered_json;
    json j;
    j["schema_version"] = 1;
    j["example"] = example_name(config.example);

    json jc;
    jc["domain"] = mesh.domain.to_string();
    jc["n_cells_requested"] = config.n_cells;
    jc["seed"] = config.seed;
    jc["dt"] = config.scheme.dt;
    jc["T"] = config.T;
    jc["p"] = config.scheme.p;
    jc["damping"] = config.damping.name();
    jc["picard_tol"] = config.scheme.picard_tol;
    jc["krylov_tol"] = config.scheme.krylov_tol;
    jc["record_every"] = config.record_every;
    jc["nonlinearity"] = config.scheme.nonlinearity;
    jc["ic"] = {{"amplitude", config.ic_amplitude},
                {"center", {config.ic_center.x, config.ic_center.y}},
                {"wavenumber", config.ic_wavenumber}};
    j["config"] = jc;

    j["mesh"] = {{"n_cells", mesh.n_cells()}, {"h", mesh.h}};

    const FunctionalSample& first = sim.series.front();
    const FunctionalSample& last = sim.series.back();
    j["initial"] = {{"E0", first.E0}, {"E1", first.E1}, {"linf", first.linf}};
    j["final"] = {{"t", last.t},
                  {"E0", last.E0},
                  {"E1", last.E1},
                  {"linf", last.linf}};

    double e0_drift = 0.0, e1_drift = 0.0;
    double e0_rise = 0.0, e1_rise = 0.0, linf_max = 0.0;
    for (std::size_t i = 0; i < sim.series.size(); ++i) {
      const FunctionalSample& s = sim.series[i];
      e0_drift = std::max(e0_drift, std::abs(s.E0 - first.E0));
      e1_drift = std::max(e1_drift, std::abs(s.E1 - first.E1));
      linf_max = std::max(linf_max, s.linf);
      if (i > 0) {
        e0_rise = std::max(e0_rise, s.E0 - sim.series[i - 1].E0);
        e1_rise = std::max(e1_rise, s.E1 - sim.series[i - 1].E1);
      }
    }
    const double e0_ref = std::abs(first.E0) > 0.0 ? std::abs(first.E0) : 1.0;
    const double e1_ref = std::abs(first.E1) > 0.0 ? std::abs(first.E1) : 1.0;
    j["conservation"] = {{"e0_drift_max_rel", e0_drift / e0_ref},
                         {"e0_step_increase_max_rel", e0_rise / e0_ref},
                         {"e1_drift_max_rel", e1_drift / e1_ref},
                         {"e1_step_increase_max_rel", e1_rise / e1_ref},
                         {"linf_max", linf_max}};

    long long pic_max = 0, kry_max = 0;
    double pic_sum = 0.0, kry_sum = 0.0;
    long long n_rec = 0;
    for (const FunctionalSample& s : sim.series) {
      if (s.step == 0) continue;
      pic_max = std::max<long long>(pic_max, s.picard_iters);
      kry_max = std::max<long long>(kry_max, s.krylov_iters);
      pic_sum += s.picard_iters;
      kry_sum += s.krylov_iters;
      ++n_rec;
    }
    j["solver"] = {{"steps", sim.steps},
                   {"picard_iters_max", pic_max},
                   {"picard_iters_mean", n_rec ? pic_sum / n_rec : 0.0},
                   {"krylov_iters_max", kry_max},
                   {"krylov_iters_mean", n_rec ? kry_sum / n_rec : 0.0}};

    if (fit) {
      j["fit"] = {{"gamma", fit->gamma},
                  {"C", fit->C},
                  {"r_squared", fit->r_squared},
                  {"window", {fit->t_a, fit->t_b}},
                  {"n_points", fit->n_points}};
    } else {
      j["fit"] = nullptr;
      j["fit_error"] = fit_error;
    }

    write_text_file((fs::path(out_dir) / "summary.json").string(),
                    j.dump(1, '\t') + "\n");
  }
}

ExperimentResult run_example(const ExperimentConfig& config) {
  ExperimentResult result;
  if (!config.mesh_file.empty()) {
    result.mesh = load_mesh(config.mesh_file);
  } else {
    result.mesh = generate_mesh(config.domain, config.n_cells, config.seed);
  }
  const Mesh& mesh = result.mesh;
  if (!config.save_mesh.empty()) {
    nlsfv::save_mesh(mesh, config.save_mesh);
  }

  const DampingField damping = sample_damping(config.damping, mesh);
  const ComplexField y0 = sample_wave_packet(mesh, config.ic_amplitude,
                                             config.ic_center, config.ic_wavenumber);
  result.sim = run_simulation(mesh, damping, y0, config.scheme, config.T,
                              config.record_every, config.snapshot_every);

  const double t_a = config.fit_t_a >= 0.0 ? config.fit_t_a : 0.1 * config.T;
  const double t_b = config.fit_t_b >= 0.0 ? config.fit_t_b : config.T;
  std::vector<std::pair<double, double>> e0_series;
  e0_series.reserve(result.sim.series.size());
  for (const FunctionalSample& s : result.sim.series) {
    e0_series.emplace_back(s.t, s.E0);
  }
  try {
    result.fit = fit_decay_rate(e0_series, t_a, t_b);
  } catch (const std::exception& ex) {
    result.fit_error = ex.what();
  }

  if (!config.out_dir.empty()) {
    emit_report(config.out_dir, config, mesh, damping, result.sim, result.fit,
                result.fit_error);
    result.out_dir = config.out_dir;
  }
  return result;
}

std::vector<ConvergenceLevel> parse_levels(const std::string& text) {
  std::vector<ConvergenceLevel> levels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    std::string core = item;
    // Tolerate surrounding parentheses and whitespace.
    core.erase(std::remove_if(core.begin(), core.end(),
                              [](char c) { return c == '(' || c == ')' || c == ' '; }),
               core.end());
    const auto comma = core.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("bad level '" + item + "': expected (cells,dt)");
    }
    ConvergenceLevel lvl;
    try {
      lvl.n_cells = std::stoi(core.substr(0, comma));
      lvl.dt = std::stod(core.substr(comma + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad level '" + item + "': expected (cells,dt)");
    }
    if (lvl.n_cells < 1 || !(lvl.dt > 0.0)) {
      throw std::invalid_argument("bad level '" + item + "': need cells >= 1, dt > 0");
    }
    levels.push_back(lvl);
  }
  if (levels.size() < 2) {
    throw std::invalid_argument("need at least two levels (last one is the reference)");
  }
  return levels;
}

std::vector<ConvergenceRow> convergence_study(const ExperimentConfig& base,
                                              const std::vector<ConvergenceLevel>& levels,
                                              double T_study, int probe_n) {
  if (levels.size() < 2) {
    throw std::invalid_argument("convergence_study: need at least two levels");
  }
  if (!(T_study > 0.0)) {
    throw std::invalid_argument("convergence_study: T must be positive");
  }

  // One mesh per distinct cell count; a constant cells column therefore runs
  // every level on the same mesh.  Entries are heap-allocated because level
  // runs keep pointers to their mesh across later cache growth.
  std::vector<std::pair<int, std::unique_ptr<Mesh>>> mesh_cache;
  auto mesh_for = [&](int n_cells) -> const Mesh& {
    for (const auto& [n, m] : mesh_cache) {
      if (n == n_cells) return *m;
    }
    mesh_cache.emplace_back(
        n_cells, std::make_unique<Mesh>(generate_mesh(base.domain, n_cells, base.seed)));
    return *mesh_cache.back().second;
  };

  struct LevelRun {
    const Mesh* mesh = nullptr;
    SimulationResult sim;
  };
  std::vector<LevelRun> runs(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const Mesh& mesh = mesh_for(levels[i].n_cells);
    const DampingField damping = sample_damping(base.damping, mesh);
    const ComplexField y0 = sample_wave_packet(mesh, base.ic_amplitude,
                                               base.ic_center, base.ic_wavenumber);
    SchemeConfig sc = base.scheme;
    sc.dt = levels[i].dt;
    runs[i].mesh = &mesh;
    runs[i].sim = run_simulation(mesh, damping, y0, sc, T_study, 1, 0);
  }

  const LevelRun& ref = runs.back();
  const double dt_ref = levels.back().dt;

  // Probe grid over the bounding box, masked to the interior.
  Vec2 blo, bhi;
  base.domain.bounding_box(blo, bhi);
  const double dx = (bhi.x - blo.x) / probe_n;
  const double dy = (bhi.y - blo.y) / probe_n;
  std::vector<Vec2> probes;
  probes.reserve(static_cast<std::size_t>(probe_n) * probe_n);
  for (int iy = 0; iy < probe_n; ++iy) {
    for (int ix = 0; ix < probe_n; ++ix) {
      const Vec2 p{blo.x + (ix + 0.5) * dx, blo.y + (iy + 0.5) * dy};
      if (base.domain.signed_distance(p) < 0.0) probes.push_back(p);
    }
  }
  std::vector<cdouble> ref_values(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    ref_values[i] = probe_field(*ref.mesh, ref.sim.final_field, probes[i]);
  }

  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const LevelRun& run = runs[i];
    ConvergenceRow row;
    row.n_cells = levels[i].n_cells;
    row.dt = levels[i].dt;
    row.h = run.mesh->h;

    double max_e0 = 0.0;
    for (const FunctionalSample& s : run.sim.series) {
      const long long idx = std::llround(s.t / dt_ref);
      if (idx < 0 || idx >= static_cast<long long>(ref.sim.series.size())) {
        throw std::invalid_argument(
            "convergence_study: level time grids must nest in the reference grid");
      }
      const FunctionalSample& r = ref.sim.series[static_cast<std::size_t>(idx)];
      if (std::abs(r.t - s.t) > 1e-9 * std::max(1.0, std::abs(s.t))) {
        throw std::invalid_argument(
            "convergence_study: level time grids must nest in the reference grid");
      }
      max_e0 = std::max(max_e0, std::abs(s.E0 - r.E0));
    }
    row.err_e0 = max_e0;

    std::vector<double> terms(probes.size());
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const cdouble d =
          probe_field(*run.mesh, run.sim.final_field, probes[k]) - ref_values[k];
      terms[k] = std::norm(d) * dx * dy;
    }
    row.err_field = std::sqrt(pairwise_sum(terms));

    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      const double dt_ratio = prev.dt / row.dt;
      const double h_ratio = prev.h / row.h;
      const double denom =
          std::abs(std::log(dt_ratio)) > 1e-12 ? std::log(dt_ratio) : std::log(h_ratio);
      if (std::abs(denom) > 1e-12) {
        if (prev.err_e0 > 0.0 && row.err_e0 > 0.0) {
          row.order_e0 = std::log(prev.err_e0 / row.err_e0) / denom;
        }
        if (prev.err_field > 0.0 && row.err_field > 0.0) {
          row.order_field = std::log(prev.err_field / row.err_field) / denom;
        }
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nlsfv
