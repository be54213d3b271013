// Experiment presets, decay-rate fitting, convergence studies and report
// emission (series.csv / fit.txt / summary.json / snapshots).
#ifndef NLSFV_EXPERIMENTS_HPP
#define NLSFV_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "nlsfv/damping.hpp"
#include "nlsfv/mesh.hpp"
#include "nlsfv/scheme.hpp"

namespace nlsfv {

enum class Example { I, II, III, IV };

Example parse_example(const std::string& text);
std::string example_name(Example e);

struct ExperimentConfig {
  Example example = Example::I;
  DomainSpec domain;
  int n_cells = 0;
  std::uint64_t seed = 1;
  SchemeConfig scheme;
  double T = 0.0;
  DampingPreset damping;
  double ic_amplitude = 1.0;
  Vec2 ic_center;
  double ic_wavenumber = 0.5;
  long long record_every = 1;
  long long snapshot_every = 0;
  double fit_t_a = -1.0;  // < 0: use 0.1 * T
  double fit_t_b = -1.0;  // < 0: use T
  std::string out_dir;
  std::string mesh_file;   // load instead of generating
  std::string save_mesh;   // write the generated mesh here

  // Published parameters for each experiment.
  static ExperimentConfig defaults(Example e);
  // Desk-scale variant for quick runs: I/II at 500 cells to T=100,
  // III/IV at 1000 cells to T=200.
  void apply_reduced_scale();
};

struct DecayFit {
  double gamma = 0.0;      // decay rate, positive when energy shrinks
  double C = 0.0;          // E0(t) ~ C exp(-gamma (t - t_a)) E0(t_a)
  double r_squared = 0.0;  // 0 when the window has zero variance
  double t_a = 0.0, t_b = 0.0;
  int n_points = 0;
};

// Least squares on (t, ln E0) over t in [t_a, t_b].  Throws on fewer than
// three samples or nonpositive E0 inside the window.
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& e0_series,
                        double t_a, double t_b);

struct ExperimentResult {
  Mesh mesh;
  SimulationResult sim;
  std::optional<DecayFit> fit;
  std::string fit_error;
  std::string out_dir;  // empty when nothing was written
};

// Runs one experiment; writes reports when config.out_dir is set.
ExperimentResult run_example(const ExperimentConfig& config);

// Writes series.csv, fit.txt, summary.json, omega.csv and snapshots/ under
// out_dir.  Float formatting is deterministic (%.17g), so identical runs
// produce byte-identical files.
void emit_report(const std::string& out_dir, const ExperimentConfig& config,
                 const Mesh& mesh, const DampingField& damping,
                 const SimulationResult& sim, const std::optional<DecayFit>& fit,
                 const std::string& fit_error);

struct ConvergenceRow {
  int n_cells = 0;
  double dt = 0.0;
  double h = 0.0;
  double err_e0 = 0.0;    // max |E0 - E0_ref| over shared times
  double err_field = 0.0; // probe-grid L2 of the final field difference
  double order_e0 = 0.0;  // log2 ratio vs the previous row; 0 for the first
  double order_field = 0.0;
};

struct ConvergenceLevel {
  int n_cells = 0;
  double dt = 0.0;
};

// "(cells,dt);(cells,dt);..."
std::vector<ConvergenceLevel> parse_levels(const std::string& text);

// Refinement study against the last (finest) level, which acts as the
// reference and is not reported as a row.  Coarser time grids must nest in
// the reference grid.  Meshes are cached per n_cells, so a constant cells
// column yields a pure time-refinement study on one fixed mesh.
std::vector<ConvergenceRow> convergence_study(const ExperimentConfig& base,
                                              const std::vector<ConvergenceLevel>& levels,
                                              double T_study, int probe_n = 200);

// Piecewise-constant evaluation at p: value of the cell whose generator is
// nearest (the containing cell for Voronoi meshes).
cdouble probe_field(const Mesh& mesh, const ComplexField& f, Vec2 p);

}  // namespace nlsfv

#endif
