// Midpoint finite-volume step for the damped defocusing Schrodinger
// equation.  Per cell K, with u = y^{n+1}, v = y^n and midpoint (u+v)/2:
//
//   i m(K) (u_K - v_K)/dt + sum_sigma F_{K,sigma}((u+v)/2)
//     - m(K)/(2p) q_K (u_K + v_K) + i m(K) a_K (u_K + v_K)/2 = 0
//
//   F interior = tau (w_L - w_K),  F boundary = -tau w_K,
//   q_K = (|u_K|^{2p} - |v_K|^{2p}) / (|u_K|^2 - |v_K|^2)  (ratio form)
//
// q is frozen during each linear solve and refreshed by Picard iteration;
// the linear systems are complex symmetric and solved by GMRES.
#ifndef NLSFV_SCHEME_HPP
#define NLSFV_SCHEME_HPP

#include <vector>

#include "nlsfv/damping.hpp"
#include "nlsfv/functionals.hpp"
#include "nlsfv/gmres.hpp"
#include "nlsfv/mesh.hpp"

namespace nlsfv {

struct SchemeConfig {
  double dt = 1.0 / 256.0;
  double p = 2.0;
  double picard_tol = 1e-6;  // relative L2 change between outer iterates
  int picard_max_iters = 100;
  double krylov_tol = 1e-10;
  int krylov_restart = 50;
  int krylov_max_iters = 20000;
  bool jacobi = false;
  bool nonlinearity = true;
  // Relative |s1 - s0| gap below which the difference quotient switches to
  // its derivative limit.  The quotient loses ~1e-16/delta to cancellation
  // while the limit is off by ~delta^2, so 1e-6 balances the two near 1e-10.
  double ratio_epsilon = 1e-6;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& msg, double residual, int iterations)
      : std::runtime_error(msg), residual(residual), iterations(iterations) {}
  double residual = 0.0;
  int iterations = 0;
};

// Discrete ratio (s1^p - s0^p)/(s1 - s0) with s = |z|^2, switching to the
// derivative limit p s^{p-1} at s = (s1+s0)/2 when s1 and s0 agree to
// relative ratio_epsilon.  Nonnegative; exactly 1 for p = 1.
double nonlinear_coefficient(cdouble z_new, cdouble z_old, double p,
                             double ratio_epsilon = 1e-6);

// Preassembled sparsity pattern plus scratch vectors for one mesh.
struct StepWorkspace {
  SparseComplexMatrix A;
  std::vector<int> diag_pos;                  // per cell
  std::vector<std::pair<int, int>> face_pos;  // value slots (k-row, l-row)
  std::vector<double> tau_cell_sum;           // sum of tau over each cell's faces
  std::vector<cdouble> b, scratch;
  std::vector<double> q;

  explicit StepWorkspace(const Mesh& mesh);
};

struct StepResult {
  ComplexField y;
  int picard_iters = 0;
  double picard_residual = 0.0;
  int krylov_iters = 0;  // summed over the Picard sweep
};

// One time step of size dt_step (defaults to config.dt when <= 0).
StepResult picard_step(const Mesh& mesh, const DampingField& damping,
                       const ComplexField& y_n, const SchemeConfig& config,
                       StepWorkspace& ws, double dt_step = -1.0);

// amp * exp(-|x-center|^2) * exp(-i k (x - center.x)); both experiment
// initial states are instances of this packet.
ComplexField sample_wave_packet(const Mesh& mesh, double amplitude, Vec2 center,
                                double k);

struct SimulationResult {
  std::vector<FunctionalSample> series;
  ComplexField final_field;
  std::vector<std::pair<long long, ComplexField>> snapshots;
  long long steps = 0;
};

// Fixed-step march to final time T (the last step is shortened to land on T
// exactly).  Records step 0, every record_every-th step, and the final step.
// snapshot_every = 0 disables field snapshots.
SimulationResult run_simulation(const Mesh& mesh, const DampingField& damping,
                                const ComplexField& y0, const SchemeConfig& config,
                                double T, long long record_every = 1,
                                long long snapshot_every = 0);

}  // namespace nlsfv

#endif
