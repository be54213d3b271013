#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "fixtures.hpp"
#include "nlsfv/gmres.hpp"
#include "nlsfv/scheme.hpp"

using namespace nlsfv;

namespace {

// Dense random complex-symmetric, diagonally dominant system in CSR form.
SparseComplexMatrix random_system(std::mt19937_64& rng, int n,
                                  Eigen::MatrixXcd& dense) {
  dense = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const cdouble v{rand01(rng) - 0.5, rand01(rng) - 0.5};
      dense(i, j) = v;
      dense(j, i) = v;  // symmetric, not Hermitian
    }
  }
  for (int i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) rowsum += std::abs(dense(i, j));
    }
    dense(i, i) = cdouble{rowsum + 1.0, rowsum + 0.5};
  }
  SparseComplexMatrix A;
  A.n = n;
  A.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) {
    A.row_ptr[static_cast<std::size_t>(i) + 1] =
        A.row_ptr[static_cast<std::size_t>(i)] + n;
    for (int j = 0; j < n; ++j) {
      A.col.push_back(j);
      A.val.push_back(dense(i, j));
    }
  }
  return A;
}

std::vector<cdouble> random_vector(std::mt19937_64& rng, int n) {
  std::vector<cdouble> b(static_cast<std::size_t>(n));
  for (auto& z : b) z = cdouble{rand01(rng) - 0.5, rand01(rng) - 0.5};
  return b;
}

double rel_error(const std::vector<cdouble>& x, const Eigen::VectorXcd& ref) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < ref.size(); ++i) {
    num += std::norm(x[static_cast<std::size_t>(i)] - ref(i));
    den += std::norm(ref(i));
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("ratio coefficient: exact special cases") {
  // p = 1 collapses to 1 for every argument.
  CHECK(nonlinear_coefficient(cdouble{0.3, 0.1}, cdouble{2.0, -1.0}, 1.0) == 1.0);
  CHECK(nonlinear_coefficient(cdouble{0, 0}, cdouble{0, 0}, 1.0) == 1.0);

  // Equal moduli: derivative limit p |z|^{2(p-1)}.
  const cdouble z{0.3, 0.4};  // |z|^2 = 0.25
  CHECK(nonlinear_coefficient(z, z, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(nonlinear_coefficient(z, z * cdouble{0, 1}, 2.0) ==
        doctest::Approx(0.5).epsilon(1e-15));  // rotation keeps the modulus
  CHECK(nonlinear_coefficient(z, z, 1.5) ==
        doctest::Approx(1.5 * std::pow(0.25, 0.5)).epsilon(1e-14));
  CHECK(nonlinear_coefficient(z, z, 3.0) ==
        doctest::Approx(3.0 * std::pow(0.25, 2.0)).epsilon(1e-14));

  // Zero field with p > 1.
  CHECK(nonlinear_coefficient(cdouble{0, 0}, cdouble{0, 0}, 2.0) == 0.0);
}

TEST_CASE("ratio coefficient: generic arguments match the difference quotient") {
  const cdouble a{1.1, -0.4}, b{0.2, 0.9};
  const double s1 = std::norm(a), s0 = std::norm(b);
  for (double p : {1.5, 2.0, 3.0}) {
    const double expect = (std::pow(s1, p) - std::pow(s0, p)) / (s1 - s0);
    CHECK(nonlinear_coefficient(a, b, p) == doctest::Approx(expect).epsilon(1e-15));
    CHECK(nonlinear_coefficient(a, b, p) >= 0.0);
  }
}

TEST_CASE("ratio coefficient: continuity across the branch switch") {
  // Straddle the switch tightly (gap = eps*(1 +- 1e-4)) so the probes see
  // the branch mismatch itself, not the coefficient's smooth variation.
  const double eps = 1e-6;
  const double s0 = 1.7;
  const cdouble z0{std::sqrt(s0), 0.0};
  for (double p : {1.5, 2.0, 3.0}) {
    const double just_outside = s0 * (1.0 + eps * (1.0 + 1e-4));
    const double just_inside = s0 * (1.0 + eps * (1.0 - 1e-4));
    const cdouble zo{std::sqrt(just_outside), 0.0};
    const cdouble zi{std::sqrt(just_inside), 0.0};
    const double qo = nonlinear_coefficient(zo, z0, p, eps);
    const double qi = nonlinear_coefficient(zi, z0, p, eps);
    CHECK(std::abs(qo - qi) <= 1e-8 * std::max(1.0, std::abs(qi)));
  }
}

TEST_CASE("restarted GMRES agrees with a dense LU oracle") {
  std::mt19937_64 rng(2024);
  GmresOptions opts;
  opts.tol = 1e-11;
  opts.restart = 25;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + static_cast<int>(rand01(rng) * 36);
    Eigen::MatrixXcd dense;
    const SparseComplexMatrix A = random_system(rng, n, dense);
    const std::vector<cdouble> b = random_vector(rng, n);
    Eigen::VectorXcd be(n);
    for (int i = 0; i < n; ++i) be(i) = b[static_cast<std::size_t>(i)];
    const Eigen::VectorXcd xe = dense.partialPivLu().solve(be);

    const GmresResult r =
        gmres_solve(A, b, std::vector<cdouble>(b.size(), cdouble{}), opts);
    REQUIRE(r.converged);
    CHECK(rel_error(r.x, xe) <= 1e-9);
  }
}

TEST_CASE("GMRES edge cases") {
  std::mt19937_64 rng(7);
  Eigen::MatrixXcd dense;
  const SparseComplexMatrix A = random_system(rng, 12, dense);

  SUBCASE("zero right-hand side returns the zero solution immediately") {
    const GmresResult r = gmres_solve(A, std::vector<cdouble>(12, cdouble{}),
                                      std::vector<cdouble>(12, cdouble{1.0, 2.0}),
                                      GmresOptions{});
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    for (const cdouble& z : r.x) CHECK(std::abs(z) == 0.0);
  }

  SUBCASE("identity solves in one iteration") {
    SparseComplexMatrix I;
    I.n = 4;
    I.row_ptr = {0, 1, 2, 3, 4};
    I.col = {0, 1, 2, 3};
    I.val.assign(4, cdouble{1.0, 0.0});
    const std::vector<cdouble> b = random_vector(rng, 4);
    const GmresResult r =
        gmres_solve(I, b, std::vector<cdouble>(4, cdouble{}), GmresOptions{});
    CHECK(r.converged);
    CHECK(r.iterations <= 1);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(r.x[static_cast<std::size_t>(i)] -
                     b[static_cast<std::size_t>(i)]) < 1e-12);
    }
  }

  SUBCASE("warm start at the solution converges with zero iterations") {
    const std::vector<cdouble> b = random_vector(rng, 12);
    GmresOptions opts;
    opts.tol = 1e-12;
    const GmresResult first =
        gmres_solve(A, b, std::vector<cdouble>(12, cdouble{}), opts);
    REQUIRE(first.converged);
    GmresOptions loose;
    loose.tol = 1e-10;
    const GmresResult again = gmres_solve(A, b, first.x, loose);
    CHECK(again.converged);
    CHECK(again.iterations == 0);
  }

  SUBCASE("tiny restart window still converges via restarts") {
    const std::vector<cdouble> b = random_vector(rng, 12);
    GmresOptions opts;
    opts.tol = 1e-10;
    opts.restart = 3;
    const GmresResult r =
        gmres_solve(A, b, std::vector<cdouble>(12, cdouble{}), opts);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-10);
  }

  SUBCASE("Jacobi preconditioning reaches the same solution") {
    const std::vector<cdouble> b = random_vector(rng, 12);
    GmresOptions opts;
    opts.tol = 1e-11;
    GmresOptions pre = opts;
    pre.jacobi = true;
    const GmresResult r0 =
        gmres_solve(A, b, std::vector<cdouble>(12, cdouble{}), opts);
    const GmresResult r1 =
        gmres_solve(A, b, std::vector<cdouble>(12, cdouble{}), pre);
    REQUIRE(r0.converged);
    REQUIRE(r1.converged);
    double diff = 0.0;
    for (std::size_t i = 0; i < r0.x.size(); ++i) {
      diff = std::max(diff, std::abs(r0.x[i] - r1.x[i]));
    }
    CHECK(diff < 1e-9);
  }

  SUBCASE("iteration budget exhaustion reports failure honestly") {
    const std::vector<cdouble> b = random_vector(rng, 12);
    GmresOptions opts;
    opts.tol = 1e-14;
    opts.restart = 2;
    opts.max_iters = 2;
    const GmresResult r =
        gmres_solve(A, b, std::vector<cdouble>(12, cdouble{}), opts);
    CHECK_FALSE(r.converged);
    CHECK(r.residual > 1e-14);
  }
}

TEST_CASE("one-cell step reproduces the closed-form amplification factor") {
  const Mesh m = fixtures::unit_square();  // m(K) = 1, total tau = 8
  const double dt = 0.05;
  const double tau_tot = 8.0;
  SchemeConfig cfg;
  cfg.dt = dt;
  cfg.nonlinearity = false;
  cfg.picard_tol = 1e-13;
  cfg.krylov_tol = 1e-14;
  const cdouble iu{0.0, 1.0};

  SUBCASE("undamped: |g| = 1 and the step matches g exactly") {
    DampingField a;
    a.values = {0.0};
    a.mesh_uid = m.uid;
    const ComplexField y0 = fixtures::field_on(m, {cdouble{0.6, -0.3}});
    StepWorkspace ws(m);
    const StepResult r = picard_step(m, a, y0, cfg, ws);
    const cdouble g = (iu / dt + tau_tot / 2.0) / (iu / dt - tau_tot / 2.0);
    CHECK(std::abs(std::abs(g) - 1.0) < 1e-14);
    CHECK(std::abs(r.y.values[0] - g * y0.values[0]) < 1e-12);
  }

  SUBCASE("damped: |g| < 1 and the step matches g exactly") {
    const double ad = 0.7;
    DampingField a;
    a.values = {ad};
    a.mesh_uid = m.uid;
    const ComplexField y0 = fixtures::field_on(m, {cdouble{1.0, 0.25}});
    StepWorkspace ws(m);
    const StepResult r = picard_step(m, a, y0, cfg, ws);
    const cdouble g =
        (iu / dt + tau_tot / 2.0 - iu * ad / 2.0) /
        (iu / dt - tau_tot / 2.0 + iu * ad / 2.0);
    CHECK(std::abs(g) < 1.0);
    CHECK(std::abs(r.y.values[0] - g * y0.values[0]) < 1e-12);
  }
}

TEST_CASE("undamped steps conserve mass to the inner tolerances") {
  const Mesh m = fixtures::two_squares();
  DampingField a;
  a.values = {0.0, 0.0};
  a.mesh_uid = m.uid;
  SchemeConfig cfg;
  cfg.dt = 0.1;
  cfg.p = 2.0;
  cfg.picard_tol = 1e-10;
  cfg.krylov_tol = 1e-13;
  ComplexField y = fixtures::field_on(m, {cdouble{0.8, 0.1}, cdouble{-0.2, 0.5}});
  const double e0 = mass_E0(y, m);
  const double e1 = energy_E1(y, m, cfg.p);
  StepWorkspace ws(m);
  for (int step = 0; step < 20; ++step) {
    const StepResult r = picard_step(m, a, y, cfg, ws);
    y = r.y;
    CHECK(std::abs(mass_E0(y, m) - e0) <= 1e-10 * e0);
    CHECK(std::abs(energy_E1(y, m, cfg.p) - e1) <= 1e-8 * e1);
  }
}

TEST_CASE("damping strictly dissipates mass") {
  const Mesh m = fixtures::two_squares();
  DampingField a;
  a.values = {0.5, 1.25};
  a.mesh_uid = m.uid;
  SchemeConfig cfg;
  cfg.dt = 0.05;
  ComplexField y = fixtures::field_on(m, {cdouble{1.0, 0.0}, cdouble{0.0, 1.0}});
  double prev = mass_E0(y, m);
  StepWorkspace ws(m);
  for (int step = 0; step < 10; ++step) {
    y = picard_step(m, a, y, cfg, ws).y;
    const double cur = mass_E0(y, m);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("fixed-point iteration counts in special regimes") {
  const Mesh m = fixtures::two_squares();
  DampingField a;
  a.values = {0.0, 0.0};
  a.mesh_uid = m.uid;

  SUBCASE("p = 1 needs exactly two sweeps (the second only confirms)") {
    SchemeConfig cfg;
    cfg.dt = 0.1;
    cfg.p = 1.0;
    const ComplexField y0 = fixtures::field_on(m, {cdouble{1, 1}, cdouble{2, -1}});
    StepWorkspace ws(m);
    CHECK(picard_step(m, a, y0, cfg, ws).picard_iters == 2);
  }

  SUBCASE("zero state is a fixed point recognized in one sweep") {
    SchemeConfig cfg;
    cfg.dt = 0.1;
    const ComplexField y0 = ComplexField::zeros(m);
    StepWorkspace ws(m);
    const StepResult r = picard_step(m, a, y0, cfg, ws);
    CHECK(r.picard_iters == 1);
    CHECK(std::abs(r.y.values[0]) == 0.0);
    CHECK(std::abs(r.y.values[1]) == 0.0);
  }

  SUBCASE("an impossible Krylov budget raises a solver error") {
    SchemeConfig cfg;
    cfg.dt = 0.1;
    cfg.krylov_tol = 1e-15;
    cfg.krylov_restart = 1;
    cfg.krylov_max_iters = 1;
    const ComplexField y0 = fixtures::field_on(m, {cdouble{1, 0}, cdouble{0, 1}});
    StepWorkspace ws(m);
    CHECK_THROWS_AS(picard_step(m, a, y0, cfg, ws), SolverError);
  }
}

TEST_CASE("wave packet sampling evaluates the Gaussian at the cell points") {
  const Mesh m = fixtures::two_squares();
  const double amp = 0.5, k = 0.5;
  const Vec2 c{1.0, 1.0};
  const ComplexField y = sample_wave_packet(m, amp, c, k);
  for (const Cell& cell : m.cells) {
    const Vec2 d = cell.point - c;
    const double mag = amp * std::exp(-(d.x * d.x + d.y * d.y));
    const cdouble expect = std::polar(mag, -k * d.x);
    CHECK(std::abs(y.values[static_cast<std::size_t>(cell.id)] - expect) < 1e-15);
  }
}

TEST_CASE("time marching bookkeeping: step counts, recording, snapshots") {
  const Mesh m = fixtures::two_squares();
  DampingField a;
  a.values = {0.1, 0.0};
  a.mesh_uid = m.uid;
  SchemeConfig cfg;
  cfg.dt = 0.3;
  const ComplexField y0 = fixtures::field_on(m, {cdouble{1, 0}, cdouble{0, 1}});

  const SimulationResult sim = run_simulation(m, a, y0, cfg, 1.0, 2, 2);
  // Steps: 0.3, 0.6, 0.9, then a shortened 0.1 step to land on T = 1.
  CHECK(sim.steps == 4);
  REQUIRE(sim.series.size() == 3);  // steps 0, 2 and the final step 4
  CHECK(sim.series.front().step == 0);
  CHECK(sim.series.front().t == 0.0);
  CHECK(sim.series[1].step == 2);
  CHECK(sim.series.back().step == 4);
  CHECK(sim.series.back().t == 1.0);  // exact landing
  REQUIRE(sim.snapshots.size() == 3);  // steps 0, 2 and 4
  CHECK(sim.snapshots.back().first == 4);

  // The recorded final field matches the last snapshot.
  for (std::size_t i = 0; i < sim.final_field.values.size(); ++i) {
    CHECK(std::abs(sim.final_field.values[i] -
                   sim.snapshots.back().second.values[i]) == 0.0);
  }
}
