#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "nlsfv/functionals.hpp"
#include "nlsfv/numeric.hpp"

using namespace nlsfv;

TEST_CASE("constant field on the unit square fixture") {
  const Mesh m = fixtures::unit_square();
  const ComplexField y = fixtures::field_on(m, {cdouble{1.0, 0.0}});

  CHECK(discrete_l2_norm(y, m) == doctest::Approx(1.0).epsilon(1e-15));
  // Four boundary faces, each tau = 2 and jump of modulus 1.
  CHECK(discrete_h1_norm(y, m) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK(discrete_l2p_norm(y, m, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mass_E0(y, m) == doctest::Approx(0.5).epsilon(1e-15));
  // E1 = 1/2 * 8 + 1/4 * 1.
  CHECK(energy_E1(y, m, 2.0) == doctest::Approx(4.25).epsilon(1e-15));
  CHECK(linf_norm(y) == 1.0);
}

TEST_CASE("two-cell fixture with a complex field") {
  const Mesh m = fixtures::two_squares();
  const ComplexField y = fixtures::field_on(m, {cdouble{1, 0}, cdouble{0, 1}});

  CHECK(discrete_l2_norm(y, m) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // Interior: tau 1, |i - 1|^2 = 2.  Boundary: six faces, tau 2, modulus 1.
  CHECK(discrete_h1_norm(y, m) == doctest::Approx(std::sqrt(14.0)).epsilon(1e-15));
  CHECK(discrete_l2p_norm(y, m, 2.0) ==
        doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
  CHECK(mass_E0(y, m) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(energy_E1(y, m, 2.0) == doctest::Approx(7.5).epsilon(1e-15));

  const Face& interior = m.faces[0];
  const cdouble jump = d_sigma(y, m, interior);
  CHECK(jump.real() == doctest::Approx(-1.0));
  CHECK(jump.imag() == doctest::Approx(1.0));
  const Face& wall = m.faces[1];
  const cdouble bjump = d_sigma(y, m, wall);
  CHECK(bjump.real() == doctest::Approx(-1.0));
  CHECK(bjump.imag() == doctest::Approx(0.0));
}

TEST_CASE("norms match a direct high-precision accumulation oracle") {
  const Mesh m = generate_mesh(DomainSpec::disk(3.0), 40, 2);
  std::mt19937_64 rng(99);
  std::vector<cdouble> vals(static_cast<std::size_t>(m.n_cells()));
  for (auto& z : vals) z = cdouble{rand01(rng) - 0.5, rand01(rng) - 0.5};
  const ComplexField y = fixtures::field_on(m, vals);

  long double l2 = 0.0L, l2p = 0.0L, h1 = 0.0L;
  for (const Cell& c : m.cells) {
    const long double n2 = std::norm(vals[static_cast<std::size_t>(c.id)]);
    l2 += n2 * c.area;
    l2p += n2 * n2 * c.area;  // p = 2
  }
  for (const Face& f : m.faces) {
    h1 += f.tau * static_cast<long double>(std::norm(d_sigma(y, m, f)));
  }

  CHECK(discrete_l2_norm(y, m) ==
        doctest::Approx(std::sqrt(static_cast<double>(l2))).epsilon(1e-14));
  CHECK(discrete_h1_norm(y, m) ==
        doctest::Approx(std::sqrt(static_cast<double>(h1))).epsilon(1e-14));
  CHECK(discrete_l2p_norm(y, m, 2.0) ==
        doctest::Approx(std::pow(static_cast<double>(l2p), 0.25)).epsilon(1e-14));

  // Functional identities used throughout the solver and reports.
  const double e0 = mass_E0(y, m);
  const double l2n = discrete_l2_norm(y, m);
  CHECK(e0 == doctest::Approx(0.5 * l2n * l2n).epsilon(1e-14));
  const double e1 = energy_E1(y, m, 2.0);
  const double h1n = discrete_h1_norm(y, m);
  const double l2pn = discrete_l2p_norm(y, m, 2.0);
  CHECK(e1 == doctest::Approx(0.5 * h1n * h1n + 0.25 * std::pow(l2pn, 4.0))
                  .epsilon(1e-12));
}

TEST_CASE("zero fields and degenerate inputs") {
  const Mesh m = fixtures::two_squares();
  const ComplexField z = ComplexField::zeros(m);
  CHECK(discrete_l2_norm(z, m) == 0.0);
  CHECK(discrete_h1_norm(z, m) == 0.0);
  CHECK(discrete_l2p_norm(z, m, 1.5) == 0.0);
  CHECK(mass_E0(z, m) == 0.0);
  CHECK(energy_E1(z, m, 2.0) == 0.0);
  CHECK(linf_norm(z) == 0.0);

  CHECK_THROWS(discrete_l2p_norm(z, m, 0.5));  // p must be >= 1

  ComplexField wrong;
  wrong.values = {cdouble{1, 0}};
  wrong.mesh_uid = m.uid;  // right uid, wrong length
  CHECK_THROWS(discrete_l2_norm(wrong, m));

  const Mesh other = fixtures::unit_square();
  ComplexField mismatched = ComplexField::zeros(other);
  CHECK_THROWS(discrete_l2_norm(mismatched, m));
}

TEST_CASE("p = 1 reduces the 2p norm to the plain L2 norm") {
  const Mesh m = fixtures::two_squares();
  const ComplexField y = fixtures::field_on(m, {cdouble{0.3, 0.4}, cdouble{-1, 2}});
  CHECK(discrete_l2p_norm(y, m, 1.0) ==
        doctest::Approx(discrete_l2_norm(y, m)).epsilon(1e-15));
}
