#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bloch2d/atom.hpp"
#include "bloch2d/radial.hpp"

using namespace bloch2d;

namespace {

// frozen observables of the reference atom (cosine bump, eta = 8.35,
// grid n = 1600, rmax = 20, power 2, mixing 0.5, tol 1e-9), established by an
// independent implementation of the same discretization
constexpr double kRefEta = 8.35;
constexpr double kRefMu = 2.510323562694;
constexpr double kRefI1 = -3.614570885082;
constexpr double kRefM1 = 0.403467063324;

RadialGrid reference_grid() { return make_radial_grid(1600, 20.0); }

AtomSolution reference_solution() {
  auto sol = scf_atom(bump_pseudopotential(kRefEta), reference_grid());
  REQUIRE(sol.has_value());
  return *sol;
}

}  // namespace

TEST_CASE("pseudopotential shape") {
  PseudoPotential pp = bump_pseudopotential(2.0);
  CHECK(pp(0.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(std::abs(pp(0.5) + 1.0) <= 1e-15);
  CHECK(pp(1.0) == 0.0);
  CHECK(pp(7.3) == 0.0);
  PseudoPotential rep = bump_pseudopotential(-3.0, 2.0);
  CHECK(rep(0.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(rep(1.9) > 0.0);
  CHECK(rep(2.0) == 0.0);
  CHECK_THROWS_AS(bump_pseudopotential(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("reference atom fixed point") {
  RadialGrid g = reference_grid();
  AtomSolution sol = reference_solution();

  CHECK(std::abs(sol.mu - kRefMu) <= 1e-5);
  CHECK(std::abs(sol.energy - kRefI1) <= 2e-5);
  CHECK(std::abs(sol.m1 - kRefM1) <= 1e-4);
  CHECK(sol.residual < 1e-9);
  CHECK(sol.iterations <= 40);
  CHECK(sol.eig_residual < 1e-5);

  // the second eigenvalue sits in the continuum, so the gap is mu itself
  CHECK(sol.lambda1 > 0.0);
  CHECK(sol.lambda1 < 0.05);
  CHECK(sol.gap == doctest::Approx(sol.mu).epsilon(1e-12));
  CHECK(sol.gap > 0.0);

  // total energy from the functional and from the eigenvalue route agree
  CHECK(std::abs(sol.energy - sol.energy_dual) <= 2e-6);
  // bound state with negative total energy
  CHECK(sol.energy < 0.0);
  CHECK(g.resolves_tail(sol.mu));

  // orbital invariants: unit mass, positivity, monotone tail
  double nrm = 0.0;
  bool positive = true, monotone = true;
  for (int i = 0; i < g.n; ++i) {
    nrm += g.mass[i] * sol.v[i] * sol.v[i];
    positive = positive && sol.v[i] > 0.0;
    if (i > 0 && g.r[i] > 2.0) monotone = monotone && sol.v[i] < sol.v[i - 1];
  }
  CHECK(std::abs(nrm - 1.0) <= 1e-8);
  CHECK(positive);
  CHECK(monotone);

  // Hartree part of the mean field is positive everywhere
  for (int i = 0; i < g.n; ++i) REQUIRE(sol.vmf[i] - sol.vext[i] > 0.0);

  // the energy trace decreases monotonically under 0.5 mixing
  for (size_t k = 1; k < sol.energy_trace.size(); ++k)
    REQUIRE(sol.energy_trace[k] <= sol.energy_trace[k - 1] + 1e-10);
}

TEST_CASE("bare Hartree atom still binds") {
  // with no core correction the operator keeps a weakly bound state on this
  // grid; treated as an experiment, the observed value is pinned loosely
  auto sol = scf_atom(bump_pseudopotential(0.0), reference_grid());
  REQUIRE(sol.has_value());
  CHECK(sol->mu > 0.12);
  CHECK(sol->mu < 0.15);
}

TEST_CASE("minimality against gaussian trials") {
  RadialGrid g = make_radial_grid(800, 20.0);
  auto sol = scf_atom(bump_pseudopotential(kRefEta), g);
  REQUIRE(sol.has_value());
  for (double sigma : {0.3, 0.5, 0.8, 1.2}) {
    std::vector<double> u(g.n);
    double nrm = 0.0;
    for (int i = 0; i < g.n; ++i) {
      u[i] = std::exp(-g.r[i] * g.r[i] / (2.0 * sigma * sigma));
      nrm += g.mass[i] * u[i] * u[i];
    }
    nrm = std::sqrt(nrm);
    for (double& x : u) x /= nrm;
    std::vector<double> rho(g.n);
    for (int i = 0; i < g.n; ++i) rho[i] = u[i] * u[i];
    std::vector<double> vh = radial_coulomb(rho, g);
    double e = radial_kinetic(u, g);
    for (int i = 0; i < g.n; ++i)
      e += g.mass[i] * (sol->vext[i] * rho[i] + 0.5 * rho[i] * vh[i]);
    CHECK(sol->energy <= e);
  }
}

TEST_CASE("decay envelope and tail slope") {
  AtomSolution sol = reference_solution();

  DecayReport rep = decay_check(sol);
  CHECK(rep.pass);
  CHECK(rep.spread >= 1.2);
  CHECK(rep.spread <= 1.5);
  CHECK(rep.slope_ok);
  CHECK(rep.slope_rel <= 0.05);
  CHECK(rep.slope_corrected == doctest::Approx(std::sqrt(sol.mu)).epsilon(0.02));

  SUBCASE("truncated orbital fails the lower bound") {
    AtomSolution cut = sol;
    for (int i = 0; i < cut.grid.n; ++i)
      if (cut.grid.r[i] > 0.5 * cut.grid.rmax) cut.v[i] = 0.0;
    DecayReport bad = decay_check(cut);
    CHECK_FALSE(bad.pass);
  }

  SUBCASE("hydrogenic tail") {
    // e^{-r} has no subexponential prefactor, so the raw slope is exact and
    // the compensated ratio spread is (1+sqrt(28))/(1+sqrt(2))
    RadialGrid g = make_radial_grid(4000, 40.0);
    std::vector<double> V(g.n);
    for (int i = 0; i < g.n; ++i) V[i] = -1.0 / g.r[i];
    RadialEigenpair hyd = lowest_radial_eigenpair(V, g);
    REQUIRE(hyd.bound);
    AtomSolution fake;
    fake.mu = -hyd.lambda;
    fake.v = hyd.u;
    fake.grid = g;
    DecayReport hrep = decay_check(fake);
    CHECK(hrep.pass);
    CHECK(hrep.spread == doctest::Approx(2.605).epsilon(0.02));
    CHECK(hrep.slope_rel < 0.01);
  }
}

TEST_CASE("ionization threshold bisection") {
  RadialGrid g = make_radial_grid(800, 20.0);
  auto family = [](double eta) { return bump_pseudopotential(eta); };

  // strongly repulsive end of the family loses the bound state entirely
  CHECK_FALSE(scf_atom(bump_pseudopotential(-30.0), g).has_value());
  CHECK_FALSE(scf_atom(bump_pseudopotential(-2.0), g).has_value());
  CHECK(scf_atom(bump_pseudopotential(2.0), g).has_value());

  IonizationReport rep = ionization_check(family, g, -2.0, 2.0);
  CHECK(rep.hi - rep.lo <= 1e-3);
  double mid = 0.5 * (rep.lo + rep.hi);
  CHECK(mid > -0.52);   // frozen: threshold near -0.506 on this grid
  CHECK(mid < -0.49);
  CHECK(rep.legs >= 12);

  CHECK_THROWS_AS(ionization_check(family, g, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("far-field detector") {
  AtomSolution sol = reference_solution();
  FarFieldReport rep = vmf_far_field(sol);
  CHECK(rep.pass);
  CHECK(rep.ratio == doctest::Approx(0.994).epsilon(0.02));
  CHECK(rep.m1 > 0.0);
  CHECK(std::abs(rep.r_probe - 10.0) < 0.05);

  SUBCASE("distinguishes a bare Coulomb tail") {
    RadialGrid g = sol.grid;
    std::vector<double> V(g.n);
    for (int i = 0; i < g.n; ++i) V[i] = -1.0 / g.r[i];
    RadialEigenpair hyd = lowest_radial_eigenpair(V, g);
    AtomSolution fake;
    fake.grid = g;
    fake.v = hyd.u;
    fake.mu = -hyd.lambda;
    fake.vmf = V;  // no Hartree screening: V_MF ~ -1/r instead of m1/(4r^3)
    fake.m1 = 0.0;
    for (int i = 0; i < g.n; ++i)
      fake.m1 += g.mass[i] * g.r[i] * g.r[i] * hyd.u[i] * hyd.u[i];
    FarFieldReport frep = vmf_far_field(fake);
    CHECK_FALSE(frep.pass);
    CHECK(frep.ratio < 0.0);
  }
}

TEST_CASE("scf argument and failure paths") {
  RadialGrid g = make_radial_grid(400, 15.0);
  CHECK_THROWS_AS(scf_atom(bump_pseudopotential(1.0), g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scf_atom(bump_pseudopotential(1.0), g, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(scf_atom(bump_pseudopotential(8.0), g, 0.5, 1e-16, 3), std::runtime_error);
}
