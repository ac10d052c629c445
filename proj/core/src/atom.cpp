#include "bloch2d/atom.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace bloch2d {

PseudoPotential bump_pseudopotential(double eta, double support) {
  if (support <= 0.0) throw std::invalid_argument("bump_pseudopotential: support > 0");
  PseudoPotential pp;
  pp.eta = eta;
  pp.support = support;
  pp.shape = [support](double r) { return 0.5 * (1.0 + std::cos(M_PI * r / support)); };
  return pp;
}

namespace {

Eigen::MatrixXd hartree_matrix(const RadialGrid& g) {
  Eigen::MatrixXd Kw(g.n, g.n);
  for (int i = 0; i < g.n; ++i) {
    std::vector<double> row = coulomb_row(g, i);
    for (int j = 0; j < g.n; ++j) Kw(i, j) = row[j];
  }
  return Kw;
}

}  // namespace

std::optional<AtomSolution> scf_atom(const PseudoPotential& pp, const RadialGrid& g,
                                     double mixing, double tol, int max_iter) {
  if (!(mixing > 0.0) || mixing > 1.0) throw std::invalid_argument("scf_atom: 0 < mixing <= 1");
  const int n = g.n;
  std::vector<double> vext(n), vop(n);
  for (int i = 0; i < n; ++i) vext[i] = -1.0 / g.r[i] + pp(g.r[i]);

  Eigen::MatrixXd Kw = hartree_matrix(g);
  Eigen::VectorXd rho(n), rho_new(n), vh(n);

  RadialEigen eig = radial_eigensolve(vext, g, 2);
  if (eig.lambda[0] >= 0.0) return std::nullopt;
  for (int i = 0; i < n; ++i) rho[i] = eig.ground[i] * eig.ground[i];

  AtomSolution sol;
  sol.grid = g;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    vh = Kw * rho;
    for (int i = 0; i < n; ++i) vop[i] = vext[i] + vh[i];
    eig = radial_eigensolve(vop, g, 2);
    if (eig.lambda[0] >= -1e-12) return std::nullopt;
    for (int i = 0; i < n; ++i) rho_new[i] = eig.ground[i] * eig.ground[i];

    Eigen::VectorXd vh_new = Kw * rho_new;
    double ekin = radial_kinetic(eig.ground, g), eext = 0.0, dd = 0.0, res = 0.0;
    for (int i = 0; i < n; ++i) {
      eext += g.mass[i] * vext[i] * rho_new[i];
      dd += g.mass[i] * rho_new[i] * vh_new[i];
      res += g.mass[i] * std::abs(rho_new[i] - rho[i]);
    }
    sol.energy_trace.push_back(ekin + eext + 0.5 * dd);
    sol.iterations = it + 1;
    sol.residual = res;
    if (res < tol) {
      rho = rho_new;
      converged = true;
      break;
    }
    rho += mixing * (rho_new - rho);
  }
  if (!converged) throw std::runtime_error("scf_atom: no convergence within max_iter");

  vh = Kw * rho;
  double ekin = radial_kinetic(eig.ground, g), eext = 0.0, dd = 0.0, m1 = 0.0;
  for (int i = 0; i < n; ++i) {
    eext += g.mass[i] * vext[i] * rho[i];
    dd += g.mass[i] * rho[i] * vh[i];
    m1 += g.mass[i] * g.r[i] * g.r[i] * rho[i];
  }
  sol.mu = -eig.lambda[0];
  sol.lambda1 = eig.lambda[1];
  sol.gap = std::min(eig.lambda[1], 0.0) - eig.lambda[0];
  sol.energy = ekin + eext + 0.5 * dd;
  sol.energy_dual = eig.lambda[0] - 0.5 * dd;
  sol.m1 = m1;
  sol.eig_residual = eig.residual;
  sol.v = eig.ground;
  sol.vext = vext;
  sol.vmf.resize(n);
  for (int i = 0; i < n; ++i) sol.vmf[i] = vext[i] + vh[i];
  return sol;
}

DecayReport decay_check(const AtomSolution& sol) {
  DecayReport rep;
  const RadialGrid& g = sol.grid;
  const double lo = 2.0, hi = 0.7 * g.rmax;
  const double root_mu = std::sqrt(sol.mu);
  double rmin = 0.0, rmax = 0.0;
  double sx = 0, sxx = 0, sy = 0, sxy = 0, syc = 0, sxyc = 0;
  int cnt = 0;
  for (int i = 0; i < g.n; ++i) {
    double r = g.r[i];
    if (r < lo || r > hi) continue;
    double v = sol.v[i];
    if (!(v > 0.0)) return rep;  // violated lower bound (e.g. truncated orbital)
    double ratio = v * (1.0 + std::sqrt(r)) * std::exp(root_mu * r);
    if (cnt == 0) {
      rmin = rmax = ratio;
    } else {
      rmin = std::min(rmin, ratio);
      rmax = std::max(rmax, ratio);
    }
    double y = -std::log(v), yc = -std::log(v * (1.0 + std::sqrt(r)));
    sx += r;
    sxx += r * r;
    sy += y;
    sxy += r * y;
    syc += yc;
    sxyc += r * yc;
    ++cnt;
  }
  if (cnt < 8) return rep;
  rep.spread = rmax / rmin;
  double den = cnt * sxx - sx * sx;
  rep.slope = (cnt * sxy - sx * sy) / den;
  rep.slope_corrected = (cnt * sxyc - sx * syc) / den;
  rep.slope_rel = std::abs(rep.slope / root_mu - 1.0);
  rep.pass = rep.spread <= 50.0;
  rep.slope_ok = rep.slope_rel <= 0.05;
  return rep;
}

IonizationReport ionization_check(const std::function<PseudoPotential(double)>& family,
                                  const RadialGrid& g, double eta_lo, double eta_hi,
                                  double width) {
  auto bound = [&](double eta) { return scf_atom(family(eta), g).has_value(); };
  IonizationReport rep;
  rep.lo = eta_lo;
  rep.hi = eta_hi;
  rep.legs = 2;
  if (bound(eta_lo) || !bound(eta_hi))
    throw std::invalid_argument("ionization_check: need unbound at eta_lo, bound at eta_hi");
  while (rep.hi - rep.lo > width) {
    double mid = 0.5 * (rep.lo + rep.hi);
    ++rep.legs;
    (bound(mid) ? rep.hi : rep.lo) = mid;
  }
  return rep;
}

FarFieldReport vmf_far_field(const AtomSolution& sol) {
  const RadialGrid& g = sol.grid;
  FarFieldReport rep;
  rep.m1 = sol.m1;
  int probe = 0;
  for (int i = 1; i < g.n; ++i)
    if (std::abs(g.r[i] - 0.5 * g.rmax) < std::abs(g.r[probe] - 0.5 * g.rmax)) probe = i;
  rep.r_probe = g.r[probe];
  rep.ratio = 4.0 * std::pow(g.r[probe], 3) * sol.vmf[probe] / sol.m1;
  rep.pass = rep.ratio >= 0.9 && rep.ratio <= 1.1;
  return rep;
}

}  // namespace bloch2d
