#pragma once

#include <string>
#include <vector>

namespace bloch2d {

// Graded radial mesh for the s-wave operator -u'' - u'/r + V u in flux form.
// Nodes r_i = rmax ((i+1)/(n+1))^power keep the first node off zero; the
// origin carries the natural zero-flux condition and rmax a Dirichlet wall.
struct RadialGrid {
  int n = 0;
  double rmax = 0.0;
  double power = 2.0;
  std::vector<double> r;     // nodes, strictly increasing
  std::vector<double> rh;    // n+1 cell edges, rh[0] = 0
  std::vector<double> mass;  // annulus areas pi (rh[i+1]^2 - rh[i]^2)
  std::vector<double> cond;  // flux coefficients 2 pi rh[i+1] / h_i (last one to the wall)

  std::string describe() const;
  // tail resolution guard: rmax >= 30 / sqrt(mu_est)
  bool resolves_tail(double mu_est) const;
};

RadialGrid make_radial_grid(int n, double rmax, double power = 2.0);

// k lowest eigenvalues of the discretized operator plus the positive ground
// eigenvector, normalized so that sum_i mass_i v_i^2 = 1
struct RadialEigen {
  std::vector<double> lambda;
  std::vector<double> ground;
  double residual = 0.0;  // |T w - lambda_0 w|_2 of the unit coefficient vector
};
RadialEigen radial_eigensolve(const std::vector<double>& V, const RadialGrid& g, int k = 2);

// distinguished outcome: bound == false means no negative eigenvalue
struct RadialEigenpair {
  bool bound = false;
  double lambda = 0.0;
  std::vector<double> u;
};
RadialEigenpair lowest_radial_eigenpair(const std::vector<double>& V, const RadialGrid& g);

// kinetic quadratic form int |grad u|^2 of mass-normalized samples
double radial_kinetic(const std::vector<double>& v, const RadialGrid& g);

// complete elliptic integral K of the first kind from the complementary
// modulus k' = sqrt(1 - k^2), by the arithmetic-geometric mean
double elliptic_K_comp(double kprime);

// angular average of 1/|x-y| for radii r, r':
// kappa(r, r') = 4/(r+r') K(2 sqrt(r r')/(r+r'))
double radial_coulomb_kernel(double r, double rp);

// quadrature weights of V(r_i) = int rho(r') kappa(r_i, r') r' dr' against
// cell values rho_j; the log part of the kernel is integrated exactly over
// every cell, so the row is accurate through the diagonal
std::vector<double> coulomb_row(const RadialGrid& g, int i);

// radial Hartree potential of a nonnegative density (throws otherwise)
std::vector<double> radial_coulomb(const std::vector<double>& rho, const RadialGrid& g);
double radial_coulomb_at(const std::vector<double>& rho, const RadialGrid& g, int i);

}  // namespace bloch2d
