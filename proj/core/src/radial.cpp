#include "bloch2d/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bloch2d {

RadialGrid make_radial_grid(int n, double rmax, double power) {
  if (n < 8 || rmax <= 0.0 || power < 1.0)
    throw std::invalid_argument("make_radial_grid: need n >= 8, rmax > 0, power >= 1");
  RadialGrid g;
  g.n = n;
  g.rmax = rmax;
  g.power = power;
  g.r.resize(n);
  for (int i = 0; i < n; ++i)
    g.r[i] = rmax * std::pow(double(i + 1) / double(n + 1), power);
  g.rh.resize(n + 1);
  g.rh[0] = 0.0;
  for (int i = 1; i < n; ++i) g.rh[i] = 0.5 * (g.r[i - 1] + g.r[i]);
  g.rh[n] = 0.5 * (g.r[n - 1] + rmax);
  g.mass.resize(n);
  for (int i = 0; i < n; ++i)
    g.mass[i] = M_PI * (g.rh[i + 1] * g.rh[i + 1] - g.rh[i] * g.rh[i]);
  g.cond.resize(n);
  for (int i = 0; i < n - 1; ++i) g.cond[i] = 2 * M_PI * g.rh[i + 1] / (g.r[i + 1] - g.r[i]);
  g.cond[n - 1] = 2 * M_PI * g.rh[n] / (rmax - g.r[n - 1]);
  return g;
}

std::string RadialGrid::describe() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "graded power-%.3g grid, n=%d, rmax=%.6g", power, n, rmax);
  return buf;
}

bool RadialGrid::resolves_tail(double mu_est) const {
  return mu_est > 0.0 && rmax >= 30.0 / std::sqrt(mu_est);
}

namespace {

// symmetric tridiagonal of the flux-form operator: diag d, subdiagonal e
void operator_tridiag(const std::vector<double>& V, const RadialGrid& g,
                      std::vector<double>& d, std::vector<double>& e) {
  const int n = g.n;
  if ((int)V.size() != n) throw std::invalid_argument("potential length mismatch");
  d.resize(n);
  e.resize(n - 1);
  for (int i = 0; i < n; ++i) {
    double c_left = (i == 0) ? 0.0 : g.cond[i - 1];
    d[i] = (g.cond[i] + c_left) / g.mass[i] + V[i];
  }
  for (int i = 0; i + 1 < n; ++i) e[i] = -g.cond[i] / std::sqrt(g.mass[i] * g.mass[i + 1]);
}

// number of eigenvalues strictly below x (Sturm sequence on the LDL pivots)
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  int cnt = 0;
  double q = d[0] - x;
  if (q < 0) ++cnt;
  for (size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = -1e-300;
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q < 0) ++cnt;
  }
  return cnt;
}

// k-th smallest eigenvalue (k = 0, 1, ...) by bisection
double bisect_eigenvalue(const std::vector<double>& d, const std::vector<double>& e, int k) {
  double lo = d[0], hi = d[0];
  for (size_t i = 0; i < d.size(); ++i) {
    double radius = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < d.size() ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - radius);
    hi = std::max(hi, d[i] + radius);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// solve (T - shift) w = b when the shift sits strictly below the spectrum;
// the factor is then an M-matrix, so elimination needs no pivoting and maps
// positive data to positive solutions. Returns false if a pivot fails.
bool mmatrix_solve(const std::vector<double>& d, const std::vector<double>& e, double shift,
                   const std::vector<double>& b, std::vector<double>& w) {
  const size_t n = d.size();
  std::vector<double> q(n), y(n);
  q[0] = d[0] - shift;
  if (q[0] <= 0.0) return false;
  y[0] = b[0];
  for (size_t i = 1; i < n; ++i) {
    double l = e[i - 1] / q[i - 1];
    q[i] = d[i] - shift - e[i - 1] * l;
    if (q[i] <= 0.0) return false;
    y[i] = b[i] - l * y[i - 1];
  }
  w.resize(n);
  w[n - 1] = y[n - 1] / q[n - 1];
  for (size_t i = n - 1; i-- > 0;) w[i] = (y[i] - e[i] * w[i + 1]) / q[i];
  return true;
}

}  // namespace

RadialEigen radial_eigensolve(const std::vector<double>& V, const RadialGrid& g, int k) {
  if (k < 1) throw std::invalid_argument("radial_eigensolve: k >= 1");
  std::vector<double> d, e;
  operator_tridiag(V, g, d, e);
  RadialEigen out;
  out.lambda.resize(k);
  for (int j = 0; j < k; ++j) out.lambda[j] = bisect_eigenvalue(d, e, j);

  // ground vector by shifted inverse power; the shift stays below lambda_0,
  // which keeps the factorization an M-matrix and the iterates positive. The
  // sweep count follows the contraction delta/(gap+delta) so that the slowly
  // decaying excited component is damped out of the far tail as well.
  double scale = 0.0;
  for (double x : d) scale = std::max(scale, std::abs(x));
  double gap = (k >= 2 ? out.lambda[1] : bisect_eigenvalue(d, e, 1)) - out.lambda[0];
  double delta = std::max(1e-10, 30.0 * 2.22e-16 * scale);
  std::vector<double> w(g.n), b(g.n);
  for (int i = 0; i < g.n; ++i) b[i] = std::sqrt(g.mass[i]);
  bool ok = false;
  for (int attempt = 0; attempt < 4 && !ok; ++attempt, delta *= 32.0) {
    double contr = delta / std::max(gap + delta, 2.0 * delta);
    int sweeps = std::clamp((int)std::ceil(std::log(1e-15) / std::log(contr)), 3, 48);
    ok = true;
    std::vector<double> cur = b;
    for (int sweep = 0; sweep < sweeps && ok; ++sweep) {
      ok = mmatrix_solve(d, e, out.lambda[0] - delta, cur, w);
      if (!ok) break;
      double nrm = 0.0;
      for (double x : w) nrm = std::max(nrm, std::abs(x));
      for (double& x : w) x /= nrm;
      cur = w;
    }
  }
  if (!ok) throw std::runtime_error("radial_eigensolve: inverse iteration failed");

  double nrm2 = 0.0;
  for (double x : w) nrm2 += x * x;
  nrm2 = std::sqrt(nrm2);
  for (double& x : w) x /= nrm2;
  // Rayleigh quotient refines the bisection value at no extra cost
  double rq = 0.0, res2 = 0.0;
  for (int i = 0; i < g.n; ++i) {
    double tw = d[i] * w[i] + (i > 0 ? e[i - 1] * w[i - 1] : 0.0) +
                (i + 1 < g.n ? e[i] * w[i + 1] : 0.0);
    rq += w[i] * tw;
  }
  for (int i = 0; i < g.n; ++i) {
    double tw = d[i] * w[i] + (i > 0 ? e[i - 1] * w[i - 1] : 0.0) +
                (i + 1 < g.n ? e[i] * w[i + 1] : 0.0);
    res2 += (tw - rq * w[i]) * (tw - rq * w[i]);
  }
  out.lambda[0] = rq;
  out.residual = std::sqrt(res2);

  out.ground.resize(g.n);
  double norm_mass = 0.0;
  for (int i = 0; i < g.n; ++i) {
    out.ground[i] = w[i] / std::sqrt(g.mass[i]);
    norm_mass += g.mass[i] * out.ground[i] * out.ground[i];
  }
  norm_mass = std::sqrt(norm_mass);
  for (double& x : out.ground) x /= norm_mass;
  return out;
}

RadialEigenpair lowest_radial_eigenpair(const std::vector<double>& V, const RadialGrid& g) {
  RadialEigen eig = radial_eigensolve(V, g, 1);
  RadialEigenpair out;
  out.lambda = eig.lambda[0];
  out.bound = eig.lambda[0] < -1e-12;
  out.u = std::move(eig.ground);
  return out;
}

double radial_kinetic(const std::vector<double>& v, const RadialGrid& g) {
  if ((int)v.size() != g.n) throw std::invalid_argument("radial_kinetic: length mismatch");
  double sum = 0.0;
  for (int i = 0; i + 1 < g.n; ++i) sum += g.cond[i] * (v[i + 1] - v[i]) * (v[i + 1] - v[i]);
  sum += g.cond[g.n - 1] * v[g.n - 1] * v[g.n - 1];  // ghost value 0 at the wall
  return sum;
}

double elliptic_K_comp(double kprime) {
  if (!(kprime > 0.0) || kprime > 1.0)
    throw std::domain_error("elliptic_K_comp: need 0 < k' <= 1");
  double a = 1.0, bm = kprime;
  for (int it = 0; it < 60 && std::abs(a - bm) > 1e-16 * a; ++it) {
    double an = 0.5 * (a + bm);
    bm = std::sqrt(a * bm);
    a = an;
  }
  return M_PI / (2.0 * a);
}

double radial_coulomb_kernel(double r, double rp) {
  if (r <= 0.0 || rp <= 0.0) throw std::domain_error("radial_coulomb_kernel: radii > 0");
  if (r == rp) throw std::domain_error("radial_coulomb_kernel: diagonal is singular");
  return 4.0 / (r + rp) * elliptic_K_comp(std::abs(r - rp) / (r + rp));
}

std::vector<double> coulomb_row(const RadialGrid& g, int i) {
  if (i < 0 || i >= g.n) throw std::out_of_range("coulomb_row: node index");
  const double ri = g.r[i];
  auto F = [](double s) { return s == 0.0 ? 0.0 : s * (std::log(std::abs(s)) - 1.0); };
  std::vector<double> w(g.n);
  for (int j = 0; j < g.n; ++j) {
    const double rj = g.r[j];
    const double dj = g.rh[j + 1] - g.rh[j];
    // K(k) + ln|r - r'| extends smoothly through the diagonal (limit ln 4(r+r'))
    double kln;
    if (j == i)
      kln = std::log(8.0 * ri);
    else
      kln = elliptic_K_comp(std::abs(ri - rj) / (ri + rj)) + std::log(std::abs(ri - rj));
    double ilog = F(g.rh[j + 1] - ri) - F(g.rh[j] - ri);
    w[j] = 4.0 * rj / (ri + rj) * (kln * dj - ilog);
  }
  return w;
}

double radial_coulomb_at(const std::vector<double>& rho, const RadialGrid& g, int i) {
  std::vector<double> w = coulomb_row(g, i);
  double sum = 0.0;
  for (int j = 0; j < g.n; ++j) sum += w[j] * rho[j];
  return sum;
}

std::vector<double> radial_coulomb(const std::vector<double>& rho, const RadialGrid& g) {
  if ((int)rho.size() != g.n) throw std::invalid_argument("radial_coulomb: length mismatch");
  for (double x : rho)
    if (x < 0.0) throw std::invalid_argument("radial_coulomb: density must be nonnegative");
  std::vector<double> out(g.n);
  for (int i = 0; i < g.n; ++i) out[i] = radial_coulomb_at(rho, g, i);
  return out;
}

}  // namespace bloch2d
