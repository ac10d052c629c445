#include "bloch2d/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bloch2d/quadrature.hpp"

namespace bloch2d {

namespace {

// index reach of |i u1 + j u2| <= radius: |i| = |p . v1| / 2 pi <= radius |v1| / 2 pi
std::vector<Vec2> points_in_ball(const BravaisLattice& lat, double radius, bool skip_origin) {
  const long bi = (long)std::ceil(radius * lat.v1.norm() / (2 * M_PI)) + 1;
  const long bj = (long)std::ceil(radius * lat.v2.norm() / (2 * M_PI)) + 1;
  std::vector<Vec2> pts;
  for (long i = -bi; i <= bi; ++i) {
    for (long j = -bj; j <= bj; ++j) {
      if (skip_origin && i == 0 && j == 0) continue;
      const Vec2 p = lat.point({i, j});
      if (p.norm() <= radius) pts.push_back(p);
    }
  }
  return pts;
}

std::vector<Vec2> dual_points_in_ball(const BravaisLattice& lat, double radius) {
  const long bi = (long)std::ceil(radius * lat.u1.norm() / (2 * M_PI)) + 1;
  const long bj = (long)std::ceil(radius * lat.u2.norm() / (2 * M_PI)) + 1;
  std::vector<Vec2> pts;
  for (long i = -bi; i <= bi; ++i) {
    for (long j = -bj; j <= bj; ++j) {
      if (i == 0 && j == 0) continue;
      const Vec2 p = lat.dual_point({i, j});
      if (p.norm() <= radius) pts.push_back(p);
    }
  }
  return pts;
}

// displacement from x to the nearest lattice point
double lattice_distance(const BravaisLattice& lat, const Vec2& x) {
  return (x - lat.point(lat.nearest(x))).norm();
}

// reduce to the home cell (fractional parts in [0,1)) so the tabulated
// real-space list always covers the erfc reach
Vec2 reduce_to_cell(const BravaisLattice& lat, const Vec2& x) {
  Vec2 f = lat.fractional(x);
  f.x -= std::floor(f.x);
  f.y -= std::floor(f.y);
  return lat.u1 * f.x + lat.u2 * f.y;
}

// mean-zero kernel: Gaussian-split resummation of sum_{v!=0} c_v e^{i v.x}
double w0_value(const PeriodicKernel& kern, const Vec2& x0) {
  const Vec2 x = reduce_to_cell(kern.lattice, x0);
  double recip = 0;
  for (std::size_t i = 0; i < kern.kvecs.size(); ++i) {
    recip += kern.kcoef[i] * std::cos(kern.kvecs[i].dot(x));
  }
  double real = 0;
  for (const Vec2& u : kern.uvecs) {
    const double d = (x - u).norm();
    if (d < 1e-12) continue;
    real += std::erfc(d / (2 * kern.eta)) / d;
  }
  return recip + real + kern.self_const;
}

// un-normalized Madelung sum with smooth shell cutoff at radius R
double madelung_raw(const PeriodicKernel& kern, const Vec2& x,
                    const std::vector<std::pair<Vec2, double>>& pts, double R) {
  const double inv_area = 1.0 / kern.lattice.cell_area;
  double sum = 0;
  for (const auto& [u, unorm] : pts) {
    if (unorm > R) continue;
    double w = 1;
    if (unorm > R / 2) {
      const double t = (unorm - R / 2) / (R / 2);
      w = 1 - t * t * t * (t * (t * 6 - 15) + 10);
    }
    if (w == 0) continue;
    const Vec2 z = x - u;
    const double f =
        1.0 / z.norm() - inv_area * polygon_inverse_distance_integral(kern.ws, z);
    sum += w * f;
  }
  return sum;
}

double madelung_extrapolated(const PeriodicKernel& kern, const Vec2& x0, int shells) {
  const Vec2 x = reduce_to_cell(kern.lattice, x0);
  const double umax = std::max(kern.lattice.u1.norm(), kern.lattice.u2.norm());
  std::vector<double> radii;
  for (int j = 0; j < shells; ++j) radii.push_back(20 * umax * std::pow(2.0, j));
  std::vector<std::pair<Vec2, double>> pts;
  for (const Vec2& u : points_in_ball(kern.lattice, radii.back() + 1, false)) {
    pts.emplace_back(u, u.norm());
  }
  std::vector<double> s;
  for (double R : radii) s.push_back(madelung_raw(kern, x, pts, R));
  // Neville in t = 1/R
  for (std::size_t m = 1; m < s.size(); ++m) {
    for (std::size_t i = 0; i + m < s.size(); ++i) {
      const double ti = 1 / radii[i], tm = 1 / radii[i + m];
      s[i] = s[i + 1] + (s[i + 1] - s[i]) * tm / (ti - tm);
    }
  }
  return s[0];
}

// Nelder-Mead in fractional coordinates
Vec2 minimize_in_cell(const PeriodicKernel& kern, Vec2 frac0, double& fmin) {
  auto val = [&](const Vec2& f) {
    const Vec2 x = kern.lattice.u1 * f.x + kern.lattice.u2 * f.y;
    if (lattice_distance(kern.lattice, x) < 1e-9) return 1e300;
    return w0_value(kern, x);
  };
  Vec2 p[3] = {frac0, frac0 + Vec2{0.02, 0}, frac0 + Vec2{0, 0.02}};
  double f[3] = {val(p[0]), val(p[1]), val(p[2])};
  for (int it = 0; it < 400; ++it) {
    int lo = 0, hi = 0;
    for (int i = 1; i < 3; ++i) {
      if (f[i] < f[lo]) lo = i;
      if (f[i] > f[hi]) hi = i;
    }
    if (std::abs(f[hi] - f[lo]) < 1e-15 * (std::abs(f[lo]) + 1e-30)) break;
    const int mid = 3 - lo - hi;
    const Vec2 cen = (p[lo] + p[mid]) / 2;
    const Vec2 refl = cen + (cen - p[hi]);
    const double fr = val(refl);
    if (fr < f[lo]) {
      const Vec2 exp2 = cen + (cen - p[hi]) * 2;
      const double fe = val(exp2);
      if (fe < fr) {
        p[hi] = exp2;
        f[hi] = fe;
      } else {
        p[hi] = refl;
        f[hi] = fr;
      }
    } else if (fr < f[mid]) {
      p[hi] = refl;
      f[hi] = fr;
    } else {
      const Vec2 con = cen + (p[hi] - cen) * 0.5;
      const double fc = val(con);
      if (fc < f[hi]) {
        p[hi] = con;
        f[hi] = fc;
      } else {
        p[mid] = p[lo] + (p[mid] - p[lo]) * 0.5;
        p[hi] = p[lo] + (p[hi] - p[lo]) * 0.5;
        f[mid] = val(p[mid]);
        f[hi] = val(p[hi]);
      }
    }
  }
  int lo = 0;
  for (int i = 1; i < 3; ++i) {
    if (f[i] < f[lo]) lo = i;
  }
  fmin = f[lo];
  return kern.lattice.u1 * p[lo].x + kern.lattice.u2 * p[lo].y;
}

}  // namespace

PeriodicKernel make_kernel(const BravaisLattice& unit_lattice, double L) {
  if (L <= 0) throw std::invalid_argument("lattice scale must be positive");
  PeriodicKernel kern;
  kern.lattice = make_bravais(unit_lattice.u1 * L, unit_lattice.u2 * L);
  kern.L = L;
  kern.eta = 0.55 * std::sqrt(kern.lattice.cell_area);
  kern.ws = wigner_seitz_cell(kern.lattice);

  const double area = kern.lattice.cell_area;
  for (const Vec2& v : dual_points_in_ball(kern.lattice, 6.2 / kern.eta)) {
    // keep one representative of each +-v pair; accumulate as cosines
    if (v.y > 1e-12 || (std::abs(v.y) <= 1e-12 && v.x > 0)) {
      kern.kvecs.push_back(v);
      kern.kcoef.push_back(2 * (2 * M_PI / (area * v.norm())) * std::erfc(kern.eta * v.norm()));
    }
  }
  const double umax = std::max(kern.lattice.u1.norm(), kern.lattice.u2.norm());
  kern.uvecs = points_in_ball(kern.lattice, 12.5 * kern.eta + 2.2 * umax, false);
  kern.self_const = -4 * std::sqrt(M_PI) * kern.eta / area;

  // normalization: locate the minimum of the mean-zero kernel
  double best = 1e300;
  Vec2 bestf{0, 0};
  const int n = 48;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 f{(i + 0.5) / n, (j + 0.5) / n};
      const Vec2 x = kern.lattice.u1 * f.x + kern.lattice.u2 * f.y;
      const double w = w0_value(kern, x);
      if (w < best) {
        best = w;
        bestf = f;
      }
    }
  }
  double fmin = 0;
  kern.xmin = minimize_in_cell(kern, bestf, fmin);
  kern.M = -L * fmin;

  // independent real-space route for the offset
  kern.Mprime = -L * madelung_extrapolated(kern, kern.xmin, 2);

  // near-origin constant: a/L = M/L + lim (W0(x) - 1/|x|)
  double c0 = kern.self_const - 1 / (kern.eta * std::sqrt(M_PI));
  for (std::size_t i = 0; i < kern.kvecs.size(); ++i) c0 += kern.kcoef[i];
  for (const Vec2& u : kern.uvecs) {
    const double d = u.norm();
    if (d < 1e-12) continue;
    c0 += std::erfc(d / (2 * kern.eta)) / d;
  }
  kern.a = kern.M + L * c0;
  return kern;
}

double kernel_coefficient_plain(const PeriodicKernel& kern, const Vec2& v) {
  const Vec2 m{v.dot(kern.lattice.u1) / (2 * M_PI), v.dot(kern.lattice.u2) / (2 * M_PI)};
  if (std::abs(m.x - std::round(m.x)) > 1e-9 || std::abs(m.y - std::round(m.y)) > 1e-9) {
    throw std::invalid_argument("not a reciprocal lattice vector");
  }
  if (v.norm() < 1e-12) return kern.M / kern.L;
  return 2 * M_PI / (kern.lattice.cell_area * v.norm());
}

double kernel_coefficient(const PeriodicKernel& kern, const Vec2& v) {
  const double plain = kernel_coefficient_plain(kern, v);
  if (v.norm() < 1e-12) return plain;
  return plain * std::sqrt(kern.lattice.cell_area);
}

double evaluate_fourier(const PeriodicKernel& kern, const Vec2& x, double cutoff) {
  const double vmin = std::min(kern.lattice.v1.norm(), kern.lattice.v2.norm());
  if (cutoff <= vmin) throw std::invalid_argument("cutoff below the smallest dual vector");
  double sum = kern.M / kern.L;
  const double area = kern.lattice.cell_area;
  for (const Vec2& v : dual_points_in_ball(kern.lattice, cutoff)) {
    sum += 2 * M_PI / (area * v.norm()) * std::cos(v.dot(x));
  }
  return sum;
}

double fourier_truncation_estimate(const PeriodicKernel& kern, const Vec2& x, double cutoff) {
  const double d = std::max(lattice_distance(kern.lattice, x), 1e-6);
  return 1.0 / d * std::sqrt(2 / (M_PI * cutoff * d));
}

double kernel_value(const PeriodicKernel& kern, const Vec2& x) {
  if (lattice_distance(kern.lattice, x) < 1e-9) throw std::domain_error("kernel singularity");
  return w0_value(kern, x) + kern.M / kern.L;
}

double evaluate_madelung(const PeriodicKernel& kern, const Vec2& x, int shells) {
  if (shells < 2) throw std::invalid_argument("need at least two shell radii");
  if (lattice_distance(kern.lattice, x) < 1e-9) throw std::domain_error("kernel singularity");
  return madelung_extrapolated(kern, x, shells) + kern.Mprime / kern.L;
}

std::map<IVec2, std::complex<double>> periodic_hartree(
    const PeriodicKernel& kern, const std::map<IVec2, std::complex<double>>& density) {
  std::map<IVec2, std::complex<double>> out;
  for (const auto& [m, rho] : density) {
    const Vec2 v = kern.lattice.dual_point(m);
    const double factor = (v.norm() < 1e-12)
                              ? kern.lattice.cell_area * kern.M / kern.L
                              : 2 * M_PI / v.norm();
    out[m] = rho * factor;
  }
  return out;
}

std::pair<double, double> poisson_check(double alpha, const BravaisLattice& lat, const Vec2& x) {
  if (alpha <= 0) throw std::invalid_argument("Gaussian width must be positive");
  double lhs = 1.0 / (2 * alpha);  // v = 0 term of (1/(2 alpha)) e^{-|v|^2/(4 alpha)}
  for (const Vec2& v : dual_points_in_ball(lat, 2 * std::sqrt(41.5 * alpha))) {
    lhs += 1.0 / (2 * alpha) * std::exp(-v.norm2() / (4 * alpha)) * std::cos(v.dot(x));
  }
  lhs *= 2 * M_PI / lat.cell_area;
  double rhs = 0;
  const double reach = std::sqrt(41.5 / alpha) + x.norm();
  for (const Vec2& u : points_in_ball(lat, reach, false)) {
    rhs += std::exp(-alpha * (u + x).norm2());
  }
  return {lhs, rhs};
}

std::pair<double, double> convolution_bracket(double nu, double r) {
  const double base = (1 + nu * r) * std::exp(-nu * r) / (nu * nu);
  return {base, M_PI / 2 * base};
}

}  // namespace bloch2d
