#include "bloch2d/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bloch2d {

QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature order must be positive");
  QuadRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration from the Chebyshev-like initial guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1 - x * x) * pp * pp);
  }
  return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels,
                 const QuadRule& rule) {
  const double h = (b - a) / panels;
  double sum = 0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      sum += rule.w[i] * f(c + 0.5 * h * rule.x[i]);
    }
  }
  return sum * 0.5 * h;
}

namespace {

// degree-5 symmetric 7-point rule on the reference triangle
struct TriRule {
  double a1, a2, b1, b2, w0, w1, w2;
};

const TriRule kTri7 = {
    0.0597158717897698, 0.7974269853530873, 0.4701420641051151, 0.1012865073234563,
    0.225,              0.1323941527885062, 0.1259391805448271};

double tri_rule(const std::function<double(const Vec2&)>& f, const Vec2& A, const Vec2& B,
                const Vec2& C, double area) {
  auto at = [&](double l1, double l2) {
    const double l3 = 1 - l1 - l2;
    return f(A * l1 + B * l2 + C * l3);
  };
  double s = kTri7.w0 * at(1.0 / 3, 1.0 / 3);
  s += kTri7.w1 * (at(kTri7.a1, kTri7.b1) + at(kTri7.b1, kTri7.a1) + at(kTri7.b1, kTri7.b1));
  s += kTri7.w2 * (at(kTri7.a2, kTri7.b2) + at(kTri7.b2, kTri7.a2) + at(kTri7.b2, kTri7.b2));
  return s * area;
}

double tri_adapt(const std::function<double(const Vec2&)>& f, const Vec2& A, const Vec2& B,
                 const Vec2& C, double area, double coarse, double tol, int depth) {
  const Vec2 ab = (A + B) / 2, bc = (B + C) / 2, ca = (C + A) / 2;
  const double qarea = area / 4;
  const double s0 = tri_rule(f, A, ab, ca, qarea);
  const double s1 = tri_rule(f, ab, B, bc, qarea);
  const double s2 = tri_rule(f, ca, bc, C, qarea);
  const double s3 = tri_rule(f, ab, bc, ca, qarea);
  const double fine = s0 + s1 + s2 + s3;
  if (depth <= 0) return fine;
  if (std::abs(fine - coarse) <= tol) return fine;
  // halve rather than quarter the budget: |fine - coarse| overestimates the
  // error of the refined value, and a 1/4 split never terminates against
  // integrable singularities (their local error only halves per level)
  const double child_tol = tol / 2;
  return tri_adapt(f, A, ab, ca, qarea, s0, child_tol, depth - 1) +
         tri_adapt(f, ab, B, bc, qarea, s1, child_tol, depth - 1) +
         tri_adapt(f, ca, bc, C, qarea, s2, child_tol, depth - 1) +
         tri_adapt(f, ab, bc, ca, qarea, s3, child_tol, depth - 1);
}

}  // namespace

double integrate_triangle(const std::function<double(const Vec2&)>& f, const Vec2& A,
                          const Vec2& B, const Vec2& C, double rel_tol, int max_depth) {
  const double area = std::abs(cross(B - A, C - A)) / 2;
  if (area == 0) return 0;
  const double coarse = tri_rule(f, A, B, C, area);
  const double scale = std::max(std::abs(coarse), 1e-30);
  return tri_adapt(f, A, B, C, area, coarse, rel_tol * scale, max_depth);
}

double polygon_area(const std::vector<Vec2>& poly) {
  double s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    s += cross(p, q);
  }
  return s / 2;
}

double polygon_inverse_distance_integral(const std::vector<Vec2>& poly, const Vec2& x) {
  // per edge seen from x: signed foot distance d and tangential coordinates
  // [ta, tb]; the wedge integral of 1/r is d (asinh(tb/|d|) - asinh(ta/|d|))
  double sum = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i] - x;
    const Vec2 b = poly[(i + 1) % poly.size()] - x;
    const double len = (b - a).norm();
    if (len < 1e-300) continue;
    const Vec2 e = (b - a) / len;
    const double ta = a.dot(e);
    const double tb = b.dot(e);
    const double d = cross(a, b) / len;
    if (std::abs(d) < 1e-14) continue;
    sum += d * (std::asinh(tb / std::abs(d)) - std::asinh(ta / std::abs(d)));
  }
  return sum;
}

std::vector<Vec2> clip_polygon(const std::vector<Vec2>& poly, const Vec2& n, double c) {
  std::vector<Vec2> out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % m];
    const double dp = p.dot(n) - c;
    const double dq = q.dot(n) - c;
    if (dp <= 0) out.push_back(p);
    if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
      out.push_back(p + (q - p) * (dp / (dp - dq)));
    }
  }
  return out;
}

std::vector<Vec2> wigner_seitz_cell(const BravaisLattice& lat) {
  const double r = 2.5 * std::max(lat.u1.norm(), lat.u2.norm());
  std::vector<Vec2> poly = {{-r, -r}, {r, -r}, {r, r}, {-r, r}};
  for (long i = -2; i <= 2; ++i) {
    for (long j = -2; j <= 2; ++j) {
      if (i == 0 && j == 0) continue;
      const Vec2 u = lat.point({i, j});
      poly = clip_polygon(poly, u, u.norm2() / 2);
      if (poly.size() < 3) throw std::runtime_error("degenerate Wigner-Seitz cell");
    }
  }
  return poly;
}

double exp_self_convolution(double nu, double r) {
  if (nu <= 0) throw std::invalid_argument("decay rate must be positive");
  // product spectrum: conv = (2 pi / nu^2) Int_0^inf s J0(s rho) / (1+s^2)^3 ds,
  // rho = nu r
  const double rho = nu * r;
  static const QuadRule rule = gauss_legendre(12);
  const double smax = 400;
  const double width = std::min(0.25, M_PI / (2 * std::max(rho, 1e-8)));
  const int panels = (int)std::ceil(smax / width);
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    const double lo = p * width;
    const double hi = std::min(smax, lo + width);
    const double c = (lo + hi) / 2, h = (hi - lo) / 2;
    double part = 0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double s = c + h * rule.x[i];
      const double den = 1 + s * s;
      part += rule.w[i] * s * std::cyl_bessel_j(0.0, s * rho) / (den * den * den);
    }
    total += part * h;
    if (lo >= hi) break;
  }
  return 2 * M_PI / (nu * nu) * total;
}

}  // namespace bloch2d
