#pragma once

#include <functional>
#include <vector>

#include "bloch2d/lattice.hpp"
#include "bloch2d/vec2.hpp"

namespace bloch2d {

// Gauss-Legendre nodes and weights on [-1, 1]
struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

QuadRule gauss_legendre(int n);

double integrate(const std::function<double(double)>& f, double a, double b, int panels,
                 const QuadRule& rule);

// adaptive quadrature over the triangle (A, B, C); handles integrable point
// singularities by recursive subdivision
double integrate_triangle(const std::function<double(const Vec2&)>& f, const Vec2& A,
                          const Vec2& B, const Vec2& C, double rel_tol, int max_depth = 30);

// area and centroid of a simple polygon with counterclockwise vertices
double polygon_area(const std::vector<Vec2>& poly);

// exact value of the integral of 1 / |x - y| over the polygon (dy); valid for
// x inside, outside, or on the boundary
double polygon_inverse_distance_integral(const std::vector<Vec2>& poly, const Vec2& x);

// intersect a convex polygon with the half-plane { y : y.n <= c }
std::vector<Vec2> clip_polygon(const std::vector<Vec2>& poly, const Vec2& n, double c);

// Wigner-Seitz cell of the lattice, a convex polygon around the origin
std::vector<Vec2> wigner_seitz_cell(const BravaisLattice& lat);

// (e^{-nu|.|} * e^{-nu|.|})(x) at |x| = r, evaluated by Hankel-transform
// quadrature of the product spectrum
double exp_self_convolution(double nu, double r);

}  // namespace bloch2d
