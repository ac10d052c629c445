#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "bloch2d/lattice.hpp"
#include "bloch2d/vec2.hpp"

namespace bloch2d {

// Periodized planar Coulomb kernel W on a Bravais lattice scaled by L.
// Normalization: min W = 0; the cell average is then M / L, and
//   W(x) = M/L + sum_{v != 0} 2 pi / (|Gamma_L| |v|) e^{i v.x}.
struct PeriodicKernel {
  BravaisLattice lattice;  // primitive vectors of the scaled lattice
  double L = 1;            // dilation relative to the reference lattice
  double M = 0;            // cell-average constant (reference scale)
  double Mprime = 0;       // offset normalizing the real-space sum; equals M
                           // up to the representation error
  double a = 0;            // near-origin constant: W(x) - 1/|x| -> a/L
  double eta = 0;          // Gaussian split length of the resummed evaluator
  Vec2 xmin;               // location of the kernel minimum

  // tabulated split-series data
  std::vector<Vec2> kvecs;    // one of each +-v pair
  std::vector<double> kcoef;  // 2 c_v erfc(eta |v|)
  std::vector<Vec2> uvecs;    // real-space points within erfc reach
  double self_const = 0;
  std::vector<Vec2> ws;  // Wigner-Seitz cell of the scaled lattice
};

PeriodicKernel make_kernel(const BravaisLattice& unit_lattice, double L = 1.0);

// Fourier coefficient: M/L at v = 0, else 2 pi / (sqrt(|Gamma_L|) |v|) in the
// L^2-normalized plane-wave basis. Throws if v is off the reciprocal lattice.
double kernel_coefficient(const PeriodicKernel& kern, const Vec2& v);

// coefficient in the plain exponential basis e^{i v.x}
double kernel_coefficient_plain(const PeriodicKernel& kern, const Vec2& v);

// sharply truncated Fourier sum over |v| <= cutoff
double evaluate_fourier(const PeriodicKernel& kern, const Vec2& x, double cutoff);

// stationary-phase envelope of the truncation error of evaluate_fourier
double fourier_truncation_estimate(const PeriodicKernel& kern, const Vec2& x, double cutoff);

// the same Fourier series resummed to its infinite-cutoff limit (Gaussian
// split); machine precision away from lattice points
double kernel_value(const PeriodicKernel& kern, const Vec2& x);

// real-space route: shell sums of the per-cell neutralized 1/|x| with a
// smooth shell cutoff and Richardson extrapolation in the shell radius;
// shells >= 2 doubling radii
double evaluate_madelung(const PeriodicKernel& kern, const Vec2& x, int shells);

// periodic Hartree potential of a density given by Fourier coefficients on
// the scaled reciprocal lattice (plain exponential basis, keys are integer
// coordinates in the dual basis); returns the coefficients of rho * W
std::map<IVec2, std::complex<double>> periodic_hartree(
    const PeriodicKernel& kern, const std::map<IVec2, std::complex<double>>& density);

// both sides of the lattice Poisson summation identity for a Gaussian
// e^{-alpha |y|^2}:  (2 pi / |Gamma|) sum_v f_hat(v) e^{i x.v} = sum_u f(u+x)
std::pair<double, double> poisson_check(double alpha, const BravaisLattice& lat, const Vec2& x);

// claimed two-sided envelope for the exponential self-convolution:
// [nu^-2 (1+nu r) e^{-nu r}, pi/2 times the same]
std::pair<double, double> convolution_bracket(double nu, double r);

}  // namespace bloch2d
